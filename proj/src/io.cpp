#include "faswave/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace faswave {

using nlohmann::json;

void RunConfig::validate() const {
    waveguide.validate();
    if (!(pulse.sigma > 0.0)) throw ConfigError("pulse sigma must be positive");
    if (!(pulse.band[0] < pulse.band[1])) throw ConfigError("band_lo must be below band_hi");
    for (double L : distances)
        if (!(L > 0.0)) throw ConfigError("distances must be positive");
}

namespace {

WaveguideConfig waveguide_from(const json& j) {
    WaveguideConfig cfg;
    cfg.h1 = j.at("h1").get<double>();
    cfg.h2 = j.at("h2").get<double>();
    const auto& media = j.at("media");
    if (!media.is_array() || media.size() != 2)
        throw ConfigError("waveguide.media must hold exactly two entries");
    cfg.medium1.density = media[0].at("rho").get<double>();
    cfg.medium1.sound_speed = media[0].at("c").get<double>();
    cfg.medium2.density = media[1].at("rho").get<double>();
    cfg.medium2.sound_speed = media[1].at("c").get<double>();
    if (j.contains("epsilon")) cfg.absorption_epsilon = j.at("epsilon").get<double>();
    cfg.validate();
    return cfg;
}

json waveguide_to(const WaveguideConfig& cfg) {
    return json{{"h1", cfg.h1},
                {"h2", cfg.h2},
                {"media",
                 json::array({json{{"rho", cfg.medium1.density}, {"c", cfg.medium1.sound_speed}},
                              json{{"rho", cfg.medium2.density}, {"c", cfg.medium2.sound_speed}}})},
                {"epsilon", cfg.absorption_epsilon}};
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file: " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + file.string() + ": " + e.what());
    }
    RunConfig rc;
    try {
        rc.waveguide = waveguide_from(j.at("waveguide"));
        if (j.contains("pulse")) {
            const auto& p = j.at("pulse");
            if (p.contains("omega0")) rc.pulse.omega0 = p.at("omega0").get<double>();
            if (p.contains("sigma")) rc.pulse.sigma = p.at("sigma").get<double>();
            if (p.contains("amplitude")) rc.pulse.amplitude = p.at("amplitude").get<double>();
            if (p.contains("t0")) rc.pulse.t0 = p.at("t0").get<double>();
        }
        if (j.contains("band")) {
            rc.pulse.band[0] = j.at("band").at(0).get<double>();
            rc.pulse.band[1] = j.at("band").at(1).get<double>();
        }
        if (j.contains("distances"))
            rc.distances = j.at("distances").get<std::vector<double>>();
        if (j.contains("output_dir"))
            rc.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("im_height")) rc.im_height = j.at("im_height").get<double>();
        if (j.contains("omega0")) rc.omega0 = j.at("omega0").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError("config field error in " + file.string() + ": " + e.what());
    }
    rc.validate();
    return rc;
}

std::string waveguide_to_json(const WaveguideConfig& cfg) {
    return waveguide_to(cfg).dump(2) + "\n";
}

WaveguideConfig waveguide_from_json(const std::string& text) {
    try {
        return waveguide_from(json::parse(text));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("waveguide parse error: ") + e.what());
    }
}

void atomic_write(const std::filesystem::path& file, const std::string& content) {
    namespace fs = std::filesystem;
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, file);
}

std::string csv_row(const std::vector<double>& values) {
    std::string row;
    char buf[40];
    for (size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g", values[i]);
        if (i) row += ',';
        row += buf;
    }
    return row;
}

std::string csv_document(const std::string& header,
                         const std::vector<std::vector<double>>& rows) {
    std::string doc = header + "\n";
    for (const auto& r : rows) doc += csv_row(r) + "\n";
    return doc;
}

}  // namespace faswave
