#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "faswave/synthesis.hpp"
#include "faswave/types.hpp"

namespace faswave {

/// Everything one run needs: geometry/media, the probe pulse, receiver
/// distances, output location and the numeric knobs.
struct RunConfig {
    WaveguideConfig waveguide;
    ProbePulse pulse;
    std::vector<double> distances{10.0, 20.0, 30.0};
    std::filesystem::path output_dir = "out";
    double im_height = 1.0;
    double omega0 = 28.0;

    void validate() const;
};

/// Parses the run config.  The `waveguide` object uses the fixed schema
/// {h1, h2, media:[{rho, c}, {rho, c}], epsilon}.
RunConfig load_run_config(const std::filesystem::path& file);

std::string waveguide_to_json(const WaveguideConfig& cfg);
WaveguideConfig waveguide_from_json(const std::string& text);

/// Writes text atomically: temp file in the same directory, then rename.
void atomic_write(const std::filesystem::path& file, const std::string& content);

/// One CSV row formatter: 9 significant digits, comma separated.
std::string csv_row(const std::vector<double>& values);

/// Assembles a CSV document from a header and rows of doubles.
std::string csv_document(const std::string& header,
                         const std::vector<std::vector<double>>& rows);

}  // namespace faswave
