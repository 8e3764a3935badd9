#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtmhd/model.hpp"

namespace rtmhd {

struct VerifyConfig {
    double dt_factor = 0.01;  // dt = dt_factor / lambda
    double T_factor = 3.0;    // eigenmode run length T = T_factor / lambda
    double sharpness_T_factor = 30.0;
    int sharpness_count = 8;  // member frequencies with the largest rates
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
};

struct RunConfig {
    ProfileSpec profile;
    PhysicalParams params;
    MagneticConfig mag;
    Grid1D grid;
    std::optional<double> sweep_radius;  // default: 4 * 2 pi / support width
    VerifyConfig verify;
    std::string output_dir = "out";
    std::optional<Frequency> xi;  // from --xi

    /// Throws Config on any invalid field, including an invalid profile on the grid.
    void validate() const;
};

/// Parses JSON text; unknown top-level keys are rejected.
RunConfig config_from_text(const std::string& text);
RunConfig load_config(const std::string& path);
/// Effective configuration as a JSON string (17 significant digits).
std::string config_to_text(const RunConfig& cfg);

}  // namespace rtmhd
