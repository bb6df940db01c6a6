#pragma once

#include <filesystem>
#include <string>

#include "fsolink/scenario.hpp"

namespace test_support {

inline std::filesystem::path scenario_path(const std::string& name) {
    return std::filesystem::path(FSOLINK_SCENARIO_DIR) / (name + ".json");
}

// Defaults with every noise source and disturbance removed.
inline fsolink::Scenario quiet_scenario() {
    fsolink::Scenario s = fsolink::Scenario::defaults();
    s.disturbance = {};
    s.imu.rate_noise_rms_rad_s = 0.0;
    for (auto& c : s.cmos) {
        c.centroid_noise_rms_rad = 0.0;
    }
    return s;
}

}  // namespace test_support
