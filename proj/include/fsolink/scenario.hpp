#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "fsolink/apt.hpp"
#include "fsolink/dynamics.hpp"
#include "fsolink/geometry.hpp"
#include "fsolink/link.hpp"
#include "fsolink/optics.hpp"

#include <json.hpp>

namespace fsolink {

inline constexpr int kScenarioSchemaVersion = 1;

enum class LinkMode { FreeSpace, Direct };

struct LinkSettings {
    LinkMode mode = LinkMode::FreeSpace;
    double attenuator_db = 0.0;                ///< fixed loss for Direct mode
    std::optional<double> distance_override_m; ///< replaces the node separation
    double settle_s = 2.0;                     ///< reports start here
};

/// One complete, validated simulation setup. Both terminals share the
/// same hardware; node_a is the simulated terminal and node_b its peer.
struct Scenario {
    std::string name = "unnamed";
    std::uint64_t seed = 1;
    double duration_s = 120.0;

    geometry::GeodeticPosition node_a;
    geometry::GeodeticPosition node_b;
    double mount_azimuth_rad = 0.0;  ///< gimbal zero azimuth, clockwise from north

    optics::LinkOptics optics;
    link::TransceiverSpec transceiver;

    std::array<dynamics::BeaconSpec, 3> beacons;
    std::array<dynamics::CmosSpec, 3> cmos;
    dynamics::GimbalSpec gimbal;
    dynamics::FsmSpec fsm1;
    dynamics::FsmSpec fsm2;
    dynamics::ImuSpec imu;
    dynamics::DisturbanceProfile disturbance;

    apt::AptConfig apt;
    LinkSettings link;

    /// Hardware defaults with the terminals 1 km apart. Nothing here is
    /// calibrated; the shipped scenario files carry the calibrated values.
    static Scenario defaults();

    /// Throws ValidationError naming the first violated invariant.
    void validate() const;

    /// Distance used by the link budget.
    double link_distance_m() const;
};

Scenario parse_scenario(std::string_view json_text, const std::string& source = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);

/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string scenario_digest(const Scenario& s);

}  // namespace fsolink
