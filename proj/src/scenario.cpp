#include "fsolink/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "fsolink/errors.hpp"
#include "fsolink/rng.hpp"

namespace fsolink {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reads one JSON object, remembering which keys were consumed so that
// leftovers (typos) can be rejected. Keys starting with '_' are comments.
class ObjectReader {
public:
    ObjectReader(json value, std::string path) : value_(std::move(value)), path_(std::move(path)) {
        if (value_.is_null()) {
            value_ = json::object();
        }
        if (!value_.is_object()) {
            throw ValidationError(path_.empty() ? "<root>" : path_, "expected a JSON object");
        }
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return value_.contains(key); }

    double number(const std::string& key, double fallback) {
        const json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_number()) {
            throw ValidationError(field(key), "expected a number");
        }
        return v->get<double>();
    }

    /// null maps to +infinity.
    double number_or_infinity(const std::string& key, double fallback) {
        const json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (v->is_null()) {
            return kInf;
        }
        if (!v->is_number()) {
            throw ValidationError(field(key), "expected a number or null");
        }
        return v->get<double>();
    }

    std::optional<double> optional_number(const std::string& key) {
        const json* v = take(key);
        if (v == nullptr || v->is_null()) {
            return std::nullopt;
        }
        if (!v->is_number()) {
            throw ValidationError(field(key), "expected a number or null");
        }
        return v->get<double>();
    }

    int integer(const std::string& key, int fallback) {
        const json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_number_integer()) {
            throw ValidationError(field(key), "expected an integer");
        }
        return v->get<int>();
    }

    std::uint64_t unsigned64(const std::string& key, std::uint64_t fallback) {
        const json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
            throw ValidationError(field(key), "expected a nonnegative integer");
        }
        return v->get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_boolean()) {
            throw ValidationError(field(key), "expected true or false");
        }
        return v->get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = take(key);
        if (v == nullptr) {
            return fallback;
        }
        if (!v->is_string()) {
            throw ValidationError(field(key), "expected a string");
        }
        return v->get<std::string>();
    }

    ObjectReader child(const std::string& key) {
        const json* v = take(key);
        return ObjectReader(v == nullptr ? json::object() : *v, field(key));
    }

    const json* array(const std::string& key) {
        const json* v = take(key);
        if (v != nullptr && !v->is_array()) {
            throw ValidationError(field(key), "expected an array");
        }
        return v;
    }

    void finish() const {
        for (const auto& [key, _] : value_.items()) {
            if (!key.empty() && key[0] == '_') {
                continue;
            }
            if (used_.count(key) == 0) {
                throw ValidationError(field(key), "unknown key");
            }
        }
    }

private:
    const json* take(const std::string& key) {
        used_.insert(key);
        auto it = value_.find(key);
        return it == value_.end() ? nullptr : &*it;
    }

    json value_;
    std::string path_;
    std::set<std::string> used_;
};

geometry::GeodeticPosition read_position(ObjectReader r, const geometry::GeodeticPosition& d) {
    geometry::GeodeticPosition p;
    p.latitude_rad = geometry::deg_to_rad(r.number("latitude_deg", geometry::rad_to_deg(d.latitude_rad)));
    p.longitude_rad = geometry::deg_to_rad(r.number("longitude_deg", geometry::rad_to_deg(d.longitude_rad)));
    p.altitude_m = r.number("altitude_m", d.altitude_m);
    r.finish();
    return p;
}

dynamics::BeaconSpec read_beacon(ObjectReader r, const dynamics::BeaconSpec& d) {
    dynamics::BeaconSpec b;
    b.wavelength_m = r.number("wavelength_m", d.wavelength_m);
    b.full_divergence_rad = r.number("full_divergence_rad", d.full_divergence_rad);
    b.power_w = r.number("power_w", d.power_w);
    r.finish();
    return b;
}

dynamics::CmosSpec read_cmos(ObjectReader r, const dynamics::CmosSpec& d) {
    dynamics::CmosSpec c;
    c.fov_pitch_rad = r.number("fov_pitch_rad", d.fov_pitch_rad);
    c.fov_azimuth_rad = r.number("fov_azimuth_rad", d.fov_azimuth_rad);
    c.pixels_pitch = r.integer("pixels_pitch", d.pixels_pitch);
    c.pixels_azimuth = r.integer("pixels_azimuth", d.pixels_azimuth);
    c.frame_rate_hz = r.number("frame_rate_hz", d.frame_rate_hz);
    c.centroid_noise_rms_rad = r.number("centroid_noise_rms_rad", d.centroid_noise_rms_rad);
    r.finish();
    return c;
}

dynamics::FsmSpec read_fsm(ObjectReader r, const dynamics::FsmSpec& d) {
    dynamics::FsmSpec f;
    f.range_rad = r.number("range_rad", d.range_rad);
    f.bandwidth_hz = r.number("bandwidth_hz", d.bandwidth_hz);
    r.finish();
    return f;
}

apt::ControllerGains read_gains(ObjectReader r, const apt::ControllerGains& d) {
    apt::ControllerGains g;
    g.kp = r.number("kp", d.kp);
    g.ki = r.number("ki", d.ki);
    g.kd = r.number("kd", d.kd);
    g.windup_limit = r.number("windup_limit", d.windup_limit);
    r.finish();
    return g;
}

dynamics::AxisDisturbance read_axis(ObjectReader r, const dynamics::AxisDisturbance& d) {
    dynamics::AxisDisturbance a;
    if (const json* list = r.array("sinusoids")) {
        for (std::size_t i = 0; i < list->size(); ++i) {
            ObjectReader s((*list)[i], r.field("sinusoids[" + std::to_string(i) + "]"));
            dynamics::SinusoidComponent c;
            c.amplitude_rad = s.number("amplitude_rad", 0.0);
            c.frequency_hz = s.number("frequency_hz", 1.0);
            c.phase_rad = s.number("phase_rad", 0.0);
            s.finish();
            a.sinusoids.push_back(c);
        }
    } else {
        a.sinusoids = d.sinusoids;
    }
    a.noise_rms_rad = r.number("noise_rms_rad", d.noise_rms_rad);
    a.noise_bandwidth_hz = r.number("noise_bandwidth_hz", d.noise_bandwidth_hz);
    a.drift_rate_rad_s = r.number("drift_rate_rad_s", d.drift_rate_rad_s);
    r.finish();
    return a;
}

json position_json(const geometry::GeodeticPosition& p) {
    return {{"latitude_deg", geometry::rad_to_deg(p.latitude_rad)},
            {"longitude_deg", geometry::rad_to_deg(p.longitude_rad)},
            {"altitude_m", p.altitude_m}};
}

json beacon_json(const dynamics::BeaconSpec& b) {
    return {{"wavelength_m", b.wavelength_m}, {"full_divergence_rad", b.full_divergence_rad}, {"power_w", b.power_w}};
}

json cmos_json(const dynamics::CmosSpec& c) {
    return {{"fov_pitch_rad", c.fov_pitch_rad},   {"fov_azimuth_rad", c.fov_azimuth_rad},
            {"pixels_pitch", c.pixels_pitch},     {"pixels_azimuth", c.pixels_azimuth},
            {"frame_rate_hz", c.frame_rate_hz},   {"centroid_noise_rms_rad", c.centroid_noise_rms_rad}};
}

json gains_json(const apt::ControllerGains& g) {
    return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"windup_limit", g.windup_limit}};
}

json axis_json(const dynamics::AxisDisturbance& a) {
    json s = json::array();
    for (const auto& c : a.sinusoids) {
        s.push_back({{"amplitude_rad", c.amplitude_rad}, {"frequency_hz", c.frequency_hz}, {"phase_rad", c.phase_rad}});
    }
    return {{"sinusoids", s},
            {"noise_rms_rad", a.noise_rms_rad},
            {"noise_bandwidth_hz", a.noise_bandwidth_hz},
            {"drift_rate_rad_s", a.drift_rate_rad_s}};
}

json number_or_null(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

}  // namespace

Scenario Scenario::defaults() {
    Scenario s;
    s.name = "defaults";
    // Two rooftops in Nanjing roughly 1 km apart.
    s.node_a = {geometry::deg_to_rad(32.1180), geometry::deg_to_rad(118.9560), 60.0};
    s.node_b = {geometry::deg_to_rad(32.12315), geometry::deg_to_rad(118.96470), 30.0};
    s.mount_azimuth_rad = geometry::deg_to_rad(55.0);

    s.optics.tx = optics::AntennaSpec{};
    s.optics.rx = optics::AntennaSpec{};
    s.optics.beam.wavelength_m = 1550e-9;
    s.optics.beam.waist_radius_m = 0.71 * s.optics.tx.aperture_radius_m();
    s.optics.atmosphere.wavelength_m = s.optics.beam.wavelength_m;
    s.optics.atmosphere.visibility_m = 5000.0;
    // From `calibrate` with the tracked anchors, insertion rounded down to 2.23 dB.
    s.optics.coupling = {6.618, 6.03e-6};

    // BL0 / BL1 / BL2 as listed for the Alice terminal.
    s.beacons[0] = {940e-9, 35e-3, 1.0};
    s.beacons[1] = {638e-9, 6e-3, 5e-3};
    s.beacons[2] = {808e-9, 6e-3, 5e-3};

    // Centroid noise doubles as dither below one pixel. CMOS2 sits behind
    // extra magnification: 1.44 mrad field, 5 urad pixels.
    s.cmos[0] = {0.04, 0.04, 288, 288, 1000.0, 390e-6};
    s.cmos[1] = {13e-3, 10e-3, 288, 288, 1000.0, 22e-6};
    s.cmos[2] = {1.44e-3, 1.44e-3, 288, 288, 1000.0, 3e-6};

    s.fsm1 = {212e-6, 300.0};
    s.fsm2 = {212e-6, 600.0};
    s.imu.rate_noise_rms_rad_s = 2e-4;

    for (auto* axis : {&s.disturbance.pitch, &s.disturbance.azimuth}) {
        axis->sinusoids = {{50e-6, 0.5, axis == &s.disturbance.pitch ? 0.0 : 1.0}};
        axis->noise_rms_rad = 5e-6;
        axis->noise_bandwidth_hz = 1.0;
    }

    // Integral-only loops. Each inner loop runs well above the one outside it.
    s.apt.coarse_gains = {0.0, 5.0, 0.0, 2e-3};
    s.apt.fine1_gains = {0.0, 22.0, 0.0, 1e-5};
    s.apt.fine2_gains = {0.0, 600.0, 0.0, 1e-6};
    return s;
}

void Scenario::validate() const {
    if (!std::isfinite(duration_s) || duration_s <= 0.0) {
        throw ValidationError("duration_s", "must be > 0");
    }
    node_a.validate("node_a.");
    node_b.validate("node_b.");
    if (!std::isfinite(mount_azimuth_rad)) {
        throw ValidationError("mount_azimuth_deg", "must be finite");
    }
    optics.tx.validate("antenna");
    optics.rx.validate("antenna");
    optics.beam.validate(optics.tx, "beam");
    optics.atmosphere.validate("atmosphere");
    optics.coupling.validate("coupling");
    transceiver.validate("transceiver");
    static constexpr std::array<const char*, 3> kBeacon = {"beacons.bl0", "beacons.bl1", "beacons.bl2"};
    static constexpr std::array<const char*, 3> kCmos = {"cmos.coarse", "cmos.fine1", "cmos.fine2"};
    for (std::size_t k = 0; k < 3; ++k) {
        beacons[k].validate(kBeacon[k]);
        cmos[k].validate(kCmos[k]);
    }
    gimbal.validate("gimbal");
    fsm1.validate("fsm1");
    fsm2.validate("fsm2");
    imu.validate("imu");
    disturbance.validate("disturbance");
    apt.validate("apt");

    for (std::size_t k = 1; k < 3; ++k) {
        if (cmos[k].fov_pitch_rad > cmos[0].fov_pitch_rad || cmos[k].fov_azimuth_rad > cmos[0].fov_azimuth_rad) {
            throw ValidationError(std::string(kCmos[k]), "fine field of view must not exceed the coarse one");
        }
    }
    const double coarse_fov = std::min(cmos[0].fov_pitch_rad, cmos[0].fov_azimuth_rad);
    if (2.0 * fsm1.range_rad >= coarse_fov) {
        throw ValidationError("fsm1.range_rad", "mirror travel must be smaller than the coarse field of view");
    }
    if (2.0 * fsm2.range_rad >= coarse_fov) {
        throw ValidationError("fsm2.range_rad", "mirror travel must be smaller than the coarse field of view");
    }
    if (!std::isfinite(link.attenuator_db) || link.attenuator_db < 0.0) {
        throw ValidationError("link.attenuator_db", "must be >= 0");
    }
    if (link.distance_override_m && (!std::isfinite(*link.distance_override_m) || *link.distance_override_m < 0.0)) {
        throw ValidationError("link.distance_override_m", "must be >= 0");
    }
    if (!std::isfinite(link.settle_s) || link.settle_s < 0.0) {
        throw ValidationError("link.settle_s", "must be >= 0");
    }
}

double Scenario::link_distance_m() const {
    if (link.mode == LinkMode::Direct) {
        return 0.0;
    }
    return link.distance_override_m ? *link.distance_override_m : geometry::ecef_distance(node_a, node_b);
}

Scenario parse_scenario(std::string_view json_text, const std::string& source) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }

    const Scenario d = Scenario::defaults();
    Scenario s = d;
    ObjectReader r(root, "");

    const int version = r.integer("schema_version", kScenarioSchemaVersion);
    if (version != kScenarioSchemaVersion) {
        throw ValidationError("schema_version", "unsupported version " + std::to_string(version));
    }
    s.name = r.string("name", d.name);
    s.seed = r.unsigned64("seed", d.seed);
    s.duration_s = r.number("duration_s", d.duration_s);
    s.node_a = read_position(r.child("node_a"), d.node_a);
    s.node_b = read_position(r.child("node_b"), d.node_b);
    s.mount_azimuth_rad = geometry::deg_to_rad(r.number("mount_azimuth_deg", geometry::rad_to_deg(d.mount_azimuth_rad)));

    {
        ObjectReader a = r.child("antenna");
        optics::AntennaSpec ant;
        ant.aperture_diameter_m = a.number("aperture_diameter_m", d.optics.tx.aperture_diameter_m);
        ant.magnification = a.number("magnification", d.optics.tx.magnification);
        ant.insertion_loss_db = a.number("insertion_loss_db", d.optics.tx.insertion_loss_db);
        a.finish();
        s.optics.tx = ant;
        s.optics.rx = ant;
    }
    {
        ObjectReader b = r.child("beam");
        s.optics.beam.wavelength_m = b.number("wavelength_m", d.optics.beam.wavelength_m);
        s.optics.beam.waist_radius_m = b.number("waist_radius_m", 0.71 * s.optics.tx.aperture_radius_m());
        b.finish();
    }
    {
        ObjectReader a = r.child("atmosphere");
        s.optics.atmosphere.visibility_m = a.number_or_infinity("visibility_m", d.optics.atmosphere.visibility_m);
        s.optics.atmosphere.wavelength_m = s.optics.beam.wavelength_m;
        a.finish();
    }
    {
        ObjectReader c = r.child("coupling");
        s.optics.coupling.base_coupling_loss_db = c.number("base_coupling_loss_db", d.optics.coupling.base_coupling_loss_db);
        s.optics.coupling.rolloff_halfwidth_rad = c.number("rolloff_halfwidth_rad", d.optics.coupling.rolloff_halfwidth_rad);
        c.finish();
    }
    {
        ObjectReader t = r.child("transceiver");
        s.transceiver.rated_rate_gbps = t.number("rated_rate_gbps", d.transceiver.rated_rate_gbps);
        s.transceiver.effective_tcp_rate_gbps = t.number("effective_tcp_rate_gbps", d.transceiver.effective_tcp_rate_gbps);
        s.transceiver.max_tolerable_loss_db = t.number("max_tolerable_loss_db", d.transceiver.max_tolerable_loss_db);
        s.transceiver.tcp_efficiency = t.number("tcp_efficiency", d.transceiver.tcp_efficiency);
        t.finish();
    }
    {
        ObjectReader b = r.child("beacons");
        s.beacons[0] = read_beacon(b.child("bl0"), d.beacons[0]);
        s.beacons[1] = read_beacon(b.child("bl1"), d.beacons[1]);
        s.beacons[2] = read_beacon(b.child("bl2"), d.beacons[2]);
        b.finish();
    }
    {
        ObjectReader c = r.child("cmos");
        s.cmos[0] = read_cmos(c.child("coarse"), d.cmos[0]);
        s.cmos[1] = read_cmos(c.child("fine1"), d.cmos[1]);
        s.cmos[2] = read_cmos(c.child("fine2"), d.cmos[2]);
        c.finish();
    }
    {
        ObjectReader g = r.child("gimbal");
        s.gimbal.azimuth_range_rad = g.number("azimuth_range_rad", d.gimbal.azimuth_range_rad);
        s.gimbal.pitch_range_rad = g.number("pitch_range_rad", d.gimbal.pitch_range_rad);
        s.gimbal.max_rate_rad_s = g.number("max_rate_rad_s", d.gimbal.max_rate_rad_s);
        s.gimbal.bandwidth_hz = g.number("bandwidth_hz", d.gimbal.bandwidth_hz);
        g.finish();
    }
    s.fsm1 = read_fsm(r.child("fsm1"), d.fsm1);
    s.fsm2 = read_fsm(r.child("fsm2"), d.fsm2);
    {
        ObjectReader m = r.child("imu");
        s.imu.rate_noise_rms_rad_s = m.number("rate_noise_rms_rad_s", d.imu.rate_noise_rms_rad_s);
        s.imu.sample_rate_hz = m.number("sample_rate_hz", d.imu.sample_rate_hz);
        m.finish();
    }
    {
        ObjectReader dist = r.child("disturbance");
        s.disturbance.pitch = read_axis(dist.child("pitch"), d.disturbance.pitch);
        s.disturbance.azimuth = read_axis(dist.child("azimuth"), d.disturbance.azimuth);
        dist.finish();
    }
    {
        ObjectReader a = r.child("apt");
        {
            ObjectReader g = a.child("gains");
            s.apt.coarse_gains = read_gains(g.child("coarse"), d.apt.coarse_gains);
            s.apt.fine1_gains = read_gains(g.child("fine1"), d.apt.fine1_gains);
            s.apt.fine2_gains = read_gains(g.child("fine2"), d.apt.fine2_gains);
            g.finish();
        }
        s.apt.acquisition_bias_rad = a.number("acquisition_bias_rad", d.apt.acquisition_bias_rad);
        s.apt.acquisition_bias_direction_rad =
            a.number("acquisition_bias_direction_rad", d.apt.acquisition_bias_direction_rad);
        s.apt.imu_feedforward = a.boolean("imu_feedforward", d.apt.imu_feedforward);
        s.apt.fine_stages = a.integer("fine_stages", d.apt.fine_stages);
        s.apt.fine_after_s = a.number("fine_after_s", d.apt.fine_after_s);
        s.apt.stabilize_frames = a.integer("stabilize_frames", d.apt.stabilize_frames);
        const std::string initial = a.string("initial_state", std::string(apt::to_string(d.apt.initial_state)));
        const auto parsed = apt::parse_state(initial);
        if (!parsed) {
            throw ValidationError(a.field("initial_state"), "unknown state '" + initial + "'");
        }
        s.apt.initial_state = *parsed;
        s.apt.sample_period_s = a.number("sample_period_s", d.apt.sample_period_s);
        s.apt.thresholds.fine1_capture_rad = a.number("fine1_capture_rad", d.apt.thresholds.fine1_capture_rad);
        s.apt.thresholds.link_threshold_rad = a.number("link_threshold_rad", d.apt.thresholds.link_threshold_rad);
        s.apt.thresholds.link_dwell_frames = a.integer("link_dwell_frames", d.apt.thresholds.link_dwell_frames);
        s.apt.thresholds.lock_loss_frames = a.integer("lock_loss_frames", d.apt.thresholds.lock_loss_frames);
        a.finish();
    }
    {
        ObjectReader l = r.child("link");
        const std::string mode = l.string("mode", "free_space");
        if (mode == "free_space") {
            s.link.mode = LinkMode::FreeSpace;
        } else if (mode == "direct") {
            s.link.mode = LinkMode::Direct;
        } else {
            throw ValidationError(l.field("mode"), "expected \"free_space\" or \"direct\"");
        }
        s.link.attenuator_db = l.number("attenuator_db", d.link.attenuator_db);
        s.link.distance_override_m = l.optional_number("distance_override_m");
        s.link.settle_s = l.number("settle_s", d.link.settle_s);
        l.finish();
    }
    r.finish();
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open scenario file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["schema_version"] = kScenarioSchemaVersion;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["duration_s"] = s.duration_s;
    j["node_a"] = position_json(s.node_a);
    j["node_b"] = position_json(s.node_b);
    j["mount_azimuth_deg"] = geometry::rad_to_deg(s.mount_azimuth_rad);
    j["antenna"] = {{"aperture_diameter_m", s.optics.tx.aperture_diameter_m},
                    {"magnification", s.optics.tx.magnification},
                    {"insertion_loss_db", s.optics.tx.insertion_loss_db}};
    j["beam"] = {{"wavelength_m", s.optics.beam.wavelength_m}, {"waist_radius_m", s.optics.beam.waist_radius_m}};
    j["atmosphere"] = {{"visibility_m", number_or_null(s.optics.atmosphere.visibility_m)}};
    j["coupling"] = {{"base_coupling_loss_db", s.optics.coupling.base_coupling_loss_db},
                     {"rolloff_halfwidth_rad", s.optics.coupling.rolloff_halfwidth_rad}};
    j["transceiver"] = {{"rated_rate_gbps", s.transceiver.rated_rate_gbps},
                        {"effective_tcp_rate_gbps", s.transceiver.effective_tcp_rate_gbps},
                        {"max_tolerable_loss_db", s.transceiver.max_tolerable_loss_db},
                        {"tcp_efficiency", s.transceiver.tcp_efficiency}};
    j["beacons"] = {{"bl0", beacon_json(s.beacons[0])}, {"bl1", beacon_json(s.beacons[1])}, {"bl2", beacon_json(s.beacons[2])}};
    j["cmos"] = {{"coarse", cmos_json(s.cmos[0])}, {"fine1", cmos_json(s.cmos[1])}, {"fine2", cmos_json(s.cmos[2])}};
    j["gimbal"] = {{"azimuth_range_rad", s.gimbal.azimuth_range_rad},
                   {"pitch_range_rad", s.gimbal.pitch_range_rad},
                   {"max_rate_rad_s", s.gimbal.max_rate_rad_s},
                   {"bandwidth_hz", s.gimbal.bandwidth_hz}};
    j["fsm1"] = {{"range_rad", s.fsm1.range_rad}, {"bandwidth_hz", s.fsm1.bandwidth_hz}};
    j["fsm2"] = {{"range_rad", s.fsm2.range_rad}, {"bandwidth_hz", s.fsm2.bandwidth_hz}};
    j["imu"] = {{"rate_noise_rms_rad_s", s.imu.rate_noise_rms_rad_s}, {"sample_rate_hz", s.imu.sample_rate_hz}};
    j["disturbance"] = {{"pitch", axis_json(s.disturbance.pitch)}, {"azimuth", axis_json(s.disturbance.azimuth)}};
    j["apt"] = {
        {"gains",
         {{"coarse", gains_json(s.apt.coarse_gains)},
          {"fine1", gains_json(s.apt.fine1_gains)},
          {"fine2", gains_json(s.apt.fine2_gains)}}},
        {"acquisition_bias_rad", s.apt.acquisition_bias_rad},
        {"acquisition_bias_direction_rad", s.apt.acquisition_bias_direction_rad},
        {"imu_feedforward", s.apt.imu_feedforward},
        {"fine_stages", s.apt.fine_stages},
        {"fine_after_s", s.apt.fine_after_s},
        {"stabilize_frames", s.apt.stabilize_frames},
        {"initial_state", std::string(apt::to_string(s.apt.initial_state))},
        {"sample_period_s", s.apt.sample_period_s},
        {"fine1_capture_rad", s.apt.thresholds.fine1_capture_rad},
        {"link_threshold_rad", s.apt.thresholds.link_threshold_rad},
        {"link_dwell_frames", s.apt.thresholds.link_dwell_frames},
        {"lock_loss_frames", s.apt.thresholds.lock_loss_frames},
    };
    j["link"] = {{"mode", s.link.mode == LinkMode::Direct ? "direct" : "free_space"},
                 {"attenuator_db", s.link.attenuator_db},
                 {"distance_override_m", s.link.distance_override_m ? json(*s.link.distance_override_m) : json(nullptr)},
                 {"settle_s", s.link.settle_s}};
    return j;
}

std::string scenario_digest(const Scenario& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(scenario_to_json(s).dump())));
    return buf;
}

}  // namespace fsolink
