#include "fsolink/optics.hpp"

#include <cmath>
#include <numbers>

#include "fsolink/csv.hpp"
#include "fsolink/errors.hpp"

namespace fsolink::optics {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void AntennaSpec::validate(const std::string& field) const {
    if (!finite_positive(aperture_diameter_m)) {
        throw ValidationError(field + ".aperture_diameter_m", "must be > 0");
    }
    if (!std::isfinite(magnification) || magnification < 1.0) {
        throw ValidationError(field + ".magnification", "must be >= 1");
    }
    if (!std::isfinite(insertion_loss_db) || insertion_loss_db < 0.0) {
        throw ValidationError(field + ".insertion_loss_db", "must be >= 0");
    }
}

void BeamModel::validate(const AntennaSpec& tx, const std::string& field) const {
    if (!finite_positive(wavelength_m)) {
        throw ValidationError(field + ".wavelength_m", "must be > 0");
    }
    if (!finite_positive(waist_radius_m)) {
        throw ValidationError(field + ".waist_radius_m", "must be > 0");
    }
    if (waist_radius_m > tx.aperture_radius_m()) {
        throw ValidationError(field + ".waist_radius_m", "must not exceed the transmit aperture radius");
    }
}

void AtmosphereModel::validate(const std::string& field) const {
    if (std::isnan(visibility_m) || !(visibility_m > 0.0)) {
        throw ValidationError(field + ".visibility_m", "must be > 0 (null for clear air)");
    }
    if (!finite_positive(wavelength_m)) {
        throw ValidationError(field + ".wavelength_m", "must be > 0");
    }
}

void CouplingModel::validate(const std::string& field) const {
    if (!finite_positive(base_coupling_loss_db)) {
        throw ValidationError(field + ".base_coupling_loss_db", "must be > 0 and finite");
    }
    if (!finite_positive(rolloff_halfwidth_rad)) {
        throw ValidationError(field + ".rolloff_halfwidth_rad", "must be > 0 and finite");
    }
}

double far_field_divergence(const BeamModel& beam) {
    return beam.wavelength_m / (std::numbers::pi * beam.waist_radius_m);
}

double rayleigh_range(const BeamModel& beam) {
    return std::numbers::pi * beam.waist_radius_m * beam.waist_radius_m / beam.wavelength_m;
}

double beam_radius(const BeamModel& beam, double distance_m) {
    const double zr = rayleigh_range(beam);
    const double u = distance_m / zr;
    return beam.waist_radius_m * std::sqrt(1.0 + u * u);
}

double captured_fraction(const BeamModel& beam, double aperture_radius_m, double distance_m) {
    const double w = beam_radius(beam, distance_m);
    // -expm1 keeps precision when almost everything is captured
    return -std::expm1(-2.0 * aperture_radius_m * aperture_radius_m / (w * w));
}

double diffraction_loss_db(const BeamModel& beam, const AntennaSpec& /*tx*/, const AntennaSpec& rx,
                           double distance_m) {
    if (distance_m <= 0.0) {
        return 0.0;
    }
    return -10.0 * std::log10(captured_fraction(beam, rx.aperture_radius_m(), distance_m));
}

double kim_exponent(double visibility_km) {
    if (visibility_km > 50.0) {
        return 1.6;
    }
    if (visibility_km > 6.0) {
        return 1.3;
    }
    if (visibility_km > 1.0) {
        return 0.16 * visibility_km + 0.34;
    }
    if (visibility_km > 0.5) {
        return visibility_km - 0.5;
    }
    return 0.0;
}

double atmospheric_attenuation_db_per_km(const AtmosphereModel& atm) {
    if (std::isinf(atm.visibility_m)) {
        return 0.0;
    }
    const double v_km = atm.visibility_m / 1000.0;
    const double q = kim_exponent(v_km);
    const double beta_per_km = (3.912 / v_km) * std::pow(atm.wavelength_m / 550e-9, -q);
    return kNepersToDb * beta_per_km;
}

double atmospheric_loss_db(const AtmosphereModel& atm, double distance_m) {
    if (distance_m <= 0.0) {
        return 0.0;
    }
    return atmospheric_attenuation_db_per_km(atm) * (distance_m / 1000.0);
}

double coupling_loss_db(const CouplingModel& cm, double radial_error_rad) {
    const double x = radial_error_rad / cm.rolloff_halfwidth_rad;
    return cm.base_coupling_loss_db + kNepersToDb * x * x;
}

LinkBudget link_budget(const BeamModel& beam, const AntennaSpec& tx, const AntennaSpec& rx,
                       const AtmosphereModel& atm, const CouplingModel& cm, double distance_m,
                       double radial_error_rad) {
    LinkBudget b;
    b.diffraction_db = diffraction_loss_db(beam, tx, rx, distance_m);
    b.optics_db = tx.insertion_loss_db + rx.insertion_loss_db;
    b.atmosphere_db = atmospheric_loss_db(atm, distance_m);
    b.coupling_base_db = cm.base_coupling_loss_db;
    b.jitter_excess_db = coupling_loss_db(cm, radial_error_rad) - cm.base_coupling_loss_db;
    b.total_db = b.diffraction_db + b.optics_db + b.atmosphere_db + b.coupling_base_db + b.jitter_excess_db;
    return b;
}

double static_loss_db(const LinkOptics& o, double distance_m) {
    return diffraction_loss_db(o.beam, o.tx, o.rx, distance_m) + o.tx.insertion_loss_db +
           o.rx.insertion_loss_db + atmospheric_loss_db(o.atmosphere, distance_m);
}

std::vector<SweepRow> distance_sweep(const LinkOptics& o, double d_min_m, double d_max_m, int steps) {
    if (!(d_min_m >= 0.0) || !(d_max_m > d_min_m) || !std::isfinite(d_max_m)) {
        throw ValidationError("sweep.range", "require 0 <= d_min < d_max");
    }
    if (steps < 2) {
        throw ValidationError("sweep.steps", "require steps >= 2");
    }
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double d = i == steps - 1
                             ? d_max_m
                             : d_min_m + (d_max_m - d_min_m) * static_cast<double>(i) / (steps - 1);
        rows.push_back({d, diffraction_loss_db(o.beam, o.tx, o.rx, d), static_loss_db(o, d)});
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "distance_m,diffraction_db,total_static_db\n";
    for (const auto& r : rows) {
        out += csv::format_number(r.distance_m);
        out += ',';
        out += csv::format_number(r.diffraction_db);
        out += ',';
        out += csv::format_number(r.total_static_db);
        out += '\n';
    }
    return out;
}

}  // namespace fsolink::optics
