#pragma once

#include <limits>
#include <string>
#include <vector>

namespace fsolink::optics {

/// 10/ln(10): converts a natural-log power ratio to dB.
inline constexpr double kNepersToDb = 4.342944819032518;

/// Cassegrain transceiver antenna.
struct AntennaSpec {
    double aperture_diameter_m = 0.090;
    double magnification = 10.0;
    double insertion_loss_db = 2.23;  ///< per terminal

    double aperture_radius_m() const { return 0.5 * aperture_diameter_m; }
    void validate(const std::string& field = "antenna") const;
};

/// Fundamental Gaussian signal beam leaving the transmit aperture.
struct BeamModel {
    double wavelength_m = 1550e-9;
    double waist_radius_m = 0.71 * 0.045;  ///< 1/e^2 intensity radius

    void validate(const AntennaSpec& tx, const std::string& field = "beam") const;
};

struct AtmosphereModel {
    double visibility_m = std::numeric_limits<double>::infinity();
    double wavelength_m = 1550e-9;

    void validate(const std::string& field = "atmosphere") const;
};

/// Single-mode-fiber coupling penalty as a function of angular error.
struct CouplingModel {
    double base_coupling_loss_db = 8.0;    ///< at zero error
    double rolloff_halfwidth_rad = 7e-6;   ///< efficiency falls to 1/e of peak

    void validate(const std::string& field = "coupling") const;
};

/// Additive decomposition of the end-to-end loss.
struct LinkBudget {
    double diffraction_db = 0.0;
    double optics_db = 0.0;
    double atmosphere_db = 0.0;
    double coupling_base_db = 0.0;
    double jitter_excess_db = 0.0;
    double total_db = 0.0;
};

/// Everything the budget needs besides distance and pointing error.
struct LinkOptics {
    BeamModel beam;
    AntennaSpec tx;
    AntennaSpec rx;
    AtmosphereModel atmosphere;
    CouplingModel coupling;
};

struct SweepRow {
    double distance_m = 0.0;
    double diffraction_db = 0.0;
    double total_static_db = 0.0;
};

/// Far-field half-angle divergence lambda / (pi w0).
double far_field_divergence(const BeamModel& beam);

/// Rayleigh range pi w0^2 / lambda.
double rayleigh_range(const BeamModel& beam);

/// 1/e^2 beam radius after propagating `distance_m`.
double beam_radius(const BeamModel& beam, double distance_m);

/// Fraction of the beam power falling inside the receive aperture of
/// radius `aperture_radius_m` at `distance_m`.
double captured_fraction(const BeamModel& beam, double aperture_radius_m, double distance_m);

/// Loss from the part of the diffracted beam missing the receive
/// aperture. Zero at zero distance.
double diffraction_loss_db(const BeamModel& beam, const AntennaSpec& tx, const AntennaSpec& rx,
                           double distance_m);

/// Kim visibility-model size-distribution exponent for visibility in km.
double kim_exponent(double visibility_km);

/// Attenuation coefficient in dB/km.
double atmospheric_attenuation_db_per_km(const AtmosphereModel& atm);

double atmospheric_loss_db(const AtmosphereModel& atm, double distance_m);

double coupling_loss_db(const CouplingModel& cm, double radial_error_rad);

LinkBudget link_budget(const BeamModel& beam, const AntennaSpec& tx, const AntennaSpec& rx,
                       const AtmosphereModel& atm, const CouplingModel& cm, double distance_m,
                       double radial_error_rad);

inline LinkBudget link_budget(const LinkOptics& o, double distance_m, double radial_error_rad) {
    return link_budget(o.beam, o.tx, o.rx, o.atmosphere, o.coupling, distance_m, radial_error_rad);
}

/// Diffraction + optics + atmosphere: the zero-jitter loss excluding the
/// fiber coupling terms. This is the quantity the distance sweep reports.
double static_loss_db(const LinkOptics& o, double distance_m);

/// Evenly spaced rows from d_min to d_max inclusive. Throws
/// ValidationError on an invalid range.
std::vector<SweepRow> distance_sweep(const LinkOptics& o, double d_min_m, double d_max_m, int steps);

/// CSV with header `distance_m,diffraction_db,total_static_db`.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace fsolink::optics
