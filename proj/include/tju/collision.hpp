#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tju/types.hpp"

namespace tju {

/// CODATA 2018 values.
inline constexpr double hbar_si = 1.054571817e-34;
inline constexpr double atomic_mass_unit = 1.66053906660e-27;

/// Value of hbar for the unit system in use. Every formula below is written
/// in terms of hbar, mass and lengths only, so SI and recoil units share code.
struct UnitSystem {
    double hbar = hbar_si;
};

struct AtomSpecies {
    std::string label;
    double mass = 0.0;              // kg
    double scattering_length = 0.0; // a_s, m
    double wavelength = 0.0;        // lattice laser lambda, m
};

/// 87Rb, 40K and 6Li with the lattice wavelengths and scattering lengths of
/// the shift-time figure.
std::vector<AtomSpecies> default_species();

/// Reads a JSON array of {label, mass_kg, a_s_m, lambda_m}. Throws
/// DomainError on schema problems and std::runtime_error on I/O failure.
std::vector<AtomSpecies> load_species(const std::filesystem::path &path);
std::vector<AtomSpecies> parse_species(const std::string &json_text);

const AtomSpecies &find_species(const std::vector<AtomSpecies> &table, const std::string &label);

/// E_R = hbar^2 (2 pi)^2 / (2 m lambda^2)
double recoil_energy(const AtomSpecies &species, const UnitSystem &units = {});

/// omega_t = sqrt(V0/E_R) hbar (2 pi)^2 / (m lambda^2)
double trap_frequency(const AtomSpecies &species, double depth_over_recoil,
                      const UnitSystem &units = {});

/// K = (4 pi a_s hbar / m) (sqrt(2 pi))^3 / lambda^3 (V0/E_R)^(3/4), rad/s
double k_prefactor(const AtomSpecies &species, double depth_over_recoil,
                   const UnitSystem &units = {});

/// Ground-state width x0 = (E_R/V0)^(1/4) lambda / (2 pi).
double oscillator_length(const AtomSpecies &species, double depth_over_recoil);

/// Position of one atom during a state-dependent shift. Either a trapezoid
/// (linear shift, hold, linear return) or linearly interpolated samples.
/// Outside its time span the atom rests at the nearest endpoint position.
struct TrajectorySpec {
    double start_time = 0.0;
    double shift_duration = 0.0; // each leg
    double hold_duration = 0.0;
    double start_position = 0.0;
    double displacement = 0.0;
    std::vector<std::pair<double, double>> samples; // (time, position)

    static TrajectorySpec stationary(double position, double start, double duration);
    static TrajectorySpec trapezoid(double position, double displacement, double shift_duration,
                                    double hold_duration, double start = 0.0);
    static TrajectorySpec sampled(std::vector<std::pair<double, double>> samples);

    double begin() const;
    double end() const;
    double position(double time) const;
    /// Times at which the position is not smooth.
    std::vector<double> breakpoints() const;
    void validate() const;
};

/// chi = K * integral exp(-(x_up - x_down)^2 / (2 x0^2)) dt over the union of
/// both time spans, adaptive Gauss-Kronrod between breakpoints.
double collisional_phase(const AtomSpecies &species, double depth_over_recoil,
                         const TrajectorySpec &up, const TrajectorySpec &down,
                         const UnitSystem &units = {});

/// Shift plus hold pair for neighbouring atoms: the up atom moves by lambda/2
/// onto the stationary down atom, holds, and returns. Shift legs default to
/// 4 * 2 pi / omega_t; the hold time is found by bisection so that the
/// collisional phase equals target_phase.
struct ShiftDesign {
    TrajectorySpec up;
    TrajectorySpec down;
    double hold_duration = 0.0;
    double phase = 0.0;
};

ShiftDesign design_shift(const AtomSpecies &species, double depth_over_recoil, double target_phase,
                         const UnitSystem &units = {});

/// tau_sh > 2 pi (4 / omega_t + 1 / K)
double shift_time_bound(const AtomSpecies &species, double depth_over_recoil,
                        const UnitSystem &units = {});

struct EffectiveInteraction {
    double u_eff = 0.0;   // U_eff, or U'_eff for a wound phase
    double u_total = 0.0; // U_s + 3 d U_eff
};

/// U_eff = hbar phi / tau. With `winding`, phi = 2 pi + U'_eff tau / hbar is
/// unwound first so that U'_eff may be negative.
EffectiveInteraction effective_u(double phase, double step_time, int dimension, double u_s,
                                 bool winding = false, double hbar = 1.0);

struct OnsitePhaseDesign {
    double u_eff = 0.0;
    bool winding = false;
    double phase = 0.0;
};

/// Inverse of effective_u: phase needed so that U_s + 3 d U_eff = target_u.
/// Negative U_eff is realised with a 2 pi winding.
OnsitePhaseDesign design_onsite_phase(double target_u, double u_s, int dimension,
                                      double step_time, double hbar = 1.0);

struct RampWindow {
    double min_time = 0.0; // safety * 2 pi / omega_t
    double max_time = 0.0; // hbar pi / (2 t)
    bool feasible = false;
};

RampWindow ramp_window(const AtomSpecies &species, double depth_over_recoil,
                       double hopping_energy, double safety = 1.0,
                       const UnitSystem &units = {});

/// Hopping energy t (J) such that hbar pi / (2 t) equals the given time.
double hopping_energy_from_time(double hopping_time, const UnitSystem &units = {});

struct StepTiming {
    double hopping_energy = 0.0; // J; 0 means hbar pi / (2 t) = 1 ms
    double step_time = 0.2;      // H_tU dwell per step in hbar/t
    double ramp_safety = 1.0;
};

struct StepBudget {
    long long steps = 0;
    double step_duration = 0.0; // s
    double shift_time = 0.0;    // s per step in shift sequences
    double ramp_time = 0.0;     // s per step ramping up and down
    double dwell_time = 0.0;    // s per step under H_tU
};

/// floor(lifetime / duration of one Trotter step).
StepBudget step_budget(const AtomSpecies &species, double depth_over_recoil, double lifetime,
                       int order, int dimension, const StepTiming &timing = {},
                       const UnitSystem &units = {});

} // namespace tju
