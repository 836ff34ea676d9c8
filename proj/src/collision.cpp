#include "tju/collision.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "json.hpp"
#include "tju/protocol.hpp"

namespace tju {

namespace {

void require_species(const AtomSpecies &s) {
    if (!(s.mass > 0.0) || !(s.wavelength > 0.0) || !(s.scattering_length >= 0.0)) {
        throw DomainError("species '" + s.label + "': mass and wavelength must be positive, " +
                          "scattering length non-negative");
    }
}

void require_depth(double depth) {
    if (!(depth > 0.0) || !std::isfinite(depth)) {
        throw DomainError("lattice depth V0/E_R must be positive and finite");
    }
}

} // namespace

std::vector<AtomSpecies> default_species() {
    return {
        {"Rb87", 86.909180527 * atomic_mass_unit, 5.1e-9, 826e-9},
        {"K40", 39.96399848 * atomic_mass_unit, 5.5e-9, 826e-9},
        {"Li6", 6.0151228874 * atomic_mass_unit, 2.4e-9, 670e-9},
    };
}

std::vector<AtomSpecies> parse_species(const std::string &json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw DomainError(std::string("species table: ") + e.what());
    }
    if (!doc.is_array()) {
        throw DomainError("species table: expected a JSON array");
    }
    std::vector<AtomSpecies> out;
    for (const auto &entry : doc) {
        if (!entry.is_object()) {
            throw DomainError("species table: entries must be objects");
        }
        for (const auto &[key, value] : entry.items()) {
            if (key != "label" && key != "mass_kg" && key != "a_s_m" && key != "lambda_m") {
                throw DomainError("species table: unknown key '" + key + "'");
            }
            (void)value;
        }
        try {
            AtomSpecies s{entry.at("label").get<std::string>(), entry.at("mass_kg").get<double>(),
                          entry.at("a_s_m").get<double>(), entry.at("lambda_m").get<double>()};
            require_species(s);
            out.push_back(std::move(s));
        } catch (const nlohmann::json::exception &e) {
            throw DomainError(std::string("species table: ") + e.what());
        }
    }
    return out;
}

std::vector<AtomSpecies> load_species(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open species file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_species(buf.str());
}

const AtomSpecies &find_species(const std::vector<AtomSpecies> &table, const std::string &label) {
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const AtomSpecies &s) { return s.label == label; });
    if (it == table.end()) {
        throw DomainError("unknown species '" + label + "'");
    }
    return *it;
}

double recoil_energy(const AtomSpecies &species, const UnitSystem &units) {
    require_species(species);
    const double k = 2.0 * pi / species.wavelength;
    return units.hbar * units.hbar * k * k / (2.0 * species.mass);
}

double trap_frequency(const AtomSpecies &species, double depth_over_recoil, const UnitSystem &units) {
    require_species(species);
    require_depth(depth_over_recoil);
    const double k = 2.0 * pi / species.wavelength;
    return std::sqrt(depth_over_recoil) * units.hbar * k * k / species.mass;
}

double k_prefactor(const AtomSpecies &species, double depth_over_recoil, const UnitSystem &units) {
    require_species(species);
    require_depth(depth_over_recoil);
    const double root = std::sqrt(2.0 * pi);
    return 4.0 * pi * species.scattering_length * units.hbar / species.mass * root * root * root /
           std::pow(species.wavelength, 3) * std::pow(depth_over_recoil, 0.75);
}

double oscillator_length(const AtomSpecies &species, double depth_over_recoil) {
    require_species(species);
    require_depth(depth_over_recoil);
    return std::pow(depth_over_recoil, -0.25) * species.wavelength / (2.0 * pi);
}

TrajectorySpec TrajectorySpec::stationary(double position, double start, double duration) {
    return trapezoid(position, 0.0, 0.0, duration, start);
}

TrajectorySpec TrajectorySpec::trapezoid(double position, double displacement, double shift_duration,
                                         double hold_duration, double start) {
    TrajectorySpec t;
    t.start_time = start;
    t.shift_duration = shift_duration;
    t.hold_duration = hold_duration;
    t.start_position = position;
    t.displacement = displacement;
    t.validate();
    return t;
}

TrajectorySpec TrajectorySpec::sampled(std::vector<std::pair<double, double>> samples) {
    TrajectorySpec t;
    t.samples = std::move(samples);
    t.validate();
    return t;
}

void TrajectorySpec::validate() const {
    if (!samples.empty()) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i].first) || !std::isfinite(samples[i].second)) {
                throw NumericError("trajectory: non-finite sample");
            }
            if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
                throw DomainError("trajectory: sample times must be strictly increasing");
            }
        }
        return;
    }
    for (const double v : {start_time, shift_duration, hold_duration, start_position, displacement}) {
        if (!std::isfinite(v)) {
            throw NumericError("trajectory: non-finite parameter");
        }
    }
    if (shift_duration < 0.0 || hold_duration < 0.0) {
        throw DomainError("trajectory: durations must be non-negative");
    }
}

double TrajectorySpec::begin() const {
    return samples.empty() ? start_time : samples.front().first;
}

double TrajectorySpec::end() const {
    return samples.empty() ? start_time + 2.0 * shift_duration + hold_duration : samples.back().first;
}

double TrajectorySpec::position(double time) const {
    if (!samples.empty()) {
        if (time <= samples.front().first) {
            return samples.front().second;
        }
        if (time >= samples.back().first) {
            return samples.back().second;
        }
        const auto it = std::upper_bound(samples.begin(), samples.end(), time,
                                         [](double t, const auto &s) { return t < s.first; });
        const auto &[t1, x1] = *it;
        const auto &[t0, x0] = *(it - 1);
        return x0 + (x1 - x0) * (time - t0) / (t1 - t0);
    }
    const double s = time - start_time;
    if (s <= 0.0) {
        return start_position;
    }
    if (s < shift_duration) {
        return start_position + displacement * s / shift_duration;
    }
    if (s <= shift_duration + hold_duration) {
        return start_position + displacement;
    }
    const double back = s - shift_duration - hold_duration;
    if (back < shift_duration) {
        return start_position + displacement * (1.0 - back / shift_duration);
    }
    return start_position;
}

std::vector<double> TrajectorySpec::breakpoints() const {
    std::vector<double> out;
    if (!samples.empty()) {
        for (const auto &s : samples) {
            out.push_back(s.first);
        }
        return out;
    }
    out = {start_time, start_time + shift_duration, start_time + shift_duration + hold_duration,
           end()};
    return out;
}

double collisional_phase(const AtomSpecies &species, double depth_over_recoil,
                         const TrajectorySpec &up, const TrajectorySpec &down,
                         const UnitSystem &units) {
    up.validate();
    down.validate();
    const double k = k_prefactor(species, depth_over_recoil, units);
    const double x0 = oscillator_length(species, depth_over_recoil);
    const double a = std::min(up.begin(), down.begin());
    const double b = std::max(up.end(), down.end());
    if (!(b > a)) {
        return 0.0;
    }
    std::vector<double> cuts = up.breakpoints();
    const auto more = down.breakpoints();
    cuts.insert(cuts.end(), more.begin(), more.end());
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto overlap = [&](double t) {
        const double dx = up.position(t) - down.position(t);
        return std::exp(-dx * dx / (2.0 * x0 * x0));
    };
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i]) {
            continue;
        }
        // integrate on [0, 1]: the adaptive error estimate misbehaves on
        // microsecond-wide panels and keeps bisecting to max depth
        const double lo = cuts[i];
        const double width = cuts[i + 1] - cuts[i];
        const auto unit = [&](double u) { return overlap(lo + width * u); };
        double err = 0.0;
        integral += width * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                unit, 0.0, 1.0, 20, 1e-12, &err);
    }
    const double chi = k * integral;
    if (!std::isfinite(chi)) {
        throw NumericError("collisional_phase: non-finite result");
    }
    return chi;
}

ShiftDesign design_shift(const AtomSpecies &species, double depth_over_recoil, double target_phase,
                         const UnitSystem &units) {
    if (!(target_phase >= 0.0) || !std::isfinite(target_phase)) {
        throw DomainError("design_shift: target phase must be non-negative and finite");
    }
    const double omega = trap_frequency(species, depth_over_recoil, units);
    const double leg = 4.0 * 2.0 * pi / omega;
    const double spacing = 0.5 * species.wavelength;

    const auto make = [&](double hold) {
        ShiftDesign d;
        d.up = TrajectorySpec::trapezoid(0.0, spacing, leg, hold);
        d.down = TrajectorySpec::stationary(spacing, 0.0, 2.0 * leg + hold);
        d.hold_duration = hold;
        d.phase = collisional_phase(species, depth_over_recoil, d.up, d.down, units);
        return d;
    };
    ShiftDesign lo = make(0.0);
    if (lo.phase >= target_phase) {
        return lo;
    }
    const double k = k_prefactor(species, depth_over_recoil, units);
    double hi_hold = (target_phase - lo.phase) / k;
    ShiftDesign hi = make(hi_hold);
    while (hi.phase < target_phase) {
        hi_hold *= 2.0;
        hi = make(hi_hold);
    }
    double lo_hold = 0.0;
    for (int it = 0; it < 200 && hi_hold - lo_hold > 1e-15 * hi_hold; ++it) {
        const double mid = 0.5 * (lo_hold + hi_hold);
        if (make(mid).phase < target_phase) {
            lo_hold = mid;
        } else {
            hi_hold = mid;
        }
    }
    return make(hi_hold);
}

double shift_time_bound(const AtomSpecies &species, double depth_over_recoil, const UnitSystem &units) {
    const double omega = trap_frequency(species, depth_over_recoil, units);
    const double k = k_prefactor(species, depth_over_recoil, units);
    if (!(k > 0.0)) {
        throw DomainError("shift_time_bound: zero collision prefactor (a_s = 0)");
    }
    return 2.0 * pi * (4.0 / omega + 1.0 / k);
}

EffectiveInteraction effective_u(double phase, double step_time, int dimension, double u_s,
                                 bool winding, double hbar) {
    if (!(step_time > 0.0)) {
        throw DomainError("effective_u: step time must be positive");
    }
    if (dimension < 1) {
        throw DomainError("effective_u: dimension must be >= 1");
    }
    const double unwound = winding ? phase - 2.0 * pi : phase;
    const double u_eff = hbar * unwound / step_time;
    return {u_eff, u_s + 3.0 * dimension * u_eff};
}

OnsitePhaseDesign design_onsite_phase(double target_u, double u_s, int dimension, double step_time,
                                      double hbar) {
    if (!(step_time > 0.0)) {
        throw DomainError("design_onsite_phase: step time must be positive");
    }
    if (dimension < 1) {
        throw DomainError("design_onsite_phase: dimension must be >= 1");
    }
    OnsitePhaseDesign d;
    d.u_eff = (target_u - u_s) / (3.0 * dimension);
    d.winding = d.u_eff < 0.0;
    d.phase = (d.winding ? 2.0 * pi : 0.0) + d.u_eff * step_time / hbar;
    return d;
}

double hopping_energy_from_time(double hopping_time, const UnitSystem &units) {
    if (!(hopping_time > 0.0)) {
        throw DomainError("hopping time must be positive");
    }
    return units.hbar * pi / (2.0 * hopping_time);
}

RampWindow ramp_window(const AtomSpecies &species, double depth_over_recoil, double hopping_energy,
                       double safety, const UnitSystem &units) {
    if (!(hopping_energy > 0.0)) {
        throw DomainError("ramp_window: hopping energy must be positive");
    }
    if (!(safety > 0.0)) {
        throw DomainError("ramp_window: safety factor must be positive");
    }
    RampWindow w;
    w.min_time = safety * 2.0 * pi / trap_frequency(species, depth_over_recoil, units);
    w.max_time = std::isinf(hopping_energy) ? 0.0 : units.hbar * pi / (2.0 * hopping_energy);
    w.feasible = w.min_time < w.max_time;
    return w;
}

StepBudget step_budget(const AtomSpecies &species, double depth_over_recoil, double lifetime,
                       int order, int dimension, const StepTiming &timing, const UnitSystem &units) {
    if (!(lifetime >= 0.0) || !std::isfinite(lifetime)) {
        throw DomainError("step_budget: lifetime must be finite and non-negative");
    }
    const double hop = timing.hopping_energy > 0.0 ? timing.hopping_energy
                                                   : hopping_energy_from_time(1e-3, units);
    const ResourceCount per_step = resource_count(1, order, dimension);
    const RampWindow ramp = ramp_window(species, depth_over_recoil, hop, timing.ramp_safety, units);

    StepBudget b;
    // each H_zz simulation is 2 shift sequences per dimension; zz_simulations
    // already carries the factor d
    b.shift_time = static_cast<double>(per_step.zz_simulations) * 2.0 *
                   shift_time_bound(species, depth_over_recoil, units);
    b.ramp_time = 2.0 * 0.5 * (ramp.min_time + ramp.max_time);
    b.dwell_time = timing.step_time * units.hbar / hop;
    b.step_duration = b.shift_time + b.ramp_time + b.dwell_time;
    b.steps = static_cast<long long>(std::floor(lifetime / b.step_duration));
    return b;
}

} // namespace tju
