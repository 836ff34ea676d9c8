#include "support/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "tju/analysis.hpp"
#include "tju/linalg.hpp"

using namespace tju;

namespace invariants {
namespace {

struct Draw {
    std::mt19937_64 rng;
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
};

ModelParams random_model(Draw &d, int sites, bool isotropic) {
    ModelParams p;
    p.sites = sites;
    p.boundary = d.integer(0, 1) ? Boundary::Periodic : Boundary::Open;
    p.t = d.uniform(0.2, 2.0);
    p.u = d.uniform(-10.0, 10.0);
    p.jx = d.uniform(-1.0, 1.0);
    p.jy = isotropic ? p.jx : d.uniform(-1.0, 1.0);
    p.jz = isotropic ? p.jx : d.uniform(-1.0, 1.0);
    if (sites >= 3 && d.integer(0, 1)) {
        p.t_prime = d.uniform(-0.5, 0.5);
    }
    return p;
}

ProtocolSchedule random_schedule(Draw &d, int sites) {
    ProtocolSchedule s;
    s.model = random_model(d, sites, false);
    s.model.t_prime = 0.0;
    if (sites % 2 == 1) {
        s.model.boundary = Boundary::Open;
    }
    s.effective_u = d.uniform(-2.0, 2.0);
    s.phase_winding = d.integer(0, 1) == 1;
    s.order = d.integer(1, 2);
    s.steps = d.integer(1, 6);
    s.total_time = d.uniform(0.05, 3.0);
    return s;
}

void worst(Measure &m, double v) { m.worst = std::max(m.worst, v); }

} // namespace

std::vector<Measure> unitarity(std::uint64_t seed) {
    Draw d{std::mt19937_64(seed)};
    Measure gates{"gate unitarity |U^dag U - 1|_max", 0.0, 1e-12};
    Measure props{"propagator unitarity |U^dag U - 1|_max", 0.0, 1e-12};
    Measure long_run{"500-step product unitarity", 0.0, 1e-11};
    for (int k = 0; k < 12; ++k) {
        const int sites = d.integer(2, 4);
        const auto basis = enumerate_basis(sites);
        const double chi = d.uniform(-3.0, 3.0);
        const double phi = d.uniform(-3.0, 3.0);
        worst(gates, unitarity_defect(cross_collision_gate(basis, chi).matrix()));
        worst(gates, unitarity_defect(same_spin_collision_gate(basis, chi).matrix()));
        worst(gates, unitarity_defect(spin_flip(basis, alternating_sites(sites)).matrix()));
        for (Axis w : {Axis::X, Axis::Y}) {
            worst(gates, unitarity_defect(global_rotation(basis, w).matrix()));
        }
        for (Axis w : {Axis::X, Axis::Y, Axis::Z}) {
            worst(gates, unitarity_defect(spin_gate(basis, w, chi, phi, d.integer(1, 3)).matrix()));
        }
        const ProtocolSchedule s = random_schedule(d, sites);
        worst(props, unitarity_defect(trotter_evolve(basis, s).matrix()));
        worst(props, unitarity_defect(
                         exact_propagator(build_tju(basis, random_model(d, sites, false)),
                                          d.uniform(0.0, 50.0))
                             .matrix()));
    }
    ProtocolSchedule s = random_schedule(d, 3);
    s.steps = 500;
    s.total_time = 100.0;
    worst(long_run, unitarity_defect(trotter_evolve(enumerate_basis(3), s).matrix()));
    return {gates, props, long_run};
}

std::vector<Measure> hermiticity(std::uint64_t seed) {
    Draw d{std::mt19937_64(seed)};
    Measure herm{"Hamiltonian |H - H^dag|_max", 0.0, 1e-13};
    Measure real{"isotropic t-J-U max |Im H|", 0.0, 1e-13};
    Measure wrap{"periodic minus open outside wrap terms", 0.0, 1e-14};
    for (int k = 0; k < 12; ++k) {
        const int sites = d.integer(2, 4);
        const auto basis = enumerate_basis(sites);
        const ModelParams p = random_model(d, sites, false);
        worst(herm, hermiticity_defect(build_tju(basis, p).matrix()));
        for (int j = 0; j < sites; ++j) {
            for (Axis w : {Axis::X, Axis::Y, Axis::Z}) {
                worst(herm, hermiticity_defect(spin_operator(basis, j, w).matrix()));
            }
        }
        const ModelParams iso = random_model(d, sites, true);
        worst(real, build_tju(basis, iso).matrix().imag().cwiseAbs().maxCoeff());

        if (sites >= 3) {
            ModelParams open = iso;
            open.t_prime = 0.0;
            open.boundary = Boundary::Open;
            ModelParams periodic = open;
            periodic.boundary = Boundary::Periodic;
            const Matrix diff = build_tju(basis, periodic).matrix() - build_tju(basis, open).matrix();
            // the wrap bond alone, from the Pauli-string oracle
            const oracle::Fermions f(sites);
            const int a = sites - 1;
            Matrix bond = Matrix::Zero(f.dim(), f.dim());
            for (bool dn : {false, true}) {
                const Matrix hop = f.cd(a, dn) * f.a(0, dn);
                bond -= iso.t * (hop + hop.adjoint());
            }
            bond += iso.jx * f.spin(a, 'x') * f.spin(0, 'x') + iso.jy * f.spin(a, 'y') * f.spin(0, 'y') +
                    iso.jz * f.spin(a, 'z') * f.spin(0, 'z');
            worst(wrap, oracle::max_entry(diff - bond));
        }
    }
    return {herm, real, wrap};
}

std::vector<Measure> number_conservation(std::uint64_t seed) {
    Draw d{std::mt19937_64(seed)};
    Measure ham{"|[H, N_up]|, |[H, N_down]| max entry (J_x = J_y)", 0.0, 1e-12};
    Measure total{"|[H, N]| max entry", 0.0, 1e-12};
    Measure su2{"|[H_iso, S^w_total]| max entry", 0.0, 1e-12};
    Measure prop{"|[U0, N_s]| max entry", 0.0, 1e-12};
    Measure gates{"|[gate, N]| max entry", 0.0, 1e-12};
    Measure zgate{"|[z gate, N_s]| max entry", 0.0, 1e-12};
    for (int k = 0; k < 10; ++k) {
        const int sites = d.integer(2, 4);
        const auto basis = enumerate_basis(sites);
        const Matrix nu = total_number(basis, Spin::Up).matrix();
        const Matrix nd = total_number(basis, Spin::Down).matrix();
        // an x-y anisotropy pumps S^+S^+ pairs, so spin-resolved numbers are
        // only conserved for J_x = J_y
        ModelParams p = random_model(d, sites, false);
        p.jy = p.jx;
        const ModelParams iso = random_model(d, sites, true);
        const ModelParams xyz = random_model(d, sites, false);
        worst(total, max_abs(commutator(build_tju(basis, xyz).matrix(), Matrix(nu + nd))));
        std::vector<Matrix> hams{build_hubbard(basis, p.t, p.u, p.boundary).matrix(),
                                 build_spin_coupling(basis, p.jx, p.jy, p.jz, p.boundary).matrix(),
                                 build_tju(basis, p).matrix()};
        if (sites >= 3) {
            hams.push_back(build_nn_hopping(basis, 0.3, p.boundary).matrix());
        }
        for (const Matrix &h : hams) {
            worst(ham, max_abs(commutator(h, nu)));
            worst(ham, max_abs(commutator(h, nd)));
        }
        const Matrix h_iso = build_tju(basis, iso).matrix();
        for (Axis w : {Axis::X, Axis::Y, Axis::Z}) {
            worst(su2, max_abs(commutator(h_iso, total_spin(basis, w).matrix())));
        }
        const Matrix u0 = exact_propagator(build_tju(basis, p), d.uniform(0.1, 5.0)).matrix();
        worst(prop, max_abs(commutator(u0, nu)));
        worst(prop, max_abs(commutator(u0, nd)));

        const Matrix n = nu + nd;
        const double chi = d.uniform(-2.0, 2.0);
        const double phi = d.uniform(-2.0, 2.0);
        const Matrix z = spin_gate(basis, Axis::Z, chi, phi, 1).matrix();
        worst(zgate, max_abs(commutator(z, nu)));
        worst(zgate, max_abs(commutator(z, nd)));
        for (Axis w : {Axis::X, Axis::Y}) {
            worst(gates, max_abs(commutator(spin_gate(basis, w, chi, phi, 1).matrix(), n)));
        }
        const ProtocolSchedule s = random_schedule(d, sites);
        worst(gates, max_abs(commutator(trotter_evolve(basis, s).matrix(), n)));
    }
    return {ham, total, su2, prop, gates, zgate};
}

std::vector<Measure> anticommutation() {
    Measure mixed{"{c_a, c_b^dag} - delta_ab max entry", 0.0, 1e-14};
    Measure same{"{c_a, c_b} max entry", 0.0, 1e-14};
    for (int sites = 1; sites <= 3; ++sites) {
        const auto basis = enumerate_basis(sites);
        std::vector<Matrix> c;
        for (int j = 0; j < sites; ++j) {
            for (Spin s : {Spin::Up, Spin::Down}) {
                c.push_back(mode_operator(basis, j, s, ModeAction::Annihilate).matrix());
            }
        }
        const Matrix id = Matrix::Identity(basis->dim(), basis->dim());
        for (std::size_t a = 0; a < c.size(); ++a) {
            for (std::size_t b = 0; b < c.size(); ++b) {
                Matrix m = anticommutator(c[a], c[b].adjoint());
                if (a == b) {
                    m -= id;
                }
                worst(mixed, max_abs(m));
                worst(same, max_abs(anticommutator(c[a], c[b])));
            }
        }
    }
    return {mixed, same};
}

std::vector<Measure> bound_dominates_states(std::uint64_t seed) {
    Draw d{std::mt19937_64(seed)};
    Measure excess{"max state anti-fidelity - bound (100 states)", 0.0, 1e-12};
    Measure random_pairs{"state anti-fidelity - bound, random unitaries", 0.0, 1e-12};
    for (int k = 0; k < 6; ++k) {
        const int sites = d.integer(2, 3);
        const auto basis = enumerate_basis(sites);
        const ProtocolSchedule s = random_schedule(d, sites);
        const Operator u = trotter_evolve(basis, s);
        const Operator u0 = exact_propagator(build_tju(basis, target_model(s)), s.total_time);
        const double bound = antifidelity_bound(u, u0).value;
        for (int n = 0; n < 100; ++n) {
            const Vector psi = oracle::random_state(basis->dim(), d.rng);
            worst(excess, antifidelity_state(psi, u, u0) - bound);
        }
    }
    for (int k = 0; k < 5; ++k) {
        const auto basis = enumerate_basis(2);
        const Operator a(basis, oracle::random_unitary(16, d.rng));
        const Operator b(basis, a.matrix() * oracle::unitary_eig(
                                                 oracle::random_hermitian(16, d.rng), 0.05));
        const double bound = antifidelity_bound(a, b).value;
        for (int n = 0; n < 100; ++n) {
            const Vector psi = oracle::random_state(16, d.rng);
            worst(random_pairs, antifidelity_state(psi, a, b) - bound);
        }
    }
    return {excess, random_pairs};
}

std::vector<Measure> norm_properties(std::uint64_t seed) {
    Draw d{std::mt19937_64(seed)};
    Measure triangle{"d(A,C) - d(A,B) - d(B,C)", 0.0, 1e-12};
    Measure symmetry{"|bound(U,V) - bound(V,U)|", 0.0, 0.0};
    Measure clamp{"clamp flag disagreeing with distance^2 > 2", 0.0, 0.0};
    const auto basis = enumerate_basis(2);
    for (int k = 0; k < 30; ++k) {
        const Operator a(basis, oracle::random_unitary(16, d.rng));
        const Operator b(basis, oracle::random_unitary(16, d.rng));
        const Operator c(basis, oracle::random_hermitian(16, d.rng));
        worst(triangle, operator_distance(a, c) - operator_distance(a, b) - operator_distance(b, c));
        const auto ab = antifidelity_bound(a, b);
        const auto ba = antifidelity_bound(b, a);
        worst(symmetry, std::abs(ab.value - ba.value));
        worst(clamp, ab.clamped != (ab.squared_distance > 2.0) ? 1.0 : 0.0);
        const double r = d.uniform(0.0, 2.0);
        const auto fb = bound_from_distance(r);
        worst(clamp, fb.clamped != (r * r > 2.0) ? 1.0 : 0.0);
    }
    return {triangle, symmetry, clamp};
}

std::vector<Measure> all(std::uint64_t seed) {
    std::vector<Measure> out;
    for (auto part : {unitarity(seed), hermiticity(seed + 1), number_conservation(seed + 2),
                      anticommutation(), bound_dominates_states(seed + 3),
                      norm_properties(seed + 4)}) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace invariants
