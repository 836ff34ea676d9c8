#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tju/hamiltonian.hpp"
#include "tju/propagator.hpp"

namespace tju {

/// Everything needed to turn the t-J-U model into a gate sequence.
///
/// `model.u` is the bare lattice interaction U_s. The on-site phase picked up
/// by a spin gate of duration s is phi(s) = 2*pi*w + effective_u * s, where w
/// is 1 when `phase_winding` is set (the U'_eff construction for attractive
/// interactions) and 0 otherwise. Each spin gate applies exp(-i d phi n_up n_down)
/// per site, so the simulated interaction is U_s + 3 d effective_u.
struct ProtocolSchedule {
    ModelParams model;
    double total_time = 1.0;
    int steps = 1;
    int order = 1;
    double effective_u = 0.0;
    bool phase_winding = false;
    int dimension = 1;

    double step_time() const { return total_time / steps; }

    /// chi_w = J_w * duration / 4
    double collision_phase(Axis axis, double duration) const;
    double onsite_phase(double duration) const;

    /// Throws DomainError on an unusable schedule.
    void validate() const;
};

/// The t-J-U model the protocol approximates: U = U_s + 3 d U_eff.
ModelParams target_model(const ProtocolSchedule &schedule);

/// Sites flipped by V_fl: every second site starting from the first.
std::vector<int> alternating_sites(int sites);

/// exp(+i chi sum_<ij> (n_down^i n_up^j + n_up^i n_down^j))
Operator cross_collision_gate(const BasisPtr &basis, double chi, Boundary boundary = Boundary::Open);

/// exp(-i chi sum_<ij> (n_up^i n_up^j + n_down^i n_down^j)), obtained by
/// conjugating a cross collision of phase -chi with the alternating spin flip.
/// Needs a bipartite chain (open, or periodic with even M).
Operator same_spin_collision_gate(const BasisPtr &basis, double chi,
                                  Boundary boundary = Boundary::Open);

/// Exchanges up and down occupations on the listed sites. This is the
/// fermionic mode exchange, so a doubly occupied flipped site picks up -1.
Operator spin_flip(const BasisPtr &basis, std::span<const int> sites);

/// Cross collision, flip, same-spin collision, flip back, and the on-site
/// phase exp(-i d phi sum_j n_j,up n_j,down). Equals
/// exp(-i (4 chi sum_<ij> Sz_i Sz_j + d phi sum_j n_j,up n_j,down)).
Operator zz_gate_sequence(const BasisPtr &basis, double chi, double phi, int dimension,
                          Boundary boundary = Boundary::Open);

/// V_y = exp(+i pi/2 sum_j S^y_j) or V_x = exp(-i pi/2 sum_j S^x_j).
Operator global_rotation(const BasisPtr &basis, Axis axis);

/// z: zz_gate_sequence; x: V_y^dagger (zz) V_y; y: V_x^dagger (zz) V_x.
Operator spin_gate(const BasisPtr &basis, Axis axis, double chi, double phi, int dimension,
                   Boundary boundary = Boundary::Open);

enum class HalfStepMerge { Merged, Unmerged };

/// Gate-level model of the pulse sequence over one basis. Caches the lattice
/// Hamiltonian eigendecomposition, the global rotations and the collision
/// phase tables so that many steps or times can be evaluated cheaply.
class ProtocolEngine {
  public:
    ProtocolEngine(BasisPtr basis, const ProtocolSchedule &schedule);

    const BasisPtr &basis_ptr() const { return basis_; }

    /// Spin gate for axis w simulating H_ww for the given duration.
    Operator spin_gate(Axis axis, double duration) const;
    /// exp(-i H_tUs duration)
    Operator lattice_evolution(double duration) const;

    /// Order 1: Z Y X L. Order 2: X/2 Y/2 Z/2 L Z/2 Y/2 X/2 (rightmost first).
    Operator step(double duration, int order) const;

    /// [Q_order(total/steps)]^steps.
    Operator evolve(double total, int steps, int order,
                    HalfStepMerge merge = HalfStepMerge::Merged) const;

  private:
    const Matrix &rotation(Axis axis) const;

    BasisPtr basis_;
    ProtocolSchedule schedule_;
    SpectralPropagator lattice_;
    RealVector cross_count_;
    RealVector same_count_;
    RealVector double_occ_;
    std::optional<Matrix> rot_x_;
    std::optional<Matrix> rot_y_;
};

Operator trotter_step(const BasisPtr &basis, const ProtocolSchedule &schedule, double step_time,
                      int order);

Operator trotter_evolve(const BasisPtr &basis, const ProtocolSchedule &schedule,
                        HalfStepMerge merge = HalfStepMerge::Merged);

struct ResourceCount {
    long long lattice_ramps = 0;
    long long zz_simulations = 0;
    long long rotations = 0;

    friend bool operator==(const ResourceCount &, const ResourceCount &) = default;
};

/// Experimental operations for m Trotter steps. Rotations count one V_{x,y}
/// conjugation pair per rotated spin gate; with half-step merging a second
/// order step needs 5 H_zz simulations (per dimension) and 3 rotations.
ResourceCount resource_count(long long steps, int order, int dimension = 1);

} // namespace tju
