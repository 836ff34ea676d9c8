#include "tju/protocol.hpp"

#include <cmath>
#include <string>

namespace tju {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

double cross_count(FockState s, const std::vector<SitePair> &bonds) {
    double c = 0.0;
    for (const auto &[i, j] : bonds) {
        c += occupation(s, i, Spin::Down) * occupation(s, j, Spin::Up) +
             occupation(s, i, Spin::Up) * occupation(s, j, Spin::Down);
    }
    return c;
}

struct Flipped {
    FockState state;
    int sign;
};

Flipped flip_sites(FockState s, std::span<const int> sites) {
    int sign = 1;
    for (const int j : sites) {
        const std::uint32_t up = 1U << mode_index(j, Spin::Up);
        const std::uint32_t down = 1U << mode_index(j, Spin::Down);
        const bool has_up = (s.bits & up) != 0;
        const bool has_down = (s.bits & down) != 0;
        if (has_up && has_down) {
            sign = -sign;
        } else if (has_up != has_down) {
            s.bits ^= up | down;
        }
    }
    return {s, sign};
}

void require_bipartite(int sites, Boundary boundary, const char *where) {
    if (boundary == Boundary::Periodic && sites >= 3 && sites % 2 == 1) {
        throw DomainError(std::string(where) +
                          ": the alternating spin flip needs a bipartite chain; periodic "
                          "boundaries require an even number of sites");
    }
}

void require_rotatable(const Basis &basis, const char *where) {
    if (std::holds_alternative<SpinSector>(basis.sector())) {
        throw DomainError(std::string(where) +
                          ": global rotations mix (N_up, N_down) sectors; use the full space "
                          "or a particle-number sector");
    }
}

// <out|R|in> on a singly occupied site, index 0 = up, 1 = down.
Eigen::Matrix2cd site_rotation(Axis axis) {
    Eigen::Matrix2cd r;
    if (axis == Axis::Y) {
        // exp(+i pi/4 sigma^y)
        r << inv_sqrt2, inv_sqrt2, -inv_sqrt2, inv_sqrt2;
    } else if (axis == Axis::X) {
        // exp(-i pi/4 sigma^x)
        r << Scalar(inv_sqrt2, 0.0), Scalar(0.0, -inv_sqrt2), Scalar(0.0, -inv_sqrt2),
            Scalar(inv_sqrt2, 0.0);
    } else {
        throw DomainError("global_rotation: axis must be x or y");
    }
    return r;
}

Matrix rotation_matrix(const Basis &basis, Axis axis) {
    require_rotatable(basis, "global_rotation");
    const Eigen::Matrix2cd r = site_rotation(axis);
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());

    struct Branch {
        std::uint32_t bits;
        Scalar amp;
    };
    std::vector<Branch> branches;
    std::vector<Branch> next;
    for (Index col = 0; col < basis.dim(); ++col) {
        const FockState s = basis.state(col);
        branches.assign(1, Branch{s.bits, 1.0});
        for (int j = 0; j < basis.sites(); ++j) {
            const bool up = s.occupied(mode_index(j, Spin::Up));
            const bool down = s.occupied(mode_index(j, Spin::Down));
            if (up == down) {
                continue;
            }
            const int in = up ? 0 : 1;
            const std::uint32_t up_bit = 1U << mode_index(j, Spin::Up);
            const std::uint32_t down_bit = 1U << mode_index(j, Spin::Down);
            next.clear();
            for (const Branch &b : branches) {
                const std::uint32_t cleared = b.bits & ~(up_bit | down_bit);
                next.push_back({cleared | up_bit, b.amp * r(0, in)});
                next.push_back({cleared | down_bit, b.amp * r(1, in)});
            }
            branches.swap(next);
        }
        for (const Branch &b : branches) {
            const auto row = basis.index_of(FockState{b.bits});
            if (!row) {
                throw DomainError("global_rotation: basis is not closed under rotations");
            }
            m(*row, col) += b.amp;
        }
    }
    return m;
}

Matrix matrix_power(Matrix base, long long exponent) {
    const Index n = base.rows();
    Matrix result = Matrix::Identity(n, n);
    bool first = true;
    while (exponent > 0) {
        if (exponent & 1) {
            if (first) {
                result = base;
                first = false;
            } else {
                result = result * base;
            }
        }
        exponent >>= 1;
        if (exponent > 0) {
            base = base * base;
        }
    }
    return result;
}

Vector unit_phases(const RealVector &angles) {
    return angles.unaryExpr([](double a) { return std::polar(1.0, a); });
}

Operator conjugate_diagonal(const BasisPtr &basis, const Matrix &rot, const Vector &diag) {
    const Matrix scaled = diag.asDiagonal() * rot;
    Matrix out = rot.adjoint() * scaled;
    return {basis, std::move(out)};
}

} // namespace

double ProtocolSchedule::collision_phase(Axis axis, double duration) const {
    const double j = axis == Axis::X ? model.jx : axis == Axis::Y ? model.jy : model.jz;
    return 0.25 * j * duration;
}

double ProtocolSchedule::onsite_phase(double duration) const {
    return (phase_winding ? 2.0 * pi : 0.0) + effective_u * duration;
}

void ProtocolSchedule::validate() const {
    if (steps < 1) {
        throw DomainError("protocol: number of Trotter steps must be >= 1, got " +
                          std::to_string(steps));
    }
    if (order != 1 && order != 2) {
        throw DomainError("protocol: Trotter order must be 1 or 2, got " + std::to_string(order));
    }
    if (!std::isfinite(total_time) || total_time < 0.0) {
        throw DomainError("protocol: total time must be finite and non-negative");
    }
    if (dimension < 1) {
        throw DomainError("protocol: spatial dimension must be >= 1");
    }
    if (model.t_prime != 0.0) {
        throw DomainError("protocol: next-nearest hopping is not realised by the pulse sequence");
    }
    for (const double v : {model.t, model.u, model.jx, model.jy, model.jz, effective_u}) {
        if (!std::isfinite(v)) {
            throw DomainError("protocol: non-finite model parameter");
        }
    }
}

ModelParams target_model(const ProtocolSchedule &schedule) {
    ModelParams target = schedule.model;
    target.u = schedule.model.u + 3.0 * schedule.dimension * schedule.effective_u;
    return target;
}

std::vector<int> alternating_sites(int sites) {
    std::vector<int> out;
    for (int j = 0; j < sites; j += 2) {
        out.push_back(j);
    }
    return out;
}

Operator cross_collision_gate(const BasisPtr &basis, double chi, Boundary boundary) {
    const auto bonds = chain_bonds(basis->sites(), boundary);
    RealVector angles(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) {
        angles(i) = chi * cross_count(basis->state(i), bonds);
    }
    return Operator::diagonal(basis, unit_phases(angles));
}

Operator same_spin_collision_gate(const BasisPtr &basis, double chi, Boundary boundary) {
    require_bipartite(basis->sites(), boundary, "same_spin_collision_gate");
    const auto bonds = chain_bonds(basis->sites(), boundary);
    const auto flipped = alternating_sites(basis->sites());
    // V_fl^dagger D V_fl for diagonal D: the signs of the signed permutation
    // cancel and D is read at the flipped pattern.
    RealVector angles(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) {
        angles(i) = -chi * cross_count(flip_sites(basis->state(i), flipped).state, bonds);
    }
    return Operator::diagonal(basis, unit_phases(angles));
}

Operator spin_flip(const BasisPtr &basis, std::span<const int> sites) {
    for (const int j : sites) {
        if (j < 0 || j >= basis->sites()) {
            throw DomainError("spin_flip: site " + std::to_string(j) + " out of range");
        }
    }
    Operator op = Operator::zero(basis);
    for (Index col = 0; col < basis->dim(); ++col) {
        const Flipped f = flip_sites(basis->state(col), sites);
        const auto row = basis->index_of(f.state);
        if (!row) {
            throw DomainError("spin_flip: basis is not closed under the flip");
        }
        op.matrix()(*row, col) = static_cast<double>(f.sign);
    }
    return op;
}

Operator zz_gate_sequence(const BasisPtr &basis, double chi, double phi, int dimension,
                          Boundary boundary) {
    const Operator cross = cross_collision_gate(basis, chi, boundary);
    const Operator same = same_spin_collision_gate(basis, chi, boundary);
    const RealVector onsite = -(dimension * phi) * double_occupancy_diagonal(*basis);
    const Vector diag = cross.matrix().diagonal().cwiseProduct(same.matrix().diagonal())
                            .cwiseProduct(unit_phases(onsite));
    return Operator::diagonal(basis, diag);
}

Operator global_rotation(const BasisPtr &basis, Axis axis) {
    return {basis, rotation_matrix(*basis, axis)};
}

Operator spin_gate(const BasisPtr &basis, Axis axis, double chi, double phi, int dimension,
                   Boundary boundary) {
    const Operator zz = zz_gate_sequence(basis, chi, phi, dimension, boundary);
    if (axis == Axis::Z) {
        return zz;
    }
    const Matrix rot = rotation_matrix(*basis, axis == Axis::X ? Axis::Y : Axis::X);
    return conjugate_diagonal(basis, rot, zz.matrix().diagonal());
}

namespace {

Operator lattice_hamiltonian(const BasisPtr &basis, const ProtocolSchedule &schedule) {
    schedule.validate();
    if (schedule.model.sites != basis->sites()) {
        throw DomainError("protocol: schedule describes " + std::to_string(schedule.model.sites) +
                          " sites but the basis has " + std::to_string(basis->sites()));
    }
    require_bipartite(basis->sites(), schedule.model.boundary, "protocol");
    return build_hubbard(basis, schedule.model.t, schedule.model.u, schedule.model.boundary);
}

} // namespace

ProtocolEngine::ProtocolEngine(BasisPtr basis, const ProtocolSchedule &schedule)
    : basis_(std::move(basis)), schedule_(schedule),
      lattice_(lattice_hamiltonian(basis_, schedule)) {
    const auto bonds = chain_bonds(basis_->sites(), schedule_.model.boundary);
    const auto flipped = alternating_sites(basis_->sites());
    cross_count_.resize(basis_->dim());
    same_count_.resize(basis_->dim());
    for (Index i = 0; i < basis_->dim(); ++i) {
        const FockState s = basis_->state(i);
        cross_count_(i) = cross_count(s, bonds);
        same_count_(i) = cross_count(flip_sites(s, flipped).state, bonds);
    }
    double_occ_ = double_occupancy_diagonal(*basis_);
    // H_xx is reached through V_y, H_yy through V_x.
    if (schedule_.model.jx != 0.0) {
        rot_y_ = rotation_matrix(*basis_, Axis::Y);
    }
    if (schedule_.model.jy != 0.0) {
        rot_x_ = rotation_matrix(*basis_, Axis::X);
    }
}

const Matrix &ProtocolEngine::rotation(Axis axis) const {
    return axis == Axis::X ? *rot_x_ : *rot_y_;
}

Operator ProtocolEngine::spin_gate(Axis axis, double duration) const {
    const double chi = schedule_.collision_phase(axis, duration);
    const double phi = schedule_.onsite_phase(duration);
    const RealVector angles =
        chi * (cross_count_ - same_count_) - (schedule_.dimension * phi) * double_occ_;
    const Vector diag = unit_phases(angles);
    if (axis == Axis::Z || chi == 0.0) {
        // With chi = 0 only the on-site factor remains, which commutes with
        // the rotations.
        return Operator::diagonal(basis_, diag);
    }
    return conjugate_diagonal(basis_, rotation(axis == Axis::X ? Axis::Y : Axis::X), diag);
}

Operator ProtocolEngine::lattice_evolution(double duration) const {
    return lattice_.at(duration);
}

Operator ProtocolEngine::step(double duration, int order) const {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw DomainError("trotter_step: step time must be positive and finite");
    }
    if (order == 1) {
        // Z Y X L, applied right to left
        Matrix p = spin_gate(Axis::X, duration).matrix() * lattice_evolution(duration).matrix();
        p = spin_gate(Axis::Y, duration).matrix() * p;
        p = spin_gate(Axis::Z, duration).matrix().diagonal().asDiagonal() * p;
        return {basis_, std::move(p)};
    }
    if (order == 2) {
        const double half = 0.5 * duration;
        const Matrix x = spin_gate(Axis::X, half).matrix();
        const Matrix y = spin_gate(Axis::Y, half).matrix();
        const Vector z = spin_gate(Axis::Z, half).matrix().diagonal();
        Matrix inner = z.asDiagonal() * lattice_evolution(duration).matrix();
        inner = inner * z.asDiagonal();
        inner = y * inner;
        inner = inner * y;
        Matrix out = x * inner;
        out = out * x;
        return {basis_, std::move(out)};
    }
    throw DomainError("trotter_step: order must be 1 or 2");
}

Operator ProtocolEngine::evolve(double total, int steps, int order, HalfStepMerge merge) const {
    if (steps < 1) {
        throw DomainError("trotter_evolve: number of steps must be >= 1");
    }
    const double dt = total / steps;
    if (order == 1 || merge == HalfStepMerge::Unmerged) {
        return {basis_, matrix_power(step(dt, order).matrix(), steps)};
    }
    if (order != 2) {
        throw DomainError("trotter_evolve: order must be 1 or 2");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("trotter_evolve: step time must be positive and finite");
    }
    // X/2 [R X]^(m-1) R X/2 with R = Y/2 Z/2 L Z/2 Y/2
    const double half = 0.5 * dt;
    const Matrix x_half = spin_gate(Axis::X, half).matrix();
    const Matrix x_full = spin_gate(Axis::X, dt).matrix();
    const Matrix y = spin_gate(Axis::Y, half).matrix();
    const Vector z = spin_gate(Axis::Z, half).matrix().diagonal();
    Matrix r = z.asDiagonal() * lattice_evolution(dt).matrix();
    r = r * z.asDiagonal();
    r = y * r;
    r = r * y;
    Matrix tail = r * x_half;
    if (steps > 1) {
        const Matrix body = matrix_power(r * x_full, steps - 1);
        tail = body * tail;
    }
    Matrix out = x_half * tail;
    return {basis_, std::move(out)};
}

Operator trotter_step(const BasisPtr &basis, const ProtocolSchedule &schedule, double step_time,
                      int order) {
    return ProtocolEngine(basis, schedule).step(step_time, order);
}

Operator trotter_evolve(const BasisPtr &basis, const ProtocolSchedule &schedule,
                        HalfStepMerge merge) {
    return ProtocolEngine(basis, schedule)
        .evolve(schedule.total_time, schedule.steps, schedule.order, merge);
}

ResourceCount resource_count(long long steps, int order, int dimension) {
    if (steps < 0) {
        throw DomainError("resource_count: negative step count");
    }
    if (dimension < 1) {
        throw DomainError("resource_count: dimension must be >= 1");
    }
    if (order == 1) {
        return {steps, 3 * dimension * steps, 2 * steps};
    }
    if (order == 2) {
        return {steps, 5 * dimension * steps, 3 * steps};
    }
    throw DomainError("resource_count: order must be 1 or 2");
}

} // namespace tju
