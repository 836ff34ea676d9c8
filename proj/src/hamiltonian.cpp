#include "tju/hamiltonian.hpp"

#include <array>
#include <string>

namespace tju {

namespace {

void require_site_count(const Basis &basis, int min_sites, const char *where) {
    if (basis.sites() < min_sites) {
        throw DomainError(std::string(where) + ": needs at least " + std::to_string(min_sites) +
                          " sites, basis has " + std::to_string(basis.sites()));
    }
}

void add_hopping(Matrix &m, const Basis &basis, double amplitude, const std::vector<SitePair> &pairs) {
    for (const auto &[i, j] : pairs) {
        for (const Spin s : {Spin::Up, Spin::Down}) {
            const std::array forward{ModeOp{i, s, ModeAction::Create},
                                     ModeOp{j, s, ModeAction::Annihilate}};
            const std::array backward{ModeOp{j, s, ModeAction::Create},
                                      ModeOp{i, s, ModeAction::Annihilate}};
            add_term(m, basis, -amplitude, forward);
            add_term(m, basis, -amplitude, backward);
        }
    }
}

// S^+ = c+_up c_down, S^- = c+_down c_up
std::array<ModeOp, 2> raise(int site) {
    return {ModeOp{site, Spin::Up, ModeAction::Create}, ModeOp{site, Spin::Down, ModeAction::Annihilate}};
}
std::array<ModeOp, 2> lower(int site) {
    return {ModeOp{site, Spin::Down, ModeAction::Create}, ModeOp{site, Spin::Up, ModeAction::Annihilate}};
}

template <std::size_t N, std::size_t K>
std::array<ModeOp, N + K> concat(const std::array<ModeOp, N> &a, const std::array<ModeOp, K> &b) {
    std::array<ModeOp, N + K> r{};
    std::copy(a.begin(), a.end(), r.begin());
    std::copy(b.begin(), b.end(), r.begin() + N);
    return r;
}

double sz(FockState s, int site) {
    return 0.5 * (occupation(s, site, Spin::Up) - occupation(s, site, Spin::Down));
}

} // namespace

std::vector<SitePair> chain_bonds(int sites, Boundary boundary) {
    std::vector<SitePair> bonds;
    for (int j = 0; j + 1 < sites; ++j) {
        bonds.emplace_back(j, j + 1);
    }
    if (boundary == Boundary::Periodic && sites >= 3) {
        bonds.emplace_back(sites - 1, 0);
    }
    return bonds;
}

std::vector<SitePair> next_nearest_pairs(int sites, Boundary boundary) {
    std::vector<SitePair> pairs;
    for (int j = 0; j + 2 < sites; ++j) {
        pairs.emplace_back(j, j + 2);
    }
    if (boundary == Boundary::Periodic && sites >= 5) {
        pairs.emplace_back(sites - 2, 0);
        pairs.emplace_back(sites - 1, 1);
    }
    return pairs;
}

Operator build_hubbard(const BasisPtr &basis, double t, double u, Boundary boundary) {
    if (t != 0.0) {
        require_site_count(*basis, 2, "build_hubbard");
    }
    Operator h = Operator::zero(basis);
    if (t != 0.0) {
        add_hopping(h.matrix(), *basis, t, chain_bonds(basis->sites(), boundary));
    }
    if (u != 0.0) {
        h.matrix().diagonal() += (u * double_occupancy_diagonal(*basis)).cast<Scalar>();
    }
    return h;
}

Operator build_nn_hopping(const BasisPtr &basis, double t_prime, Boundary boundary) {
    require_site_count(*basis, 3, "build_nn_hopping");
    Operator h = Operator::zero(basis);
    if (t_prime != 0.0) {
        add_hopping(h.matrix(), *basis, t_prime, next_nearest_pairs(basis->sites(), boundary));
    }
    return h;
}

Operator spin_operator(const BasisPtr &basis, int site, Axis axis) {
    if (site < 0 || site >= basis->sites()) {
        throw DomainError("spin_operator: site " + std::to_string(site) + " out of range");
    }
    Operator op = Operator::zero(basis);
    Matrix &m = op.matrix();
    switch (axis) {
    case Axis::Z:
        for (Index i = 0; i < basis->dim(); ++i) {
            m(i, i) = sz(basis->state(i), site);
        }
        break;
    case Axis::X:
        // (S^+ + S^-) / 2
        add_term(m, *basis, 0.5, raise(site));
        add_term(m, *basis, 0.5, lower(site));
        break;
    case Axis::Y:
        // (S^+ - S^-) / 2i
        add_term(m, *basis, Scalar(0.0, -0.5), raise(site));
        add_term(m, *basis, Scalar(0.0, 0.5), lower(site));
        break;
    }
    return op;
}

Operator total_spin(const BasisPtr &basis, Axis axis) {
    Operator total = Operator::zero(basis);
    for (int j = 0; j < basis->sites(); ++j) {
        total += spin_operator(basis, j, axis);
    }
    return total;
}

RealVector zz_bond_diagonal(const Basis &basis, Boundary boundary) {
    const auto bonds = chain_bonds(basis.sites(), boundary);
    RealVector d = RealVector::Zero(basis.dim());
    for (Index k = 0; k < basis.dim(); ++k) {
        const FockState s = basis.state(k);
        for (const auto &[i, j] : bonds) {
            d(k) += sz(s, i) * sz(s, j);
        }
    }
    return d;
}

Operator build_spin_coupling(const BasisPtr &basis, double jx, double jy, double jz,
                             Boundary boundary) {
    Operator h = Operator::zero(basis);
    if (jx == 0.0 && jy == 0.0 && jz == 0.0) {
        return h;
    }
    require_site_count(*basis, 2, "build_spin_coupling");
    Matrix &m = h.matrix();
    if (jz != 0.0) {
        m.diagonal() += (jz * zz_bond_diagonal(*basis, boundary)).cast<Scalar>();
    }
    // Jx SxSx + Jy SySy = (Jx+Jy)/4 (S+S- + S-S+) + (Jx-Jy)/4 (S+S+ + S-S-)
    const double flip = 0.25 * (jx + jy);
    const double pair = 0.25 * (jx - jy);
    for (const auto &[i, j] : chain_bonds(basis->sites(), boundary)) {
        if (flip != 0.0) {
            add_term(m, *basis, flip, concat(raise(i), lower(j)));
            add_term(m, *basis, flip, concat(lower(i), raise(j)));
        }
        if (pair != 0.0) {
            add_term(m, *basis, pair, concat(raise(i), raise(j)));
            add_term(m, *basis, pair, concat(lower(i), lower(j)));
        }
    }
    return h;
}

Operator build_tju(const BasisPtr &basis, const ModelParams &params) {
    if (params.sites != basis->sites()) {
        throw DomainError("build_tju: parameters describe " + std::to_string(params.sites) +
                          " sites but the basis has " + std::to_string(basis->sites()));
    }
    Operator h = build_hubbard(basis, params.t, params.u, params.boundary);
    h += build_spin_coupling(basis, params.jx, params.jy, params.jz, params.boundary);
    if (params.t_prime != 0.0) {
        h += build_nn_hopping(basis, params.t_prime, params.boundary);
    }
    return h;
}

} // namespace tju
