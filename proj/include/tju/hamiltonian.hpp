#pragma once

#include <utility>
#include <vector>

#include "tju/operator.hpp"

namespace tju {

/// Parameters of the 1D t-J-U chain in units hbar = 1, energies in units of
/// the hopping t.
struct ModelParams {
    int sites = 2;
    Boundary boundary = Boundary::Open;
    double t = 1.0;
    double t_prime = 0.0;
    double u = 0.0;
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;

    void set_isotropic_j(double j) { jx = jy = jz = j; }
    bool isotropic() const { return jx == jy && jy == jz; }
};

using SitePair = std::pair<int, int>;

/// Nearest-neighbour bonds of the chain; the wrap-around bond is added for
/// periodic chains with at least three sites.
std::vector<SitePair> chain_bonds(int sites, Boundary boundary);

/// Next-nearest pairs (j, j+2); periodic wrap pairs are added for M >= 5,
/// below which they coincide with existing pairs.
std::vector<SitePair> next_nearest_pairs(int sites, Boundary boundary);

/// -t sum_<ij>,s (c+_is c_js + h.c.) + U sum_j n_j,up n_j,down
Operator build_hubbard(const BasisPtr &basis, double t, double u,
                       Boundary boundary = Boundary::Open);

/// -t' sum_<<ij>>,s (c+_is c_js + h.c.)
Operator build_nn_hopping(const BasisPtr &basis, double t_prime,
                          Boundary boundary = Boundary::Open);

/// S^w_j = 1/2 sum_{a,b} c+_ja sigma^w_ab c_jb
Operator spin_operator(const BasisPtr &basis, int site, Axis axis);

/// sum_j S^w_j
Operator total_spin(const BasisPtr &basis, Axis axis);

/// sum_<ij> (Jx Sx_i Sx_j + Jy Sy_i Sy_j + Jz Sz_i Sz_j)
Operator build_spin_coupling(const BasisPtr &basis, double jx, double jy, double jz,
                             Boundary boundary = Boundary::Open);

/// Diagonal of sum_<ij> Sz_i Sz_j; H_zz = Jz times this.
RealVector zz_bond_diagonal(const Basis &basis, Boundary boundary);

/// Hubbard + spin coupling (+ next-nearest hopping when t' != 0).
Operator build_tju(const BasisPtr &basis, const ModelParams &params);

} // namespace tju
