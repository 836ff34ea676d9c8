#pragma once

#include "tju/linalg.hpp"
#include "tju/operator.hpp"

namespace tju {

enum class Generator {
    General,       ///< arbitrary square matrix, Pade scaling and squaring
    AntiHermitian, ///< A = -i H tau with H Hermitian, eigendecomposition route
};

Operator expm(const Operator &a, Generator kind = Generator::General);

/// Eigendecomposition of a Hermitian operator, reused for exp(-i H tau) at
/// many times.
class SpectralPropagator {
  public:
    explicit SpectralPropagator(const Operator &hamiltonian);

    Operator at(double tau) const;
    const RealVector &energies() const { return energies_; }
    const BasisPtr &basis_ptr() const { return basis_; }

  private:
    BasisPtr basis_;
    RealVector energies_;
    Matrix vectors_;
};

/// U0(tau) = exp(-i H tau) with hbar = 1.
Operator exact_propagator(const Operator &hamiltonian, double tau);

Vector evolve_state(const Operator &u, const Vector &psi);

} // namespace tju
