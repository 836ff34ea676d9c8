#pragma once

#include <span>

#include "tju/fockspace.hpp"
#include "tju/types.hpp"

namespace tju {

/// Dense complex matrix over a Basis. Arithmetic between operators requires
/// equal bases.
class Operator {
  public:
    Operator(BasisPtr basis, Matrix matrix);

    static Operator zero(BasisPtr basis);
    static Operator identity(BasisPtr basis);
    static Operator diagonal(BasisPtr basis, const Vector &diag);

    const Basis &basis() const { return *basis_; }
    const BasisPtr &basis_ptr() const { return basis_; }
    const Matrix &matrix() const { return matrix_; }
    Matrix &matrix() { return matrix_; }
    Index dim() const { return matrix_.rows(); }

    Operator adjoint() const { return {basis_, matrix_.adjoint()}; }

    Operator &operator+=(const Operator &other);
    Operator &operator-=(const Operator &other);
    Operator &operator*=(Scalar s) {
        matrix_ *= s;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator &b) { return a += b; }
    friend Operator operator-(Operator a, const Operator &b) { return a -= b; }
    friend Operator operator*(Operator a, Scalar s) { return a *= s; }
    friend Operator operator*(Scalar s, Operator a) { return a *= s; }
    friend Operator operator*(const Operator &a, const Operator &b);
    friend Vector operator*(const Operator &a, const Vector &v);

  private:
    BasisPtr basis_;
    Matrix matrix_;
};

void require_same_basis(const Basis &a, const Basis &b, const char *where);

/// Adds coeff * (product of mode ops) to a matrix over the basis. Throws
/// DomainError when the term maps a basis state outside the basis.
void add_term(Matrix &m, const Basis &basis, Scalar coeff, std::span<const ModeOp> ops);

/// Single mode operator c or c^dagger as a matrix; requires a basis closed
/// under it (the full space).
Operator mode_operator(const BasisPtr &basis, int site, Spin spin, ModeAction action);

/// n_{site,spin}.
Operator number_operator(const BasisPtr &basis, int site, Spin spin);

/// Sum over sites of n_{j,spin}.
Operator total_number(const BasisPtr &basis, Spin spin);

/// Diagonal of sum_j n_{j,up} n_{j,down} as a real vector.
RealVector double_occupancy_diagonal(const Basis &basis);

} // namespace tju
