#pragma once

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tju/types.hpp"

// Expression-friendly helpers over Eigen dense types. All take MatrixBase so
// they accept blocks, products and other expressions without a temporary.

namespace tju {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return a.cwiseAbs().maxCoeff();
}

/// max |A - A^dagger| entry.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived> &a) {
    return max_abs(a - a.adjoint());
}

/// max |A^dagger A - 1| entry.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived> &a) {
    using Plain = typename Derived::PlainObject;
    const Plain gram = a.adjoint() * a;
    return max_abs(gram - Plain::Identity(a.rows(), a.cols()));
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA> &a,
                const Eigen::MatrixBase<DerivedB> &b) {
    using Plain = typename DerivedA::PlainObject;
    Plain ab = a * b;
    ab.noalias() -= b * a;
    return ab;
}

template <typename DerivedA, typename DerivedB>
auto anticommutator(const Eigen::MatrixBase<DerivedA> &a,
                    const Eigen::MatrixBase<DerivedB> &b) {
    using Plain = typename DerivedA::PlainObject;
    Plain ab = a * b;
    ab.noalias() += b * a;
    return ab;
}

/// Largest singular value.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived> &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    using Plain = typename Derived::PlainObject;
    const Eigen::BDCSVD<Plain> svd(a.eval());
    return svd.singularValues()(0);
}

template <typename Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived> &a) {
    return a.norm();
}

template <typename Derived>
double one_norm(const Eigen::MatrixBase<Derived> &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived> &a) {
    return a.allFinite();
}

/// Matrix exponential by scaling and squaring with diagonal Pade approximants
/// of degree 3, 5, 7, 9 or 13 chosen from the 1-norm.
Matrix expm(const Matrix &a);

/// exp(-i H t) for Hermitian H via its eigendecomposition.
Matrix hermitian_expm(const Matrix &h, double t);

} // namespace tju
