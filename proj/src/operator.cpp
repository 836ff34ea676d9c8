#include "tju/operator.hpp"

#include <array>
#include <string>

namespace tju {

Operator::Operator(BasisPtr basis, Matrix matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    if (!basis_) {
        throw DomainError("Operator: null basis");
    }
    if (matrix_.rows() != basis_->dim() || matrix_.cols() != basis_->dim()) {
        throw DomainError("Operator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()) + " but basis dimension is " +
                          std::to_string(basis_->dim()));
    }
}

Operator Operator::zero(BasisPtr basis) {
    const Index n = basis->dim();
    return {std::move(basis), Matrix::Zero(n, n)};
}

Operator Operator::identity(BasisPtr basis) {
    const Index n = basis->dim();
    return {std::move(basis), Matrix::Identity(n, n)};
}

Operator Operator::diagonal(BasisPtr basis, const Vector &diag) {
    Matrix m = diag.asDiagonal();
    return {std::move(basis), std::move(m)};
}

void require_same_basis(const Basis &a, const Basis &b, const char *where) {
    if (!(a == b)) {
        throw DomainError(std::string(where) + ": operators live on different bases");
    }
}

Operator &Operator::operator+=(const Operator &other) {
    require_same_basis(*basis_, *other.basis_, "Operator::operator+");
    matrix_ += other.matrix_;
    return *this;
}

Operator &Operator::operator-=(const Operator &other) {
    require_same_basis(*basis_, *other.basis_, "Operator::operator-");
    matrix_ -= other.matrix_;
    return *this;
}

Operator operator*(const Operator &a, const Operator &b) {
    require_same_basis(*a.basis_, *b.basis_, "Operator::operator*");
    Matrix m = a.matrix_ * b.matrix_;
    return {a.basis_, std::move(m)};
}

Vector operator*(const Operator &a, const Vector &v) {
    if (v.size() != a.dim()) {
        throw DomainError("Operator::operator*: vector size " + std::to_string(v.size()) +
                          " does not match dimension " + std::to_string(a.dim()));
    }
    return a.matrix_ * v;
}

void add_term(Matrix &m, const Basis &basis, Scalar coeff, std::span<const ModeOp> ops) {
    for (Index col = 0; col < basis.dim(); ++col) {
        const auto r = apply_mode_string(basis.state(col), ops);
        if (!r) {
            continue;
        }
        const auto row = basis.index_of(r->state);
        if (!row) {
            throw DomainError("operator term leaves the basis sector");
        }
        m(*row, col) += coeff * static_cast<double>(r->sign);
    }
}

Operator mode_operator(const BasisPtr &basis, int site, Spin spin, ModeAction action) {
    if (site < 0 || site >= basis->sites()) {
        throw DomainError("mode_operator: site out of range");
    }
    Operator op = Operator::zero(basis);
    const std::array ops{ModeOp{site, spin, action}};
    add_term(op.matrix(), *basis, 1.0, ops);
    return op;
}

Operator number_operator(const BasisPtr &basis, int site, Spin spin) {
    if (site < 0 || site >= basis->sites()) {
        throw DomainError("number_operator: site out of range");
    }
    Vector d(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) {
        d(i) = occupation(basis->state(i), site, spin);
    }
    return Operator::diagonal(basis, d);
}

Operator total_number(const BasisPtr &basis, Spin spin) {
    Vector d(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) {
        d(i) = basis->state(i).particles(spin);
    }
    return Operator::diagonal(basis, d);
}

RealVector double_occupancy_diagonal(const Basis &basis) {
    RealVector d(basis.dim());
    for (Index i = 0; i < basis.dim(); ++i) {
        int count = 0;
        for (int j = 0; j < basis.sites(); ++j) {
            count += basis.state(i).doubly_occupied(j) ? 1 : 0;
        }
        d(i) = count;
    }
    return d;
}

} // namespace tju
