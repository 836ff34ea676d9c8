#include "tju/propagator.hpp"

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace tju {

namespace {

// Higham, "The scaling and squaring method for the matrix exponential
// revisited" (2005): theta_m bounds and Pade coefficients b_k.
constexpr std::array<double, 5> pade_theta{1.495585217958292e-2, 2.539398330063230e-1,
                                           9.504178996162932e-1, 2.097847961257068e0,
                                           5.371920351148152e0};

constexpr std::array<double, 4> b3{120., 60., 12., 1.};
constexpr std::array<double, 6> b5{30240., 15120., 3360., 420., 30., 1.};
constexpr std::array<double, 8> b7{17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
constexpr std::array<double, 10> b9{17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                    2162160., 110880., 3960., 90., 1.};
constexpr std::array<double, 14> b13{64764752532480000., 32382376266240000., 7771770303897600.,
                                     1187353796428800., 129060195264000., 10559470521600.,
                                     670442572800., 33522128640., 1323241920., 40840800.,
                                     960960., 16380., 182., 1.};

template <std::size_t N>
Matrix pade_low(const Matrix &a, const std::array<double, N> &b) {
    const Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix odd = b[1] * id;
    Matrix even = b[0] * id;
    Matrix power = id;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        even += b[k] * power;
        if (k + 1 < N) {
            odd += b[k + 1] * power;
        }
    }
    const Matrix u = a * odd;
    return (even - u).partialPivLu().solve(even + u);
}

Matrix pade13(const Matrix &a) {
    const auto &b = b13;
    const Index n = a.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    Matrix inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    Matrix odd = a6 * inner;
    odd += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    const Matrix u = a * odd;
    inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    Matrix even = a6 * inner;
    even += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    return (even - u).partialPivLu().solve(even + u);
}

} // namespace

Matrix expm(const Matrix &a) {
    if (a.rows() != a.cols()) {
        throw DomainError("expm: matrix is not square");
    }
    if (!a.allFinite()) {
        throw NumericError("expm: non-finite entries");
    }
    if (a.size() == 0) {
        return a;
    }
    const double norm = one_norm(a);
    if (norm <= pade_theta[0]) {
        return pade_low(a, b3);
    }
    if (norm <= pade_theta[1]) {
        return pade_low(a, b5);
    }
    if (norm <= pade_theta[2]) {
        return pade_low(a, b7);
    }
    if (norm <= pade_theta[3]) {
        return pade_low(a, b9);
    }
    int squarings = 0;
    if (norm > pade_theta[4]) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / pade_theta[4])));
    }
    const Matrix scaled = a / std::ldexp(1.0, squarings);
    Matrix r = pade13(scaled);
    for (int k = 0; k < squarings; ++k) {
        r = r * r;
    }
    return r;
}

Matrix hermitian_expm(const Matrix &h, double t) {
    if (!h.allFinite() || !std::isfinite(t)) {
        throw NumericError("hermitian_expm: non-finite input");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw NumericError("hermitian_expm: eigendecomposition failed");
    }
    const Vector phases = (eig.eigenvalues() * (-t)).unaryExpr([](double x) {
        return std::polar(1.0, x);
    });
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Operator expm(const Operator &a, Generator kind) {
    if (kind == Generator::General) {
        return {a.basis_ptr(), expm(a.matrix())};
    }
    // exp(A) with A = -iK and K = iA Hermitian
    const Matrix k = Scalar(0.0, 1.0) * a.matrix();
    const double scale = std::max(1.0, max_abs(k));
    if (hermiticity_defect(k) > 1e-12 * scale) {
        throw DomainError("expm: generator is not anti-Hermitian");
    }
    return {a.basis_ptr(), hermitian_expm(k, 1.0)};
}

SpectralPropagator::SpectralPropagator(const Operator &hamiltonian) : basis_(hamiltonian.basis_ptr()) {
    const Matrix &h = hamiltonian.matrix();
    if (!h.allFinite()) {
        throw NumericError("SpectralPropagator: non-finite Hamiltonian");
    }
    const double scale = std::max(1.0, max_abs(h));
    if (hermiticity_defect(h) > 1e-12 * scale) {
        throw DomainError("SpectralPropagator: Hamiltonian is not Hermitian");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw NumericError("SpectralPropagator: eigendecomposition failed");
    }
    energies_ = eig.eigenvalues();
    vectors_ = eig.eigenvectors();
}

Operator SpectralPropagator::at(double tau) const {
    if (!std::isfinite(tau)) {
        throw NumericError("SpectralPropagator: non-finite time");
    }
    const Vector phases = (energies_ * (-tau)).unaryExpr([](double x) { return std::polar(1.0, x); });
    Matrix scaled = vectors_ * phases.asDiagonal();
    Matrix u = scaled * vectors_.adjoint();
    return {basis_, std::move(u)};
}

Operator exact_propagator(const Operator &hamiltonian, double tau) {
    return SpectralPropagator(hamiltonian).at(tau);
}

Vector evolve_state(const Operator &u, const Vector &psi) {
    if (psi.size() != u.dim()) {
        throw DomainError("evolve_state: state has " + std::to_string(psi.size()) +
                          " components, propagator dimension is " + std::to_string(u.dim()));
    }
    return u.matrix() * psi;
}

} // namespace tju
