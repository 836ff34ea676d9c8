#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tju {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Spin { Up, Down };
enum class Axis { X, Y, Z };
enum class Boundary { Open, Periodic };

/// Invalid argument or precondition violation in the physics API.
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

/// Non-finite input or a numerical routine that failed to produce a result.
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

inline constexpr double pi = 3.141592653589793238462643383279502884;

inline const char *to_string(Axis axis) {
    switch (axis) {
    case Axis::X:
        return "x";
    case Axis::Y:
        return "y";
    case Axis::Z:
        return "z";
    }
    return "?";
}

inline const char *to_string(Boundary boundary) {
    return boundary == Boundary::Open ? "open" : "periodic";
}

} // namespace tju
