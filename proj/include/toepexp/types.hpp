#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace toepexp {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// unit roundoff of IEEE double
inline constexpr double unit_roundoff = 0x1p-53;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised by the structured solvers when elimination meets a pivot below the
// relative threshold. `step` is the elimination step, `pivot_ratio` the ratio
// |pivot| / running column scale (a cheap reciprocal-condition proxy).
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, Index step, double pivot_ratio,
                        Index pole_index = -1)
        : std::runtime_error(what), step_(step), pivot_ratio_(pivot_ratio),
          pole_index_(pole_index) {}

    Index step() const noexcept { return step_; }
    double pivot_ratio() const noexcept { return pivot_ratio_; }
    double condition_estimate() const noexcept {
        return pivot_ratio_ > 0 ? 1.0 / pivot_ratio_ : std::numeric_limits<double>::infinity();
    }
    Index pole_index() const noexcept { return pole_index_; }

private:
    Index step_;
    double pivot_ratio_;
    Index pole_index_;
};

// Signals that a compressed generator is longer than the configured cap; the
// caller should continue with dense arithmetic.
class GeneratorCapExceeded : public std::runtime_error {
public:
    GeneratorCapExceeded(Index length, Index cap)
        : std::runtime_error("generator length " + std::to_string(length) +
                             " exceeds cap " + std::to_string(cap) +
                             "; switch to dense arithmetic"),
          length_(length), cap_(cap) {}

    Index length() const noexcept { return length_; }
    Index cap() const noexcept { return cap_; }

private:
    Index length_;
    Index cap_;
};

} // namespace toepexp
