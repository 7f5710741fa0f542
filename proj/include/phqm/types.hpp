// Core value types shared by every phqm module: complex matrices in a
// truncated harmonic-oscillator basis and the error hierarchy.
#ifndef PHQM_TYPES_HPP
#define PHQM_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phqm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

/// Base of all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Bad argument to an otherwise valid operation (zero scale, nonzero J, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: near-defective input, degenerate metric, non-finite
/// results (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Truncated oscillator basis: dimension N, mass, basis frequency, hbar.
struct BasisSpec {
    int dimension = 2;
    double mass = 1.0;
    double omega = 1.0;
    double hbar = 1.0;

    void validate() const;
    bool operator==(const BasisSpec&) const = default;
};

/// Dense N x N complex matrix tagged with the basis it is expressed in.
class OperatorMatrix {
public:
    OperatorMatrix(CMatrix entries, BasisSpec basis);

    const CMatrix& matrix() const noexcept { return entries_; }
    const BasisSpec& basis() const noexcept { return basis_; }
    Index dim() const noexcept { return entries_.rows(); }

    cplx operator()(Index r, Index c) const { return entries_(r, c); }

private:
    CMatrix entries_;
    BasisSpec basis_;
};

/// Frobenius norm of the leading block x block corner (block <= 0: full matrix).
double block_norm(const CMatrix& a, Index block = 0);

/// ||a - b|| / ||b|| on the leading block, falling back to the absolute
/// difference when ||b|| vanishes.
double block_relative_difference(const CMatrix& a, const CMatrix& b, Index block = 0);

}  // namespace phqm

#endif  // PHQM_TYPES_HPP
