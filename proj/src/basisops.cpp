#include "phqm/basisops.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace phqm {

void BasisSpec::validate() const {
    if (dimension < 2) {
        throw ConfigError("basis dimension must be >= 2, got " + std::to_string(dimension));
    }
    if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0) || !std::isfinite(mass) ||
        !std::isfinite(omega) || !std::isfinite(hbar)) {
        throw ConfigError("basis mass, frequency and hbar must be finite and positive");
    }
}

OperatorMatrix::OperatorMatrix(CMatrix entries, BasisSpec basis)
    : entries_(std::move(entries)), basis_(basis) {
    basis_.validate();
    if (entries_.rows() != entries_.cols()) {
        throw ArgumentError("operator matrix must be square");
    }
    if (entries_.rows() != basis_.dimension) {
        throw ArgumentError("operator dimension " + std::to_string(entries_.rows()) +
                            " does not match basis dimension " + std::to_string(basis_.dimension));
    }
}

double block_norm(const CMatrix& a, Index block) {
    if (block <= 0 || block >= a.rows()) return a.norm();
    return a.topLeftCorner(block, block).norm();
}

double block_relative_difference(const CMatrix& a, const CMatrix& b, Index block) {
    const double diff = block_norm(a - b, block);
    const double ref = block_norm(b, block);
    return ref > 0.0 ? diff / ref : diff;
}

void CubicModelSpec::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("cubic model: mass must be positive");
    if (mu == 0.0 || !std::isfinite(mu)) throw ConfigError("cubic model: mu must be nonzero");
    if (!std::isfinite(epsilon)) throw ConfigError("cubic model: epsilon must be finite");
}

int ShiftedModelSpec::degree() const {
    for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k) {
        if (coefficients[k] != 0.0) return k;
    }
    return 0;
}

void ShiftedModelSpec::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("shifted model: mass must be positive");
    if (!std::isfinite(alpha)) throw ConfigError("shifted model: alpha must be finite");
    if (coefficients.empty()) throw ConfigError("shifted model: potential has no coefficients");
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw ConfigError("shifted model: non-finite potential coefficient");
    }
    const int deg = degree();
    if (deg > degree_cap) {
        throw ConfigError("shifted model: potential degree " + std::to_string(deg) +
                          " exceeds cap " + std::to_string(degree_cap));
    }
    if ((deg == 2 || deg == 4) && !(coefficients[deg] > 0.0)) {
        throw ConfigError("shifted model: leading coefficient of a degree-" + std::to_string(deg) +
                          " potential must be positive");
    }
}

OscillatorOps oscillator_ops(const BasisSpec& basis) {
    basis.validate();
    const Index n = basis.dimension;
    CMatrix lower = CMatrix::Zero(n, n);
    for (Index k = 1; k < n; ++k) lower(k - 1, k) = std::sqrt(static_cast<double>(k));
    const CMatrix raise = lower.adjoint();

    const double xs = std::sqrt(basis.hbar / (2.0 * basis.mass * basis.omega));
    const double ps = std::sqrt(basis.mass * basis.omega * basis.hbar / 2.0);
    CMatrix x = xs * (lower + raise);
    CMatrix p = (kI * ps) * (raise - lower);
    return {OperatorMatrix(std::move(x), basis), OperatorMatrix(std::move(p), basis)};
}

OperatorMatrix parity_operator(const BasisSpec& basis) {
    basis.validate();
    CMatrix parity = CMatrix::Zero(basis.dimension, basis.dimension);
    for (Index k = 0; k < basis.dimension; ++k) parity(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return OperatorMatrix(std::move(parity), basis);
}

BasisSpec cubic_basis(const CubicModelSpec& spec, int dimension, double hbar) {
    spec.validate();
    BasisSpec basis{dimension, spec.mass, std::abs(spec.mu) / std::sqrt(spec.mass), hbar};
    basis.validate();
    return basis;
}

BasisSpec shifted_basis(const ShiftedModelSpec& spec, int dimension, double hbar) {
    spec.validate();
    double omega = 1.0;
    const auto coeff = [&](std::size_t k) { return k < spec.coefficients.size() ? spec.coefficients[k] : 0.0; };
    if (coeff(2) > 0.0) {
        omega = std::sqrt(2.0 * coeff(2) / spec.mass);
    } else if (coeff(4) > 0.0) {
        omega = std::cbrt(4.0 * coeff(4) * hbar / (spec.mass * spec.mass));
    }
    BasisSpec basis{dimension, spec.mass, omega, hbar};
    basis.validate();
    return basis;
}

OperatorMatrix build_cubic_hamiltonian(const CubicModelSpec& spec, const BasisSpec& basis) {
    spec.validate();
    if (basis.mass != spec.mass) throw ConfigError("cubic model: basis mass differs from model mass");
    const auto [x, p] = oscillator_ops(basis);
    const CMatrix& xm = x.matrix();
    const CMatrix& pm = p.matrix();
    const CMatrix x2 = xm * xm;
    const CMatrix x3 = x2 * xm;
    CMatrix h = (pm * pm) / (2.0 * spec.mass) + (0.5 * spec.mu * spec.mu) * x2 + (kI * spec.epsilon) * x3;
    return OperatorMatrix(std::move(h), basis);
}

CMatrix polynomial_of_matrix(const std::vector<double>& coefficients, const CMatrix& arg) {
    const Index n = arg.rows();
    CMatrix result = CMatrix::Zero(n, n);
    CMatrix power = CMatrix::Identity(n, n);
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        if (k > 0) power = power * arg;
        if (coefficients[k] != 0.0) result += coefficients[k] * power;
    }
    return result;
}

OperatorMatrix build_shifted_hamiltonian(const ShiftedModelSpec& spec, const BasisSpec& basis) {
    spec.validate();
    if (basis.mass != spec.mass) throw ConfigError("shifted model: basis mass differs from model mass");
    const auto [x, p] = oscillator_ops(basis);
    const Index n = basis.dimension;
    const CMatrix shifted = x.matrix() + (kI * spec.alpha) * CMatrix::Identity(n, n);
    std::vector<double> trimmed(spec.coefficients.begin(), spec.coefficients.begin() + spec.degree() + 1);
    CMatrix h = (p.matrix() * p.matrix()) / (2.0 * spec.mass) + polynomial_of_matrix(trimmed, shifted);
    return OperatorMatrix(std::move(h), basis);
}

OperatorMatrix build_momentum_metric(double alpha, const BasisSpec& basis, double overflow_guard) {
    basis.validate();
    if (!std::isfinite(alpha)) throw ConfigError("momentum metric: alpha must be finite");
    const auto ops = oscillator_ops(basis);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(ops.p.matrix());
    if (eig.info() != Eigen::Success) throw NumericalError("momentum metric: eigensolve of p failed");
    const double p_norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    const double exponent = std::abs(alpha) * p_norm / basis.hbar;
    if (exponent > overflow_guard) {
        std::ostringstream msg;
        msg << "momentum metric: |alpha| ||p|| / hbar = " << exponent << " exceeds overflow guard "
            << overflow_guard << " (truncated exp(2 alpha p / hbar) is not trustworthy at N = "
            << basis.dimension << ")";
        throw ConfigError(msg.str());
    }
    const RVector weights = (2.0 * alpha / basis.hbar * eig.eigenvalues().array()).exp();
    CMatrix eta = eig.eigenvectors() * weights.asDiagonal() * eig.eigenvectors().adjoint();
    eta = 0.5 * (eta + eta.adjoint()).eval();
    return OperatorMatrix(std::move(eta), basis);
}

ShiftedModelSpec quartic_family(double a, double b, double c, double mass) {
    if (a == 0.0) throw ConfigError("quartic family requires a != 0");
    ShiftedModelSpec spec;
    spec.mass = mass;
    spec.alpha = b / (4.0 * a);
    const double c2 = a;
    const double c1 = c + 3.0 * b * b / (8.0 * a);
    const double c0 = b * b * (16.0 * a * c + 5.0 * b * b) / (256.0 * a * a * a);
    spec.coefficients = {c0, 0.0, c1, 0.0, c2};
    spec.validate();
    return spec;
}

}  // namespace phqm
