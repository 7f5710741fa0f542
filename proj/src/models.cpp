#include "phqm/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/students_t.hpp>

namespace phqm {

namespace {

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

struct CubicPieces {
    CMatrix x, p, x2, p2;
    double m, mu, hbar;
    Index n;
};

CubicPieces pieces(const CubicModelSpec& spec, const BasisSpec& basis) {
    spec.validate();
    const auto ops = oscillator_ops(basis);
    CubicPieces c;
    c.x = ops.x.matrix();
    c.p = ops.p.matrix();
    c.x2 = c.x * c.x;
    c.p2 = c.p * c.p;
    c.m = spec.mass;
    c.mu = spec.mu;
    c.hbar = basis.hbar;
    c.n = c.x.rows();
    return c;
}

CMatrix harmonic(const CubicPieces& c) { return c.p2 / (2.0 * c.m) + 0.5 * c.mu * c.mu * c.x2; }

// X = x + eps X1 + eps^2 X2
CMatrix x_first(const CubicPieces& c) {
    return (2.0 * kI / (c.m * std::pow(c.mu, 4))) * (c.p2 + 0.5 * c.m * c.mu * c.mu * c.x2);
}

CMatrix x_second(const CubicPieces& c) {
    return (anticommutator(c.x, c.p2) - c.m * c.mu * c.mu * c.x2 * c.x) / (c.m * std::pow(c.mu, 6));
}

double t95(std::size_t dof) {
    if (dof == 0) return std::numeric_limits<double>::infinity();
    return boost::math::quantile(boost::math::complement(boost::math::students_t(static_cast<double>(dof)), 0.025));
}

}  // namespace

OperatorMatrix perturbative_h_cubic(const CubicModelSpec& spec, const BasisSpec& basis) {
    const auto c = pieces(spec, basis);
    const CMatrix second = anticommutator(c.x2, c.p2) / c.m + c.mu * c.mu * c.x2 * c.x2 +
                           (2.0 * c.hbar * c.hbar / (3.0 * c.m)) * CMatrix::Identity(c.n, c.n);
    const double eps = spec.epsilon;
    return OperatorMatrix(harmonic(c) + (1.5 / std::pow(c.mu, 4)) * eps * eps * second, basis);
}

OperatorMatrix perturbative_X_cubic(const CubicModelSpec& spec, const BasisSpec& basis) {
    const auto c = pieces(spec, basis);
    const double eps = spec.epsilon;
    return OperatorMatrix(c.x + eps * x_first(c) + eps * eps * x_second(c), basis);
}

OperatorMatrix perturbative_source_operator(const CubicModelSpec& spec, double J, const BasisSpec& basis) {
    const auto c = pieces(spec, basis);
    const double eps = spec.epsilon;
    const CMatrix first = kI * c.x2 * c.x - J * x_first(c);
    const CMatrix second = -J * x_second(c);
    return OperatorMatrix(harmonic(c) - J * c.x + eps * first + eps * eps * second, basis);
}

CubicExact exact_cubic(const CubicModelSpec& spec, const BasisSpec& basis, MetricNormalization normalization,
                       const DiagonalizeOptions& options) {
    spec.validate();
    OperatorMatrix hamiltonian = build_cubic_hamiltonian(spec, basis);
    auto ops = oscillator_ops(basis);
    BiorthonormalSystem sys = biorthonormal_diagonalize(hamiltonian, options);
    if (normalization == MetricNormalization::cpt) sys = cpt_normalize(sys, parity_operator(basis));
    MetricOperator metric = metric_from_biorthonormal(sys);
    OperatorMatrix h = hermitian_equivalent(hamiltonian, metric);
    OperatorMatrix X = pseudo_observable(ops.x, metric);
    return CubicExact{std::move(hamiltonian), std::move(ops.x), std::move(ops.p), std::move(sys),
                      std::move(metric), std::move(h), std::move(X)};
}

PerturbativeOrderFit fit_order(std::vector<double> epsilons, std::vector<double> errors) {
    if (epsilons.size() != errors.size()) throw ArgumentError("order fit: grid and error lists differ in length");
    if (epsilons.size() < 4) throw ArgumentError("order fit: need at least 4 points");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (!(epsilons[k] > 0.0) || !std::isfinite(epsilons[k])) throw ArgumentError("order fit: eps must be positive");
        if (!(errors[k] > 0.0) || !std::isfinite(errors[k])) {
            std::ostringstream msg;
            msg << "order fit: error at eps = " << epsilons[k] << " is not positive (" << errors[k] << ")";
            throw ArgumentError(msg.str());
        }
    }
    // stored in decreasing eps order
    std::vector<std::size_t> order(epsilons.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return epsilons[a] > epsilons[b]; });
    PerturbativeOrderFit fit;
    for (std::size_t k : order) {
        fit.epsilons.push_back(epsilons[k]);
        fit.errors.push_back(errors[k]);
    }
    for (std::size_t k = 1; k < fit.epsilons.size(); ++k) {
        if (!(fit.epsilons[k] < fit.epsilons[k - 1])) throw ArgumentError("order fit: eps grid has repeated values");
    }

    const std::size_t n = fit.epsilons.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t k = 0; k < n; ++k) {
        lx[k] = std::log(fit.epsilons[k]);
        ly[k] = std::log(fit.errors[k]);
        sx += lx[k];
        sy += ly[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double rss = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = ly[k] - intercept - fit.slope * lx[k];
        rss += r * r;
    }
    const double se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    fit.half_width = t95(n - 2) * se;
    return fit;
}

const char* to_string(Remainder r) {
    switch (r) {
        case Remainder::hamiltonian: return "h";
        case Remainder::position: return "X";
        case Remainder::source_operator: return "H-JX";
    }
    return "unknown";
}

double perturbative_remainder(Remainder which, const CubicModelSpec& spec, const BasisSpec& basis, Index block,
                              double J, MetricNormalization normalization) {
    const CubicExact exact = exact_cubic(spec, basis, normalization);
    CMatrix diff;
    switch (which) {
        case Remainder::hamiltonian:
            diff = exact.h.matrix() - perturbative_h_cubic(spec, basis).matrix();
            break;
        case Remainder::position:
            diff = exact.X.matrix() - perturbative_X_cubic(spec, basis).matrix();
            break;
        case Remainder::source_operator:
            diff = exact.hamiltonian.matrix() - J * exact.X.matrix() -
                   perturbative_source_operator(spec, J, basis).matrix();
            break;
    }
    return block_norm(diff, block);
}

PerturbativeOrderFit perturbative_order_fit(Remainder which, const CubicModelSpec& base,
                                            const std::vector<double>& epsilons, int dimension, Index block,
                                            double J, MetricNormalization normalization) {
    std::vector<double> errors;
    errors.reserve(epsilons.size());
    for (double eps : epsilons) {
        CubicModelSpec spec = base;
        spec.epsilon = eps;
        errors.push_back(perturbative_remainder(which, spec, cubic_basis(spec, dimension, 1.0), block, J,
                                                normalization));
    }
    return fit_order(epsilons, std::move(errors));
}

MetricOperator momentum_metric_operator(double alpha, const BasisSpec& basis, double overflow_guard) {
    basis.validate();
    // builds (and guards) the same exponential the matrix route uses
    build_momentum_metric(alpha, basis, overflow_guard);
    const auto ops = oscillator_ops(basis);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(ops.p.matrix());
    if (eig.info() != Eigen::Success) throw NumericalError("momentum metric: eigensolve of p failed");
    const RVector weights = (2.0 * alpha / basis.hbar * eig.eigenvalues().array()).exp();
    return MetricOperator::from_spectral(eig.eigenvectors(), weights, 0.0);
}

ShiftedEquivalenceReport shifted_equivalence_report(const ShiftedModelSpec& spec, const BasisSpec& basis,
                                                    double overflow_guard) {
    spec.validate();
    const MetricOperator metric = momentum_metric_operator(spec.alpha, basis, overflow_guard);
    const OperatorMatrix H = build_shifted_hamiltonian(spec, basis);
    const auto ops = oscillator_ops(basis);
    const Index n = ops.x.dim();

    ShiftedModelSpec unshifted = spec;
    unshifted.alpha = 0.0;
    const OperatorMatrix h0 = build_shifted_hamiltonian(unshifted, basis);
    const OperatorMatrix h = hermitian_equivalent(H, metric);
    const OperatorMatrix X = pseudo_observable(ops.x, metric);
    const CMatrix x_shift = ops.x.matrix() + kI * spec.alpha * CMatrix::Identity(n, n);

    ShiftedEquivalenceReport r;
    r.alpha = spec.alpha;
    r.block = default_trusted_modes(n);
    r.h_residual = block_relative_difference(h.matrix(), h0.matrix(), r.block);
    r.x_residual = block_relative_difference(X.matrix(), x_shift, r.block);
    r.pseudo_hermiticity_residual = pseudo_hermiticity_residual(H.matrix(), metric.eta(), r.block);
    return r;
}

}  // namespace phqm
