#include "phqm/metric.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "phqm/linalg.hpp"

namespace phqm {

MetricOperator MetricOperator::from_spectral(CMatrix eigenvectors, RVector eigenvalues, double min_eigen_ratio) {
    if (eigenvectors.rows() != eigenvectors.cols() || eigenvectors.cols() != eigenvalues.size()) {
        throw ArgumentError("metric: eigenbasis and eigenvalues have inconsistent sizes");
    }
    if (eigenvalues.size() == 0) throw ArgumentError("metric: empty eigenvalue list");
    for (Index k = 0; k < eigenvalues.size(); ++k) {
        if (!std::isfinite(eigenvalues(k)) || !(eigenvalues(k) > 0.0)) {
            std::ostringstream msg;
            msg << "degenerate metric: eigenvalue " << k << " = " << eigenvalues(k) << " is not positive";
            throw NumericalError(msg.str());
        }
    }
    const double ratio = eigenvalues.minCoeff() / eigenvalues.maxCoeff();
    if (!(ratio > min_eigen_ratio)) {
        std::ostringstream msg;
        msg << "degenerate metric: lambda_min/lambda_max = " << ratio << " <= " << min_eigen_ratio;
        throw NumericalError(msg.str());
    }

    MetricOperator m;
    m.u_ = std::move(eigenvectors);
    m.lambda_ = std::move(eigenvalues);
    const auto build = [&](const RVector& w) {
        CMatrix out = m.u_ * w.asDiagonal() * m.u_.adjoint();
        return CMatrix(0.5 * (out + out.adjoint()));
    };
    m.eta_ = build(m.lambda_);
    m.sqrt_ = build(m.lambda_.array().sqrt().matrix());
    m.inv_sqrt_ = build(m.lambda_.array().rsqrt().matrix());
    m.q_ = build(-m.lambda_.array().log().matrix());
    return m;
}

MetricOperator MetricOperator::from_hermitian(const CMatrix& eta, double min_eigen_ratio) {
    if (eta.rows() != eta.cols()) throw ArgumentError("metric: matrix must be square");
    const double scale = eta.norm();
    if (!(scale > 0.0) || !all_finite(eta)) throw NumericalError("degenerate metric: zero or non-finite matrix");
    if ((eta - eta.adjoint()).norm() > 1e-12 * scale) {
        throw NumericalError("metric: matrix is not Hermitian to 1e-12 relative");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(CMatrix(0.5 * (eta + eta.adjoint())));
    if (eig.info() != Eigen::Success) throw NumericalError("metric: Hermitian eigensolve failed");
    return from_spectral(eig.eigenvectors(), eig.eigenvalues(), min_eigen_ratio);
}

MetricOperator MetricOperator::identity(Index dimension) {
    return from_spectral(CMatrix::Identity(dimension, dimension), RVector::Ones(dimension));
}

MetricOperator metric_from_biorthonormal(const BiorthonormalSystem& sys, double min_eigen_ratio) {
    Eigen::JacobiSVD<CMatrix> svd(sys.right, Eigen::ComputeFullU);
    const RVector& s = svd.singularValues();
    if (!(s.minCoeff() > 0.0)) throw NumericalError("degenerate metric: right-vector matrix is singular");
    const RVector lambda = s.array().square().inverse().matrix();
    return MetricOperator::from_spectral(svd.matrixU(), lambda, min_eigen_ratio);
}

BiorthonormalSystem rescale_biorthonormal(const BiorthonormalSystem& sys, std::span<const cplx> scales) {
    if (static_cast<Index>(scales.size()) != sys.size()) {
        throw ArgumentError("rescale: expected " + std::to_string(sys.size()) + " scales, got " +
                            std::to_string(scales.size()));
    }
    BiorthonormalSystem out = sys;
    for (Index k = 0; k < sys.size(); ++k) {
        const cplx c = scales[static_cast<std::size_t>(k)];
        if (c == cplx(0.0) || !std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ArgumentError("rescale: scale " + std::to_string(k) + " must be finite and nonzero");
        }
        out.right.col(k) *= c;
        out.left.col(k) /= std::conj(c);
    }
    return out;
}

namespace {

std::vector<cplx> cpt_scales(const BiorthonormalSystem& sys, const OperatorMatrix& parity,
                             const CptNormalization& options, Index* count) {
    if (parity.dim() != sys.size()) throw ArgumentError("cpt_normalize: parity dimension mismatch");
    std::vector<cplx> scales(static_cast<std::size_t>(sys.size()), cplx(1.0));
    Index n_scaled = 0;
    for (Index k = 0; k < sys.size(); ++k) {
        const cplx e = sys.eigenvalues(k);
        if (std::abs(e.imag()) > options.reality_tolerance * std::max(1.0, std::abs(e.real()))) continue;
        const auto psi = sys.right.col(k);
        const double norm2 = psi.squaredNorm();
        const double pt = std::abs(psi.dot(parity.matrix() * psi));
        if (!(pt >= options.norm_floor * norm2)) continue;
        scales[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(pt);
        ++n_scaled;
    }
    if (count) *count = n_scaled;
    return scales;
}

}  // namespace

BiorthonormalSystem cpt_normalize(const BiorthonormalSystem& sys, const OperatorMatrix& parity,
                                  const CptNormalization& options) {
    const auto scales = cpt_scales(sys, parity, options, nullptr);
    return rescale_biorthonormal(sys, scales);
}

Index cpt_normalizable_modes(const BiorthonormalSystem& sys, const OperatorMatrix& parity,
                             const CptNormalization& options) {
    Index count = 0;
    cpt_scales(sys, parity, options, &count);
    return count;
}

OperatorMatrix hermitian_equivalent(const OperatorMatrix& h, const MetricOperator& metric) {
    if (h.dim() != metric.dim()) throw ArgumentError("hermitian_equivalent: dimension mismatch");
    const CMatrix& u = metric.eigenvectors();
    const RVector root = metric.eigenvalues().array().sqrt().matrix();
    const CMatrix inner = u.adjoint() * h.matrix() * u;
    const CMatrix scaled = root.asDiagonal() * inner * root.cwiseInverse().asDiagonal();
    return OperatorMatrix(u * scaled * u.adjoint(), h.basis());
}

OperatorMatrix pseudo_observable(const OperatorMatrix& o, const MetricOperator& metric) {
    if (o.dim() != metric.dim()) throw ArgumentError("pseudo_observable: dimension mismatch");
    const CMatrix& u = metric.eigenvectors();
    const RVector root = metric.eigenvalues().array().sqrt().matrix();
    const CMatrix inner = u.adjoint() * o.matrix() * u;
    const CMatrix scaled = root.cwiseInverse().asDiagonal() * inner * root.asDiagonal();
    return OperatorMatrix(u * scaled * u.adjoint(), o.basis());
}

cplx phys_inner(const CVector& u, const CVector& v, const MetricOperator& metric) {
    if (u.size() != metric.dim() || v.size() != metric.dim()) throw ArgumentError("phys_inner: dimension mismatch");
    return u.dot(metric.eta() * v);
}

cplx metric_trace(const OperatorMatrix& a, const MetricOperator& metric) {
    if (a.dim() != metric.dim()) throw ArgumentError("metric_trace: dimension mismatch");
    const CMatrix& u = metric.eigenvectors();
    const RVector& lambda = metric.eigenvalues();
    cplx total = 0.0;
    for (Index n = 0; n < metric.dim(); ++n) {
        // b_n is eta-normalized; eta b_n = lambda_n b_n.
        const CVector b = u.col(n) / std::sqrt(lambda(n));
        const CVector eta_b = lambda(n) * b;
        total += eta_b.dot(a.matrix() * b);
    }
    return total;
}

double pseudo_hermiticity_residual(const CMatrix& h, const CMatrix& eta, Index block) {
    const CMatrix diff = h.adjoint() * eta - eta * h;
    return block_norm(diff, block) / (block_norm(h, block) * block_norm(eta, block));
}

double metric_mapping_residual(const BiorthonormalSystem& sys, const MetricOperator& metric) {
    const double eta_norm = metric.lambda_max();
    double worst = 0.0;
    for (Index n = 0; n < sys.size(); ++n) {
        const CVector mapped = metric.eta() * sys.right.col(n);
        worst = std::max(worst, (sys.left.col(n) - mapped).norm() / (eta_norm * sys.right.col(n).norm()));
    }
    return worst;
}

}  // namespace phqm
