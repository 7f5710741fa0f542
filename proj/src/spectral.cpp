#include "phqm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "phqm/linalg.hpp"

namespace phqm {

namespace {

std::vector<Index> spectral_order(const CVector& values) {
    std::vector<Index> order(values.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return values(a).real() < values(b).real(); });
    // Runs of numerically equal real parts are ordered by imaginary part.
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t stop = start + 1;
        while (stop < order.size()) {
            const double prev = values(order[stop - 1]).real();
            const double next = values(order[stop]).real();
            if (std::abs(next - prev) > 1e-10 * std::max(1.0, std::abs(prev))) break;
            ++stop;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop),
                         [&](Index a, Index b) { return values(a).imag() < values(b).imag(); });
        start = stop;
    }
    return order;
}

void fix_phase(Eigen::Ref<CVector> v) {
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    const double mag = std::abs(v(arg));
    if (mag > 0.0) v *= std::conj(v(arg)) / mag;
    v(arg) = std::abs(v(arg));
}

}  // namespace

BiorthonormalSystem biorthonormal_diagonalize(const OperatorMatrix& h, const DiagonalizeOptions& options) {
    if (!all_finite(h.matrix())) throw NumericalError("diagonalize: non-finite Hamiltonian entries");
    Eigen::ComplexEigenSolver<CMatrix> solver(h.matrix(), true);
    if (solver.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver did not converge");

    const Index n = h.dim();
    const std::vector<Index> order = spectral_order(solver.eigenvalues());

    BiorthonormalSystem sys;
    sys.basis = h.basis();
    sys.reality_tolerance = options.reality_tolerance;
    sys.eigenvalues.resize(n);
    sys.right.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        sys.eigenvalues(k) = solver.eigenvalues()(order[k]);
        sys.right.col(k) = solver.eigenvectors().col(order[k]).normalized();
        fix_phase(sys.right.col(k));
    }

    sys.condition_number = condition_number(sys.right);
    if (!(sys.condition_number <= options.condition_bound)) {
        std::ostringstream msg;
        msg << "near-defective Hamiltonian: eigenvector condition number " << sys.condition_number
            << " exceeds bound " << options.condition_bound
            << " (PT-broken / exceptional-point regime or truncation artifact)";
        throw NumericalError(msg.str());
    }
    sys.left = sys.right.fullPivLu().inverse().adjoint();
    if (!all_finite(sys.left)) throw NumericalError("near-defective Hamiltonian: right-vector matrix is singular");
    return sys;
}

Index default_trusted_modes(Index dimension) { return std::max<Index>(1, dimension / 4); }

SpectrumRealityReport spectrum_reality_report(const BiorthonormalSystem& sys, Index trusted_modes) {
    if (trusted_modes < 0 || trusted_modes > sys.size()) {
        throw ArgumentError("spectrum reality: trusted_modes must lie in [0, N]");
    }
    SpectrumRealityReport report;
    report.trusted_modes = trusted_modes;
    report.tolerance = sys.reality_tolerance;
    for (Index k = 0; k < trusted_modes; ++k) {
        const cplx e = sys.eigenvalues(k);
        report.max_relative_imag = std::max(report.max_relative_imag, std::abs(e.imag()) / std::max(1.0, std::abs(e.real())));
    }
    report.pass = report.max_relative_imag < report.tolerance;
    return report;
}

double biorthonormality_residual(const BiorthonormalSystem& sys) {
    const CMatrix gram = sys.right.adjoint() * sys.left;
    return (gram - CMatrix::Identity(sys.size(), sys.size())).cwiseAbs().maxCoeff();
}

double completeness_residual(const BiorthonormalSystem& sys) {
    return (sys.left * sys.right.adjoint() - CMatrix::Identity(sys.size(), sys.size())).norm();
}

double reconstruction_residual(const OperatorMatrix& h, const BiorthonormalSystem& sys) {
    // Psi^-1 = Phi^dag by construction.
    const CMatrix rebuilt = sys.right * sys.eigenvalues.asDiagonal() * sys.left.adjoint();
    return (h.matrix() - rebuilt).norm() / h.matrix().norm();
}

}  // namespace phqm
