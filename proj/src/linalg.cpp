#include "phqm/linalg.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace phqm {

const char* to_string(ExpmPath path) {
    switch (path) {
        case ExpmPath::eigendecomposition: return "eigendecomposition";
        case ExpmPath::scaling_squaring: return "scaling-squaring";
    }
    return "unknown";
}

bool all_finite(const CMatrix& a) {
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
        }
    }
    return true;
}

double condition_number(const CMatrix& a) {
    if (!all_finite(a)) return std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<CMatrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 1.0;
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

namespace {

struct EigenData {
    CVector values;
    CMatrix vectors;
    double condition;
};

EigenData eigen_data(const CMatrix& a) {
    Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
    if (solver.info() != Eigen::Success) {
        return {CVector(), CMatrix(), std::numeric_limits<double>::infinity()};
    }
    CMatrix vectors = solver.eigenvectors();
    for (Index k = 0; k < vectors.cols(); ++k) {
        const double n = vectors.col(k).norm();
        if (n > 0.0) vectors.col(k) /= n;
    }
    const double cond = condition_number(vectors);
    return {solver.eigenvalues(), std::move(vectors), cond};
}

CMatrix exp_from_eigen(const EigenData& data) {
    const CVector weights = data.values.array().exp();
    const CMatrix scaled = data.vectors * weights.asDiagonal();
    // exp(A) = V W V^-1  <=>  V^T exp(A)^T = (V W)^T solved against V^T.
    return data.vectors.transpose().partialPivLu().solve(scaled.transpose()).transpose();
}

}  // namespace

CMatrix expm_eigendecomposition(const CMatrix& a, double condition_bound) {
    const EigenData data = eigen_data(a);
    if (!(data.condition <= condition_bound)) {
        std::ostringstream msg;
        msg << "matrix exponential: eigenvector condition number " << data.condition
            << " exceeds bound " << condition_bound;
        throw NumericalError(msg.str());
    }
    CMatrix result = exp_from_eigen(data);
    if (!all_finite(result)) throw NumericalError("matrix exponential: non-finite eigendecomposition result");
    return result;
}

CMatrix expm_scaling_squaring(const CMatrix& a) {
    if (!all_finite(a)) throw NumericalError("matrix exponential: non-finite input");
    CMatrix result = a.exp();
    if (!all_finite(result)) throw NumericalError("matrix exponential: non-finite scaling-and-squaring result");
    return result;
}

ExpmResult matrix_exponential(const CMatrix& a, double condition_bound) {
    const EigenData data = eigen_data(a);
    if (data.condition <= condition_bound) {
        CMatrix value = exp_from_eigen(data);
        if (all_finite(value)) return {std::move(value), ExpmPath::eigendecomposition, data.condition};
    }
    try {
        return {expm_scaling_squaring(a), ExpmPath::scaling_squaring, data.condition};
    } catch (const NumericalError& err) {
        std::ostringstream msg;
        msg << "matrix exponential failed on both paths (eigenvector condition " << data.condition
            << ", bound " << condition_bound << "): " << err.what();
        throw NumericalError(msg.str());
    }
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fingerprint(const CMatrix& a, std::uint64_t seed) {
    const std::int64_t dims[2] = {static_cast<std::int64_t>(a.rows()), static_cast<std::int64_t>(a.cols())};
    std::uint64_t hash = fnv1a(dims, sizeof(dims), seed);
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            const double parts[2] = {a(i, j).real(), a(i, j).imag()};
            hash = fnv1a(parts, sizeof(parts), hash);
        }
    }
    return hash;
}

}  // namespace phqm
