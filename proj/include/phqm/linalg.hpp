// Dense matrix exponential with two independent routes and small helpers.
#ifndef PHQM_LINALG_HPP
#define PHQM_LINALG_HPP

#include <cstdint>

#include "phqm/types.hpp"

namespace phqm {

enum class ExpmPath { eigendecomposition, scaling_squaring };

const char* to_string(ExpmPath path);

inline constexpr double kDefaultExpmConditionBound = 1e8;

struct ExpmResult {
    CMatrix value;
    ExpmPath path = ExpmPath::eigendecomposition;
    // Condition number of the eigenvector matrix that selected the path.
    double eigenvector_condition = 0.0;
};

/// exp(A) via A = V diag(l) V^-1. Throws NumericalError when cond(V)
/// exceeds `condition_bound` or the result is not finite.
CMatrix expm_eigendecomposition(const CMatrix& a, double condition_bound = kDefaultExpmConditionBound);

/// exp(A) via Pade scaling and squaring. Throws NumericalError on
/// non-finite output.
CMatrix expm_scaling_squaring(const CMatrix& a);

/// Eigendecomposition path when the eigenvector matrix passes the
/// conditioning bound, otherwise scaling and squaring.
ExpmResult matrix_exponential(const CMatrix& a, double condition_bound = kDefaultExpmConditionBound);

/// 2-norm condition number via singular values.
double condition_number(const CMatrix& a);

bool all_finite(const CMatrix& a);

/// FNV-1a over raw bytes, chained through `seed`.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::uint64_t fingerprint(const CMatrix& a, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace phqm

#endif  // PHQM_LINALG_HPP
