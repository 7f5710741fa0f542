// Generating functional Z[J] as operator traces in the pseudo-Hermitian,
// naive and Hermitian representations, plus the source-free spectral sum.
#ifndef PHQM_GENFUN_HPP
#define PHQM_GENFUN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "phqm/linalg.hpp"
#include "phqm/spectral.hpp"
#include "phqm/types.hpp"

namespace phqm {

enum class TimeMode { real_time, imaginary_time };

enum class Method { correct_x, naive_x, hermitian_rep, spectral_sum, path_integral };

const char* to_string(TimeMode mode);
const char* to_string(Method method);
TimeMode time_mode_from_string(const std::string& s);
Method method_from_string(const std::string& s);

/// Constant source J over [t1, t2]. In imaginary time beta = (t2 - t1)/hbar.
struct SourceWindow {
    double J = 0.0;
    double t1 = 0.0;
    double t2 = 1.0;
    TimeMode mode = TimeMode::imaginary_time;
    double hbar = 1.0;

    static SourceWindow imaginary(double beta, double J = 0.0, double hbar = 1.0);
    static SourceWindow real(double t1, double t2, double J = 0.0, double hbar = 1.0);

    double duration() const noexcept { return t2 - t1; }
    double beta() const noexcept { return (t2 - t1) / hbar; }
    void validate() const;
    bool operator==(const SourceWindow&) const = default;
};

struct GenFunResult {
    cplx value;
    Method method = Method::correct_x;
    SourceWindow window;
    std::uint64_t fingerprint = 0;
    std::string expm_path;  // empty when no matrix exponential was taken

    bool operator==(const GenFunResult&) const = default;
};

/// Options shared by every trace evaluation.
struct GenFunOptions {
    double condition_bound = kDefaultExpmConditionBound;
    std::optional<ExpmPath> force_path;  // for cross-checks
};

/// trace exp(-i (t2-t1) G / hbar) or trace exp(-beta G).
cplx evolution_trace(const CMatrix& generator, const SourceWindow& w, const GenFunOptions& options = {},
                     std::string* path_used = nullptr);

/// Full propagator exp(-i (t2-t1) G / hbar) or exp(-beta G).
CMatrix evolution_operator(const CMatrix& generator, const SourceWindow& w, const GenFunOptions& options = {});

/// Z[J] = tr exp(... (H - J X)), tagged correct-X.
GenFunResult generating_functional(const OperatorMatrix& h, const OperatorMatrix& x_phys, const SourceWindow& w,
                                   const GenFunOptions& options = {});

/// Z with the source coupled to the non-observable x, tagged naive-x.
GenFunResult generating_functional_naive(const OperatorMatrix& h, const OperatorMatrix& x, const SourceWindow& w,
                                         const GenFunOptions& options = {});

/// Z from h - J x with h the equivalent Hermitian Hamiltonian, tagged hermitian-rep.
GenFunResult generating_functional_hermitian(const OperatorMatrix& h_herm, const OperatorMatrix& x,
                                             const SourceWindow& w, const GenFunOptions& options = {});

/// sum_n exp(-i (t2-t1) E_n / hbar) or sum_n exp(-beta E_n); requires J = 0.
GenFunResult source_free_Z(const BiorthonormalSystem& sys, const SourceWindow& w);

/// sum_n <phi_n|U psi_n> for a propagator U; equals tr U for any biorthonormal scaling.
cplx biorthonormal_trace(const BiorthonormalSystem& sys, const CMatrix& propagator);

using ZEvaluator = std::function<GenFunResult(const SourceWindow&)>;

/// (Z(J0 + step) - Z(J0 - step)) / (2 step); with `richardson` the
/// step/2 estimate is combined as (4 D(step/2) - D(step)) / 3.
cplx one_point_fd(const ZEvaluator& evaluator, const SourceWindow& w, double j0, double step,
                  bool richardson = false);

std::uint64_t model_fingerprint(const CMatrix& generator, const CMatrix& source, const BasisSpec& basis);

}  // namespace phqm

#endif  // PHQM_GENFUN_HPP
