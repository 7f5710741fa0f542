#include "phqm/genfun.hpp"

#include <cmath>
#include <sstream>

namespace phqm {

const char* to_string(TimeMode mode) {
    return mode == TimeMode::real_time ? "real-time" : "imaginary-time";
}

const char* to_string(Method method) {
    switch (method) {
        case Method::correct_x: return "correct-X";
        case Method::naive_x: return "naive-x";
        case Method::hermitian_rep: return "hermitian-rep";
        case Method::spectral_sum: return "spectral-sum";
        case Method::path_integral: return "path-integral";
    }
    return "unknown";
}

TimeMode time_mode_from_string(const std::string& s) {
    if (s == "real-time") return TimeMode::real_time;
    if (s == "imaginary-time") return TimeMode::imaginary_time;
    throw ConfigError("unknown time mode '" + s + "' (expected real-time | imaginary-time)");
}

Method method_from_string(const std::string& s) {
    for (Method m : {Method::correct_x, Method::naive_x, Method::hermitian_rep, Method::spectral_sum,
                     Method::path_integral}) {
        if (s == to_string(m)) return m;
    }
    throw ConfigError("unknown method '" + s + "'");
}

SourceWindow SourceWindow::imaginary(double beta, double J, double hbar) {
    SourceWindow w{J, 0.0, beta * hbar, TimeMode::imaginary_time, hbar};
    w.validate();
    return w;
}

SourceWindow SourceWindow::real(double t1, double t2, double J, double hbar) {
    SourceWindow w{J, t1, t2, TimeMode::real_time, hbar};
    w.validate();
    return w;
}

void SourceWindow::validate() const {
    if (!std::isfinite(J) || !std::isfinite(t1) || !std::isfinite(t2)) throw ConfigError("window: non-finite field");
    if (!(t2 > t1)) throw ConfigError("window: t2 must exceed t1");
    if (!(hbar > 0.0)) throw ConfigError("window: hbar must be positive");
}

namespace {

cplx exponent_prefactor(const SourceWindow& w) {
    w.validate();
    if (w.mode == TimeMode::real_time) return -kI * (w.duration() / w.hbar);
    return cplx(-w.beta(), 0.0);
}

GenFunResult evaluate(const CMatrix& generator, const CMatrix& source, const BasisSpec& basis, Method method,
                      const SourceWindow& w, const GenFunOptions& options) {
    GenFunResult r;
    r.method = method;
    r.window = w;
    r.fingerprint = model_fingerprint(generator, source, basis);
    const CMatrix total = generator - w.J * source;
    r.value = evolution_trace(total, w, options, &r.expm_path);
    return r;
}

void check_pair(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) throw ArgumentError("generating functional: operator dimensions differ");
}

}  // namespace

CMatrix evolution_operator(const CMatrix& generator, const SourceWindow& w, const GenFunOptions& options) {
    const CMatrix arg = exponent_prefactor(w) * generator;
    if (options.force_path == ExpmPath::eigendecomposition) return expm_eigendecomposition(arg, options.condition_bound);
    if (options.force_path == ExpmPath::scaling_squaring) return expm_scaling_squaring(arg);
    return matrix_exponential(arg, options.condition_bound).value;
}

cplx evolution_trace(const CMatrix& generator, const SourceWindow& w, const GenFunOptions& options,
                     std::string* path_used) {
    const CMatrix arg = exponent_prefactor(w) * generator;
    CMatrix propagator;
    ExpmPath path = ExpmPath::eigendecomposition;
    if (options.force_path) {
        path = *options.force_path;
        propagator = path == ExpmPath::eigendecomposition ? expm_eigendecomposition(arg, options.condition_bound)
                                                          : expm_scaling_squaring(arg);
    } else {
        ExpmResult res = matrix_exponential(arg, options.condition_bound);
        propagator = std::move(res.value);
        path = res.path;
    }
    const cplx tr = propagator.trace();
    if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag())) {
        throw NumericalError("generating functional: non-finite trace (spectrum not bounded below?)");
    }
    if (path_used) *path_used = to_string(path);
    return tr;
}

GenFunResult generating_functional(const OperatorMatrix& h, const OperatorMatrix& x_phys, const SourceWindow& w,
                                   const GenFunOptions& options) {
    check_pair(h, x_phys);
    return evaluate(h.matrix(), x_phys.matrix(), h.basis(), Method::correct_x, w, options);
}

GenFunResult generating_functional_naive(const OperatorMatrix& h, const OperatorMatrix& x, const SourceWindow& w,
                                         const GenFunOptions& options) {
    check_pair(h, x);
    return evaluate(h.matrix(), x.matrix(), h.basis(), Method::naive_x, w, options);
}

GenFunResult generating_functional_hermitian(const OperatorMatrix& h_herm, const OperatorMatrix& x,
                                             const SourceWindow& w, const GenFunOptions& options) {
    check_pair(h_herm, x);
    return evaluate(h_herm.matrix(), x.matrix(), h_herm.basis(), Method::hermitian_rep, w, options);
}

GenFunResult source_free_Z(const BiorthonormalSystem& sys, const SourceWindow& w) {
    if (w.J != 0.0) throw ArgumentError("source_free_Z requires J = 0");
    const cplx prefactor = exponent_prefactor(w);
    cplx total = 0.0;
    for (Index n = 0; n < sys.size(); ++n) total += std::exp(prefactor * sys.eigenvalues(n));
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
        throw NumericalError("source_free_Z: non-finite spectral sum");
    }
    GenFunResult r;
    r.value = total;
    r.method = Method::spectral_sum;
    r.window = w;
    const CMatrix diag = sys.eigenvalues.asDiagonal();
    r.fingerprint = model_fingerprint(diag, CMatrix::Zero(sys.size(), sys.size()), sys.basis);
    return r;
}

cplx biorthonormal_trace(const BiorthonormalSystem& sys, const CMatrix& propagator) {
    if (propagator.rows() != sys.size() || propagator.cols() != sys.size()) {
        throw ArgumentError("biorthonormal_trace: dimension mismatch");
    }
    const CMatrix mapped = propagator * sys.right;
    cplx total = 0.0;
    for (Index n = 0; n < sys.size(); ++n) total += sys.left.col(n).dot(mapped.col(n));
    return total;
}

cplx one_point_fd(const ZEvaluator& evaluator, const SourceWindow& w, double j0, double step, bool richardson) {
    if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("one_point_fd: step must be positive");
    const auto z_at = [&](double j) {
        SourceWindow probe = w;
        probe.J = j;
        const cplx z = evaluator(probe).value;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            std::ostringstream msg;
            msg << "one_point_fd: non-finite Z at J = " << j;
            throw NumericalError(msg.str());
        }
        return z;
    };
    const auto central = [&](double h) { return (z_at(j0 + h) - z_at(j0 - h)) / (2.0 * h); };
    const cplx coarse = central(step);
    if (!richardson) return coarse;
    return (4.0 * central(0.5 * step) - coarse) / 3.0;
}

std::uint64_t model_fingerprint(const CMatrix& generator, const CMatrix& source, const BasisSpec& basis) {
    const double fields[4] = {static_cast<double>(basis.dimension), basis.mass, basis.omega, basis.hbar};
    std::uint64_t hash = fnv1a(fields, sizeof(fields));
    hash = fingerprint(generator, hash);
    return fingerprint(source, hash);
}

}  // namespace phqm
