#include "phqm/pathint.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phqm/linalg.hpp"

namespace phqm {

LagrangianTerms lagrangian_terms(const LagrangianSpec& spec, double x) {
    const double m = spec.model.mass, mu = spec.model.mu, eps = spec.model.epsilon, J = spec.J;
    const double mu2 = mu * mu, mu4 = mu2 * mu2, mu6 = mu4 * mu2;
    LagrangianTerms t;
    t.g = (1.0 - 4.0 * kI * J * eps / mu4 - 4.0 * eps * eps * x / mu6) / m;
    t.a = -2.0 * kI * spec.hbar * J * eps * eps / (m * mu6);
    t.v = 0.5 * mu2 * x * x - J * x + (kI * x * x * x - kI * J * x * x / mu2) * eps - J * x * x * x * eps * eps / mu4;
    return t;
}

void GridSpec::validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ConfigError("grid: half_width must be positive");
    if (points < 16) throw ConfigError("grid: points must be >= 16");
    if (slices < 1) throw ConfigError("grid: slices must be >= 1");
    if (!(extent > 0.0) || !std::isfinite(extent)) throw ConfigError("grid: extent must be positive");
}

CMatrix transfer_matrix(const LagrangianSpec& spec, const GridSpec& grid, const PathIntegralOptions& options) {
    grid.validate();
    spec.model.validate();
    if (!(spec.hbar > 0.0)) throw ConfigError("path integral: hbar must be positive");
    const bool real_time = options.mode == TimeMode::real_time;
    if (real_time && !options.allow_oscillatory) {
        throw ConfigError("path integral: real-time kernel is oscillatory; set the oscillatory flag to allow it");
    }

    const int M = grid.points;
    const double hbar = spec.hbar;
    const double dx = 2.0 * grid.half_width / (M - 1);
    std::vector<double> xs(M);
    for (int k = 0; k < M; ++k) xs[k] = -grid.half_width + k * dx;

    // delta_t = -i delta_tau in imaginary time
    const double step = (real_time ? grid.extent : grid.extent * hbar) / grid.slices;
    const cplx dt = real_time ? cplx(step, 0.0) : cplx(0.0, -step);

    const auto terms_at = [&](double x) {
        const LagrangianTerms t = lagrangian_terms(spec, x);
        if (!real_time && !((1.0 / t.g).real() > 0.0)) {
            std::ostringstream msg;
            msg << "path integral: Re(1/g) <= 0 at x = " << x << " (imaginary-time kernel not damped)";
            throw NumericalError(msg.str());
        }
        return t;
    };

    // prepoint terms are reused across the row
    std::vector<LagrangianTerms> pre(M);
    for (int k = 0; k < M; ++k) pre[k] = terms_at(xs[k]);

    CMatrix T(M, M);
    for (int j = 0; j < M; ++j) {
        for (int i = 0; i < M; ++i) {
            // K(x', x) with x = xs[j] (earlier slice), x' = xs[i]
            const LagrangianTerms t =
                options.discretization == Discretization::prepoint ? pre[j] : terms_at(0.5 * (xs[i] + xs[j]));
            const cplx measure = std::sqrt(1.0 / (2.0 * std::numbers::pi * kI * hbar * dt * t.g));
            const cplx shifted = xs[i] - xs[j] - t.a * dt;
            const cplx action = shifted * shifted / (2.0 * t.g * dt) - t.v * dt;
            const cplx w = (j == 0 || j == M - 1) ? 0.5 * dx : dx;
            T(i, j) = measure * std::exp(kI * action / hbar) * w;
        }
    }
    if (!all_finite(T)) throw NumericalError("path integral: non-finite kernel entries (grid too wide for the cubic tail?)");
    return T;
}

GenFunResult transfer_matrix_Z(const LagrangianSpec& spec, const GridSpec& grid, const PathIntegralOptions& options) {
    const CMatrix T = transfer_matrix(spec, grid, options);
    CMatrix result = CMatrix::Identity(T.rows(), T.cols());
    CMatrix base = T;
    for (int n = grid.slices; n > 0; n >>= 1) {
        if (n & 1) result = result * base;
        if (n > 1) base = base * base;
    }
    const cplx z = result.trace();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NumericalError("path integral: non-finite trace");

    GenFunResult r;
    r.value = z;
    r.method = Method::path_integral;
    r.window = options.mode == TimeMode::imaginary_time
                   ? SourceWindow::imaginary(grid.extent, spec.J, spec.hbar)
                   : SourceWindow::real(0.0, grid.extent, spec.J, spec.hbar);
    const double fields[] = {spec.model.mass,   spec.model.mu,          spec.model.epsilon,
                             spec.J,            spec.hbar,              grid.half_width,
                             double(grid.points), double(grid.slices), grid.extent,
                             double(static_cast<int>(options.discretization))};
    r.fingerprint = fnv1a(fields, sizeof(fields));
    return r;
}

std::vector<ConvergenceRow> pathint_convergence_sweep(const LagrangianSpec& spec, const std::vector<GridSpec>& grids,
                                                      std::optional<cplx> oracle,
                                                      const PathIntegralOptions& options) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(grids.size());
    for (const GridSpec& g : grids) {
        ConvergenceRow row;
        row.slices = g.slices;
        row.points = g.points;
        row.z = transfer_matrix_Z(spec, g, options).value;
        row.error = oracle ? std::abs(row.z - *oracle) / std::abs(*oracle) : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace phqm
