// Transfer-matrix discretization of the Lagrangian path integral for the
// cubic model with a constant source.
#ifndef PHQM_PATHINT_HPP
#define PHQM_PATHINT_HPP

#include <optional>
#include <vector>

#include "phqm/basisops.hpp"
#include "phqm/genfun.hpp"

namespace phqm {

struct LagrangianSpec {
    CubicModelSpec model;
    double J = 0.0;
    double hbar = 1.0;
};

struct LagrangianTerms {
    cplx g;
    cplx a;
    cplx v;
};

/// g = (1 - 4i J eps/mu^4 - 4 eps^2 x/mu^6)/m, a = -2i hbar J eps^2/(m mu^6),
/// v = mu^2 x^2/2 - J x + (i x^3 - i J x^2/mu^2) eps - J x^3 eps^2/mu^4.
LagrangianTerms lagrangian_terms(const LagrangianSpec& spec, double x);

struct GridSpec {
    double half_width = 8.0;
    int points = 256;
    int slices = 64;
    double extent = 1.0;  // beta in imaginary time, t2 - t1 in real time

    void validate() const;
};

enum class Discretization { prepoint, midpoint };

struct PathIntegralOptions {
    TimeMode mode = TimeMode::imaginary_time;
    bool allow_oscillatory = false;  // required for real-time kernels
    Discretization discretization = Discretization::prepoint;
};

/// One-slice transfer matrix with trapezoid weights folded in.
CMatrix transfer_matrix(const LagrangianSpec& spec, const GridSpec& grid, const PathIntegralOptions& options = {});

/// tr T^{N_s}.
GenFunResult transfer_matrix_Z(const LagrangianSpec& spec, const GridSpec& grid,
                               const PathIntegralOptions& options = {});

struct ConvergenceRow {
    int slices = 0;
    int points = 0;
    cplx z;
    double error = 0.0;  // |z - oracle| / |oracle|, NaN without an oracle
};

std::vector<ConvergenceRow> pathint_convergence_sweep(const LagrangianSpec& spec, const std::vector<GridSpec>& grids,
                                                      std::optional<cplx> oracle,
                                                      const PathIntegralOptions& options = {});

}  // namespace phqm

#endif  // PHQM_PATHINT_HPP
