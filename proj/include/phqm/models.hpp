// Closed-form perturbative and exactly solvable structures, checked against
// the exact matrix machinery.
#ifndef PHQM_MODELS_HPP
#define PHQM_MODELS_HPP

#include <vector>

#include "phqm/basisops.hpp"
#include "phqm/metric.hpp"
#include "phqm/spectral.hpp"

namespace phqm {

/// h = p^2/2m + mu^2 x^2/2 + (3/(2 mu^4)) [ {x^2,p^2}/m + mu^2 x^4 + 2 hbar^2/(3m) ] eps^2.
OperatorMatrix perturbative_h_cubic(const CubicModelSpec& spec, const BasisSpec& basis);

/// X = x + (2i/(m mu^4)) (p^2 + m mu^2 x^2/2) eps + (1/(m mu^6)) ({x,p^2} - m mu^2 x^3) eps^2.
OperatorMatrix perturbative_X_cubic(const CubicModelSpec& spec, const BasisSpec& basis);

/// H - J X through order eps^2, assembled term by term.
OperatorMatrix perturbative_source_operator(const CubicModelSpec& spec, double J, const BasisSpec& basis);

enum class MetricNormalization { unit, cpt };

/// Everything the exact route produces for one cubic model.
struct CubicExact {
    OperatorMatrix hamiltonian;
    OperatorMatrix x;
    OperatorMatrix p;
    BiorthonormalSystem system;  // after normalization
    MetricOperator metric;
    OperatorMatrix h;  // eta^{1/2} H eta^{-1/2}
    OperatorMatrix X;  // eta^{-1/2} x eta^{1/2}
};

CubicExact exact_cubic(const CubicModelSpec& spec, const BasisSpec& basis,
                       MetricNormalization normalization = MetricNormalization::cpt,
                       const DiagonalizeOptions& options = {});

/// Least-squares log-log slope with a 95% Student-t half-width.
struct PerturbativeOrderFit {
    std::vector<double> epsilons;
    std::vector<double> errors;
    double slope = 0.0;
    double half_width = 0.0;
};

PerturbativeOrderFit fit_order(std::vector<double> epsilons, std::vector<double> errors);

enum class Remainder { hamiltonian, position, source_operator };

const char* to_string(Remainder r);

/// ||exact - perturbative|| on the leading block for one epsilon.
double perturbative_remainder(Remainder which, const CubicModelSpec& spec, const BasisSpec& basis, Index block,
                              double J = 0.0, MetricNormalization normalization = MetricNormalization::cpt);

/// Remainders over a grid (strictly decreasing toward zero, >= 4 points) and their fit.
PerturbativeOrderFit perturbative_order_fit(Remainder which, const CubicModelSpec& base,
                                            const std::vector<double>& epsilons, int dimension, Index block,
                                            double J = 0.0,
                                            MetricNormalization normalization = MetricNormalization::cpt);

struct ShiftedEquivalenceReport {
    double alpha = 0.0;
    Index block = 0;
    double h_residual = 0.0;                    // h vs H_0 = p^2/2m + V(x)
    double x_residual = 0.0;                    // X vs x + i alpha
    double pseudo_hermiticity_residual = 0.0;  // H^dag eta - eta H
};

/// Interior-block (N/4) checks for the momentum metric eta_alpha = exp(2 alpha p/hbar).
ShiftedEquivalenceReport shifted_equivalence_report(const ShiftedModelSpec& spec, const BasisSpec& basis,
                                                    double overflow_guard = kDefaultMetricOverflowGuard);

/// Metric operator from the momentum metric of `basis`.
MetricOperator momentum_metric_operator(double alpha, const BasisSpec& basis,
                                        double overflow_guard = kDefaultMetricOverflowGuard);

}  // namespace phqm

#endif  // PHQM_MODELS_HPP
