// Configuration-driven runs and parameter sweeps.
#ifndef PHQM_EXPERIMENT_HPP
#define PHQM_EXPERIMENT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phqm/basisops.hpp"
#include "phqm/genfun.hpp"
#include "phqm/pathint.hpp"
#include "phqm/spectral.hpp"

namespace phqm {

inline constexpr int kConfigSchemaVersion = 1;

enum class ModelKind { cubic, shifted, harmonic };

struct ModelConfig {
    ModelKind kind = ModelKind::cubic;
    CubicModelSpec cubic;      // cubic and harmonic (epsilon = 0)
    ShiftedModelSpec shifted;  // shifted
};

enum class SweepQuantity { z, remainder, phase_law };

/// Axis values in the fixed order epsilon, J, alpha, beta, slices.
struct SweepConfig {
    SweepQuantity quantity = SweepQuantity::z;
    std::vector<std::pair<std::string, std::vector<double>>> axes;
};

struct ExperimentConfig {
    ModelConfig model;
    int dimension = 64;
    double hbar = 1.0;
    std::optional<double> omega;  // basis frequency override
    SourceWindow window;
    std::vector<Method> methods;
    GridSpec grid;
    std::vector<cplx> rescale;  // empty: no rescaling
    std::optional<SweepConfig> sweep;
    std::string output_dir;

    BasisSpec basis() const;
};

/// Throws ConfigError naming the offending key; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Everything a method needs for one model instance.
struct ModelBundle {
    OperatorMatrix H;
    OperatorMatrix x;
    OperatorMatrix X;  // physical position
    OperatorMatrix h;  // Hermitian equivalent
    BiorthonormalSystem system;
    std::optional<CubicModelSpec> cubic;
};

ModelBundle build_model(const ModelConfig& model, const BasisSpec& basis);

GenFunResult evaluate_method(const ModelBundle& bundle, Method method, const SourceWindow& window,
                             const GridSpec& grid, const std::vector<cplx>& rescale = {});

/// All requested methods, in request order.
std::vector<GenFunResult> run_experiment(const ExperimentConfig& config);

/// Writes result-<method>.json per result into `dir` (created if needed).
std::vector<std::filesystem::path> write_results(const std::vector<GenFunResult>& results,
                                                 const std::filesystem::path& dir);

struct SweepTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t failed_rows = 0;
};

/// Cartesian sweep evaluated on up to `workers` threads; rows come out in
/// lexicographic order of the (ascending) axis values.
SweepTable run_sweep(const ExperimentConfig& config, int workers = 1);

std::string sweep_csv(const SweepTable& table);

}  // namespace phqm

#endif  // PHQM_EXPERIMENT_HPP
