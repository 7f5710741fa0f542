#include "phqm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "phqm/metric.hpp"
#include "phqm/models.hpp"
#include "phqm/spectralio.hpp"

namespace phqm {

using nlohmann::json;

namespace {

const char* kAxisOrder[] = {"epsilon", "J", "alpha", "beta", "slices"};

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed) known = known || it.key() == a;
        if (!known) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

double number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
    return d;
}

int integer(const json& obj, const char* key, const std::string& where, std::optional<int> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string text(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    if (!obj.at(key).is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return obj.at(key).get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(e.get<double>());
        if (!std::isfinite(out.back())) throw ConfigError(where + ": values must be finite");
    }
    return out;
}

ModelConfig parse_model(const json& j) {
    const std::string where = "model";
    const std::string kind = text(j, "kind", where);
    ModelConfig m;
    if (kind == "cubic") {
        reject_unknown(j, where, {"kind", "mass", "mu", "epsilon"});
        m.kind = ModelKind::cubic;
        m.cubic = {number(j, "mass", where, 1.0), number(j, "mu", where, 1.0), number(j, "epsilon", where)};
        m.cubic.validate();
    } else if (kind == "harmonic") {
        reject_unknown(j, where, {"kind", "mass", "omega"});
        m.kind = ModelKind::harmonic;
        const double mass = number(j, "mass", where, 1.0);
        const double omega = number(j, "omega", where, 1.0);
        if (!(mass > 0.0) || !(omega > 0.0)) throw ConfigError("model: harmonic mass and omega must be positive");
        m.cubic = {mass, omega * std::sqrt(mass), 0.0};
        m.cubic.validate();
    } else if (kind == "shifted") {
        reject_unknown(j, where, {"kind", "coefficients", "alpha", "mass", "degree_cap"});
        m.kind = ModelKind::shifted;
        if (!j.contains("coefficients")) throw ConfigError("model: missing key 'coefficients'");
        m.shifted.coefficients = number_list(j.at("coefficients"), "model.coefficients");
        m.shifted.alpha = number(j, "alpha", where, 0.0);
        m.shifted.mass = number(j, "mass", where, 1.0);
        m.shifted.degree_cap = integer(j, "degree_cap", where, 8);
        m.shifted.validate();
    } else {
        throw ConfigError("model.kind: unknown model '" + kind + "' (expected cubic | shifted | harmonic)");
    }
    return m;
}

SourceWindow parse_window(const json& j, double hbar) {
    const std::string where = "window";
    reject_unknown(j, where, {"mode", "J", "beta", "t1", "t2"});
    const TimeMode mode = time_mode_from_string(text(j, "mode", where));
    const double J = number(j, "J", where, 0.0);
    if (mode == TimeMode::imaginary_time) {
        if (j.contains("t1") || j.contains("t2")) throw ConfigError("window: imaginary-time takes 'beta', not t1/t2");
        const double beta = number(j, "beta", where);
        if (!(beta > 0.0)) throw ConfigError("window.beta: must be positive");
        return SourceWindow::imaginary(beta, J, hbar);
    }
    if (j.contains("beta")) throw ConfigError("window: real-time takes t1/t2, not 'beta'");
    return SourceWindow::real(number(j, "t1", where, 0.0), number(j, "t2", where), J, hbar);
}

std::vector<cplx> parse_rescale(const json& j) {
    if (!j.is_array()) throw ConfigError("rescale: expected an array");
    std::vector<cplx> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const json& e = j[k];
        cplx c;
        if (e.is_number()) {
            c = e.get<double>();
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            c = cplx(e[0].get<double>(), e[1].get<double>());
        } else {
            throw ConfigError("rescale[" + std::to_string(k) + "]: expected a number or [re, im]");
        }
        if (c == cplx(0.0) || !std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ConfigError("rescale[" + std::to_string(k) + "]: must be finite and nonzero");
        }
        out.push_back(c);
    }
    return out;
}

SweepConfig parse_sweep(const json& j) {
    reject_unknown(j, "sweep", {"quantity", "epsilon", "J", "alpha", "beta", "slices"});
    SweepConfig s;
    const std::string q = j.contains("quantity") ? text(j, "quantity", "sweep") : "Z";
    if (q == "Z") s.quantity = SweepQuantity::z;
    else if (q == "remainder") s.quantity = SweepQuantity::remainder;
    else if (q == "phase-law") s.quantity = SweepQuantity::phase_law;
    else throw ConfigError("sweep.quantity: unknown '" + q + "' (expected Z | remainder | phase-law)");
    for (const char* axis : kAxisOrder) {
        if (!j.contains(axis)) continue;
        auto values = number_list(j.at(axis), std::string("sweep.") + axis);
        std::sort(values.begin(), values.end());
        if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
            throw ConfigError(std::string("sweep.") + axis + ": repeated value");
        }
        s.axes.emplace_back(axis, std::move(values));
    }
    return s;
}

bool has_method(const ExperimentConfig& c, Method m) {
    return std::find(c.methods.begin(), c.methods.end(), m) != c.methods.end();
}

void cross_validate(const ExperimentConfig& c) {
    c.basis().validate();
    const bool cubic_like = c.model.kind != ModelKind::shifted;
    if (!c.rescale.empty() && static_cast<int>(c.rescale.size()) != c.dimension) {
        throw ConfigError("rescale: expected " + std::to_string(c.dimension) + " scales, got " +
                          std::to_string(c.rescale.size()));
    }
    const bool sweeps_J = c.sweep && std::any_of(c.sweep->axes.begin(), c.sweep->axes.end(),
                                                 [](const auto& a) { return a.first == "J"; });
    if (has_method(c, Method::spectral_sum) && (c.window.J != 0.0 || sweeps_J)) {
        throw ConfigError("methods: spectral-sum requires J = 0");
    }
    if (has_method(c, Method::path_integral)) {
        if (!cubic_like) throw ConfigError("methods: path-integral is available for cubic and harmonic models only");
        if (c.window.mode != TimeMode::imaginary_time) {
            throw ConfigError("methods: path-integral runs in imaginary time only");
        }
        GridSpec g = c.grid;
        g.extent = c.window.beta();
        g.validate();
    }
    if (!c.sweep) return;
    for (const auto& [axis, values] : c.sweep->axes) {
        if (axis == "epsilon" && c.model.kind != ModelKind::cubic) {
            throw ConfigError("sweep.epsilon: requires the cubic model");
        }
        if (axis == "alpha" && c.model.kind != ModelKind::shifted) {
            throw ConfigError("sweep.alpha: requires the shifted model");
        }
        if (axis == "beta") {
            if (c.window.mode != TimeMode::imaginary_time) throw ConfigError("sweep.beta: requires imaginary time");
            for (double b : values) {
                if (!(b > 0.0)) throw ConfigError("sweep.beta: values must be positive");
            }
        }
        if (axis == "slices") {
            if (!has_method(c, Method::path_integral)) throw ConfigError("sweep.slices: requires the path-integral method");
            for (double s : values) {
                if (s < 1.0 || s != std::floor(s)) throw ConfigError("sweep.slices: values must be positive integers");
            }
        }
    }
    if (c.sweep->quantity == SweepQuantity::remainder && c.model.kind != ModelKind::cubic) {
        throw ConfigError("sweep.quantity: remainder requires the cubic model");
    }
    if (c.sweep->quantity == SweepQuantity::phase_law && c.model.kind != ModelKind::shifted) {
        throw ConfigError("sweep.quantity: phase-law requires the shifted model");
    }
    if (c.sweep->quantity == SweepQuantity::z && c.methods.empty()) {
        throw ConfigError("sweep: quantity Z needs at least one method");
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void apply_axis(ExperimentConfig& c, const std::string& axis, double value) {
    if (axis == "epsilon") c.model.cubic.epsilon = value;
    else if (axis == "J") c.window.J = value;
    else if (axis == "alpha") c.model.shifted.alpha = value;
    else if (axis == "beta") c.window.t2 = c.window.t1 + value * c.hbar;
    else if (axis == "slices") c.grid.slices = static_cast<int>(value);
}

std::vector<std::string> quantity_columns(const ExperimentConfig& c) {
    std::vector<std::string> cols;
    switch (c.sweep->quantity) {
        case SweepQuantity::z:
            for (Method m : c.methods) {
                cols.push_back(std::string(to_string(m)) + "_re");
                cols.push_back(std::string(to_string(m)) + "_im");
            }
            break;
        case SweepQuantity::remainder:
            cols = {"h_remainder", "X_remainder", "source_remainder"};
            break;
        case SweepQuantity::phase_law:
            cols = {"ratio_re", "ratio_im", "expected_re", "expected_im", "rel_error"};
            break;
    }
    return cols;
}

std::vector<double> evaluate_row(const ExperimentConfig& c) {
    std::vector<double> out;
    const BasisSpec basis = c.basis();
    switch (c.sweep->quantity) {
        case SweepQuantity::z: {
            const ModelBundle bundle = build_model(c.model, basis);
            for (Method m : c.methods) {
                const cplx z = evaluate_method(bundle, m, c.window, c.grid, c.rescale).value;
                out.push_back(z.real());
                out.push_back(z.imag());
            }
            break;
        }
        case SweepQuantity::remainder: {
            const Index block = default_trusted_modes(basis.dimension);
            for (Remainder r : {Remainder::hamiltonian, Remainder::position, Remainder::source_operator}) {
                out.push_back(perturbative_remainder(r, c.model.cubic, basis, block, c.window.J));
            }
            break;
        }
        case SweepQuantity::phase_law: {
            const ModelBundle bundle = build_model(c.model, basis);
            const cplx zc = evaluate_method(bundle, Method::correct_x, c.window, c.grid).value;
            const cplx zn = evaluate_method(bundle, Method::naive_x, c.window, c.grid).value;
            const cplx ratio = zc / zn;
            const cplx expected = std::exp(kI * c.window.duration() * c.model.shifted.alpha * c.window.J / c.hbar);
            out = {ratio.real(), ratio.imag(), expected.real(), expected.imag(),
                   std::abs(ratio - expected) / std::abs(expected)};
            break;
        }
    }
    return out;
}

}  // namespace

BasisSpec ExperimentConfig::basis() const {
    BasisSpec b = model.kind == ModelKind::shifted ? shifted_basis(model.shifted, std::max(dimension, 2), hbar)
                                                   : cubic_basis(model.cubic, std::max(dimension, 2), hbar);
    b.dimension = dimension;
    if (omega) b.omega = *omega;
    return b;
}

ExperimentConfig parse_config(const json& doc) {
    reject_unknown(doc, "config",
                   {"schema_version", "model", "basis", "window", "methods", "grid", "rescale", "sweep", "output"});
    const int version = integer(doc, "schema_version", "config");
    if (version != kConfigSchemaVersion) {
        throw ConfigError("config.schema_version: unsupported version " + std::to_string(version) + " (expected " +
                          std::to_string(kConfigSchemaVersion) + ")");
    }
    ExperimentConfig c;
    if (!doc.contains("model")) throw ConfigError("config: missing key 'model'");
    c.model = parse_model(doc.at("model"));

    if (!doc.contains("basis")) throw ConfigError("config: missing key 'basis'");
    const json& b = doc.at("basis");
    reject_unknown(b, "basis", {"dimension", "hbar", "omega"});
    c.dimension = integer(b, "dimension", "basis");
    if (c.dimension < 2) throw ConfigError("basis.dimension: must be >= 2, got " + std::to_string(c.dimension));
    c.hbar = number(b, "hbar", "basis", 1.0);
    if (!(c.hbar > 0.0)) throw ConfigError("basis.hbar: must be positive");
    if (b.contains("omega")) c.omega = number(b, "omega", "basis");

    if (!doc.contains("window")) throw ConfigError("config: missing key 'window'");
    c.window = parse_window(doc.at("window"), c.hbar);

    if (doc.contains("methods")) {
        const json& m = doc.at("methods");
        if (!m.is_array()) throw ConfigError("methods: expected an array of method names");
        std::set<Method> seen;
        for (const json& e : m) {
            if (!e.is_string()) throw ConfigError("methods: expected an array of method names");
            const Method method = method_from_string(e.get<std::string>());
            if (!seen.insert(method).second) throw ConfigError("methods: '" + e.get<std::string>() + "' listed twice");
            c.methods.push_back(method);
        }
    }
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown(g, "grid", {"half_width", "points", "slices"});
        c.grid.half_width = number(g, "half_width", "grid", 8.0);
        c.grid.points = integer(g, "points", "grid", 256);
        c.grid.slices = integer(g, "slices", "grid", 64);
    }
    if (doc.contains("rescale")) c.rescale = parse_rescale(doc.at("rescale"));
    if (doc.contains("sweep")) c.sweep = parse_sweep(doc.at("sweep"));
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown(o, "output", {"dir"});
        if (o.contains("dir")) c.output_dir = text(o, "dir", "output");
    }
    cross_validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = load_json(path);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    try {
        return parse_config(doc);
    } catch (const ConfigError& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

ModelBundle build_model(const ModelConfig& model, const BasisSpec& basis) {
    if (model.kind == ModelKind::shifted) {
        OperatorMatrix H = build_shifted_hamiltonian(model.shifted, basis);
        const MetricOperator metric = momentum_metric_operator(model.shifted.alpha, basis);
        auto ops = oscillator_ops(basis);
        OperatorMatrix X = pseudo_observable(ops.x, metric);
        OperatorMatrix h = hermitian_equivalent(H, metric);
        BiorthonormalSystem sys = biorthonormal_diagonalize(H);
        return ModelBundle{std::move(H), std::move(ops.x), std::move(X), std::move(h), std::move(sys), std::nullopt};
    }
    CubicExact ex = exact_cubic(model.cubic, basis);
    return ModelBundle{std::move(ex.hamiltonian), std::move(ex.x), std::move(ex.X), std::move(ex.h),
                       std::move(ex.system), model.cubic};
}

GenFunResult evaluate_method(const ModelBundle& bundle, Method method, const SourceWindow& window,
                             const GridSpec& grid, const std::vector<cplx>& rescale) {
    switch (method) {
        case Method::correct_x: return generating_functional(bundle.H, bundle.X, window);
        case Method::naive_x: return generating_functional_naive(bundle.H, bundle.x, window);
        case Method::hermitian_rep: return generating_functional_hermitian(bundle.h, bundle.x, window);
        case Method::spectral_sum:
            if (rescale.empty()) return source_free_Z(bundle.system, window);
            return source_free_Z(rescale_biorthonormal(bundle.system, rescale), window);
        case Method::path_integral: {
            if (!bundle.cubic) throw ConfigError("path-integral needs a cubic or harmonic model");
            if (window.mode != TimeMode::imaginary_time) throw ConfigError("path-integral runs in imaginary time only");
            GridSpec g = grid;
            g.extent = window.beta();
            return transfer_matrix_Z(LagrangianSpec{*bundle.cubic, window.J, window.hbar}, g);
        }
    }
    throw ConfigError("unknown method");
}

std::vector<GenFunResult> run_experiment(const ExperimentConfig& config) {
    const ModelBundle bundle = build_model(config.model, config.basis());
    std::vector<GenFunResult> results;
    for (Method m : config.methods) results.push_back(evaluate_method(bundle, m, config.window, config.grid, config.rescale));
    return results;
}

std::vector<std::filesystem::path> write_results(const std::vector<GenFunResult>& results,
                                                 const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    for (const GenFunResult& r : results) {
        paths.push_back(dir / ("result-" + std::string(to_string(r.method)) + ".json"));
        save_result(r, paths.back());
    }
    return paths;
}

SweepTable run_sweep(const ExperimentConfig& config, int workers) {
    if (!config.sweep) throw ConfigError("sweep: config has no 'sweep' section");
    const auto& axes = config.sweep->axes;
    SweepTable table;
    for (const auto& a : axes) table.header.push_back(a.first);
    for (auto& col : quantity_columns(config)) table.header.push_back(col);
    table.header.push_back("error");

    std::size_t total = axes.empty() ? 0 : 1;
    for (const auto& a : axes) total *= a.second.size();

    // row k -> mixed-radix digits, last axis fastest
    std::vector<std::vector<double>> params(total);
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rest = k;
        params[k].resize(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            params[k][a] = axes[a].second[rest % axes[a].second.size()];
            rest /= axes[a].second.size();
        }
    }

    const std::size_t n_values = quantity_columns(config).size();
    std::vector<std::vector<std::string>> rows(total);
    std::vector<char> failed(total, 0);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            ExperimentConfig c = config;
            for (std::size_t a = 0; a < axes.size(); ++a) apply_axis(c, axes[a].first, params[k][a]);
            std::vector<std::string> row;
            for (double p : params[k]) row.push_back(format_double(p));
            try {
                for (double v : evaluate_row(c)) row.push_back(format_double(v));
                row.push_back("");
            } catch (const std::exception& e) {
                row.resize(axes.size());
                for (std::size_t v = 0; v < n_values; ++v) row.push_back("");
                row.push_back(e.what());
                failed[k] = 1;
            }
            rows[k] = std::move(row);
        }
    };
    const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(total)));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    table.rows = std::move(rows);
    table.failed_rows = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
    return table;
}

std::string sweep_csv(const SweepTable& table) {
    std::ostringstream out;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << csv_field(cells[k]);
        out << "\n";
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    return out.str();
}

}  // namespace phqm
