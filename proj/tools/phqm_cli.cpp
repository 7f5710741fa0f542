// phqm command-line front end.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "phqm/experiment.hpp"
#include "phqm/metric.hpp"
#include "phqm/models.hpp"
#include "phqm/spectralio.hpp"
#include "phqm/verify.hpp"

namespace fs = std::filesystem;
using namespace phqm;

namespace {

enum Exit { kOk = 0, kClaimFailed = 1, kConfig = 2, kNumerical = 3 };

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
}

fs::path output_dir(const std::string& flag, const ExperimentConfig& c) {
    if (!flag.empty()) return flag;
    if (!c.output_dir.empty()) return c.output_dir;
    return ".";
}

std::string complex_text(cplx z) { return format_double(z.real()) + " " + format_double(z.imag()) + "i"; }

int cmd_run(const std::string& config_path, const std::string& out) {
    const ExperimentConfig c = load_config(config_path);
    const auto results = run_experiment(c);
    const auto paths = write_results(results, output_dir(out, c));
    for (std::size_t k = 0; k < results.size(); ++k) {
        std::cout << to_string(results[k].method) << "  Z = " << complex_text(results[k].value) << "  -> "
                  << paths[k].string() << "\n";
    }
    return kOk;
}

int cmd_verify(const std::string& profile, const std::string& out, bool mutate) {
    VerifyOptions opts;
    opts.profile = profile_from_string(profile);
    opts.swap_x_for_naive = mutate;
    const VerifyReport report = verify_all(opts);
    for (const ClaimRecord& c : report.claims) {
        std::printf("%-8s %-28s %-12s measured=%-12.4g %s %.3g%s  [%s]\n", to_string(c.status), c.id.c_str(),
                    ("N=" + std::to_string(c.dimension)).c_str(), c.measured, c.relation.c_str(), c.threshold,
                    c.relation == "in" ? ("-" + format_double(c.threshold_hi)).c_str() : "", c.anchor.c_str());
        if (!c.detail.empty()) std::printf("         %s\n", c.detail.c_str());
    }
    std::printf("verify-all %s: %zu pass, %zu fail, %zu skipped\n", to_string(report.profile),
                report.count(ClaimStatus::pass), report.count(ClaimStatus::fail), report.count(ClaimStatus::skipped));
    if (!out.empty()) {
        fs::create_directories(out);
        save_json(report_to_json(report), fs::path(out) / "verify-report.json");
    }
    if (!report.passed()) {
        std::cerr << "failing claims:";
        for (const ClaimRecord& c : report.claims) {
            if (c.status == ClaimStatus::fail) std::cerr << " " << c.id;
        }
        std::cerr << "\n";
        return kClaimFailed;
    }
    return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out, int workers) {
    const ExperimentConfig c = load_config(config_path);
    if (!c.sweep) throw ConfigError("sweep: config has no 'sweep' section");
    if (workers < 1) throw ConfigError("--workers must be >= 1");
    const SweepTable table = run_sweep(c, workers);
    const fs::path path = output_dir(out, c) / "sweep.csv";
    write_text(path, sweep_csv(table));
    std::cout << table.rows.size() << " rows -> " << path.string() << "\n";
    if (table.failed_rows > 0) {
        std::cerr << table.failed_rows << " row(s) failed; see the error column\n";
        return kClaimFailed;
    }
    return kOk;
}

int cmd_spectrum(const std::string& config_path, const std::string& out) {
    const ExperimentConfig c = load_config(config_path);
    const BasisSpec basis = c.basis();
    const OperatorMatrix H = c.model.kind == ModelKind::shifted ? build_shifted_hamiltonian(c.model.shifted, basis)
                                                                 : build_cubic_hamiltonian(c.model.cubic, basis);
    const BiorthonormalSystem sys = biorthonormal_diagonalize(H);
    std::string csv = "n,re,im\n";
    for (Index k = 0; k < sys.size(); ++k) {
        csv += std::to_string(k) + "," + format_double(sys.eigenvalues(k).real()) + "," +
               format_double(sys.eigenvalues(k).imag()) + "\n";
    }
    const auto report = spectrum_reality_report(sys, default_trusted_modes(sys.size()));
    if (!out.empty()) {
        write_text(fs::path(out) / "spectrum.csv", csv);
    } else {
        std::cout << csv;
    }
    std::cerr << "trusted modes " << report.trusted_modes << ": max |Im E|/max(1,|Re E|) = "
              << report.max_relative_imag << (report.pass ? " (pass)" : " (fail)") << ", cond(Psi) = "
              << sys.condition_number << "\n";
    return kOk;
}

int cmd_metric_check(const std::string& config_path, const std::string& out) {
    const ExperimentConfig c = load_config(config_path);
    const BasisSpec basis = c.basis();
    const ModelBundle b = build_model(c.model, basis);
    const Index block = default_trusted_modes(basis.dimension);
    nlohmann::ordered_json doc;
    doc["format"] = "phqm-metric-check";
    doc["version"] = 1;
    doc["tool_version"] = kToolVersion;
    doc["dimension"] = basis.dimension;
    doc["block"] = block;
    doc["condition_number"] = b.system.condition_number;
    doc["biorthonormality"] = biorthonormality_residual(b.system);
    doc["completeness"] = completeness_residual(b.system);
    doc["reconstruction"] = reconstruction_residual(b.H, b.system);
    if (c.model.kind == ModelKind::shifted) {
        const auto r = shifted_equivalence_report(c.model.shifted, basis);
        doc["pseudo_hermiticity_block"] = r.pseudo_hermiticity_residual;
        doc["h_vs_H0_block"] = r.h_residual;
        doc["X_vs_x_plus_i_alpha_block"] = r.x_residual;
    } else {
        const CubicExact ex = exact_cubic(c.model.cubic, basis);
        doc["metric_mapping"] = metric_mapping_residual(ex.system, ex.metric);
        doc["pseudo_hermiticity_block"] = pseudo_hermiticity_residual(ex.hamiltonian.matrix(), ex.metric.eta(), block);
        doc["h_hermiticity_block"] = block_relative_difference(ex.h.matrix(), ex.h.matrix().adjoint(), block);
        doc["lambda_min"] = ex.metric.lambda_min();
        doc["lambda_max"] = ex.metric.lambda_max();
    }
    if (!out.empty()) {
        fs::create_directories(out);
        save_json(doc, fs::path(out) / "metric-check.json");
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    return kOk;
}

int cmd_pathint(const std::string& config_path, const std::string& out) {
    ExperimentConfig c = load_config(config_path);
    if (c.model.kind == ModelKind::shifted) throw ConfigError("pathint: needs a cubic or harmonic model");
    const ModelBundle b = build_model(c.model, c.basis());
    const GenFunResult r = evaluate_method(b, Method::path_integral, c.window, c.grid);
    std::cout << "path-integral  Z = " << complex_text(r.value) << "  (M=" << c.grid.points
              << ", N_s=" << c.grid.slices << ", L=" << format_double(c.grid.half_width) << ")\n";
    if (!out.empty()) {
        fs::create_directories(out);
        save_result(r, fs::path(out) / "result-path-integral.json");
    }
    return kOk;
}

int cmd_save_matrix(const std::string& config_path, const std::string& which, const std::string& file) {
    const ExperimentConfig c = load_config(config_path);
    const ModelBundle b = build_model(c.model, c.basis());
    const OperatorMatrix* m = nullptr;
    if (which == "H") m = &b.H;
    else if (which == "x") m = &b.x;
    else if (which == "X") m = &b.X;
    else if (which == "h") m = &b.h;
    else throw ConfigError("--operator: expected H | x | X | h");
    if (fs::path(file).has_parent_path()) fs::create_directories(fs::path(file).parent_path());
    save_matrix(*m, file);
    std::cout << which << " (" << m->dim() << "x" << m->dim() << ") -> " << file << "\n";
    return kOk;
}

int cmd_load_matrix(const std::string& file) {
    const OperatorMatrix m = load_matrix(file);
    const BasisSpec& b = m.basis();
    std::cout << m.dim() << "x" << m.dim() << "  mass=" << format_double(b.mass) << " omega=" << format_double(b.omega)
              << " hbar=" << format_double(b.hbar) << "  fingerprint=" << fingerprint_hex(fingerprint(m.matrix()))
              << "  hermitian=" << ((m.matrix() - m.matrix().adjoint()).norm() == 0.0 ? "yes" : "no") << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phqm: pseudo-Hermitian generating functionals in a truncated oscillator basis"};
    app.require_subcommand(1);
    std::string config, out, profile = "quick", which = "H", file;
    int workers = 1;
    std::uint64_t seed = 0;
    bool mutate = false;

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config, "experiment config (JSON)");
        if (needs_config) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "reserved; deterministic paths ignore it");
    };

    auto* run = app.add_subcommand("run", "evaluate the configured methods and write result records");
    add_common(run, true);
    auto* verify = app.add_subcommand("verify-all", "run the named claim suite");
    add_common(verify, false);
    verify->add_option("--profile", profile, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    verify->add_flag("--mutate-swap-x", mutate, "couple the source to x instead of X (mutation check)");
    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep to CSV");
    add_common(sweep, true);
    sweep->add_option("--workers", workers, "concurrent row evaluations")->check(CLI::PositiveNumber);
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the configured Hamiltonian");
    add_common(spectrum, true);
    auto* metric = app.add_subcommand("metric-check", "metric and biorthonormal residuals");
    add_common(metric, true);
    auto* pathint = app.add_subcommand("pathint", "transfer-matrix path integral for the configured window");
    add_common(pathint, true);
    auto* save = app.add_subcommand("save-matrix", "write an operator matrix file");
    add_common(save, true);
    save->add_option("--operator", which, "H | x | X | h");
    save->add_option("--file", file, "output file")->required();
    auto* load = app.add_subcommand("load-matrix", "read and summarize a matrix file");
    load->add_option("file", file, "matrix file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return cmd_run(config, out);
        if (*verify) return cmd_verify(profile, out, mutate);
        if (*sweep) return cmd_sweep(config, out, workers);
        if (*spectrum) return cmd_spectrum(config, out);
        if (*metric) return cmd_metric_check(config, out);
        if (*pathint) return cmd_pathint(config, out);
        if (*save) return cmd_save_matrix(config, which, file);
        if (*load) return cmd_load_matrix(file);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kConfig;
}
