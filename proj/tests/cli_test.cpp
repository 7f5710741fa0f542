#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = PHQM_CONFIG_DIR;

int run(const std::string& args) {
    const std::string cmd = std::string(PHQM_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "phqm_cli_test" / name;
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const nlohmann::json& doc) {
    const fs::path dir = fs::temp_directory_path() / "phqm_cli_test" / "configs";
    fs::create_directories(dir);
    std::ofstream(dir / name) << doc.dump(2);
    return dir / name;
}

nlohmann::json harmonic() { return nlohmann::json::parse(slurp(kConfigs / "harmonic-spectral.json")); }

}  // namespace

TEST(Cli, HarmonicSpectralSum) {
    const fs::path out = fresh_dir("harmonic");
    ASSERT_EQ(run("run --config " + (kConfigs / "harmonic-spectral.json").string() + " --out " + out.string()), 0);
    const auto doc = nlohmann::json::parse(slurp(out / "result-spectral-sum.json"));
    EXPECT_NEAR(doc.at("value")[0].get<double>(), 1.0 / (2.0 * std::sinh(0.5)), 1e-9);
    EXPECT_EQ(doc.at("method"), "spectral-sum");
}

TEST(Cli, NegativeDimension) {
    auto doc = harmonic();
    doc["basis"]["dimension"] = -8;
    const fs::path out = fresh_dir("negative");
    EXPECT_EQ(run("run --config " + write_config("negative.json", doc).string() + " --out " + out.string()), 2);
    EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, ConfigErrors) {
    auto doc = harmonic();
    doc["surprise"] = true;
    EXPECT_EQ(run("run --config " + write_config("unknown.json", doc).string()), 2);
    std::ofstream(fs::temp_directory_path() / "phqm_cli_test" / "configs" / "broken.json") << "{";
    EXPECT_EQ(run("run --config " + (fs::temp_directory_path() / "phqm_cli_test/configs/broken.json").string()), 2);
    EXPECT_EQ(run("run --config /nonexistent/config.json"), 2);
    EXPECT_EQ(run("no-such-command"), 2);
}

TEST(Cli, NumericalError) {
    auto doc = harmonic();
    doc["model"] = {{"kind", "cubic"}, {"epsilon", 1.0}};
    doc["methods"] = {"path-integral"};
    doc["grid"] = {{"points", 64}, {"slices", 8}};
    EXPECT_EQ(run("run --config " + write_config("numerical.json", doc).string() + " --out " +
                  fresh_dir("numerical").string()),
              3);
}

TEST(Cli, Deterministic) {
    const std::string cfg = (kConfigs / "cubic-methods.json").string();
    const fs::path a = fresh_dir("det-a"), b = fresh_dir("det-b");
    ASSERT_EQ(run("run --config " + cfg + " --out " + a.string()), 0);
    ASSERT_EQ(run("run --config " + cfg + " --out " + b.string() + " --seed 99"), 0);
    for (const char* f : {"result-correct-X.json", "result-hermitian-rep.json", "result-naive-x.json"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
        EXPECT_FALSE(slurp(a / f).empty());
    }
}

TEST(Cli, PhaseLawSweep) {
    const fs::path out = fresh_dir("phase");
    ASSERT_EQ(run("sweep --workers 4 --config " + (kConfigs / "shifted-phase-law.json").string() + " --out " +
                  out.string()),
              0);
    std::istringstream csv(slurp(out / "sweep.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "J,alpha,ratio_re,ratio_im,expected_re,expected_im,rel_error,error");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        ASSERT_GE(f.size(), 7u);
        EXPECT_LT(std::stod(f[6]), 1e-8);
    }
    EXPECT_EQ(rows, 4);
}

TEST(Cli, SweepWorkersSameCsv) {
    const std::string cfg = (kConfigs / "shifted-phase-law.json").string();
    const fs::path a = fresh_dir("w1"), b = fresh_dir("w3");
    ASSERT_EQ(run("sweep --workers 1 --config " + cfg + " --out " + a.string()), 0);
    ASSERT_EQ(run("sweep --workers 3 --config " + cfg + " --out " + b.string()), 0);
    EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
}

TEST(Cli, EmptySweepGrid) {
    auto doc = nlohmann::json::parse(slurp(kConfigs / "shifted-phase-law.json"));
    doc["sweep"]["alpha"] = nlohmann::json::array();
    const fs::path out = fresh_dir("empty");
    EXPECT_EQ(run("sweep --config " + write_config("empty.json", doc).string() + " --out " + out.string()), 0);
    EXPECT_EQ(slurp(out / "sweep.csv"), "J,alpha,ratio_re,ratio_im,expected_re,expected_im,rel_error,error\n");
}

TEST(Cli, MatrixRoundTrip) {
    const fs::path dir = fresh_dir("matrix");
    const fs::path file = dir / "H.json";
    ASSERT_EQ(run("save-matrix --config " + (kConfigs / "cubic-methods.json").string() + " --operator X --file " +
                  file.string()),
              0);
    EXPECT_EQ(run("load-matrix " + file.string()), 0);
    std::string text = slurp(file);
    text.resize(text.size() / 2);
    std::ofstream(dir / "cut.json") << text;
    EXPECT_EQ(run("load-matrix " + (dir / "cut.json").string()), 2);
}

TEST(Cli, SpectrumAndMetricCheck) {
    const fs::path out = fresh_dir("spectrum");
    const std::string cfg = (kConfigs / "cubic-methods.json").string();
    ASSERT_EQ(run("spectrum --config " + cfg + " --out " + out.string()), 0);
    EXPECT_EQ(slurp(out / "spectrum.csv").rfind("n,re,im\n", 0), 0u);
    ASSERT_EQ(run("metric-check --config " + cfg + " --out " + out.string()), 0);
    const auto doc = nlohmann::json::parse(slurp(out / "metric-check.json"));
    EXPECT_LT(doc.at("metric_mapping").get<double>(), 1e-9);
}

TEST(Cli, VerifyQuickAndMutation) {
    const fs::path out = fresh_dir("verify");
    EXPECT_EQ(run("verify-all --profile quick --out " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / "verify-report.json"));
    EXPECT_EQ(run("verify-all --profile quick --mutate-swap-x"), 1);
}
