#include "creditcap/table1.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "creditcap/pd_engine.hpp"
#include "creditcap/report.hpp"

namespace creditcap {

Portfolio benchmark_portfolio(double ttc_pd, double sensitivity) {
    Portfolio p;
    p.factor_model = FactorModel::identity(1);
    p.obligors.reserve(100);
    for (int i = 1; i <= 100; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "A%03d", i);
        p.obligors.push_back(Obligor{id, 0.01, ttc_pd, sensitivity, {1.0}});
    }
    return p;
}

namespace {

struct PanelColumn {
    CapitalReport report;
};

struct ExpectedColumn {
    double input_pd;            // percent, display only
    double var[3];              // percent, at the three confidence rows
    double capital[3];          // percent
};

constexpr const char* kAlphaLabels[3] = {"99.9%", "98.7%", "98%"};
constexpr const char* kCapitalLabels[3] = {"TTC capital", "PIT capital", "PIT capital"};

}  // namespace

Table1Run reproduce_table1(const Table1Options& opt) {
    const double s = kBenchmarkFactorValue;
    const double alpha_ttc = 0.999;
    // PIT confidence levels derived from the bank's TTC target the same way
    // as the asset PDs; the row labels show their rounded display values.
    const double alpha_pit_bank = pit_confidence_level(kBenchmarkTargetPd, 0.5, s);
    const double alpha_pit_high =
        pit_confidence_level(kBenchmarkTargetPd, std::sqrt(0.5), s);
    const std::vector<ConfidenceSpec> confs = {
        {alpha_ttc, "TTC"}, {alpha_pit_bank, "PIT"}, {alpha_pit_high, "PIT"}};
    const std::vector<ConfidenceSpec> confs_ttc = {{alpha_ttc, "TTC"}};

    AnalysisOptions aopt;
    aopt.engine = opt.engine;
    aopt.quad_nodes = opt.quad_nodes;
    aopt.mc.n_sims = opt.sims;
    aopt.mc.seed = opt.seed;
    aopt.mc.n_workers = opt.workers;
    AnalysisOptions aopt_exact = aopt;
    if (opt.engine == EngineKind::Quadrature)
        aopt_exact.engine = EngineKind::Exact;  // lower panel is conditional-exact

    const Portfolio sub = benchmark_portfolio(0.03);
    const Portfolio inv = benchmark_portfolio(0.003);
    const Scenario fixed = Scenario::fixed({s});
    const Scenario uncond = Scenario::unconditional();

    // panel x column reports
    PanelColumn upper[2] = {
        {run_analysis(sub, AnalysisMode::Ttc, uncond, confs_ttc, aopt)},
        {run_analysis(inv, AnalysisMode::Ttc, uncond, confs_ttc, aopt)}};
    PanelColumn middle[2] = {
        {run_analysis(sub, AnalysisMode::PitInputTtcCalc, fixed, confs, aopt)},
        {run_analysis(inv, AnalysisMode::PitInputTtcCalc, fixed, confs, aopt)}};
    PanelColumn lower[2] = {
        {run_analysis(sub, AnalysisMode::TtcInputPitCalc, fixed, confs, aopt_exact)},
        {run_analysis(inv, AnalysisMode::TtcInputPitCalc, fixed, confs, aopt_exact)}};

    const ExpectedColumn exp_upper[2] = {
        {3.0, {37, 0, 0}, {34.0, 0, 0}},
        {0.3, {9, 0, 0}, {8.7, 0, 0}},
    };
    const ExpectedColumn exp_middle[2] = {
        {20.4, {81, 64, 60}, {60.6, 43.6, 39.6}},
        {3.4, {39, 21, 18}, {35.6, 17.6, 14.6}},
    };
    const ExpectedColumn exp_lower[2] = {
        {3.0, {34, 30, 29}, {13.6, 9.6, 8.6}},
        {0.3, {10, 8, 7}, {6.6, 4.6, 3.6}},
    };

    const bool mc = opt.engine == EngineKind::Mc;
    // Quadrature cells must land exactly on the 1% loss grid; capital cells
    // carry the table's one-decimal rounding allowance. Under Monte Carlo the
    // borderline quantiles may shift one grid step.
    const double var_tol = mc ? 1.0 + 1e-6 : 1e-6;
    const double cap_tol = mc ? 1.1 : 0.05;

    Table1Run run;
    auto check = [&](const std::string& name, double expected_pct, double computed_pct,
                     double tol) {
        const bool ok = std::fabs(computed_pct - expected_pct) <= tol;
        run.cells.push_back({name, expected_pct, computed_pct, tol, ok});
        run.all_ok = run.all_ok && ok;
    };

    const char* col_name[2] = {"pd=3%", "pd=0.3%"};
    for (int c = 0; c < 2; ++c) {
        const CapitalReport& r = upper[c].report;
        check(std::string("TTC/") + col_name[c] + "/VaR(99.9%)",
              exp_upper[c].var[0], r.entries[0].var * 100.0, var_tol);
        check(std::string("TTC/") + col_name[c] + "/Capital(99.9%)",
              exp_upper[c].capital[0], r.entries[0].ec * 100.0, cap_tol);
    }
    for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < 3; ++a) {
            const CapitalEntry& e = middle[c].report.entries[a];
            check(std::string("PIT-input/") + col_name[c] + "/VaR(" + kAlphaLabels[a] + ")",
                  exp_middle[c].var[a], e.var * 100.0, var_tol);
            check(std::string("PIT-input/") + col_name[c] + "/Capital(" + kAlphaLabels[a] + ")",
                  exp_middle[c].capital[a], e.ec * 100.0, cap_tol);
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (int a = 0; a < 3; ++a) {
            const CapitalEntry& e = lower[c].report.entries[a];
            check(std::string("PIT-calc/") + col_name[c] + "/VaR(" + kAlphaLabels[a] + ")",
                  exp_lower[c].var[a], e.var * 100.0, var_tol);
            check(std::string("PIT-calc/") + col_name[c] + "/Capital(" + kAlphaLabels[a] + ")",
                  exp_lower[c].capital[a], e.ec * 100.0, cap_tol);
        }
    }

    std::ostringstream os;
    auto var_cell = [](const CapitalEntry& e) { return format_percent(e.var, 0); };
    auto cap_cell = [](const CapitalEntry& e) { return format_percent(e.ec, 1); };
    os << "| | sub-investment grade | investment grade |\n|---|---|---|\n";
    os << "| **TTC analysis** | | |\n";
    os << "| Asset PD (TTC) | " << format_percent(upper[0].report.mean_input_pd, 1)
       << " | " << format_percent(upper[1].report.mean_input_pd, 1) << " |\n";
    os << "| VaR (99.9%) | " << var_cell(upper[0].report.entries[0]) << " | "
       << var_cell(upper[1].report.entries[0]) << " |\n";
    os << "| Capital (99.9%) | " << cap_cell(upper[0].report.entries[0]) << " | "
       << cap_cell(upper[1].report.entries[0]) << " |\n";
    os << "| **PIT analysis: PIT input, TTC calculation** | | |\n";
    os << "| Input PD | " << format_percent(middle[0].report.mean_input_pd, 1) << " | "
       << format_percent(middle[1].report.mean_input_pd, 1) << " |\n";
    for (int a = 0; a < 3; ++a) {
        os << "| VaR (" << kAlphaLabels[a] << ") | "
           << var_cell(middle[0].report.entries[a]) << " | "
           << var_cell(middle[1].report.entries[a]) << " |\n";
        os << "| " << kCapitalLabels[a] << " (" << kAlphaLabels[a] << ") | "
           << cap_cell(middle[0].report.entries[a]) << " | "
           << cap_cell(middle[1].report.entries[a]) << " |\n";
    }
    os << "| **PIT analysis: TTC input, PIT calculation** | | |\n";
    os << "| Input PD | " << format_percent(lower[0].report.mean_input_pd, 1) << " | "
       << format_percent(lower[1].report.mean_input_pd, 1) << " |\n";
    for (int a = 0; a < 3; ++a) {
        os << "| VaR (" << kAlphaLabels[a] << ") | "
           << var_cell(lower[0].report.entries[a]) << " | "
           << var_cell(lower[1].report.entries[a]) << " |\n";
        os << "| " << kCapitalLabels[a] << " (" << kAlphaLabels[a] << ") | "
           << cap_cell(lower[0].report.entries[a]) << " | "
           << cap_cell(lower[1].report.entries[a]) << " |\n";
    }
    run.rendered = os.str();
    return run;
}

}  // namespace creditcap
