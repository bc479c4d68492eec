// creditcap: credit-portfolio capital engine CLI.
//
// Verbs: analyze, reproduce-table1, validate, transform-pd.
// Exit codes: 0 ok, 2 config/parse error, 3 validation error,
// 4 numerical/capacity error, 5 reference-table mismatch.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "creditcap/capital_engine.hpp"
#include "creditcap/errors.hpp"
#include "creditcap/pd_engine.hpp"
#include "creditcap/portfolio_io.hpp"
#include "creditcap/report.hpp"
#include "creditcap/table1.hpp"

namespace {

using namespace creditcap;

double parse_bound(const std::string& s) {
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "inf" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("scenario: cannot parse bound '" + s + "'");
    }
}

Scenario parse_scenario(const std::string& spec) {
    if (spec.empty() || spec == "unconditional")
        return Scenario::unconditional();
    if (spec.rfind("fixed:", 0) == 0) {
        std::vector<double> values;
        std::string body = spec.substr(6);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            const std::size_t comma = body.find(',', pos);
            const std::string tok =
                body.substr(pos, comma == std::string::npos ? std::string::npos
                                                            : comma - pos);
            values.push_back(parse_bound(tok));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        return Scenario::fixed(std::move(values));
    }
    if (spec.rfind("trunc:", 0) == 0) {
        // trunc:f1=-inf..-1.0,f2=0..2  -- factors listed in order f1..fk
        std::vector<FactorInterval> box;
        std::string body = spec.substr(6);
        std::size_t pos = 0;
        std::size_t index = 1;
        while (pos <= body.size()) {
            const std::size_t comma = body.find(',', pos);
            const std::string tok =
                body.substr(pos, comma == std::string::npos ? std::string::npos
                                                            : comma - pos);
            const std::string want = "f" + std::to_string(index) + "=";
            if (tok.rfind(want, 0) != 0)
                throw ConfigError("scenario: expected '" + want + "LO..HI', got '" +
                                  tok + "'");
            const std::string range = tok.substr(want.size());
            const std::size_t dots = range.find("..");
            if (dots == std::string::npos)
                throw ConfigError("scenario: interval '" + range + "' must be LO..HI");
            box.push_back(FactorInterval{parse_bound(range.substr(0, dots)),
                                         parse_bound(range.substr(dots + 2))});
            ++index;
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        return Scenario::truncated(std::move(box));
    }
    throw ConfigError("scenario: expected 'unconditional', 'fixed:...' or 'trunc:...', got '" +
                      spec + "'");
}

std::string scenario_to_string(const Scenario& sc) {
    switch (sc.kind) {
        case ScenarioKind::Unconditional:
            return "unconditional";
        case ScenarioKind::Fixed: {
            std::string s = "fixed:";
            for (std::size_t i = 0; i < sc.fixed_values.size(); ++i)
                s += (i ? "," : "") + std::to_string(sc.fixed_values[i]);
            return s;
        }
        case ScenarioKind::Truncated: {
            std::string s = "trunc:";
            for (std::size_t i = 0; i < sc.box.size(); ++i) {
                if (i)
                    s += ",";
                s += "f" + std::to_string(i + 1) + "=" +
                     std::to_string(sc.box[i].low) + ".." +
                     std::to_string(sc.box[i].high);
            }
            return s;
        }
    }
    return "?";
}

void write_output(const std::string& text, const std::optional<std::string>& path) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + *path);
    out << text;
}

void print_error(const std::string& type, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    std::cerr << j.dump(2) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"credit-portfolio capital engine (Gaussian one-factor copula, "
                 "PIT/TTC PD transforms, VaR and unexpected-loss capital)"};
    app.require_subcommand(1);

    // ---- analyze ----
    auto* analyze = app.add_subcommand("analyze", "compute a capital report for a portfolio");
    std::string portfolio_path, factors_path, mode_str = "ttc", scenario_str, format_str = "md";
    std::string engine_str = "auto", out_path;
    std::vector<double> alphas, pit_alphas;
    std::uint64_t sims = 1'000'000, seed = 0;
    unsigned workers = 0;
    std::size_t nodes = kDefaultLossQuadNodes;
    double grid_step = kDefaultLossGridStep;
    bool normalize = false, antithetic = false;
    analyze->add_option("--portfolio", portfolio_path, "portfolio CSV")->required();
    analyze->add_option("--factors", factors_path, "factor-model sidecar JSON");
    analyze->add_option("--mode", mode_str, "ttc | pit-input | pit-calc")
        ->check(CLI::IsMember({"ttc", "pit-input", "pit-calc"}));
    analyze->add_option("--scenario", scenario_str,
                        "unconditional | fixed:v1[,v2..] | trunc:f1=LO..HI[,..]");
    analyze->add_option("--alpha", alphas, "confidence level (repeatable, TTC label)");
    analyze->add_option("--pit-alpha", pit_alphas, "confidence level (repeatable, PIT label)");
    analyze->add_option("--engine", engine_str, "auto | quadrature | exact | mc")
        ->check(CLI::IsMember({"auto", "quadrature", "exact", "mc"}));
    analyze->add_option("--sims", sims, "Monte Carlo paths");
    analyze->add_option("--seed", seed, "Monte Carlo seed");
    analyze->add_option("--workers", workers, "Monte Carlo workers (0 = hardware)");
    analyze->add_option("--nodes", nodes, "quadrature node count (2..256)");
    analyze->add_option("--grid-step", grid_step, "loss grid step for unequal exposures");
    analyze->add_flag("--antithetic", antithetic, "antithetic Monte Carlo pairs");
    analyze->add_option("--format", format_str, "md | csv | json")
        ->check(CLI::IsMember({"md", "csv", "json"}));
    analyze->add_flag("--normalize", normalize,
                      "rescale exposures to sum 1 and weights to unit variance");
    int round_decimals = -1;
    analyze->add_option("--round", round_decimals,
                        "display decimal places (default: VaR 0, capital 1)")
        ->check(CLI::Range(0, 12));
    analyze->add_option("--out", out_path, "write the report to a file instead of stdout");

    // ---- reproduce-table1 ----
    auto* table1 = app.add_subcommand(
        "reproduce-table1", "self-checking benchmark capital table (golden run)");
    std::string t1_engine = "quadrature";
    std::uint64_t t1_sims = 10'000'000, t1_seed = 42;
    unsigned t1_workers = 0;
    std::size_t t1_nodes = kDefaultLossQuadNodes;
    table1->add_option("--engine", t1_engine, "quadrature | mc")
        ->check(CLI::IsMember({"quadrature", "mc"}));
    table1->add_option("--nodes", t1_nodes, "quadrature node count (2..256)");
    table1->add_option("--sims", t1_sims, "Monte Carlo paths");
    table1->add_option("--seed", t1_seed, "Monte Carlo seed");
    table1->add_option("--workers", t1_workers, "Monte Carlo workers");

    // ---- validate ----
    auto* validate = app.add_subcommand("validate", "check a portfolio against model invariants");
    std::string v_portfolio, v_factors;
    bool v_normalize = false;
    validate->add_option("--portfolio", v_portfolio, "portfolio CSV")->required();
    validate->add_option("--factors", v_factors, "factor-model sidecar JSON");
    validate->add_flag("--normalize", v_normalize, "normalize before validating");

    // ---- transform-pd ----
    auto* transform = app.add_subcommand(
        "transform-pd", "transform a single PD between TTC and PIT at a factor value");
    double tp_pd = 0.0, tp_rho = 0.0, tp_s = 0.0;
    bool tp_inverse = false;
    transform->add_option("--pd", tp_pd, "input PD")->required();
    transform->add_option("--rho", tp_rho, "sensitivity in (-1,1)")->required();
    transform->add_option("--s", tp_s, "composite factor value w'S")->required();
    transform->add_flag("--inverse", tp_inverse, "PIT -> TTC instead of TTC -> PIT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        print_error("ConfigError", e.what());
        return static_cast<int>(ExitCode::Config);
    }

    if (analyze->parsed()) {
        LoadOptions lopt;
        if (!factors_path.empty())
            lopt.factors_path = factors_path;
        lopt.normalize = normalize;
        const Portfolio p = load_portfolio(portfolio_path, lopt);

        AnalysisMode mode = AnalysisMode::Ttc;
        if (mode_str == "pit-input")
            mode = AnalysisMode::PitInputTtcCalc;
        else if (mode_str == "pit-calc")
            mode = AnalysisMode::TtcInputPitCalc;
        const Scenario sc = parse_scenario(scenario_str);

        if (alphas.empty() && pit_alphas.empty())
            alphas.push_back(0.999);
        std::vector<ConfidenceSpec> confs;
        for (double a : alphas)
            confs.push_back({a, "TTC"});
        for (double a : pit_alphas)
            confs.push_back({a, "PIT"});
        for (const ConfidenceSpec& c : confs)
            if (!(c.alpha > 0.0 && c.alpha < 1.0))
                throw ConfigError("confidence levels must lie in (0,1)");

        AnalysisOptions aopt;
        if (engine_str == "quadrature")
            aopt.engine = EngineKind::Quadrature;
        else if (engine_str == "exact")
            aopt.engine = EngineKind::Exact;
        else if (engine_str == "mc")
            aopt.engine = EngineKind::Mc;
        aopt.quad_nodes = nodes;
        aopt.grid_step = grid_step;
        aopt.mc = McConfig{sims, seed, antithetic, workers};

        const CapitalReport report = run_analysis(p, mode, sc, confs, aopt);

        ReportMeta meta;
        meta.mode = mode_str;
        meta.scenario = scenario_to_string(sc);
        const bool used_mc =
            aopt.engine == EngineKind::Mc ||
            (aopt.engine == EngineKind::Auto &&
             (p.factor_model.k > 1 || p.size() > kPoissonBinomialMaxN ||
              sc.kind == ScenarioKind::Truncated));
        meta.engine = used_mc ? "mc"
                              : (mode == AnalysisMode::TtcInputPitCalc ? "exact"
                                                                       : "quadrature");
        if (used_mc) {
            meta.seed = seed;
            meta.workers = workers;
        }
        OutputFormat fmt = OutputFormat::Markdown;
        if (format_str == "csv")
            fmt = OutputFormat::Csv;
        else if (format_str == "json")
            fmt = OutputFormat::Json;
        const Rounding rounding =
            round_decimals >= 0 ? Rounding::uniform(round_decimals) : Rounding{};
        write_output(render(report, meta, fmt, rounding),
                     out_path.empty() ? std::nullopt : std::optional(out_path));
        return 0;
    }

    if (table1->parsed()) {
        Table1Options opt;
        opt.engine = (t1_engine == "mc") ? EngineKind::Mc : EngineKind::Quadrature;
        opt.quad_nodes = t1_nodes;
        opt.sims = t1_sims;
        opt.seed = t1_seed;
        opt.workers = t1_workers;
        const Table1Run run = reproduce_table1(opt);
        std::cout << run.rendered << "\n";
        int bad = 0;
        for (const Table1Cell& c : run.cells) {
            if (!c.ok) {
                ++bad;
                std::cout << "MISMATCH " << c.name << ": expected " << c.expected
                          << "%, computed " << c.computed << "% (tolerance "
                          << c.tolerance << "pp)\n";
            }
        }
        std::cout << (run.cells.size() - bad) << "/" << run.cells.size()
                  << " cells match\n";
        if (!run.all_ok)
            throw GoldenMismatchError(std::to_string(bad) +
                                      " cell(s) deviate from the reference table");
        return 0;
    }

    if (validate->parsed()) {
        LoadOptions lopt;
        if (!v_factors.empty())
            lopt.factors_path = v_factors;
        lopt.normalize = v_normalize;
        const Portfolio p = load_portfolio(v_portfolio, lopt);
        std::cout << "portfolio valid: " << p.size() << " obligors, k = "
                  << p.factor_model.k << "\n";
        return 0;
    }

    if (transform->parsed()) {
        const double out_pd = tp_inverse ? pit_to_ttc(tp_pd, tp_rho, tp_s)
                                         : ttc_to_pit(tp_pd, tp_rho, tp_s);
        nlohmann::ordered_json j;
        j["direction"] = tp_inverse ? "pit_to_ttc" : "ttc_to_pit";
        j["input_pd"] = tp_pd;
        j["rho"] = tp_rho;
        j["s"] = tp_s;
        j["output_pd"] = out_pd;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        const char* type = "Error";
        switch (e.exit_code()) {
            case ExitCode::Config: type = "ConfigError"; break;
            case ExitCode::Validation: type = "ValidationError"; break;
            case ExitCode::Numeric: type = "NumericError"; break;
            case ExitCode::Golden: type = "GoldenMismatchError"; break;
            default: break;
        }
        print_error(type, e.what());
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        print_error("InternalError", e.what());
        return 1;
    }
}
