#include "creditcap/capital_engine.hpp"

#include <cmath>
#include <string>

#include "creditcap/errors.hpp"
#include "creditcap/pd_engine.hpp"

namespace creditcap {

double expected_loss(const LossDistribution& d) {
    std::vector<double> terms(d.loss_levels.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = d.loss_levels[i] * d.probabilities[i];
    return accurate_sum(terms);
}

double value_at_risk(const LossDistribution& d, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("value_at_risk: alpha must lie in (0,1)");
    if (d.loss_levels.empty())
        throw DomainError("value_at_risk: empty distribution");

    // Tiny slack absorbs accumulated rounding in the cumulative sum; it is
    // far below any probability mass the exact engines can resolve.
    constexpr double kCumSlack = 1e-12;
    double cum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < d.loss_levels.size(); ++i) {
        const double term = d.probabilities[i];
        const double t = cum + term;
        comp += (std::fabs(cum) >= std::fabs(term)) ? (cum - t) + term : (term - t) + cum;
        cum = t;
        if (cum + comp + kCumSlack >= alpha)
            return d.loss_levels[i];
    }
    return d.loss_levels.back();
}

double economic_capital(const LossDistribution& d, double alpha) {
    return value_at_risk(d, alpha) - expected_loss(d);
}

double pit_confidence_level(double ttc_target_pd, double rho_bank, double s) {
    return 1.0 - ttc_to_pit(ttc_target_pd, rho_bank, s);
}

namespace {

double composite_factor_value(const Obligor& o, std::span<const double> s) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        acc += o.factor_weights[j] * s[j];
    return acc;
}

double weighted_mean_pd(const Portfolio& p) {
    std::vector<double> terms(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        terms[i] = p.obligors[i].exposure * p.obligors[i].ttc_pd;
    return accurate_sum(terms);
}

}  // namespace

CapitalReport run_analysis(const Portfolio& p, AnalysisMode mode, const Scenario& sc,
                           const std::vector<ConfidenceSpec>& confidences,
                           const AnalysisOptions& opt) {
    const bool pit_mode = mode != AnalysisMode::Ttc;
    if (pit_mode && sc.kind != ScenarioKind::Fixed)
        throw ConfigError("run_analysis: PIT modes require a Fixed scenario");
    if (pit_mode && sc.fixed_values.size() != p.factor_model.k)
        throw ConfigError("run_analysis: scenario dimension does not match k");
    if (!pit_mode && sc.kind == ScenarioKind::Fixed)
        throw ConfigError(
            "run_analysis: a Fixed scenario under TTC analysis is ambiguous; "
            "use mode pit-calc (or pit-input) instead");

    // Transform the input PDs first when the mode asks for it.
    Portfolio work = p;
    if (mode == AnalysisMode::PitInputTtcCalc) {
        for (Obligor& o : work.obligors) {
            const double w_dot_s = composite_factor_value(o, sc.fixed_values);
            o.ttc_pd = ttc_to_pit(o.ttc_pd, o.sensitivity, w_dot_s);
        }
    }

    EngineKind engine = opt.engine;
    if (engine == EngineKind::Auto) {
        const bool exact_capable =
            work.size() <= kPoissonBinomialMaxN && work.factor_model.k == 1;
        if (!exact_capable || sc.kind == ScenarioKind::Truncated)
            engine = EngineKind::Mc;
        else
            engine = (mode == AnalysisMode::TtcInputPitCalc) ? EngineKind::Exact
                                                             : EngineKind::Quadrature;
    }

    LossDistribution dist;
    switch (engine) {
        case EngineKind::Quadrature:
            if (mode == AnalysisMode::TtcInputPitCalc)
                throw UnsupportedModeError(
                    "run_analysis: quadrature engine does not apply to the "
                    "fixed-factor PIT calculation; use exact or mc");
            if (sc.kind == ScenarioKind::Truncated)
                throw UnsupportedModeError(
                    "run_analysis: truncated scenarios have no deterministic "
                    "integration path; use the mc engine");
            dist = ttc_loss_distribution(work, gauss_hermite_rule(opt.quad_nodes),
                                         opt.grid_step);
            break;
        case EngineKind::Exact:
            if (mode != AnalysisMode::TtcInputPitCalc)
                throw UnsupportedModeError(
                    "run_analysis: the conditional-exact engine applies only to "
                    "the fixed-factor PIT calculation; use quadrature or mc");
            dist = pit_loss_distribution(work, sc, opt.grid_step);
            break;
        case EngineKind::Mc: {
            // PitInputTtcCalc conditions only through the transformed PDs;
            // the loss run itself still integrates over the factors.
            const Scenario mc_sc = (mode == AnalysisMode::PitInputTtcCalc)
                                       ? Scenario::unconditional()
                                       : sc;
            dist = mc_loss_distribution(work, mc_sc, opt.mc);
            break;
        }
        case EngineKind::Auto:
            break;  // unreachable
    }

    CapitalReport report;
    report.expected_loss = expected_loss(dist);
    report.mean_input_pd = weighted_mean_pd(work);
    for (const ConfidenceSpec& c : confidences) {
        CapitalEntry e;
        e.alpha = c.alpha;
        e.label = c.label;
        e.var = value_at_risk(dist, c.alpha);
        e.ec = e.var - report.expected_loss;
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace creditcap
