#pragma once

#include <string>
#include <vector>

#include "creditcap/loss_engine.hpp"
#include "creditcap/model_core.hpp"

namespace creditcap {

/// Confidence level plus the regime it represents: "TTC" for the bank's
/// through-the-cycle solvency target, "PIT" for a level derived from the
/// point-in-time transform of that target.
struct ConfidenceSpec {
    double alpha;
    std::string label = "TTC";
};

struct CapitalEntry {
    double alpha;
    std::string label;
    double var;  // lower alpha-quantile of the loss law
    double ec;   // var - expected_loss; may be negative
};

struct CapitalReport {
    double expected_loss = 0.0;
    /// Exposure-weighted mean of the PDs actually fed into the loss engine
    /// (equals the TTC PD mean in TTC mode, the transformed PIT PD mean in
    /// the PIT modes).
    double mean_input_pd = 0.0;
    std::vector<CapitalEntry> entries;
};

/// Mean of the loss law.
double expected_loss(const LossDistribution& d);

/// Lower quantile: the smallest loss level l with P[L <= l] >= alpha.
/// The returned value is always a member of loss_levels.
/// Throws DomainError unless alpha lies in (0,1).
double value_at_risk(const LossDistribution& d, double alpha);

/// Unexpected loss: value_at_risk(d, alpha) - expected_loss(d). Negative
/// values are returned as-is; hiding the sign would hide exactly the
/// conditional-independence effect this engine exists to expose.
double economic_capital(const LossDistribution& d, double alpha);

/// Time-varying target solvency level: 1 - ttc_to_pit(target_pd, rho, s).
/// The bank's TTC target PD is transformed the same way as the asset PDs.
double pit_confidence_level(double ttc_target_pd, double rho_bank, double s);

enum class AnalysisMode {
    Ttc,              // TTC PDs in, integrate over the systematic factors
    PitInputTtcCalc,  // PIT-transformed PDs in, TTC-style integration
    TtcInputPitCalc,  // TTC PDs in, condition on the fixed factor value
};

enum class EngineKind { Auto, Quadrature, Exact, Mc };

struct AnalysisOptions {
    EngineKind engine = EngineKind::Auto;
    std::size_t quad_nodes = kDefaultLossQuadNodes;
    double grid_step = kDefaultLossGridStep;
    McConfig mc;
};

/// Full analysis pipeline: derive the mode's loss distribution and evaluate
/// EL / VaR / EC at each requested confidence.
///   Ttc             : ttc_loss_distribution on the TTC PDs
///   PitInputTtcCalc : PDs transformed via ttc_to_pit at the scenario's s,
///                     then ttc_loss_distribution with unchanged sensitivities
///   TtcInputPitCalc : pit_loss_distribution at the scenario's s
/// PIT modes require a Fixed scenario (ConfigError otherwise).
CapitalReport run_analysis(const Portfolio& p, AnalysisMode mode, const Scenario& sc,
                           const std::vector<ConfidenceSpec>& confidences,
                           const AnalysisOptions& opt = {});

}  // namespace creditcap
