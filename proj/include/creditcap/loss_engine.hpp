#pragma once

#include <cstdint>

#include "creditcap/math_kernel.hpp"
#include "creditcap/model_core.hpp"

namespace creditcap {

/// Default node count for loss-distribution quadrature. The loss-CDF
/// integrands contain near-step transitions whose Gauss-Hermite error at 64
/// nodes (~1e-6) is larger than the tail margins that decide grid-edge
/// quantiles; 256 nodes bring it below 1e-12.
inline constexpr std::size_t kDefaultLossQuadNodes = 256;

/// Loss grid granularity for the exact path with unequal exposures,
/// expressed as a fraction of the portfolio.
inline constexpr double kDefaultLossGridStep = 1e-4;

struct McConfig {
    std::uint64_t n_sims = 1'000'000;
    std::uint64_t seed = 0;
    bool antithetic = false;
    unsigned n_workers = 0;  // 0 = hardware concurrency
};

/// Through-the-cycle loss law: the conditional-independence mixture
///   P[L = l] = integral PoissonBinomial(p_i(s)) phi(s) ds,
/// with p_i(s) the PD of obligor i conditional on the unit-variance
/// composite factor value s. Requires a one-factor model and N <= 5000;
/// source = Quadrature.
LossDistribution ttc_loss_distribution(const Portfolio& p, const QuadratureRule& rule,
                                       double grid_step = kDefaultLossGridStep);

/// Point-in-time loss law at a fixed factor realisation: defaults are
/// conditionally independent given s, so the law is the Poisson binomial of
/// the conditional PDs on the exposure grid; source = ConditionalExact.
LossDistribution pit_loss_distribution(const Portfolio& p, const Scenario& sc,
                                       double grid_step = kDefaultLossGridStep);

/// Monte Carlo loss law for any factor dimension and portfolio size.
/// Unconditional draws (X,S) jointly; Fixed draws X only; Truncated draws S
/// by rejection from the box (conditioning on S in box) and then X.
/// Per-worker substreams are derived from (seed, worker index) and merged
/// deterministically, so results are bit-identical for a fixed
/// (seed, n_workers) pair. Throws InfeasibleScenarioError when the box
/// acceptance rate measures below 1e-6.
LossDistribution mc_loss_distribution(const Portfolio& p, const Scenario& sc,
                                      const McConfig& cfg);

}  // namespace creditcap
