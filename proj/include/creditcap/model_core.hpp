#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace creditcap {

/// Mean-zero multivariate normal systematic factor vector S of dimension k.
struct FactorModel {
    std::size_t k = 1;
    std::vector<double> covariance;  // row-major k x k

    static FactorModel identity(std::size_t k);

    double cov(std::size_t i, std::size_t j) const { return covariance[i * k + j]; }

    /// w' Cov w  (variance of the composite factor w'S).
    double factor_variance(std::span<const double> w) const;

    bool symmetric_within(double tol) const;

    /// Lower-triangular L with L L' = Cov, row-major. Semidefinite input is
    /// allowed (zero pivots); throws DomainError when a pivot falls below
    /// -1e-10 * scale, i.e. the matrix is materially indefinite.
    std::vector<double> cholesky_factor() const;
};

/// One row of the portfolio loss model: relative exposure u_i, through-the-
/// cycle PD (threshold T_i = Phi^{-1}(pd)), systematic sensitivity rho_i and
/// factor weights w_i normalized so that var[w_i'S] = 1.
struct Obligor {
    std::string id;
    double exposure = 0.0;
    double ttc_pd = 0.0;
    double sensitivity = 0.0;
    std::vector<double> factor_weights;
};

struct Portfolio {
    std::vector<Obligor> obligors;
    FactorModel factor_model;

    std::size_t size() const { return obligors.size(); }

    /// True when every obligor has bitwise the same exposure.
    bool equal_exposures() const;
};

/// Probit PD regression in reduced form: per-obligor characteristic score
/// (intercept plus characteristic terms), systematic loading vector b, and
/// var[b'S] under the factor model.
struct ProbitModel {
    std::vector<double> scores;
    std::vector<double> loading;
    double var_bs = 0.0;

    /// Builds the model and derives var_bs from the covariance.
    static ProbitModel from_loading(std::vector<double> scores,
                                    std::vector<double> loading,
                                    const FactorModel& fm);
};

enum class ScenarioKind { Unconditional, Fixed, Truncated };

struct FactorInterval {
    double low;
    double high;
};

/// Economic-conditions view: either a fixed factor realisation s, a
/// truncation box on S, or the unconditional distribution.
struct Scenario {
    ScenarioKind kind = ScenarioKind::Unconditional;
    std::vector<double> fixed_values;  // Fixed only, length k
    std::vector<FactorInterval> box;   // Truncated only, length k

    static Scenario unconditional();
    /// Throws DomainError if any entry is non-finite.
    static Scenario fixed(std::vector<double> s);
    /// Throws DomainError unless low < high for every factor.
    static Scenario truncated(std::vector<FactorInterval> box);
};

enum class DistributionSource { Quadrature, ConditionalExact, MonteCarlo };

/// Discrete loss law on an ascending grid of relative-loss levels.
struct LossDistribution {
    std::vector<double> loss_levels;
    std::vector<double> probabilities;
    DistributionSource source = DistributionSource::Quadrature;
    std::vector<double> mc_stderr;  // per level; Monte Carlo only
};

struct ValidationIssue {
    std::string where;    // "portfolio", "factor_model", or an obligor id
    std::string message;
};

/// Checks every model invariant and returns the violations (empty = valid):
/// exposure sum, PD and sensitivity ranges, weight normalization
/// var[w_i'S] = 1, covariance symmetry and positive semidefiniteness.
std::vector<ValidationIssue> validate_portfolio(const Portfolio& p);

/// T = Phi^{-1}(pd). Throws DomainError unless pd lies in (0,1).
double threshold_from_ttc_pd(double pd);

/// PD = Phi(T). Throws DomainError on non-finite threshold.
double ttc_pd_from_threshold(double threshold);

/// Rescales every obligor's factor weights so var[w_i'S] = 1.
/// Throws DomainError when a weight vector has zero variance.
void normalize_factor_weights(Portfolio& p);

/// Rescales exposures to sum to one. Throws DomainError on zero total.
void normalize_exposures(Portfolio& p);

}  // namespace creditcap
