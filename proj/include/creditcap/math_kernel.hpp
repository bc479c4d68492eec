#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace creditcap {

/// Standard normal density phi(x).
double std_normal_pdf(double x);

/// Standard normal distribution function Phi(x), absolute error below 1e-12.
/// Throws DomainError on non-finite input.
double std_normal_cdf(double x);

/// Inverse of Phi. Rational initial estimate polished by one Halley step,
/// so |Phi(result) - p| stays below 1e-14 over the full open interval.
/// Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// Compensated (Neumaier) summation.
double accurate_sum(std::span<const double> values);

/// Binomial(n, p) probability mass function as a vector of length n+1.
/// Uses a mode-anchored multiplicative recurrence, so there is no factorial
/// overflow and no loss of the central mass up to n = 10^5.
std::vector<double> binomial_pmf_vector(std::size_t n, double p);

/// Hard cap on the O(N^2) exact Poisson-binomial convolution. Larger
/// portfolios must go through mc_loss_distribution.
inline constexpr std::size_t kPoissonBinomialMaxN = 5000;

/// Distribution of the number of successes among independent Bernoulli(p_i)
/// trials, length N+1, by exact dynamic-programming convolution.
/// With probs_equal the caller asserts all p_i are identical and the
/// binomial recurrence is used instead (DomainError if they are not).
/// Throws CapacityError for N > kPoissonBinomialMaxN.
std::vector<double> poisson_binomial_pmf(std::span<const double> probs,
                                         bool probs_equal = false);

/// Nodes and weights for integrating against the standard normal density:
/// integral f(x) phi(x) dx ~= sum_i weights[i] * f(nodes[i]).
/// Weights are positive and normalized to sum to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <typename F>
    double integrate(F&& f) const {
        // Neumaier compensation; the loss-distribution accumulations care
        // about the last few digits.
        double sum = 0.0, comp = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double term = weights[i] * f(nodes[i]);
            const double t = sum + term;
            comp += (std::fabs(sum) >= std::fabs(term)) ? (sum - t) + term
                                                        : (term - t) + sum;
            sum = t;
        }
        return sum + comp;
    }
};

/// Gauss-Hermite rule rescaled to the standard normal weight; exact for
/// polynomials of degree <= 2 n - 1. Valid for 2 <= n_nodes <= 256.
QuadratureRule gauss_hermite_rule(std::size_t n_nodes);

/// Deterministic seeded uniform/normal stream. Substreams for parallel work
/// are derived from (seed, stream); both the generator (mt19937_64) and the
/// seeding procedure are fully specified by the standard, and normals come
/// from the inverse CDF, so sequences are reproducible across platforms.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform draw strictly inside (0, 1): 53 random bits offset by half an
    /// ulp so neither endpoint is reachable.
    double next_uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw via the inverse CDF.
    double next_normal() { return std_normal_quantile(next_uniform()); }

private:
    std::mt19937_64 gen_;
};

}  // namespace creditcap
