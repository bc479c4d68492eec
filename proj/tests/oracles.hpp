// Test-only oracles, deliberately independent of the library's computation
// paths: series/continued-fraction normal CDF, bisection quantile, adaptive
// trapezoid quadrature, brute-force Poisson binomial, log-gamma binomial.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracles {

// Phi via Taylor series around 0 (long double) for moderate arguments and
// the Mills-ratio continued fraction in the tails.
inline long double normal_pdf_l(long double x) {
    const long double inv_sqrt_2pi = 0.398942280401432677939946059934L;
    return inv_sqrt_2pi * std::exp(-0.5L * x * x);
}

inline long double upper_tail_cf(long double x) {
    // Q(x) = phi(x) / (x + 1/(x + 2/(x + 3/...))), x > 0
    long double f = 0.0L;
    for (int k = 60; k >= 1; --k)
        f = static_cast<long double>(k) / (x + f);
    return normal_pdf_l(x) / (x + f);
}

inline double normal_cdf(double xd) {
    const long double x = xd;
    if (x > 3.0L)
        return static_cast<double>(1.0L - upper_tail_cf(x));
    if (x < -3.0L)
        return static_cast<double>(upper_tail_cf(-x));
    // Phi(x) = 1/2 + phi(x) * sum_k x^(2k+1) / (1*3*5*...*(2k+1))
    long double term = x;
    long double sum = x;
    for (int k = 1; k < 200; ++k) {
        term *= x * x / (2.0L * k + 1.0L);
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum))
            break;
    }
    return static_cast<double>(0.5L + normal_pdf_l(x) * sum);
}

// Bisection inverse of a monotone CDF, to an interval of width 1e-12.
inline double quantile_bisect(const std::function<double(double)>& cdf, double p) {
    double lo = -40.0, hi = 40.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Adaptive trapezoid with interval halving until successive refinements
// agree to tol on each subinterval.
inline double adaptive_trapezoid(const std::function<double(double)>& f, double a,
                                 double b, double tol, int depth = 0) {
    const double fa = f(a), fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double coarse = 0.5 * (b - a) * (fa + fb);
    const double fine = 0.25 * (b - a) * (fa + 2.0 * fm + fb);
    if (depth >= 48)
        throw std::runtime_error("adaptive_trapezoid: depth limit");
    if (depth >= 4 && std::fabs(fine - coarse) <= 3.0 * tol)
        return fine + (fine - coarse) / 3.0;  // Richardson touch-up
    return adaptive_trapezoid(f, a, m, tol / 2.0, depth + 1) +
           adaptive_trapezoid(f, m, b, tol / 2.0, depth + 1);
}

// All 2^N outcomes, N small.
inline std::vector<double> enum_poisson_binomial(std::span<const double> probs) {
    const std::size_t n = probs.size();
    std::vector<double> pmf(n + 1, 0.0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double prob = 1.0;
        std::size_t defaults = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                prob *= probs[i];
                ++defaults;
            } else {
                prob *= 1.0 - probs[i];
            }
        }
        pmf[defaults] += prob;
    }
    return pmf;
}

// Binomial pmf through log-gamma, one entry at a time.
inline double binomial_pmf_lgamma(std::size_t n, double p, std::size_t k) {
    if (p == 0.0)
        return k == 0 ? 1.0 : 0.0;
    if (p == 1.0)
        return k == n ? 1.0 : 0.0;
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double log_pmf = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                           std::lgamma(nd - kd + 1.0) + kd * std::log(p) +
                           (nd - kd) * std::log1p(-p);
    return std::exp(log_pmf);
}

inline double binomial_cdf_lgamma(std::size_t n, double p, std::size_t k) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i <= k; ++i)
        acc += binomial_pmf_lgamma(n, p, i);
    return static_cast<double>(acc);
}

}  // namespace oracles
