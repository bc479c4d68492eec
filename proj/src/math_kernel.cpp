#include "creditcap/math_kernel.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "creditcap/errors.hpp"

namespace creditcap {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

}  // namespace

double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    if (!std::isfinite(x))
        throw DomainError("std_normal_cdf: non-finite argument");
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("std_normal_quantile: p must lie in (0,1), got " +
                          std::to_string(p));

    // Acklam's rational approximation, |relative error| < 1.15e-9.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the high-accuracy CDF.
    const double err = std_normal_cdf(x) - p;
    const double u = err / std_normal_pdf(x);
    if (std::isfinite(u))
        x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double accurate_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

std::vector<double> binomial_pmf_vector(std::size_t n, double p) {
    if (n < 1)
        throw DomainError("binomial_pmf_vector: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("binomial_pmf_vector: p must lie in [0,1]");

    std::vector<double> pmf(n + 1, 0.0);
    if (p == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p == 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }

    // Unnormalized recurrence anchored at the mode; the pmf is unimodal, so
    // every value stays in [0,1] and the far tails underflow harmlessly.
    const double nd = static_cast<double>(n);
    std::size_t mode = static_cast<std::size_t>((nd + 1.0) * p);
    mode = std::min(mode, n);
    const double odds = p / (1.0 - p);

    pmf[mode] = 1.0;
    for (std::size_t k = mode; k < n; ++k)
        pmf[k + 1] = pmf[k] * (nd - static_cast<double>(k)) /
                     (static_cast<double>(k) + 1.0) * odds;
    for (std::size_t k = mode; k > 0; --k)
        pmf[k - 1] = pmf[k] * static_cast<double>(k) /
                     ((nd - static_cast<double>(k) + 1.0) * odds);

    const double total = accurate_sum(pmf);
    for (double& v : pmf)
        v /= total;
    return pmf;
}

std::vector<double> poisson_binomial_pmf(std::span<const double> probs,
                                         bool probs_equal) {
    const std::size_t n = probs.size();
    if (n == 0)
        return {1.0};
    if (n > kPoissonBinomialMaxN)
        throw CapacityError(
            "poisson_binomial_pmf: N = " + std::to_string(n) + " exceeds " +
            std::to_string(kPoissonBinomialMaxN) +
            "; use mc_loss_distribution for portfolios of this size");
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("poisson_binomial_pmf: probability outside [0,1]");

    if (probs_equal) {
        for (double p : probs)
            if (p != probs[0])
                throw DomainError(
                    "poisson_binomial_pmf: probs_equal set but probabilities differ");
        return binomial_pmf_vector(n, probs[0]);
    }

    std::vector<double> pmf(n + 1, 0.0);
    pmf[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = probs[i];
        const double q = 1.0 - p;
        // descending so the previous layer is still on the right-hand side
        for (std::size_t k = i + 1; k >= 1; --k)
            pmf[k] = pmf[k] * q + pmf[k - 1] * p;
        pmf[0] *= q;
    }
    return pmf;
}

namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix, tracking only the
// first row of the accumulated eigenvector product (all that Golub-Welsch
// weights need). d: diagonal, e: subdiagonal (e[i] couples i and i+1),
// z: first-row tracker.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw DomainError("gauss_hermite_rule: eigenvalue iteration failed");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l)
                    continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

QuadratureRule gauss_hermite_rule(std::size_t n_nodes) {
    if (n_nodes < 2 || n_nodes > 256)
        throw DomainError("gauss_hermite_rule: node count must lie in [2, 256]");

    // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
    // polynomials (weight = standard normal density): zero diagonal,
    // subdiagonal sqrt(k). Eigenvalues are the nodes in N(0,1) scale;
    // squared first eigenvector components are the weights.
    const std::size_t n = n_nodes;
    std::vector<double> d(n, 0.0), e(n - 1), z(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        e[i] = std::sqrt(static_cast<double>(i + 1));
    z[0] = 1.0;
    tridiagonal_ql(d, e, z);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = d[order[i]];
        rule.weights[i] = z[order[i]] * z[order[i]];
    }
    const double total = accurate_sum(rule.weights);
    for (double& v : rule.weights)
        v /= total;
    return rule;
}

NormalSampler::NormalSampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    gen_.seed(seq);
}

}  // namespace creditcap
