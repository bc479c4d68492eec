#include "creditcap/pd_engine.hpp"

#include <cmath>
#include <string>

#include "creditcap/errors.hpp"

namespace creditcap {

double pit_pd_probit(double score, std::span<const double> loading,
                     std::span<const double> s) {
    if (loading.size() != s.size())
        throw DomainError("pit_pd_probit: loading and s have different lengths");
    if (!std::isfinite(score))
        throw DomainError("pit_pd_probit: non-finite score");
    double shift = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i]))
            throw DomainError("pit_pd_probit: non-finite factor realisation");
        shift += loading[i] * s[i];
    }
    return std_normal_cdf(score + shift);
}

CopulaParams probit_to_copula(const ProbitModel& pm, const FactorModel& fm) {
    if (pm.loading.size() != fm.k)
        throw DomainError("probit_to_copula: loading length does not match k");
    const double v = pm.var_bs;
    if (!(v > 0.0))
        throw DomainError(
            "probit_to_copula: var[b'S] = 0 (no systematic dependence); the "
            "equivalent copula model is rho = 0 with thresholds = scores");

    CopulaParams cp;
    const double inv_sqrt_1pv = 1.0 / std::sqrt(1.0 + v);
    cp.sensitivity = std::sqrt(v) * inv_sqrt_1pv;
    const double inv_sqrt_v = 1.0 / std::sqrt(v);
    cp.weights.resize(fm.k);
    for (std::size_t j = 0; j < fm.k; ++j)
        cp.weights[j] = -pm.loading[j] * inv_sqrt_v;
    cp.thresholds.resize(pm.scores.size());
    for (std::size_t i = 0; i < pm.scores.size(); ++i)
        cp.thresholds[i] = pm.scores[i] * inv_sqrt_1pv;
    return cp;
}

ProbitModel copula_to_probit(const CopulaParams& cp, const FactorModel& fm) {
    const double rho = cp.sensitivity;
    if (!(std::fabs(rho) < 1.0))
        throw DomainError("copula_to_probit: |rho| must be < 1");
    if (cp.weights.size() != fm.k)
        throw DomainError("copula_to_probit: weight length does not match k");

    ProbitModel pm;
    if (rho == 0.0) {
        // degenerate branch: defaults carry no systematic dependence
        pm.loading.assign(fm.k, 0.0);
        pm.var_bs = 0.0;
        pm.scores = cp.thresholds;
        return pm;
    }

    const double inv_sqrt = 1.0 / std::sqrt(1.0 - rho * rho);
    pm.var_bs = rho * rho * inv_sqrt * inv_sqrt;  // rho^2 / (1 - rho^2)
    pm.loading.resize(fm.k);
    for (std::size_t j = 0; j < fm.k; ++j)
        pm.loading[j] = -cp.weights[j] * rho * inv_sqrt;
    pm.scores.resize(cp.thresholds.size());
    for (std::size_t i = 0; i < cp.thresholds.size(); ++i)
        pm.scores[i] = cp.thresholds[i] * inv_sqrt;
    return pm;
}

double ttc_to_pit(double ttc_pd, double rho, double w_dot_s) {
    if (!(ttc_pd > 0.0 && ttc_pd < 1.0))
        throw DomainError("ttc_to_pit: ttc_pd must lie in (0,1)");
    if (!(std::fabs(rho) < 1.0))
        throw DomainError("ttc_to_pit: |rho| must be < 1");
    if (!std::isfinite(w_dot_s))
        throw DomainError("ttc_to_pit: non-finite factor value");
    if (rho == 0.0)
        return ttc_pd;
    const double t = std_normal_quantile(ttc_pd);
    return std_normal_cdf((t - rho * w_dot_s) / std::sqrt(1.0 - rho * rho));
}

double pit_to_ttc(double pit_pd, double rho, double w_dot_s) {
    if (!(pit_pd > 0.0 && pit_pd < 1.0))
        throw DomainError("pit_to_ttc: pit_pd must lie in (0,1)");
    if (!(std::fabs(rho) < 1.0))
        throw DomainError("pit_to_ttc: |rho| must be < 1");
    if (!std::isfinite(w_dot_s))
        throw DomainError("pit_to_ttc: non-finite factor value");
    if (rho == 0.0)
        return pit_pd;
    const double z = std_normal_quantile(pit_pd);
    return std_normal_cdf(z * std::sqrt(1.0 - rho * rho) + rho * w_dot_s);
}

TtcPdResult ttc_pd_by_integration(double score, double var_bs,
                                  const QuadratureRule& rule) {
    if (!(var_bs >= 0.0))
        throw DomainError("ttc_pd_by_integration: var_bs must be >= 0");
    if (!std::isfinite(score))
        throw DomainError("ttc_pd_by_integration: non-finite score");

    TtcPdResult res;
    res.closed_form = std_normal_cdf(score / std::sqrt(1.0 + var_bs));
    if (var_bs == 0.0) {
        res.quadrature = std_normal_cdf(score);
        return res;
    }
    const double sigma = std::sqrt(var_bs);
    res.quadrature =
        rule.integrate([&](double x) { return std_normal_cdf(score + sigma * x); });
    return res;
}

double naive_ttc_pd(double score) {
    return std_normal_cdf(score);
}

}  // namespace creditcap
