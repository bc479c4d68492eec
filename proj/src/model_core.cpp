#include "creditcap/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "creditcap/errors.hpp"
#include "creditcap/math_kernel.hpp"

namespace creditcap {

FactorModel FactorModel::identity(std::size_t k) {
    FactorModel fm;
    fm.k = k;
    fm.covariance.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        fm.covariance[i * k + i] = 1.0;
    return fm;
}

double FactorModel::factor_variance(std::span<const double> w) const {
    if (w.size() != k)
        throw DomainError("factor_variance: weight vector length does not match k");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            acc += w[i] * cov(i, j) * w[j];
    return acc;
}

bool FactorModel::symmetric_within(double tol) const {
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (std::fabs(cov(i, j) - cov(j, i)) > tol)
                return false;
    return true;
}

std::vector<double> FactorModel::cholesky_factor() const {
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        scale = std::max(scale, std::fabs(cov(i, i)));
    const double pivot_floor = -1e-10 * std::max(scale, 1.0);

    std::vector<double> L(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = cov(i, j);
            for (std::size_t m = 0; m < j; ++m)
                acc -= L[i * k + m] * L[j * k + m];
            if (i == j) {
                if (acc < pivot_floor)
                    throw DomainError("cholesky_factor: covariance is not positive semidefinite");
                L[i * k + i] = std::sqrt(std::max(acc, 0.0));
            } else {
                L[i * k + j] = (L[j * k + j] > 0.0) ? acc / L[j * k + j] : 0.0;
            }
        }
    }
    return L;
}

bool Portfolio::equal_exposures() const {
    for (const Obligor& o : obligors)
        if (o.exposure != obligors.front().exposure)
            return false;
    return true;
}

ProbitModel ProbitModel::from_loading(std::vector<double> scores,
                                      std::vector<double> loading,
                                      const FactorModel& fm) {
    ProbitModel pm;
    pm.var_bs = fm.factor_variance(loading);
    pm.scores = std::move(scores);
    pm.loading = std::move(loading);
    return pm;
}

Scenario Scenario::unconditional() {
    return Scenario{};
}

Scenario Scenario::fixed(std::vector<double> s) {
    for (double v : s)
        if (!std::isfinite(v))
            throw DomainError("Scenario::fixed: factor realisation must be finite");
    Scenario sc;
    sc.kind = ScenarioKind::Fixed;
    sc.fixed_values = std::move(s);
    return sc;
}

Scenario Scenario::truncated(std::vector<FactorInterval> box) {
    for (const FactorInterval& iv : box)
        if (!(iv.low < iv.high))
            throw DomainError("Scenario::truncated: each interval needs low < high");
    Scenario sc;
    sc.kind = ScenarioKind::Truncated;
    sc.box = std::move(box);
    return sc;
}

namespace {

constexpr double kExposureSumTol = 1e-9;
constexpr double kWeightVarTol = 1e-8;
constexpr double kCovSymmetryTol = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

std::vector<ValidationIssue> validate_portfolio(const Portfolio& p) {
    std::vector<ValidationIssue> issues;
    const FactorModel& fm = p.factor_model;

    if (fm.k < 1 || fm.covariance.size() != fm.k * fm.k) {
        issues.push_back({"factor_model", "covariance is not a k x k matrix"});
        return issues;  // nothing downstream is checkable
    }
    if (!fm.symmetric_within(kCovSymmetryTol))
        issues.push_back({"factor_model", "covariance is not symmetric"});
    else {
        try {
            fm.cholesky_factor();
        } catch (const DomainError&) {
            issues.push_back({"factor_model", "covariance is not positive semidefinite"});
        }
    }

    if (p.obligors.empty())
        issues.push_back({"portfolio", "no obligors"});

    std::vector<double> exposures;
    exposures.reserve(p.size());
    for (const Obligor& o : p.obligors) {
        if (!(o.exposure > 0.0))
            issues.push_back({o.id, "exposure must be > 0, got " + fmt(o.exposure)});
        else
            exposures.push_back(o.exposure);
        if (!(o.ttc_pd > 0.0 && o.ttc_pd < 1.0))
            issues.push_back({o.id, "ttc_pd must lie in (0,1), got " + fmt(o.ttc_pd)});
        if (!(std::fabs(o.sensitivity) < 1.0))
            issues.push_back(
                {o.id, "sensitivity must lie strictly inside (-1,1), got " +
                           fmt(o.sensitivity)});
        if (o.factor_weights.size() != fm.k) {
            issues.push_back({o.id, "factor weight count does not match k"});
            continue;
        }
        const double var = fm.factor_variance(o.factor_weights);
        if (std::fabs(var - 1.0) > kWeightVarTol)
            issues.push_back(
                {o.id, "factor weights not normalized: var[w'S] = " + fmt(var)});
    }

    if (!p.obligors.empty()) {
        const double total = accurate_sum(exposures);
        if (std::fabs(total - 1.0) > kExposureSumTol)
            issues.push_back(
                {"portfolio", "exposures sum to " + fmt(total) + ", expected 1"});
    }
    return issues;
}

double threshold_from_ttc_pd(double pd) {
    if (!(pd > 0.0 && pd < 1.0))
        throw DomainError("threshold_from_ttc_pd: pd must lie in (0,1)");
    return std_normal_quantile(pd);
}

double ttc_pd_from_threshold(double threshold) {
    return std_normal_cdf(threshold);
}

void normalize_factor_weights(Portfolio& p) {
    for (Obligor& o : p.obligors) {
        const double var = p.factor_model.factor_variance(o.factor_weights);
        if (!(var > 0.0))
            throw DomainError("normalize_factor_weights: var[w'S] = 0 for obligor " + o.id);
        const double scale = 1.0 / std::sqrt(var);
        for (double& w : o.factor_weights)
            w *= scale;
    }
}

void normalize_exposures(Portfolio& p) {
    std::vector<double> exposures;
    exposures.reserve(p.size());
    for (const Obligor& o : p.obligors)
        exposures.push_back(o.exposure);
    const double total = accurate_sum(exposures);
    if (!(total > 0.0))
        throw DomainError("normalize_exposures: exposures sum to zero");
    for (Obligor& o : p.obligors)
        o.exposure /= total;
}

}  // namespace creditcap
