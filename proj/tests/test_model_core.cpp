#include <doctest.h>

#include <cmath>

#include "creditcap/errors.hpp"
#include "creditcap/model_core.hpp"
#include "creditcap/table1.hpp"
#include "oracles.hpp"

using namespace creditcap;

TEST_CASE("benchmark portfolios pass validation") {
    for (double pd : {0.03, 0.003}) {
        const Portfolio p = benchmark_portfolio(pd);
        CHECK(validate_portfolio(p).empty());
        CHECK(p.equal_exposures());
        CHECK(p.size() == 100);
    }
}

TEST_CASE("validation flags exposure-sum violations") {
    Portfolio p = benchmark_portfolio(0.03);
    for (Obligor& o : p.obligors)
        o.exposure = 0.009;  // sums to 0.9
    const auto issues = validate_portfolio(p);
    REQUIRE(!issues.empty());
    bool found = false;
    for (const auto& i : issues)
        found = found || (i.where == "portfolio" && i.message.find("sum") != std::string::npos);
    CHECK(found);
}

TEST_CASE("validation flags unnormalized factor weights") {
    Portfolio p = benchmark_portfolio(0.03);
    p.obligors[7].factor_weights = {2.0};  // var[w'S] = 4
    const auto issues = validate_portfolio(p);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].where == p.obligors[7].id);
    CHECK(issues[0].message.find("normalized") != std::string::npos);
}

TEST_CASE("validation rejects out-of-range PDs and sensitivities") {
    Portfolio p = benchmark_portfolio(0.03);
    p.obligors[0].ttc_pd = 1.5;
    p.obligors[1].sensitivity = 1.0;   // boundary is rejected
    p.obligors[2].sensitivity = -1.0;  // both signs
    p.obligors[3].exposure = 0.0;
    const auto issues = validate_portfolio(p);
    CHECK(issues.size() >= 4);
}

TEST_CASE("negative sensitivities are accepted") {
    Portfolio p = benchmark_portfolio(0.03, -0.5);
    CHECK(validate_portfolio(p).empty());
}

TEST_CASE("threshold <-> PD round trip") {
    CHECK(threshold_from_ttc_pd(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(threshold_from_ttc_pd(0.003) == doctest::Approx(-2.7478).epsilon(1e-4));
    CHECK(threshold_from_ttc_pd(0.03) == doctest::Approx(-1.8808).epsilon(1e-4));

    // bisection oracle on the CDF
    const double t = oracles::quantile_bisect(
        [](double x) { return std_normal_cdf(x); }, 0.003);
    CHECK(threshold_from_ttc_pd(0.003) == doctest::Approx(t).epsilon(1e-9));

    for (double pd = 1e-6; pd < 1.0; pd += 0.0137)
        CHECK(ttc_pd_from_threshold(threshold_from_ttc_pd(pd)) ==
              doctest::Approx(pd).epsilon(1e-10));

    CHECK_THROWS_AS(threshold_from_ttc_pd(0.0), DomainError);
    CHECK_THROWS_AS(threshold_from_ttc_pd(1.0), DomainError);
}

TEST_CASE("factor model covariance helpers") {
    FactorModel fm;
    fm.k = 2;
    fm.covariance = {1.0, 0.3, 0.3, 1.0};
    CHECK(fm.symmetric_within(1e-12));

    const std::vector<double> w{0.5, 0.5};
    CHECK(fm.factor_variance(w) == doctest::Approx(0.65).epsilon(1e-14));

    const auto L = fm.cholesky_factor();
    // L L' = cov
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < 2; ++m)
                acc += L[i * 2 + m] * L[j * 2 + m];
            CHECK(acc == doctest::Approx(fm.cov(i, j)).epsilon(1e-14));
        }
    }

    FactorModel bad;
    bad.k = 2;
    bad.covariance = {1.0, 2.0, 2.0, 1.0};  // indefinite
    CHECK_THROWS_AS(bad.cholesky_factor(), DomainError);

    FactorModel semi;
    semi.k = 2;
    semi.covariance = {1.0, 1.0, 1.0, 1.0};  // rank one is fine
    CHECK_NOTHROW(semi.cholesky_factor());
}

TEST_CASE("scenario constructors validate their inputs") {
    CHECK(Scenario::unconditional().kind == ScenarioKind::Unconditional);
    CHECK(Scenario::fixed({-2.33}).fixed_values[0] == -2.33);
    CHECK_THROWS_AS(Scenario::fixed({std::nan("")}), DomainError);
    CHECK_NOTHROW(Scenario::truncated({{-INFINITY, -1.0}}));
    CHECK_THROWS_AS(Scenario::truncated({{1.0, 1.0}}), DomainError);
}

TEST_CASE("normalization helpers") {
    Portfolio p = benchmark_portfolio(0.03);
    for (Obligor& o : p.obligors) {
        o.exposure = 42.0;
        o.factor_weights = {3.0};
    }
    normalize_exposures(p);
    normalize_factor_weights(p);
    CHECK(validate_portfolio(p).empty());
}

TEST_CASE("ProbitModel::from_loading derives var[b'S]") {
    FactorModel fm;
    fm.k = 2;
    fm.covariance = {2.0, 0.5, 0.5, 1.0};
    const ProbitModel pm = ProbitModel::from_loading({-3.0}, {0.2, -0.4}, fm);
    // b' Cov b = 0.04*2 + 2*0.2*(-0.4)*0.5 + 0.16*1
    CHECK(pm.var_bs == doctest::Approx(0.08 - 0.08 + 0.16).epsilon(1e-12));
}
