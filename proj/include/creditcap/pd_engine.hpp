#pragma once

#include <span>
#include <vector>

#include "creditcap/math_kernel.hpp"
#include "creditcap/model_core.hpp"

namespace creditcap {

/// Copula-side parameterization: sensitivity rho, unit-variance composite
/// weight vector w, and per-obligor default thresholds.
struct CopulaParams {
    double sensitivity = 0.0;
    std::vector<double> weights;
    std::vector<double> thresholds;
};

/// Point-in-time probit PD: Phi(score + b's).
/// Throws DomainError on dimension mismatch or non-finite s.
double pit_pd_probit(double score, std::span<const double> loading,
                     std::span<const double> s);

/// Probit -> copula direction of the parameter bijection:
///   rho = sqrt(v) / sqrt(1 + v),   v = var[b'S]
///   w   = -b / sqrt(v)
///   T_i = score_i * sqrt(1 - rho^2) = score_i / sqrt(1 + v)
/// Throws DomainError when var_bs = 0 (degenerate model with no systematic
/// dependence; the copula side of that model is rho = 0 with T_i = score_i).
CopulaParams probit_to_copula(const ProbitModel& pm, const FactorModel& fm);

/// Copula -> probit direction (exact inverse of probit_to_copula):
///   var[b'S] = rho^2 / (1 - rho^2)
///   b        = -w * rho / sqrt(1 - rho^2)
///   score_i  = T_i / sqrt(1 - rho^2)
/// rho = 0 is an explicit degenerate branch: b = 0, var_bs = 0, scores = T.
ProbitModel copula_to_probit(const CopulaParams& cp, const FactorModel& fm);

/// PIT PD conditional on the unit-variance composite factor value s = w'S:
///   Phi((Phi^{-1}(ttc_pd) - rho s) / sqrt(1 - rho^2)).
/// rho = 0 returns ttc_pd unchanged. Throws DomainError for |rho| >= 1 or
/// ttc_pd outside (0,1).
double ttc_to_pit(double ttc_pd, double rho, double w_dot_s);

/// Exact inverse of ttc_to_pit:
///   Phi(Phi^{-1}(pit_pd) sqrt(1 - rho^2) + rho s).
double pit_to_ttc(double pit_pd, double rho, double w_dot_s);

/// Through-the-cycle PD from a probit score, both as the quadrature value of
/// integral Phi(score + y) dP_{b'S}(y) and as the closed form
/// Phi(score / sqrt(1 + var_bs)); the two agree within 1e-8 for the rule
/// sizes used by this engine.
struct TtcPdResult {
    double quadrature;
    double closed_form;
};
TtcPdResult ttc_pd_by_integration(double score, double var_bs,
                                  const QuadratureRule& rule);

/// Phi(score): the biased shortcut that drops the systematic factors instead
/// of integrating them out. Underestimates the true TTC PD for score < 0.
double naive_ttc_pd(double score);

}  // namespace creditcap
