#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "creditcap/capital_engine.hpp"

namespace creditcap {

/// Stylised benchmark portfolio: 100 equally weighted assets (1% exposure,
/// full loss on default), one systematic factor, sensitivity 50%.
Portfolio benchmark_portfolio(double ttc_pd, double sensitivity = 0.5);

/// Adverse factor value used throughout the benchmark ("1 in 100" scenario).
inline constexpr double kBenchmarkFactorValue = -2.33;

/// Bank solvency target (TTC) behind the 99.9% confidence level.
inline constexpr double kBenchmarkTargetPd = 0.001;

struct Table1Options {
    EngineKind engine = EngineKind::Quadrature;  // Quadrature or Mc
    std::size_t quad_nodes = kDefaultLossQuadNodes;
    std::uint64_t sims = 10'000'000;
    std::uint64_t seed = 42;
    unsigned workers = 0;
};

struct Table1Cell {
    std::string name;
    double expected;   // percent
    double computed;   // percent
    double tolerance;  // percent points
    bool ok;
};

struct Table1Run {
    std::vector<Table1Cell> cells;
    std::string rendered;
    bool all_ok = true;
};

/// Self-checking golden run of the benchmark capital table: three panels
/// (TTC analysis; PIT input with TTC calculation; TTC input with PIT
/// calculation at the adverse factor value), each over investment-grade
/// (0.3%) and sub-investment-grade (3%) asset PDs. The PIT confidence
/// levels are derived from the bank target PD with sensitivities 50% and
/// sqrt(50%), exactly like the asset PD transform.
Table1Run reproduce_table1(const Table1Options& opt = {});

}  // namespace creditcap
