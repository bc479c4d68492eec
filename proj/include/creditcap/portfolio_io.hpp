#pragma once

#include <optional>
#include <string>

#include "creditcap/model_core.hpp"

namespace creditcap {

struct LoadOptions {
    std::optional<std::string> factors_path;  // sidecar covariance JSON
    bool normalize = false;  // rescale exposures to sum 1 and weights to var 1
};

/// Reads a portfolio CSV with the header
///   id,exposure,ttc_pd,rho,w1[,w2,...]
/// plus an optional factor-model sidecar {"k": <int>, "cov": [[...], ...]}
/// (identity covariance with k = number of weight columns by default).
/// Throws ParseError on malformed input (with line/field context) and
/// ValidationError when the parsed portfolio violates model invariants.
Portfolio load_portfolio(const std::string& csv_path, const LoadOptions& opt = {});

}  // namespace creditcap
