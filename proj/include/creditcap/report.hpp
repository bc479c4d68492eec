#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "creditcap/capital_engine.hpp"

namespace creditcap {

enum class OutputFormat { Markdown, Csv, Json };

struct ReportMeta {
    std::string mode;
    std::string scenario;
    std::string engine;
    std::optional<std::uint64_t> seed;     // mc engine only
    std::optional<unsigned> workers;       // mc engine only
};

/// Display decimal places. The defaults are the reference-table formats
/// (VaR at whole percent, capital and PDs at one decimal); an explicit
/// override applies the same count everywhere.
struct Rounding {
    int var_decimals = 0;
    int ec_decimals = 1;

    static Rounding uniform(int decimals) { return {decimals, decimals}; }
};

/// Display conventions follow the reference table: VaR as whole percent,
/// capital and expected loss at one decimal percent.
std::string format_percent(double value, int decimals);

/// Confidence level as a percent with trailing zeros trimmed (99.9%, 98.69%).
std::string format_alpha(double alpha);

/// Stable machine-readable form. Full-precision numbers are emitted with
/// shortest-round-trip formatting (re-parsing reproduces them bit-exactly);
/// display-rounded strings ride along under "display".
nlohmann::ordered_json report_to_json(const CapitalReport& r, const ReportMeta& meta,
                                      const Rounding& rounding = {});

std::string render_markdown(const CapitalReport& r, const ReportMeta& meta,
                            const Rounding& rounding = {});
std::string render_csv(const CapitalReport& r, const ReportMeta& meta);
std::string render(const CapitalReport& r, const ReportMeta& meta, OutputFormat fmt,
                   const Rounding& rounding = {});

}  // namespace creditcap
