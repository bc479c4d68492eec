#include "creditcap/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace creditcap {

std::string format_percent(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, value * 100.0);
    return buf;
}

std::string format_alpha(double alpha) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", alpha * 100.0);
    std::string s = buf;
    while (!s.empty() && s.back() == '0')
        s.pop_back();
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s + "%";
}

nlohmann::ordered_json report_to_json(const CapitalReport& r, const ReportMeta& meta,
                                      const Rounding& rounding) {
    nlohmann::ordered_json j;
    j["meta"]["mode"] = meta.mode;
    j["meta"]["scenario"] = meta.scenario;
    j["meta"]["engine"] = meta.engine;
    if (meta.seed)
        j["meta"]["seed"] = *meta.seed;
    if (meta.workers)
        j["meta"]["workers"] = *meta.workers;
    j["el"] = r.expected_loss;
    j["mean_input_pd"] = r.mean_input_pd;
    j["entries"] = nlohmann::ordered_json::array();
    for (const CapitalEntry& e : r.entries) {
        nlohmann::ordered_json je;
        je["alpha"] = e.alpha;
        je["var"] = e.var;
        je["ec"] = e.ec;
        je["label"] = e.label;
        if (e.ec < 0.0)
            je["ec_negative"] = true;
        je["display"]["var"] = format_percent(e.var, rounding.var_decimals);
        je["display"]["ec"] = format_percent(e.ec, rounding.ec_decimals);
        j["entries"].push_back(std::move(je));
    }
    j["display"]["el"] = format_percent(r.expected_loss, rounding.ec_decimals);
    j["display"]["mean_input_pd"] = format_percent(r.mean_input_pd, rounding.ec_decimals);
    return j;
}

std::string render_markdown(const CapitalReport& r, const ReportMeta& meta,
                            const Rounding& rounding) {
    std::ostringstream os;
    os << "mode: " << meta.mode << "   scenario: " << meta.scenario
       << "   engine: " << meta.engine;
    if (meta.seed)
        os << "   seed: " << *meta.seed;
    os << "\n\n";
    os << "| Metric | Value |\n|---|---|\n";
    os << "| Input PD (mean) | " << format_percent(r.mean_input_pd, rounding.ec_decimals)
       << " |\n";
    os << "| Expected loss | " << format_percent(r.expected_loss, rounding.ec_decimals)
       << " |\n";
    for (const CapitalEntry& e : r.entries) {
        os << "| VaR (" << format_alpha(e.alpha) << ") | "
           << format_percent(e.var, rounding.var_decimals) << " |\n";
        os << "| " << e.label << " capital (" << format_alpha(e.alpha) << ") | "
           << format_percent(e.ec, rounding.ec_decimals)
           << (e.ec < 0.0 ? " [negative]" : "") << " |\n";
    }
    return os.str();
}

std::string render_csv(const CapitalReport& r, const ReportMeta& meta) {
    std::ostringstream os;
    char buf[64];
    auto full = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "# mode=" << meta.mode << " scenario=" << meta.scenario
       << " engine=" << meta.engine;
    if (meta.seed)
        os << " seed=" << *meta.seed;
    os << "\nquantity,alpha,label,value\n";
    os << "mean_input_pd,,," << full(r.mean_input_pd) << "\n";
    os << "expected_loss,,," << full(r.expected_loss) << "\n";
    for (const CapitalEntry& e : r.entries) {
        os << "var," << full(e.alpha) << ',' << e.label << ',' << full(e.var) << "\n";
        os << "ec," << full(e.alpha) << ',' << e.label << ',' << full(e.ec) << "\n";
    }
    return os.str();
}

std::string render(const CapitalReport& r, const ReportMeta& meta, OutputFormat fmt,
                   const Rounding& rounding) {
    switch (fmt) {
        case OutputFormat::Markdown:
            return render_markdown(r, meta, rounding);
        case OutputFormat::Csv:
            return render_csv(r, meta);
        case OutputFormat::Json:
            return report_to_json(r, meta, rounding).dump(2) + "\n";
    }
    return {};
}

}  // namespace creditcap
