#include "creditcap/portfolio_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "creditcap/errors.hpp"

namespace creditcap {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    for (std::string& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = (b == std::string::npos) ? std::string{} : f.substr(b, e - b + 1);
    }
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no, const std::string& field) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ": field '" + field +
                         "' is not a number: '" + s + "'");
    return v;
}

FactorModel load_factor_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open factor model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("factor model file " + path + ": " + e.what());
    }
    if (!j.contains("k") || !j.contains("cov"))
        throw ParseError("factor model file " + path + ": expected keys 'k' and 'cov'");

    FactorModel fm;
    fm.k = j["k"].get<std::size_t>();
    const auto& rows = j["cov"];
    if (!rows.is_array() || rows.size() != fm.k)
        throw ParseError("factor model file " + path + ": 'cov' must be a k x k matrix");
    fm.covariance.reserve(fm.k * fm.k);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != fm.k)
            throw ParseError("factor model file " + path + ": 'cov' must be a k x k matrix");
        for (const auto& v : row)
            fm.covariance.push_back(v.get<double>());
    }
    return fm;
}

}  // namespace

Portfolio load_portfolio(const std::string& csv_path, const LoadOptions& opt) {
    std::ifstream in(csv_path);
    if (!in)
        throw ParseError("cannot open portfolio file: " + csv_path);

    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw ParseError(csv_path + ": empty portfolio file");

    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "id" || header[1] != "exposure" ||
        header[2] != "ttc_pd" || header[3] != "rho" || header[4] != "w1")
        throw ParseError(csv_path +
                         ": header must be 'id,exposure,ttc_pd,rho,w1[,w2,...]'");
    for (std::size_t j = 4; j < header.size(); ++j) {
        const std::string want = "w" + std::to_string(j - 3);
        if (header[j] != want)
            throw ParseError(csv_path + ": weight column " + std::to_string(j + 1) +
                             " must be named '" + want + "'");
    }
    const std::size_t n_weights = header.size() - 4;

    Portfolio p;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(f.size()));
        Obligor o;
        o.id = f[0];
        o.exposure = parse_double(f[1], line_no, "exposure");
        o.ttc_pd = parse_double(f[2], line_no, "ttc_pd");
        o.sensitivity = parse_double(f[3], line_no, "rho");
        o.factor_weights.reserve(n_weights);
        for (std::size_t j = 0; j < n_weights; ++j)
            o.factor_weights.push_back(parse_double(f[4 + j], line_no, header[4 + j]));
        p.obligors.push_back(std::move(o));
    }
    if (p.obligors.empty())
        throw ParseError(csv_path + ": no obligor rows");

    p.factor_model = opt.factors_path ? load_factor_model(*opt.factors_path)
                                      : FactorModel::identity(n_weights);
    if (p.factor_model.k != n_weights)
        throw ParseError(csv_path + ": portfolio has " + std::to_string(n_weights) +
                         " weight columns but the factor model has k = " +
                         std::to_string(p.factor_model.k));

    if (opt.normalize) {
        normalize_exposures(p);
        normalize_factor_weights(p);
    }

    const std::vector<ValidationIssue> issues = validate_portfolio(p);
    if (!issues.empty()) {
        std::ostringstream os;
        os << csv_path << ": " << issues.size() << " validation issue(s):";
        for (const ValidationIssue& i : issues)
            os << "\n  [" << i.where << "] " << i.message;
        throw ValidationError(os.str());
    }
    return p;
}

}  // namespace creditcap
