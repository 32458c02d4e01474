#include "lstmsv/io.hpp"
#include "lstmsv/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lstmsv::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view field, double& out) noexcept {
    field = trim(field);
    if (field.empty()) return false;
    if (field.front() == '+') field.remove_prefix(1);
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    return res.ec == std::errc{} && res.ptr == field.data() + field.size();
}

SeriesFile read_series(const std::filesystem::path& path) {
    auto in = open_in(path);
    SeriesFile f;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    bool labelled = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto fields = split_csv(body);
        double v = 0.0;
        const bool ok = parse_double(fields.back(), v);
        if (first) {
            first = false;
            labelled = fields.size() >= 2;
            if (!ok) continue;  // header
            if (labelled) {
                double dummy = 0.0;
                labelled = !parse_double(fields.front(), dummy);
                if (!labelled) throw ParseError("expected one value or label,value", lineno);
            }
        }
        if (!ok) throw ParseError("non-numeric value '" + std::string(fields.back()) + "'", lineno);
        if (fields.size() != (labelled ? 2u : 1u)) throw ParseError("unexpected number of fields", lineno);
        if (labelled) f.labels.emplace_back(fields.front());
        f.values.push_back(v);
    }
    return f;
}

std::vector<std::pair<std::string, double>> read_named(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<std::pair<std::string, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto fields = split_csv(body);
        if (fields.size() != 2) throw ParseError("expected name,value", lineno);
        double v = 0.0;
        if (!parse_double(fields[1], v)) {
            if (rows.empty() && fields[0] == "name") continue;
            throw ParseError("non-numeric value for '" + std::string(fields[0]) + "'", lineno);
        }
        rows.emplace_back(std::string(fields[0]), v);
    }
    return rows;
}

models::ModelParams read_params(const std::filesystem::path& path, models::Model model) {
    const auto rows = read_named(path);
    const auto names = models::parameter_names(model);
    std::vector<double> v(names.size());
    std::vector<bool> seen(names.size(), false);
    for (const auto& [name, value] : rows) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw ConfigError("unknown parameter '" + name + "' for this model");
        const auto i = static_cast<std::size_t>(it - names.begin());
        if (seen[i]) throw ConfigError("parameter '" + name + "' given twice");
        seen[i] = true;
        v[i] = value;
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!seen[i]) throw ConfigError("missing parameter '" + names[i] + "'");
    auto p = models::from_vector(model, v);
    models::validate(p);
    return p;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value", lineno);
        const auto key = trim(body.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", lineno);
        kv[std::string(key)] = std::string(trim(body.substr(eq + 1)));
    }
    return kv;
}

void write_series(const std::filesystem::path& path, std::span<const double> values, const std::string& column) {
    auto out = open_out(path);
    out << column << '\n';
    for (double v : values) out << format_double(v) << '\n';
    finish(out, path);
}

void write_named(const std::filesystem::path& path, const std::vector<std::pair<std::string, double>>& rows) {
    auto out = open_out(path);
    out << "name,value\n";
    for (const auto& [name, value] : rows) out << name << ',' << format_double(value) << '\n';
    finish(out, path);
}

void write_params(const std::filesystem::path& path, const models::ModelParams& p) {
    const auto names = models::parameter_names(models::model_of(p));
    const auto v = models::to_vector(p);
    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t i = 0; i < names.size(); ++i) rows.emplace_back(names[i], v[i]);
    write_named(path, rows);
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw SizeError("table header and columns disagree");
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != n) throw SizeError("table columns have different lengths");
    auto out = open_out(path);
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_double(columns[j][i]);
        out << '\n';
    }
    finish(out, path);
}

void write_chain(const std::filesystem::path& path, const mcmc::ChainDraws& chain,
                 std::span<const std::size_t> rows) {
    auto out = open_out(path);
    for (const auto& n : chain.names) out << n << ',';
    out << "loglik,accepted\n";
    for (std::size_t r : rows) {
        if (r >= chain.completed) throw SizeError("chain row out of range");
        const auto i = static_cast<Eigen::Index>(r);
        for (Eigen::Index j = 0; j < chain.constrained.cols(); ++j) out << format_double(chain.constrained(i, j)) << ',';
        out << format_double(chain.logliks[r]) << ',' << static_cast<int>(chain.accepted[r]) << '\n';
    }
    finish(out, path);
}

ChainFile read_chain(const std::filesystem::path& path) {
    auto in = open_in(path);
    ChainFile f;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto fields = split_csv(body);
        if (width == 0) {
            if (fields.size() < 3 || fields[fields.size() - 2] != "loglik" || fields.back() != "accepted")
                throw ParseError("chain header must end with loglik,accepted", lineno);
            width = fields.size();
            for (std::size_t j = 0; j + 2 < width; ++j) f.names.emplace_back(fields[j]);
            continue;
        }
        if (fields.size() != width) throw ParseError("chain row has the wrong number of fields", lineno);
        std::vector<double> row(width - 2);
        for (std::size_t j = 0; j + 2 < width; ++j)
            if (!parse_double(fields[j], row[j])) throw ParseError("non-numeric chain value", lineno);
        double ll = 0.0;
        if (!parse_double(fields[width - 2], ll)) throw ParseError("non-numeric loglik", lineno);
        f.draws.push_back(std::move(row));
        f.logliks.push_back(ll);
    }
    if (width == 0) throw ParseError("empty chain file", lineno);
    return f;
}

void write_sidecar(const std::filesystem::path& path, const std::map<std::string, std::string>& entries) {
    auto out = open_out(path);
    for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
    finish(out, path);
}

}  // namespace lstmsv::io
