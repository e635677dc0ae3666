#include "tailforge/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tailforge/errors.hpp"
#include "tailforge/functionals.hpp"

namespace tailforge::io {

Format format_from_string(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ParameterError("unknown format '" + s + "' (expected csv or json)");
}

std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& tok) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) throw ParameterError("grid '" + text + "': bad number '" + tok + "'");
        return v;
    };
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::size_t start = 0;
        for (;;) {
            const std::size_t k = s.find(sep, start);
            out.push_back(s.substr(start, k - start));
            if (k == std::string::npos) break;
            start = k + 1;
        }
        return out;
    };
    if (text.rfind("geom:", 0) == 0 || text.rfind("lin:", 0) == 0) {
        const auto parts = split(text, ':');
        if (parts.size() != 4) throw ParameterError("grid '" + text + "': expected kind:lo:hi:count");
        const double lo = number(parts[1]);
        const double hi = number(parts[2]);
        const double count = number(parts[3]);
        if (count < 1 || count != std::floor(count)) throw ParameterError("grid '" + text + "': count must be a positive integer");
        if (!(hi >= lo)) throw ParameterError("grid '" + text + "': needs lo <= hi");
        if (parts[0] == "geom") {
            if (!(lo > 0)) throw ParameterError("grid '" + text + "': geometric grid needs lo > 0");
            return geometric_grid(lo, hi, static_cast<int>(count));
        }
        return linear_grid(lo, hi, static_cast<int>(count));
    }
    std::vector<double> out;
    for (const auto& tok : split(text, ',')) out.push_back(number(tok));
    if (out.empty()) throw ParameterError("empty grid");
    return out;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json sanitize(const nlohmann::json& j) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) return fmt(v);
        return j;
    }
    if (j.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& e : j) out.push_back(sanitize(e));
        return out;
    }
    if (j.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = sanitize(it.value());
        return out;
    }
    return j;
}

std::string dump(const nlohmann::json& j) { return sanitize(j).dump(2) + "\n"; }

std::string Table::csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
        out += "\n";
    }
    return out;
}

nlohmann::json Table::to_json() const {
    nlohmann::json j;
    j["columns"] = columns;
    j["rows"] = rows;
    return j;
}

Table table(const DiagSeries& s) {
    Table t;
    t.columns = {s.param_name, "value"};
    const bool win = !s.windows.empty();
    if (win) t.columns.push_back("window");
    for (std::size_t i = 0; i < s.params.size(); ++i) {
        std::vector<std::string> r{fmt(s.params[i]), fmt(s.values[i])};
        if (win) r.push_back(s.windows[i]);
        t.rows.push_back(std::move(r));
    }
    return t;
}

Table table(const BracketGrid& g) {
    Table t;
    t.columns = {"x", "log_lower", "log_upper"};
    for (std::size_t i = 0; i < g.grid.size(); ++i) t.rows.push_back({fmt(g.grid[i]), fmt(g.lower[i]), fmt(g.upper[i])});
    return t;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing: " + std::strerror(errno));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw IoError("write to " + path + " failed");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for reading: " + std::strerror(errno));
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void export_table(const Table& t, Format f, const std::string& path) {
    write_file(path, f == Format::csv ? t.csv() : dump(t.to_json()));
}

void export_grid(const DiagSeries& s, Format f, const std::string& path) {
    if (f == Format::csv)
        write_file(path, table(s).csv());
    else
        write_file(path, dump(s.to_json()));
}

void export_grid(const BracketGrid& g, Format f, const std::string& path) { export_table(table(g), f, path); }

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

constexpr const char* cache_schema = "tailforge/grid-cache@1";

double parse_number(const std::string& s) {
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return std::strtod(s.c_str(), nullptr);
}

std::optional<BracketGrid> read_cache(const std::string& path, const nlohmann::json& header) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::string line;
    if (!std::getline(f, line)) return std::nullopt;
    nlohmann::json h = nlohmann::json::parse(line, nullptr, false);
    if (h.is_discarded() || h.value("schema", "") != cache_schema || h["key"] != header["key"]) return std::nullopt;
    BracketGrid g;
    g.n = h["key"]["n"];
    g.h = h["step"];
    g.cap = parse_number(h["key"]["cap"]);
    g.total = h["total"];
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == 'x') continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) return std::nullopt;
        g.grid.push_back(parse_number(line.substr(0, c1)));
        g.lower.push_back(parse_number(line.substr(c1 + 1, c2 - c1 - 1)));
        g.upper.push_back(parse_number(line.substr(c2 + 1)));
    }
    if (g.grid.size() != h.value("rows", std::size_t{0})) return std::nullopt;
    return g;
}

template <class Compute>
BracketGrid with_cache(const Distribution& d, int n, double cap, double x_max, double h, Compute compute) {
    const char* dir = std::getenv("TAILFORGE_CACHE_DIR");
    if (!dir || !*dir) return compute();
    const std::string spec_text = to_json(d.spec()).dump();
    nlohmann::json header;
    header["schema"] = cache_schema;
    header["spec_hash"] = fnv1a_hex(spec_text);
    header["key"] = {{"spec", spec_text}, {"n", n}, {"cap", fmt(cap)}, {"x_max", fmt(x_max)}, {"h", fmt(h)}};
    const std::string key_hash = fnv1a_hex(header["key"].dump());
    std::filesystem::path path = std::filesystem::path(dir) / ("grid-" + key_hash + ".csv");
    if (auto g = read_cache(path.string(), header)) return *g;
    BracketGrid g = compute();
    header["step"] = g.h;
    header["total"] = g.total;
    header["rows"] = g.grid.size();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(std::string("cannot create cache directory ") + dir + ": " + ec.message());
    write_file(path.string(), header.dump() + "\n" + table(g).csv());
    return g;
}

}  // namespace

BracketGrid cached_convn_tail_grid(const Distribution& d, int n, double x_max, double h, const GridLimits& lim) {
    return with_cache(d, n, INFINITY, x_max, h, [&] { return convn_tail_grid(d, n, x_max, h, lim); });
}

BracketGrid cached_trunc_convn_tail_grid(const Distribution& d, int n, double cap, double x_max, double h,
                                         const GridLimits& lim) {
    return with_cache(d, n, cap, x_max, h, [&] { return trunc_convn_tail_grid(d, n, cap, x_max, h, lim); });
}

}  // namespace tailforge::io
