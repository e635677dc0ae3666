#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailforge/convolve.hpp"
#include "tailforge/diag.hpp"
#include "tailforge/distribution.hpp"

namespace tailforge::io {

enum class Format { csv, json };

Format format_from_string(const std::string& s);

/// Grid text: "1,2,5", "geom:lo:hi:count" or "lin:lo:hi:count".
std::vector<double> parse_grid(const std::string& text);

/// %.17g, with inf / -inf / nan spelled out.
std::string fmt(double v);

/// Replaces non-finite numbers by the strings "inf", "-inf", "nan".
nlohmann::json sanitize(const nlohmann::json& j);

/// Indented JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const;
    nlohmann::json to_json() const;
};

/// Columns: param, value[, window].
Table table(const DiagSeries& s);
/// Columns: x, log_lower, log_upper.
Table table(const BracketGrid& g);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

void export_table(const Table& t, Format f, const std::string& path);
void export_grid(const DiagSeries& s, Format f, const std::string& path);
void export_grid(const BracketGrid& g, Format f, const std::string& path);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Bracket grids cached under $TAILFORGE_CACHE_DIR (no caching when unset).
/// Each file is one JSON header line (schema, spec hash, grid key) followed
/// by "x,log_lower,log_upper" lines in %.17g.
BracketGrid cached_convn_tail_grid(const Distribution& d, int n, double x_max, double h,
                                   const GridLimits& lim = {});
BracketGrid cached_trunc_convn_tail_grid(const Distribution& d, int n, double cap, double x_max, double h,
                                         const GridLimits& lim = {});

}  // namespace tailforge::io
