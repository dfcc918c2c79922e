#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "casimir/quadrature.hpp"
#include "casimir/stress.hpp"

// File formats: the curve CSV, JSON reports, the SVG chart and the result
// cache. Every writer is deterministic and locale independent.

namespace casimir {

/// One row of a force curve.
using CurveRow = ForceResult;

inline constexpr std::string_view kCurveHeader = "eta,f_eta,err_est,kappa_max,n_evals";

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

/// Strict parse of a full decimal field. Throws FormatError.
double parse_double(std::string_view text);

/// Header line plus one line per row, "\n" terminated.
std::string curve_to_csv(const std::vector<CurveRow>& rows);

/// Inverse of curve_to_csv. Throws FormatError for a missing or wrong header,
/// no data rows, a wrong field count, an unparsable field, or eta not
/// strictly increasing.
std::vector<CurveRow> curve_from_csv(std::string_view text);

nlohmann::json to_json(const ForceResult& r);
ForceResult force_result_from_json(const nlohmann::json& j);

struct SvgOptions {
    bool log_x = true;
    bool log_y = true;
    int width = 640;
    int height = 420;
};

/// Self-contained SVG line chart of f(eta) against eta: axes, decade (or
/// linear) ticks, labels and a single polyline with one point per row.
/// Throws FormatError if rows is empty or a log axis meets a value <= 0.
std::string curve_to_svg(const std::vector<CurveRow>& rows, const SvgOptions& opt);

/// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, std::string_view content);

/// Whole file as a string. Throws FormatError if it cannot be opened.
std::string read_file(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Hash of everything in a QuadratureSpec that affects force_exact.
std::string spec_hash(const QuadratureSpec& spec);

/// Map (eta, spec hash) -> ForceResult persisted as a JSON object. Doubles are
/// stored as shortest round-trip strings, so a hit is bit-identical to the
/// stored computation.
class ResultCache {
public:
    ResultCache() = default;

    /// Loads path if it exists; an absent file gives an empty cache. Throws
    /// FormatError if the file exists but is not a valid cache.
    static ResultCache load(const std::string& path);

    std::optional<ForceResult> find(double eta, const std::string& hash) const;
    void insert(const ForceResult& r, const std::string& hash);
    std::size_t size() const { return entries_.size(); }

    /// Atomic write, keys sorted.
    void save(const std::string& path) const;

private:
    static std::string key(double eta, const std::string& hash);
    std::map<std::string, ForceResult> entries_;
};

}  // namespace casimir
