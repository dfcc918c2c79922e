#include "casimir/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

std::string format_fixed(double x, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

// Affine map of [lo, hi] (or its log10) onto pixel range [p0, p1].
struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;
    double p0 = 0.0;
    double p1 = 1.0;

    double t(double v) const { return log ? std::log10(v) : v; }
    double map(double v) const { return p0 + (t(v) - lo) / (hi - lo) * (p1 - p0); }
};

Axis make_axis(double vmin, double vmax, bool log, double p0, double p1) {
    Axis ax;
    ax.log = log;
    ax.p0 = p0;
    ax.p1 = p1;
    if (log) {
        ax.lo = std::floor(std::log10(vmin));
        ax.hi = std::ceil(std::log10(vmax));
        if (ax.hi <= ax.lo) ax.hi = ax.lo + 1.0;
    } else {
        ax.lo = std::min(0.0, vmin);
        ax.hi = vmax;
        if (ax.hi <= ax.lo) ax.hi = ax.lo + 1.0;
    }
    return ax;
}

struct Tick {
    double value;  // in axis coordinates (log10 for log axes)
    std::string label;
};

std::vector<Tick> make_ticks(const Axis& ax) {
    std::vector<Tick> ticks;
    if (ax.log) {
        const int lo = static_cast<int>(ax.lo);
        const int hi = static_cast<int>(ax.hi);
        const int stride = std::max(1, (hi - lo + 7) / 8);
        for (int e = lo; e <= hi; e += stride) ticks.push_back({double(e), "1e" + std::to_string(e)});
        return ticks;
    }
    const double span = ax.hi - ax.lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    const int digits = std::max(0, -static_cast<int>(std::floor(std::log10(step))));
    for (double v = std::ceil(ax.lo / step) * step; v <= ax.hi + 1e-9 * span; v += step) {
        ticks.push_back({v, format_fixed(std::abs(v) < 1e-12 * span ? 0.0 : v, digits)});
    }
    return ticks;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || text.empty()) {
        throw FormatError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::string curve_to_csv(const std::vector<CurveRow>& rows) {
    std::string out(kCurveHeader);
    out += '\n';
    for (const CurveRow& r : rows) {
        out += format_double(r.eta);
        out += ',';
        out += format_double(r.f_eta);
        out += ',';
        out += format_double(r.err_est);
        out += ',';
        out += format_double(r.kappa_max);
        out += ',';
        out += std::to_string(r.n_evals);
        out += '\n';
    }
    return out;
}

std::vector<CurveRow> curve_from_csv(std::string_view text) {
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& l : lines) {
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    }
    if (lines.empty()) throw FormatError("empty curve file");
    if (lines.front() != kCurveHeader) throw FormatError("unexpected header: '" + std::string(lines.front()) + "'");
    if (lines.size() < 2) throw FormatError("curve file has no data rows");

    std::vector<CurveRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        if (fields.size() != 5) throw FormatError("line " + std::to_string(i + 1) + ": expected 5 fields");
        CurveRow r;
        r.eta = parse_double(fields[0]);
        r.f_eta = parse_double(fields[1]);
        r.err_est = parse_double(fields[2]);
        r.kappa_max = parse_double(fields[3]);
        long n = 0;
        const auto res = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), n);
        if (res.ec != std::errc() || res.ptr != fields[4].data() + fields[4].size() || fields[4].empty()) {
            throw FormatError("line " + std::to_string(i + 1) + ": bad n_evals");
        }
        r.n_evals = n;
        if (!std::isfinite(r.eta) || !std::isfinite(r.f_eta)) {
            throw FormatError("line " + std::to_string(i + 1) + ": non-finite value");
        }
        if (!rows.empty() && !(r.eta > rows.back().eta)) {
            throw FormatError("line " + std::to_string(i + 1) + ": eta not strictly increasing");
        }
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json to_json(const ForceResult& r) {
    return nlohmann::json{{"eta", r.eta},
                          {"f_eta", r.f_eta},
                          {"err_est", r.err_est},
                          {"kappa_max", r.kappa_max},
                          {"n_evals", r.n_evals}};
}

ForceResult force_result_from_json(const nlohmann::json& j) {
    ForceResult r;
    try {
        r.eta = j.at("eta").get<double>();
        r.f_eta = j.at("f_eta").get<double>();
        r.err_est = j.at("err_est").get<double>();
        r.kappa_max = j.at("kappa_max").get<double>();
        r.n_evals = j.at("n_evals").get<long>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad force result: ") + e.what());
    }
    return r;
}

std::string curve_to_svg(const std::vector<CurveRow>& rows, const SvgOptions& opt) {
    if (rows.empty()) throw FormatError("no rows to plot");
    double xmin = rows.front().eta, xmax = xmin, ymin = rows.front().f_eta, ymax = ymin;
    for (const CurveRow& r : rows) {
        xmin = std::min(xmin, r.eta);
        xmax = std::max(xmax, r.eta);
        ymin = std::min(ymin, r.f_eta);
        ymax = std::max(ymax, r.f_eta);
    }
    if (opt.log_x && xmin <= 0.0) throw FormatError("log x axis needs eta > 0");
    if (opt.log_y && ymin <= 0.0) throw FormatError("log y axis needs f > 0");

    const double left = 80.0, right = opt.width - 20.0, top = 20.0, bottom = opt.height - 60.0;
    const Axis ax = make_axis(xmin, xmax, opt.log_x, left, right);
    const Axis ay = make_axis(ymin, ymax, opt.log_y, bottom, top);

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
      << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n";
    s << "<g stroke=\"black\" stroke-width=\"1\">\n";
    s << "<line x1=\"" << format_fixed(left, 2) << "\" y1=\"" << format_fixed(bottom, 2) << "\" x2=\""
      << format_fixed(right, 2) << "\" y2=\"" << format_fixed(bottom, 2) << "\"/>\n";
    s << "<line x1=\"" << format_fixed(left, 2) << "\" y1=\"" << format_fixed(bottom, 2) << "\" x2=\""
      << format_fixed(left, 2) << "\" y2=\"" << format_fixed(top, 2) << "\"/>\n";
    s << "</g>\n";

    s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const Tick& t : make_ticks(ax)) {
        const double px = left + (t.value - ax.lo) / (ax.hi - ax.lo) * (right - left);
        s << "<line x1=\"" << format_fixed(px, 2) << "\" y1=\"" << format_fixed(bottom, 2) << "\" x2=\""
          << format_fixed(px, 2) << "\" y2=\"" << format_fixed(bottom + 5.0, 2) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << format_fixed(px, 2) << "\" y=\"" << format_fixed(bottom + 18.0, 2)
          << "\" text-anchor=\"middle\">" << escape_xml(t.label) << "</text>\n";
    }
    for (const Tick& t : make_ticks(ay)) {
        const double py = bottom + (t.value - ay.lo) / (ay.hi - ay.lo) * (top - bottom);
        s << "<line x1=\"" << format_fixed(left - 5.0, 2) << "\" y1=\"" << format_fixed(py, 2) << "\" x2=\""
          << format_fixed(left, 2) << "\" y2=\"" << format_fixed(py, 2) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << format_fixed(left - 8.0, 2) << "\" y=\"" << format_fixed(py + 4.0, 2)
          << "\" text-anchor=\"end\">" << escape_xml(t.label) << "</text>\n";
    }
    s << "<text x=\"" << format_fixed(0.5 * (left + right), 2) << "\" y=\"" << format_fixed(opt.height - 15.0, 2)
      << "\" text-anchor=\"middle\">eta = b a^3" << (opt.log_x ? " (log)" : "") << "</text>\n";
    s << "<text x=\"20\" y=\"" << format_fixed(0.5 * (top + bottom), 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << format_fixed(0.5 * (top + bottom), 2)
      << ")\">f(eta)" << (opt.log_y ? " (log)" : "") << "</text>\n";
    s << "</g>\n";

    s << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) s << ' ';
        s << format_fixed(ax.map(rows[i].eta), 2) << ',' << format_fixed(ay.map(rows[i].f_eta), 2);
    }
    s << "\"/>\n";
    s << "</svg>\n";
    return s.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw FormatError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw FormatError("cannot rename onto " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string spec_hash(const QuadratureSpec& spec) {
    std::string canon = "rel_tol=" + format_double(spec.rel_tol) + ";abs_tol=" + format_double(spec.abs_tol) +
                        ";max_subdivisions=" + std::to_string(spec.max_subdivisions) + ";kappa_max=";
    canon += spec.kappa_max_policy.is_adaptive() ? "adaptive" : format_double(*spec.kappa_max_policy.fixed_value);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
    return buf;
}

std::string ResultCache::key(double eta, const std::string& hash) { return format_double(eta) + "|" + hash; }

ResultCache ResultCache::load(const std::string& path) {
    ResultCache cache;
    if (!std::filesystem::exists(path)) return cache;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("cache " + path + " is not JSON: " + e.what());
    }
    if (!j.is_object()) throw FormatError("cache " + path + " is not a JSON object");
    for (const auto& [k, v] : j.items()) {
        try {
            ForceResult r;
            r.eta = parse_double(v.at("eta").get<std::string>());
            r.f_eta = parse_double(v.at("f_eta").get<std::string>());
            r.err_est = parse_double(v.at("err_est").get<std::string>());
            r.kappa_max = parse_double(v.at("kappa_max").get<std::string>());
            r.n_evals = v.at("n_evals").get<long>();
            cache.entries_[k] = r;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("cache entry '" + k + "': " + e.what());
        }
    }
    return cache;
}

std::optional<ForceResult> ResultCache::find(double eta, const std::string& hash) const {
    const auto it = entries_.find(key(eta, hash));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResultCache::insert(const ForceResult& r, const std::string& hash) { entries_[key(r.eta, hash)] = r; }

void ResultCache::save(const std::string& path) const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, r] : entries_) {
        j[k] = {{"eta", format_double(r.eta)},
                {"f_eta", format_double(r.f_eta)},
                {"err_est", format_double(r.err_est)},
                {"kappa_max", format_double(r.kappa_max)},
                {"n_evals", r.n_evals}};
    }
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace casimir
