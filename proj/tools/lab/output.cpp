#include "lab.hpp"

#include "sweepout/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sweepout::lab {

namespace {

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string number(const nlohmann::json& j)
{
    if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    const double v = j.get<double>();
    if (!std::isfinite(v)) return "null";
    return fmt("%.12g", v);
}

void emit(const nlohmann::json& j, int depth, std::string& out)
{
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            emit(it.value(), depth + 1, out);
        }
        out += "\n" + close + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const auto& x) { return x.is_primitive(); });
        out += flat ? "[" : "[\n";
        bool first = true;
        for (const auto& x : j) {
            if (!first) out += flat ? ", " : ",\n";
            first = false;
            if (!flat) out += pad;
            emit(x, depth + 1, out);
        }
        out += flat ? "]" : "\n" + close + "]";
    } else if (j.is_number()) {
        out += number(j);
    } else {
        out += j.dump();
    }
}

std::string cell(const nlohmann::json& v)
{
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number()) return number(v);
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return cell(nlohmann::json(v.dump()));
}

}  // namespace

std::string canonical_json(const nlohmann::json& j)
{
    std::string out;
    emit(j, 0, out);
    out += "\n";
    return out;
}

std::string rows_csv(const nlohmann::json& rows, const std::vector<std::string>& columns)
{
    std::vector<std::string> cols = columns;
    if (cols.empty() && !rows.empty())
        for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
            if (it.value().is_primitive()) cols.push_back(it.key());
    std::ostringstream os;
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (r.contains(cols[i]) ? cell(r[cols[i]]) : "");
        os << "\n";
    }
    return os.str();
}

std::string plot_svg(const std::vector<std::pair<double, double>>& pts, const PlotSpec& spec)
{
    if (pts.empty()) throw DomainError("plot_svg: no rows");
    std::vector<double> xs, ys;
    for (auto [x, y] : pts) {
        if ((spec.xlog && !(x > 0.0)) || (spec.ylog && !(y > 0.0)))
            throw DomainError("plot_svg: nonpositive value on a log axis");
        if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("plot_svg: non-finite value");
        xs.push_back(spec.xlog ? std::log10(x) : x);
        ys.push_back(spec.ylog ? std::log10(y) : y);
    }
    const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
    auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
    auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
    double x0 = *xmin_it, x1 = *xmax_it, y0 = *ymin_it, y1 = *ymax_it;
    if (x1 - x0 < 1e-12) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << spec.title << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    auto label = [&](double v, bool log) { return fmt("%.4g", log ? std::pow(10.0, v) : v); };
    os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-family=\"sans-serif\" font-size=\"11\">"
       << label(x0, spec.xlog) << "</text>\n";
    os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label(x1, spec.xlog) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << label(y0, spec.ylog) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << label(y1, spec.ylog) << "</text>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << spec.x << (spec.xlog ? " (log)" : "")
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
       << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << spec.y
       << (spec.ylog ? " (log)" : "") << "</text>\n";
    if (pts.size() >= 2 && x1 - x0 > 0) {
        bool distinct = false;
        for (double x : xs) distinct = distinct || x != xs.front();
        if (distinct) {
            const auto f = least_squares(xs, ys);
            os << "<line x1=\"" << fmt("%.3f", px(x0)) << "\" y1=\"" << fmt("%.3f", py(f.slope * x0 + f.intercept))
               << "\" x2=\"" << fmt("%.3f", px(x1)) << "\" y2=\"" << fmt("%.3f", py(f.slope * x1 + f.intercept))
               << "\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
            os << "<text x=\"" << W - R << "\" y=\"" << T << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"12\">slope = "
               << fmt("%.4g", f.slope) << "</text>\n";
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        os << "<circle cx=\"" << fmt("%.3f", px(xs[i])) << "\" cy=\"" << fmt("%.3f", py(ys[i]))
           << "\" r=\"3\" fill=\"firebrick\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace sweepout::lab
