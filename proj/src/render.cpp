#include "isc/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "isc/error.hpp"
#include "isc/model.hpp"

namespace isc {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

std::string format_general(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string cell_path(const Card& card, const Column& col, std::size_t row) {
    const auto index = static_cast<std::size_t>(&col - card.table.columns.data());
    return "table.columns[" + std::to_string(index) + "].values[" + std::to_string(row) + "]";
}

std::vector<std::optional<double>> numeric_column(const Card& card, const Column& col) {
    std::vector<std::optional<double>> out;
    out.reserve(col.values.size());
    for (std::size_t r = 0; r < col.values.size(); ++r) {
        const auto& cell = col.values[r];
        if (cell.empty()) {
            out.emplace_back();
            continue;
        }
        auto v = parse_number(cell);
        if (!v) {
            throw Error(ErrorCode::Internal,
                        "card " + card.id + ": column '" + col.name + "' row " + std::to_string(r) +
                            " is not a number: '" + cell + "'",
                        {{cell_path(card, col, r), "not a number"}});
        }
        out.emplace_back(*v);
    }
    return out;
}

const Column& bound_column(const Card& card, const std::string& name) {
    const Column* col = card.table.find(name);
    if (col == nullptr) {
        throw Error(ErrorCode::Validation, "bound column '" + name + "' not in table",
                    {{"binding", "'" + name + "' not in table"}});
    }
    return *col;
}

void bin_histogram(const std::vector<std::optional<double>>& xs, ChartSpec& spec, const std::string& name) {
    std::vector<double> values;
    for (const auto& v : xs) {
        if (v) values.push_back(*v);
    }
    if (values.empty()) return;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    // Sturges' rule.
    std::size_t bins = lo == hi ? 1
                                : static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(values.size())))) + 1;
    const double width = lo == hi ? 1.0 : (hi - lo) / static_cast<double>(bins);

    std::vector<double> counts(bins, 0.0);
    for (double v : values) {
        auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
        counts[std::min(idx, bins - 1)] += 1.0;
    }
    Series s{name, {}, {}};
    for (std::size_t b = 0; b < bins; ++b) {
        const double from = lo + width * static_cast<double>(b);
        const double to = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
        spec.categories.push_back("[" + format_general(from) + ", " + format_general(to) +
                                  (b + 1 == bins ? "]" : ")"));
        s.points.emplace_back(counts[b]);
    }
    spec.series.push_back(std::move(s));
}

json optional_numbers(const std::vector<std::optional<double>>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(v ? json(*v) : json(nullptr));
    return out;
}

// ---------------------------------------------------------------------------
// SVG drawing

constexpr double kPlotLeft = 70, kPlotTop = 50, kPlotRight = 630, kPlotBottom = 390;
constexpr double kLegendX = 650;
constexpr std::array<const char*, 8> kPalette{"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                              "#59a14f", "#edc948", "#b07aa1", "#9c755f"};

const char* color(std::size_t i) { return kPalette[i % kPalette.size()]; }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

/// Escapes markup and drops characters XML 1.0 cannot carry.
std::string xml_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default:
                if (c < 0x20 && ch != '\t' && ch != '\n' && ch != '\r') break;
                out += ch;
        }
    }
    return out;
}

std::string truncate_label(const std::string& s, std::size_t max_chars = 14) {
    // Cut on a UTF-8 boundary.
    std::size_t chars = 0, i = 0;
    while (i < s.size()) {
        if (chars == max_chars) return s.substr(0, i) + "...";
        const auto c = static_cast<unsigned char>(s[i]);
        i += c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : 4;
        ++chars;
    }
    return s;
}

struct Scale {
    double lo = 0, hi = 1;
    double pixel_lo = 0, pixel_hi = 1;
    [[nodiscard]] double operator()(double v) const {
        return pixel_lo + (v - lo) / (hi - lo) * (pixel_hi - pixel_lo);
    }
};

Scale value_scale(double lo, double hi, double pixel_lo, double pixel_hi) {
    if (!(hi > lo)) hi = lo + 1;
    return Scale{lo, hi, pixel_lo, pixel_hi};
}

class SvgWriter {
public:
    explicit SvgWriter(const ChartSpec& spec) : spec_(spec) {
        out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"450\" "
                "viewBox=\"0 0 800 450\" font-family=\"sans-serif\">\n";
        out_ += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"800\" height=\"450\" fill=\"#ffffff\"/>\n";
        out_ += "<text class=\"title\" x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" +
                xml_text(spec.labels.title) + "</text>\n";
    }

    std::string finish() {
        out_ += "</svg>\n";
        return std::move(out_);
    }

    void raw(const std::string& s) { out_ += s; }

    void axes(const Scale& y, bool draw_x_labels_from_categories) {
        out_ += "<g class=\"axes\" stroke=\"#333333\">\n";
        out_ += "<line x1=\"" + num(kPlotLeft) + "\" y1=\"" + num(kPlotBottom) + "\" x2=\"" + num(kPlotRight) +
                "\" y2=\"" + num(kPlotBottom) + "\"/>\n";
        out_ += "<line x1=\"" + num(kPlotLeft) + "\" y1=\"" + num(kPlotTop) + "\" x2=\"" + num(kPlotLeft) +
                "\" y2=\"" + num(kPlotBottom) + "\"/>\n";
        out_ += "</g>\n";
        y_ticks(y);
        if (draw_x_labels_from_categories) category_labels();
        axis_titles();
    }

    void y_ticks(const Scale& y) {
        out_ += "<g class=\"y-ticks\" font-size=\"10\" text-anchor=\"end\">\n";
        for (int i = 0; i <= 4; ++i) {
            const double v = y.lo + (y.hi - y.lo) * i / 4.0;
            out_ += "<text x=\"" + num(kPlotLeft - 6) + "\" y=\"" + num(y(v) + 3) + "\">" +
                    xml_text(format_general(v)) + "</text>\n";
        }
        out_ += "</g>\n";
    }

    void x_ticks(const Scale& x) {
        out_ += "<g class=\"x-ticks\" font-size=\"10\" text-anchor=\"middle\">\n";
        for (int i = 0; i <= 4; ++i) {
            const double v = x.lo + (x.hi - x.lo) * i / 4.0;
            out_ += "<text x=\"" + num(x(v)) + "\" y=\"" + num(kPlotBottom + 14) + "\">" +
                    xml_text(format_general(v)) + "</text>\n";
        }
        out_ += "</g>\n";
    }

    void category_labels() {
        const auto& cats = spec_.categories;
        if (cats.empty()) return;
        const double band = (kPlotRight - kPlotLeft) / static_cast<double>(cats.size());
        // Thin out labels so they do not overlap.
        const std::size_t step = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(70.0 / band)));
        out_ += "<g class=\"x-ticks\" font-size=\"10\" text-anchor=\"middle\">\n";
        for (std::size_t i = 0; i < cats.size(); i += step) {
            out_ += "<text x=\"" + num(kPlotLeft + band * (static_cast<double>(i) + 0.5)) + "\" y=\"" +
                    num(kPlotBottom + 14) + "\">" + xml_text(truncate_label(cats[i])) + "</text>\n";
        }
        out_ += "</g>\n";
    }

    void axis_titles() {
        out_ += "<text class=\"x-label\" x=\"" + num((kPlotLeft + kPlotRight) / 2) + "\" y=\"" +
                num(kPlotBottom + 40) + "\" text-anchor=\"middle\" font-size=\"12\">" +
                xml_text(spec_.labels.x_label) + "</text>\n";
        out_ += "<text class=\"y-label\" x=\"18\" y=\"" + num((kPlotTop + kPlotBottom) / 2) +
                "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " +
                num((kPlotTop + kPlotBottom) / 2) + ")\">" + xml_text(spec_.labels.y_label) + "</text>\n";
    }

    void legend(const std::vector<std::string>& names) {
        out_ += "<g class=\"legend\" font-size=\"11\">\n";
        const std::size_t shown = std::min<std::size_t>(names.size(), 24);
        for (std::size_t i = 0; i < shown; ++i) {
            const double y = kPlotTop + 16.0 * static_cast<double>(i);
            out_ += "<rect class=\"legend-swatch\" x=\"" + num(kLegendX) + "\" y=\"" + num(y) +
                    "\" width=\"10\" height=\"10\" fill=\"" + color(i) + "\"/>\n";
            out_ += "<text x=\"" + num(kLegendX + 16) + "\" y=\"" + num(y + 9) + "\">" +
                    xml_text(truncate_label(names[i], 18)) + "</text>\n";
        }
        out_ += "</g>\n";
    }

private:
    const ChartSpec& spec_;
    std::string out_;
};

std::vector<std::string> series_names(const ChartSpec& spec) {
    std::vector<std::string> names;
    for (const auto& s : spec.series) names.push_back(s.name);
    return names;
}

std::pair<double, double> value_range(const ChartSpec& spec, bool stacked) {
    double lo = 0, hi = 0;
    if (stacked) {
        for (std::size_t c = 0; c < spec.categories.size(); ++c) {
            double pos = 0, neg = 0;
            for (const auto& s : spec.series) {
                if (c < s.points.size() && s.points[c]) (*s.points[c] >= 0 ? pos : neg) += *s.points[c];
            }
            hi = std::max(hi, pos);
            lo = std::min(lo, neg);
        }
    } else {
        for (const auto& s : spec.series) {
            for (const auto& p : s.points) {
                if (!p) continue;
                hi = std::max(hi, *p);
                lo = std::min(lo, *p);
            }
        }
    }
    return {lo, hi};
}

void draw_bars(SvgWriter& w, const ChartSpec& spec, bool stacked) {
    const auto [lo, hi] = value_range(spec, stacked);
    const Scale y = value_scale(lo, hi, kPlotBottom, kPlotTop);
    w.axes(y, true);
    const double band = (kPlotRight - kPlotLeft) / std::max<double>(1.0, static_cast<double>(spec.categories.size()));
    const double inner = band * 0.8;
    const std::size_t groups = stacked ? 1 : std::max<std::size_t>(1, spec.series.size());
    const double bar_width = inner / static_cast<double>(groups);

    w.raw("<g class=\"marks\">\n");
    for (std::size_t c = 0; c < spec.categories.size(); ++c) {
        double pos = 0, neg = 0;
        for (std::size_t s = 0; s < spec.series.size(); ++s) {
            const auto& p = spec.series[s].points;
            if (c >= p.size() || !p[c]) continue;
            const double v = *p[c];
            double from = 0, to = v;
            if (stacked) {
                double& base = v >= 0 ? pos : neg;
                from = base;
                to = base + v;
                base = to;
            }
            const double x = kPlotLeft + band * static_cast<double>(c) + band * 0.1 +
                             (stacked ? 0.0 : bar_width * static_cast<double>(s));
            const double top = std::min(y(from), y(to));
            const double height = std::abs(y(to) - y(from));
            w.raw("<rect class=\"datum bar\" x=\"" + num(x) + "\" y=\"" + num(top) + "\" width=\"" +
                  num(bar_width) + "\" height=\"" + num(height) + "\" fill=\"" + color(s) + "\"/>\n");
        }
    }
    w.raw("</g>\n");
    w.legend(series_names(spec));
}

void draw_lines(SvgWriter& w, const ChartSpec& spec, bool filled) {
    const auto [lo, hi] = value_range(spec, false);
    const Scale y = value_scale(lo, hi, kPlotBottom, kPlotTop);
    w.axes(y, true);
    const double band = (kPlotRight - kPlotLeft) / std::max<double>(1.0, static_cast<double>(spec.categories.size()));
    auto x_at = [&](std::size_t c) { return kPlotLeft + band * (static_cast<double>(c) + 0.5); };

    w.raw("<g class=\"marks\">\n");
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const auto& p = spec.series[s].points;
        std::string coords;
        double first_x = 0, last_x = 0;
        bool any = false;
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (!p[c]) continue;
            if (!any) first_x = x_at(c);
            last_x = x_at(c);
            any = true;
            coords += (coords.empty() ? "" : " ") + num(x_at(c)) + "," + num(y(*p[c]));
        }
        if (any && filled) {
            w.raw("<polygon class=\"area\" points=\"" + num(first_x) + "," + num(y(std::max(lo, 0.0))) + " " +
                  coords + " " + num(last_x) + "," + num(y(std::max(lo, 0.0))) + "\" fill=\"" + color(s) +
                  "\" fill-opacity=\"0.35\" stroke=\"none\"/>\n");
        }
        if (any) {
            w.raw("<polyline class=\"line\" points=\"" + coords + "\" fill=\"none\" stroke=\"" + color(s) +
                  "\" stroke-width=\"2\"/>\n");
        }
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (!p[c]) continue;
            w.raw("<circle class=\"datum marker\" cx=\"" + num(x_at(c)) + "\" cy=\"" + num(y(*p[c])) +
                  "\" r=\"3\" fill=\"" + color(s) + "\"/>\n");
        }
    }
    w.raw("</g>\n");
    w.legend(series_names(spec));
}

std::pair<double, double> polar(double cx, double cy, double r, double angle) {
    return {cx + r * std::sin(angle), cy - r * std::cos(angle)};
}

void draw_pie(SvgWriter& w, const ChartSpec& spec, bool donut) {
    const double cx = (kPlotLeft + kPlotRight) / 2, cy = (kPlotTop + kPlotBottom) / 2;
    const double r = (kPlotBottom - kPlotTop) / 2, inner = donut ? r * 0.55 : 0.0;
    std::vector<std::optional<double>> values;
    if (!spec.series.empty()) values = spec.series.front().points;
    double total = 0;
    for (const auto& v : values) {
        if (v && *v > 0) total += *v;
    }

    w.raw("<g class=\"marks\">\n");
    double angle = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) continue;
        const double share = total > 0 ? std::max(0.0, *values[i]) / total : 0.0;
        const double sweep = share * 2 * std::numbers::pi;
        std::string d;
        if (share >= 0.999999) {
            // A full circle cannot be one arc; draw two halves.
            d = "M " + num(cx) + " " + num(cy - r) + " A " + num(r) + " " + num(r) + " 0 1 1 " + num(cx) + " " +
                num(cy + r) + " A " + num(r) + " " + num(r) + " 0 1 1 " + num(cx) + " " + num(cy - r) + " Z";
            if (donut) {
                d += " M " + num(cx) + " " + num(cy - inner) + " A " + num(inner) + " " + num(inner) +
                     " 0 1 0 " + num(cx) + " " + num(cy + inner) + " A " + num(inner) + " " + num(inner) +
                     " 0 1 0 " + num(cx) + " " + num(cy - inner) + " Z";
            }
        } else {
            const auto [x0, y0] = polar(cx, cy, r, angle);
            const auto [x1, y1] = polar(cx, cy, r, angle + sweep);
            const char* large = sweep > std::numbers::pi ? "1" : "0";
            if (donut) {
                const auto [ix0, iy0] = polar(cx, cy, inner, angle);
                const auto [ix1, iy1] = polar(cx, cy, inner, angle + sweep);
                d = "M " + num(x0) + " " + num(y0) + " A " + num(r) + " " + num(r) + " 0 " + large + " 1 " +
                    num(x1) + " " + num(y1) + " L " + num(ix1) + " " + num(iy1) + " A " + num(inner) + " " +
                    num(inner) + " 0 " + large + " 0 " + num(ix0) + " " + num(iy0) + " Z";
            } else {
                d = "M " + num(cx) + " " + num(cy) + " L " + num(x0) + " " + num(y0) + " A " + num(r) + " " +
                    num(r) + " 0 " + large + " 1 " + num(x1) + " " + num(y1) + " Z";
            }
        }
        w.raw("<path class=\"datum slice\" d=\"" + d + "\" fill=\"" + color(i) +
              "\" fill-rule=\"evenodd\" stroke=\"#ffffff\"/>\n");
        angle += sweep;
    }
    w.raw("</g>\n");

    std::vector<std::string> names;
    for (std::size_t i = 0; i < values.size() && i < spec.categories.size(); ++i) names.push_back(spec.categories[i]);
    w.legend(names);
}

void draw_scatter(SvgWriter& w, const ChartSpec& spec) {
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    bool first = true;
    for (const auto& s : spec.series) {
        for (std::size_t i = 0; i < s.points.size() && i < s.x.size(); ++i) {
            if (!s.points[i] || !s.x[i]) continue;
            if (first) {
                xlo = xhi = *s.x[i];
                ylo = yhi = *s.points[i];
                first = false;
            }
            xlo = std::min(xlo, *s.x[i]);
            xhi = std::max(xhi, *s.x[i]);
            ylo = std::min(ylo, *s.points[i]);
            yhi = std::max(yhi, *s.points[i]);
        }
    }
    const Scale x = value_scale(xlo, xhi, kPlotLeft + 10, kPlotRight - 10);
    const Scale y = value_scale(ylo, yhi, kPlotBottom - 10, kPlotTop + 10);
    w.axes(y, false);
    w.x_ticks(x);
    w.raw("<g class=\"marks\">\n");
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const auto& series = spec.series[s];
        for (std::size_t i = 0; i < series.points.size() && i < series.x.size(); ++i) {
            if (!series.points[i] || !series.x[i]) continue;
            w.raw("<circle class=\"datum dot\" cx=\"" + num(x(*series.x[i])) + "\" cy=\"" +
                  num(y(*series.points[i])) + "\" r=\"4\" fill=\"" + color(s) + "\" fill-opacity=\"0.8\"/>\n");
        }
    }
    w.raw("</g>\n");
    w.legend(series_names(spec));
}

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

void draw_box_plot(SvgWriter& w, const ChartSpec& spec) {
    // Boxes are drawn per distinct category; every row still gets its own dot.
    std::vector<std::string> groups;
    std::map<std::string, std::size_t> group_index;
    for (const auto& c : spec.categories) {
        if (group_index.emplace(c, groups.size()).second) groups.push_back(c);
    }
    const auto [lo, hi] = value_range(spec, false);
    const Scale y = value_scale(lo, hi, kPlotBottom, kPlotTop);
    w.axes(y, false);
    {
        const double band = (kPlotRight - kPlotLeft) / std::max<double>(1.0, static_cast<double>(groups.size()));
        std::string labels = "<g class=\"x-ticks\" font-size=\"10\" text-anchor=\"middle\">\n";
        for (std::size_t g = 0; g < groups.size(); ++g) {
            labels += "<text x=\"" + num(kPlotLeft + band * (static_cast<double>(g) + 0.5)) + "\" y=\"" +
                      num(kPlotBottom + 14) + "\">" + xml_text(truncate_label(groups[g])) + "</text>\n";
        }
        w.raw(labels + "</g>\n");
    }

    const double band = (kPlotRight - kPlotLeft) / std::max<double>(1.0, static_cast<double>(groups.size()));
    const double slot = band * 0.8 / static_cast<double>(std::max<std::size_t>(1, spec.series.size()));
    w.raw("<g class=\"marks\">\n");
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        std::vector<std::vector<double>> per_group(groups.size());
        const auto& p = spec.series[s].points;
        for (std::size_t i = 0; i < p.size() && i < spec.categories.size(); ++i) {
            if (p[i]) per_group[group_index[spec.categories[i]]].push_back(*p[i]);
        }
        for (std::size_t g = 0; g < groups.size(); ++g) {
            auto values = per_group[g];
            if (values.empty()) continue;
            std::sort(values.begin(), values.end());
            const double x = kPlotLeft + band * static_cast<double>(g) + band * 0.1 + slot * static_cast<double>(s);
            const double q1 = quantile(values, 0.25), med = quantile(values, 0.5), q3 = quantile(values, 0.75);
            const double mid = x + slot / 2;
            w.raw("<line class=\"whisker\" x1=\"" + num(mid) + "\" y1=\"" + num(y(values.front())) + "\" x2=\"" +
                  num(mid) + "\" y2=\"" + num(y(values.back())) + "\" stroke=\"#333333\"/>\n");
            w.raw("<rect class=\"box\" x=\"" + num(x + slot * 0.15) + "\" y=\"" + num(y(q3)) + "\" width=\"" +
                  num(slot * 0.7) + "\" height=\"" + num(std::abs(y(q1) - y(q3))) + "\" fill=\"" + color(s) +
                  "\" fill-opacity=\"0.4\" stroke=\"" + color(s) + "\"/>\n");
            w.raw("<line class=\"median\" x1=\"" + num(x + slot * 0.15) + "\" y1=\"" + num(y(med)) + "\" x2=\"" +
                  num(x + slot * 0.85) + "\" y2=\"" + num(y(med)) + "\" stroke=\"#333333\" stroke-width=\"2\"/>\n");
        }
        for (std::size_t i = 0; i < p.size() && i < spec.categories.size(); ++i) {
            if (!p[i]) continue;
            const std::size_t g = group_index[spec.categories[i]];
            const double mid = kPlotLeft + band * static_cast<double>(g) + band * 0.1 +
                               slot * static_cast<double>(s) + slot / 2;
            w.raw("<circle class=\"datum dot\" cx=\"" + num(mid) + "\" cy=\"" + num(y(*p[i])) +
                  "\" r=\"2.5\" fill=\"" + color(s) + "\"/>\n");
        }
    }
    w.raw("</g>\n");
    w.legend(series_names(spec));
}

void draw_heatmap(SvgWriter& w, const ChartSpec& spec) {
    const auto cols = std::max<std::size_t>(1, spec.categories.size());
    const auto rows = std::max<std::size_t>(1, spec.series.size());
    const double cw = (kPlotRight - kPlotLeft) / static_cast<double>(cols);
    const double ch = (kPlotBottom - kPlotTop) / static_cast<double>(rows);
    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& s : spec.series) {
        for (const auto& p : s.points) {
            if (!p) continue;
            lo = first ? *p : std::min(lo, *p);
            hi = first ? *p : std::max(hi, *p);
            first = false;
        }
    }
    const Scale shade = value_scale(lo, hi, 0.15, 1.0);
    w.category_labels();
    w.axis_titles();
    w.raw("<g class=\"row-labels\" font-size=\"10\" text-anchor=\"end\">\n");
    for (std::size_t r = 0; r < spec.series.size(); ++r) {
        w.raw("<text x=\"" + num(kPlotLeft - 6) + "\" y=\"" + num(kPlotTop + ch * (static_cast<double>(r) + 0.5) + 3) +
              "\">" + xml_text(truncate_label(spec.series[r].name, 10)) + "</text>\n");
    }
    w.raw("</g>\n<g class=\"marks\">\n");
    for (std::size_t r = 0; r < spec.series.size(); ++r) {
        const auto& p = spec.series[r].points;
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (!p[c]) continue;
            w.raw("<rect class=\"datum cell\" x=\"" + num(kPlotLeft + cw * static_cast<double>(c)) + "\" y=\"" +
                  num(kPlotTop + ch * static_cast<double>(r)) + "\" width=\"" + num(cw) + "\" height=\"" + num(ch) +
                  "\" fill=\"" + kPalette[0] + "\" fill-opacity=\"" + num(shade(*p[c])) +
                  "\" stroke=\"#ffffff\"/>\n");
        }
    }
    w.raw("</g>\n");
}

}  // namespace

bool is_category_keyed(IdiomType idiom) { return idiom != IdiomType::ScatterPlot; }

CardDocument render_card(const Card& card) {
    CardDocument doc;
    doc.card_id = card.id;
    doc.title = card.name;
    doc.chart_spec_ref = "/api/cards/" + card.id + "/chart-spec";

    const auto& gq = card.goal_question;
    std::vector<std::string> reqs;
    for (const auto& r : gq.requirements) reqs.push_back(r.name + " (" + std::string(display_name(r.dtype)) + ")");
    std::string goal_body = "Goal: " + gq.goal + "\nQuestion: " + gq.question;
    if (!gq.idea.empty()) goal_body += "\nIdea: " + gq.idea;
    goal_body += "\nData: " + join(reqs, ", ");
    doc.sections.push_back({kGoalQuestionHeading, goal_body});

    doc.sections.push_back(
        {kTaskHeading, card.task ? std::string(to_id(*card.task)) + ": " + std::string(describe(*card.task))
                                 : std::string("not specified")});

    std::vector<std::string> cols;
    for (const auto& c : card.table.columns) cols.push_back(c.name + " (" + std::string(display_name(c.dtype)) + ")");
    doc.sections.push_back({kDataHeading, std::to_string(card.table.columns.size()) + " columns, " +
                                              std::to_string(card.table.row_count) + " rows: " + join(cols, ", ")});

    std::string idiom_body = std::string(display_name(card.idiom)) + ". x: " + card.binding.x_column;
    if (!card.binding.y_columns.empty()) idiom_body += "; y: " + join(card.binding.y_columns, ", ");
    doc.sections.push_back({kIdiomHeading, idiom_body});

    for (const auto& c : card.table.columns) doc.table.columns.push_back({c.name, c.dtype});
    doc.table.row_count = card.table.row_count;
    if (card.table.row_count <= kPreviewRowLimit) {
        std::vector<std::vector<std::string>> rows(card.table.row_count);
        for (std::size_t r = 0; r < card.table.row_count; ++r) {
            for (const auto& c : card.table.columns) rows[r].push_back(c.values[r]);
        }
        doc.table.rows = std::move(rows);
    }
    return doc;
}

json to_json(const CardDocument& doc) {
    json sections = json::array();
    for (const auto& s : doc.sections) sections.push_back({{"heading", s.heading}, {"body", s.body}});
    json columns = json::array();
    for (const auto& c : doc.table.columns) columns.push_back({{"name", c.name}, {"dtype", std::string(to_id(c.dtype))}});
    return {
        {"card_id", doc.card_id},
        {"title", doc.title},
        {"sections", sections},
        {"chart_spec_ref", doc.chart_spec_ref},
        {"table",
         {{"columns", columns},
          {"row_count", doc.table.row_count},
          {"rows", doc.table.rows ? json(*doc.table.rows) : json(nullptr)}}},
    };
}

ChartSpec build_chart_spec(const Card& card) {
    ChartSpec spec;
    spec.idiom = card.idiom;
    const auto& b = card.binding;
    const Column& x_col = bound_column(card, b.x_column);

    spec.labels.title = b.labels.title.empty() ? card.name : b.labels.title;
    spec.labels.x_label = b.labels.x_label.empty() ? b.x_column : b.labels.x_label;
    if (!b.labels.y_label.empty()) {
        spec.labels.y_label = b.labels.y_label;
    } else if (card.idiom == IdiomType::Histogram) {
        spec.labels.y_label = "count";
    } else {
        spec.labels.y_label = b.y_columns.size() == 1 ? b.y_columns.front() : "value";
    }

    if (card.table.row_count == 0) return spec;

    if (card.idiom == IdiomType::Histogram) {
        bin_histogram(numeric_column(card, x_col), spec, "count of " + x_col.name);
        return spec;
    }

    std::vector<std::optional<double>> xs;
    if (is_category_keyed(card.idiom)) {
        spec.categories = x_col.values;
    } else {
        xs = numeric_column(card, x_col);
    }
    for (const auto& name : b.y_columns) {
        const Column& y_col = bound_column(card, name);
        Series s{name, numeric_column(card, y_col), xs};
        if (card.idiom == IdiomType::PieChart || card.idiom == IdiomType::DonutChart) {
            for (std::size_t r = 0; r < s.points.size(); ++r) {
                if (s.points[r] && *s.points[r] < 0) {
                    throw Error(ErrorCode::Validation,
                                std::string(display_name(card.idiom)) + " values must be non-negative",
                                {{cell_path(card, y_col, r), "negative value in a part-to-whole chart"}});
                }
            }
        }
        spec.series.push_back(std::move(s));
    }
    return spec;
}

json to_json(const ChartSpec& spec) {
    json series = json::array();
    for (const auto& s : spec.series) {
        json entry = {{"name", s.name}};
        if (is_category_keyed(spec.idiom)) {
            entry["points"] = optional_numbers(s.points);
        } else {
            json points = json::array();
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                const auto x = i < s.x.size() ? s.x[i] : std::nullopt;
                points.push_back({x ? json(*x) : json(nullptr), s.points[i] ? json(*s.points[i]) : json(nullptr)});
            }
            entry["points"] = points;
        }
        series.push_back(std::move(entry));
    }
    return {
        {"idiom", std::string(to_id(spec.idiom))},
        {"categories", spec.categories},
        {"series", series},
        {"labels",
         {{"title", spec.labels.title}, {"x_label", spec.labels.x_label}, {"y_label", spec.labels.y_label}}},
    };
}

std::string export_chart_svg(const ChartSpec& spec) {
    SvgWriter w(spec);
    switch (spec.idiom) {
        case IdiomType::BarChart:
        case IdiomType::GroupedBarChart:
        case IdiomType::Histogram: draw_bars(w, spec, false); break;
        case IdiomType::StackedBarChart: draw_bars(w, spec, true); break;
        case IdiomType::LineChart: draw_lines(w, spec, false); break;
        case IdiomType::AreaChart: draw_lines(w, spec, true); break;
        case IdiomType::PieChart: draw_pie(w, spec, false); break;
        case IdiomType::DonutChart: draw_pie(w, spec, true); break;
        case IdiomType::ScatterPlot: draw_scatter(w, spec); break;
        case IdiomType::BoxPlot: draw_box_plot(w, spec); break;
        case IdiomType::Heatmap: draw_heatmap(w, spec); break;
    }
    return w.finish();
}

std::string export_card_json(const Card& card) { return serialize_card(card); }

}  // namespace isc
