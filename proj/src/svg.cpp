#include "geomphase/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "geomphase/errors.hpp"

namespace geomphase {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 56.0;

const char* const kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string coord(double v) { return fmt("%.2f", v); }

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    bool degenerate = false;
};

Range padded_range(double lo, double hi) {
    Range r;
    if (hi > lo) {
        const double pad = 0.05 * (hi - lo);
        r.lo = lo - pad;
        r.hi = hi + pad;
    } else {
        // All values equal: pad around the value so the chart stays drawable.
        const double pad = 0.5 * std::max(1.0, std::abs(lo));
        r.lo = lo - pad;
        r.hi = lo + pad;
        r.degenerate = true;
    }
    return r;
}

// Tick spacing 1, 2 or 5 times a power of ten, targeting ~6 intervals.
double nice_step(double range) {
    const double raw = range / 6.0;
    const double base = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0}) {
        if (base * m >= raw) return base * m;
    }
    return base * 10.0;
}

std::vector<double> ticks_for(const Range& r) {
    const double step = nice_step(r.hi - r.lo);
    std::vector<double> ticks;
    double t = std::ceil(r.lo / step) * step;
    while (t <= r.hi + 1e-9 * step && ticks.size() < 24) {
        // Snap values that should be exact multiples (kills "-0").
        if (std::abs(t) < 1e-12 * step) t = 0.0;
        ticks.push_back(t);
        t += step;
    }
    return ticks;
}

}  // namespace

std::string render_chart(const std::vector<XYSeries>& series, const ChartLabels& labels,
                         const std::map<std::string, std::string>& metadata) {
    if (series.empty()) {
        throw validation_error("render_chart: no series");
    }
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    bool first = true;
    for (const XYSeries& s : series) {
        if (s.x.size() != s.y.size() || s.x.size() < 2) {
            throw validation_error("render_chart: series '" + s.label + "' needs >= 2 matched points");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                throw validation_error("render_chart: non-finite value in series '" + s.label + "'");
            }
            if (first) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = s.y[i];
                first = false;
            } else {
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, s.y[i]);
                y_hi = std::max(y_hi, s.y[i]);
            }
        }
    }
    const Range rx = padded_range(x_lo, x_hi);
    const Range ry = padded_range(y_lo, y_hi);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return kLeft + (v - rx.lo) / (rx.hi - rx.lo) * plot_w; };
    auto sy = [&](double v) { return kTop + (ry.hi - v) / (ry.hi - ry.lo) * plot_h; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\">\n";
    out += "<title>" + escape_xml(labels.title) + "</title>\n";
    out += "<desc>";
    for (const auto& [key, value] : metadata) {
        out += escape_xml(key) + "=" + escape_xml(value) + "\n";
    }
    if (rx.degenerate) out += "warning: degenerate x range, padded\n";
    if (ry.degenerate) out += "warning: degenerate y range, padded\n";
    out += "</desc>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"#ffffff\"/>\n";

    // Grid and tick labels.
    for (double t : ticks_for(rx)) {
        const std::string x = coord(sx(t));
        out += "<line x1=\"" + x + "\" y1=\"" + coord(kTop) + "\" x2=\"" + x +
               "\" y2=\"" + coord(kTop + plot_h) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + x + "\" y=\"" + coord(kTop + plot_h + 18.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
               fmt("%.6g", t) + "</text>\n";
    }
    for (double t : ticks_for(ry)) {
        const std::string y = coord(sy(t));
        out += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + y + "\" x2=\"" +
               coord(kLeft + plot_w) + "\" y2=\"" + y +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + coord(kLeft - 8.0) + "\" y=\"" + coord(sy(t) + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
               fmt("%.6g", t) + "</text>\n";
    }

    // Axes frame.
    out += "<rect x=\"" + coord(kLeft) + "\" y=\"" + coord(kTop) + "\" width=\"" +
           coord(plot_w) + "\" height=\"" + coord(plot_h) +
           "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    // Series.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const XYSeries& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        if (s.style == XYSeries::Style::Line) {
            out += "<polyline fill=\"none\" stroke=\"";
            out += color;
            out += "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out += ' ';
                out += coord(sx(s.x[i])) + "," + coord(sy(s.y[i]));
            }
            out += "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out += "<circle cx=\"" + coord(sx(s.x[i])) + "\" cy=\"" + coord(sy(s.y[i])) +
                       "\" r=\"2.5\" fill=\"";
                out += color;
                out += "\"/>\n";
            }
        }
    }

    // Legend, top-right corner of the plot area.
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double ly = kTop + 16.0 + 16.0 * static_cast<double>(si);
        const double lx = kLeft + plot_w - 150.0;
        out += "<line x1=\"" + coord(lx) + "\" y1=\"" + coord(ly - 4.0) + "\" x2=\"" +
               coord(lx + 18.0) + "\" y2=\"" + coord(ly - 4.0) + "\" stroke=\"";
        out += kPalette[si % kPaletteSize];
        out += "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + coord(lx + 24.0) + "\" y=\"" + coord(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(series[si].label) +
               "</text>\n";
    }

    // Axis labels and title.
    out += "<text x=\"" + coord(kLeft + plot_w / 2.0) + "\" y=\"" + coord(kHeight - 12.0) +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" +
           escape_xml(labels.x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + coord(kTop + plot_h / 2.0) +
           "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           coord(kTop + plot_h / 2.0) + ")\">" + escape_xml(labels.y_label) + "</text>\n";
    out += "<text x=\"" + coord(kWidth / 2.0) + "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"15\" text-anchor=\"middle\">" + escape_xml(labels.title) + "</text>\n";
    out += "</svg>\n";
    return out;
}

std::string emit_svg(const SweepTable& table, XYSeries::Style style, const ChartLabels& labels) {
    table.validate();
    if (table.x.size() < 2) {
        throw validation_error("emit_svg: need at least 2 rows");
    }
    std::vector<XYSeries> series;
    series.reserve(table.columns.size());
    for (const SweepTable::Column& c : table.columns) {
        XYSeries s;
        s.label = c.name;
        s.x = table.x;
        s.y = c.values;
        const bool is_fit = c.name.size() > 4 && c.name.compare(c.name.size() - 4, 4, "_fit") == 0;
        s.style = is_fit ? XYSeries::Style::Line : style;
        series.push_back(std::move(s));
    }
    return render_chart(series, labels, table.metadata);
}

}  // namespace geomphase
