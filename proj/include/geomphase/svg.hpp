#pragma once

// Minimal deterministic SVG chart emitter.  Identical inputs produce
// byte-identical documents (fixed canvas, fixed palette, fixed number
// formatting), which is what makes golden-file comparisons possible.

#include <map>
#include <string>
#include <vector>

#include "geomphase/analysis.hpp"

namespace geomphase {

struct XYSeries {
    enum class Style { Line, Scatter };

    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    Style style = Style::Line;
};

struct ChartLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

// Standalone SVG document with axes, 1-2-5 ticks, one polyline or point set
// per series and a legend.  `metadata` entries are embedded in the <desc>
// element so every figure is self-describing.  A degenerate axis range is
// padded and noted in the <desc> rather than rejected.
std::string render_chart(const std::vector<XYSeries>& series, const ChartLabels& labels,
                         const std::map<std::string, std::string>& metadata = {});

// One series per table column, plotted against the table's x.  Columns whose
// name ends in "_fit" are drawn as lines regardless of `style` (fitted curves
// over scatter data).  Table metadata is embedded in the <desc>.
std::string emit_svg(const SweepTable& table, XYSeries::Style style, const ChartLabels& labels);

}  // namespace geomphase
