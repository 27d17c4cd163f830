#pragma once

#include <string>
#include <vector>

namespace dcl {

enum class PlotKind {
    Trajectory,     ///< x-y paths, equal axis scaling
    MetricVsTime,   ///< log10 of a positive metric against time
    RatioVsTheta,   ///< divergence ratio in [0, 1] against angle
};

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    /// Draw each point as a marker instead of joining them.
    bool markers = false;
};

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label;
};

/// Standalone SVG document with axes, tick labels, a legend and one polyline
/// per series (a circle marker for single-point series). Throws UsageError
/// when there is nothing to draw.
std::string emit_plot(const std::vector<Series>& series, PlotKind kind,
                      const PlotLabels& labels = {});

}  // namespace dcl
