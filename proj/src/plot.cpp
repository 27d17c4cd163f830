#include "dcl/plot.hpp"

#include "dcl/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dcl {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            const double w = std::max(1.0, std::abs(lo) * 0.1);
            lo -= w;
            hi += w;
        } else {
            const double w = 0.05 * (hi - lo);
            lo -= w;
            hi += w;
        }
    }
};

}  // namespace

std::string emit_plot(const std::vector<Series>& series, PlotKind kind, const PlotLabels& labels) {
    const bool log_y = kind == PlotKind::MetricVsTime;
    auto ty = [&](double y) {
        return log_y ? std::log10(std::max(y, std::numeric_limits<double>::min())) : y;
    };

    Range xr, yr;
    std::size_t points = 0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw UsageError("emit_plot: series '" + s.name + "' has mismatched x/y");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
            xr.add(s.x[i]);
            yr.add(ty(s.y[i]));
            ++points;
        }
    }
    if (points == 0) throw UsageError("emit_plot: no finite data to plot");

    if (kind == PlotKind::RatioVsTheta) {
        yr.lo = std::min(yr.lo, 0.0);
        yr.hi = std::max(yr.hi, 1.0);
    }
    if (kind == PlotKind::Trajectory) {
        // equal scaling on both axes
        const double aspect = (kHeight - kTop - kBottom) / (kWidth - kLeft - kRight);
        const double cx = 0.5 * (xr.lo + xr.hi);
        const double cy = 0.5 * (yr.lo + yr.hi);
        const double half_x = 0.5 * std::max(xr.hi - xr.lo, (yr.hi - yr.lo) / aspect);
        const double half_y = half_x * aspect;
        xr = {cx - half_x, cx + half_x};
        yr = {cy - half_y, cy + half_y};
    }
    xr.pad();
    yr.pad();

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
    auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    if (!labels.title.empty()) {
        svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << escape(labels.title) << "</text>\n";
    }

    // axes frame and ticks
    svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
        << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / kTicks;
        const double yv = yr.lo + (yr.hi - yr.lo) * i / kTicks;
        svg << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
            << num(px(xv)) << "\" y2=\"" << num(kTop + plot_h + 5) << "\"/>\n";
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(py(yv)) << "\"/>\n";
    }
    svg << "</g>\n<g class=\"tick-labels\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / kTicks;
        const double yv = yr.lo + (yr.hi - yr.lo) * i / kTicks;
        svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        svg << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(yv) + 4)
            << "\" text-anchor=\"end\">" << (log_y ? "1e" + tick_label(yv) : tick_label(yv))
            << "</text>\n";
    }
    svg << "</g>\n";

    const std::string y_label =
        log_y && !labels.y_label.empty() ? labels.y_label + " (log scale)" : labels.y_label;
    svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(labels.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
        << num(kTop + plot_h / 2) << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPalette.size()];
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = ty(s.y[i]);
            if (std::isfinite(s.x[i]) && std::isfinite(yv)) pts.emplace_back(px(s.x[i]), py(yv));
        }
        if (pts.empty()) continue;
        svg << "<g class=\"series\" data-name=\"" << escape(s.name) << "\">\n";
        if (pts.size() == 1 || s.markers) {
            for (const auto& [cx, cy] : pts) {
                svg << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"4\" fill=\""
                    << color << "\"/>\n";
            }
        } else {
            svg << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << color
                << "\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i) svg << ' ';
                svg << num(pts[i].first) << ',' << num(pts[i].second);
            }
            svg << "\"/>\n";
        }
        svg << "</g>\n";

        const double ly = kTop + 14.0 + 16.0 * static_cast<double>(si);
        if (si < 24) {
            svg << "<line x1=\"" << num(kWidth - kRight + 12) << "\" y1=\"" << num(ly - 4)
                << "\" x2=\"" << num(kWidth - kRight + 30) << "\" y2=\"" << num(ly - 4)
                << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
                << "<text x=\"" << num(kWidth - kRight + 34) << "\" y=\"" << num(ly)
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.name)
                << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace dcl
