#pragma once

#include <optional>
#include <string>
#include <vector>

namespace aggsim::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Shaded region between lo and hi, drawn behind the series.
struct Band {
    std::vector<double> x;
    std::vector<double> lo;
    std::vector<double> hi;
};

// Self-contained SVG line chart: one polyline per series, linear axes with
// tick labels, a legend, and axis captions naming the plotted quantities.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series,
                       const std::optional<Band>& band = std::nullopt);

// Square heatmap for values in [0,1]; degenerate cells are grayed out.
std::string heatmap(const std::string& title,
                    const std::vector<std::string>& labels,
                    const std::vector<std::vector<double>>& values,
                    const std::vector<std::vector<bool>>& degenerate);

}  // namespace aggsim::svg
