#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "xa/xa_test.hpp"

namespace xa {

/// Presentation-only description of an XA plot.
struct PlotSpec {
    std::vector<double> t_a;
    std::vector<BoxStats> boxes;
    std::vector<double> g_p;
    std::vector<bool> valid;
    double stripe_lo = 0.0;
    double stripe_hi = 1.0;
    double mu0 = 0.5;
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    std::string title;
    int width = 900;
    int height = 520;

    /// Throws ValidationError when sizes disagree or values fall outside the axes.
    void validate() const;
};

[[nodiscard]] PlotSpec plot_spec_from(const XAResult& result, const std::string& title);

/// Self-contained SVG: one <g class="box"> and one <circle class="gmean">
/// per age, a <rect class="stripe"> carrying data-lo/data-hi, a dotted
/// <line class="mu0">, axes and a legend. Output depends only on `plot`.
[[nodiscard]] std::string render_xa_svg(const PlotSpec& plot);

struct CurveSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Line chart with y in [0, 1], used for power curves.
[[nodiscard]] std::string render_curve_svg(const std::vector<CurveSeries>& series, const std::string& x_label,
                                           const std::string& y_label, const std::string& title);

}  // namespace xa
