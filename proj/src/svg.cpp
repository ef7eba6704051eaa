#include "xa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "xa/errors.hpp"
#include "xa/format.hpp"

namespace xa {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#2e86c1"};

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x_min, x_max, y_min, y_max;
    int width, height;

    [[nodiscard]] double x(double v) const {
        return kLeft + (v - x_min) / (x_max - x_min) * (width - kLeft - kRight);
    }
    [[nodiscard]] double y(double v) const {
        return height - kBottom - (v - y_min) / (y_max - y_min) * (height - kTop - kBottom);
    }
};

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

std::string tick_label(double v, double step) {
    char buf[32];
    const int digits = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void axes(std::ostringstream& out, const Frame& f, const std::string& x_label, const std::string& y_label) {
    const double x0 = f.x(f.x_min);
    const double x1 = f.x(f.x_max);
    const double y0 = f.y(f.y_min);
    const double y1 = f.y(f.y_max);
    out << "<g class=\"axes\" stroke=\"#333\" stroke-width=\"1\" fill=\"none\" data-y-top=\"" << px(y1)
        << "\" data-y-bottom=\"" << px(y0) << "\">\n";
    out << "<line x1=\"" << px(x0) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(x1) << "\" y2=\"" << px(y0) << "\"/>\n";
    out << "<line x1=\"" << px(x0) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(x0) << "\" y2=\"" << px(y1) << "\"/>\n";
    out << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    const double xs = nice_step(f.x_max - f.x_min, 6);
    for (double v = std::ceil(f.x_min / xs) * xs; v <= f.x_max + 1e-9 * xs; v += xs) {
        out << "<line x1=\"" << px(f.x(v)) << "\" y1=\"" << px(y0) << "\" x2=\"" << px(f.x(v)) << "\" y2=\""
            << px(y0 + 5) << "\" stroke=\"#333\"/>";
        out << "<text x=\"" << px(f.x(v)) << "\" y=\"" << px(y0 + 18) << "\" text-anchor=\"middle\">"
            << tick_label(v, xs) << "</text>\n";
    }
    const double ys = nice_step(f.y_max - f.y_min, 5);
    for (double v = std::ceil(f.y_min / ys) * ys; v <= f.y_max + 1e-9 * ys; v += ys) {
        out << "<line x1=\"" << px(x0 - 5) << "\" y1=\"" << px(f.y(v)) << "\" x2=\"" << px(x0) << "\" y2=\""
            << px(f.y(v)) << "\" stroke=\"#333\"/>";
        out << "<text x=\"" << px(x0 - 8) << "\" y=\"" << px(f.y(v) + 4) << "\" text-anchor=\"end\">"
            << tick_label(v, ys) << "</text>\n";
    }
    out << "</g>\n";
    out << "<text x=\"" << px((x0 + x1) / 2) << "\" y=\"" << px(f.height - 15.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << px((y0 + y1) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(y_label)
        << "</text>\n";
}

void header(std::ostringstream& out, int width, int height, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<title>" << escape(title) << "</title>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << px(width / 2.0) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << escape(title) << "</text>\n";
}

}  // namespace

void PlotSpec::validate() const {
    const std::size_t n = t_a.size();
    if (boxes.size() != n || g_p.size() != n || valid.size() != n) {
        throw ValidationError("plot spec: per-age vectors differ in length");
    }
    if (!(x_min < x_max) || !(y_min < y_max)) throw ValidationError("plot spec: empty axis range");
    if (width < 200 || height < 150) throw ValidationError("plot spec: canvas too small");
    auto inside_y = [&](double v) { return std::isnan(v) || (v >= y_min && v <= y_max); };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = boxes[i];
        if (t_a[i] < x_min || t_a[i] > x_max) throw ValidationError("plot spec: age outside x range");
        for (double v : {g_p[i], b.q1, b.median, b.q3, b.whisker_lo, b.whisker_hi}) {
            if (!inside_y(v)) throw ValidationError("plot spec: value outside y range");
        }
    }
    if (!(stripe_lo < stripe_hi) || !inside_y(stripe_lo) || !inside_y(stripe_hi) || !inside_y(mu0)) {
        throw ValidationError("plot spec: stripe or mu0 outside y range");
    }
}

PlotSpec plot_spec_from(const XAResult& result, const std::string& title) {
    PlotSpec p;
    for (const auto& a : result.ages) {
        p.t_a.push_back(a.t_a);
        p.boxes.push_back(a.box);
        p.g_p.push_back(a.g_p);
        p.valid.push_back(a.valid);
    }
    p.stripe_lo = result.stripe_lo;
    p.stripe_hi = result.stripe_hi;
    p.mu0 = result.mu0;
    const auto& c = result.config;
    const double step = (c.t_a_max - c.t_a_min) / static_cast<double>(std::max<std::size_t>(c.T_a - 1, 1));
    p.x_min = std::max(0.0, c.t_a_min - step);
    p.x_max = c.t_a_max + step;
    p.title = title;
    return p;
}

std::string render_xa_svg(const PlotSpec& plot) {
    plot.validate();
    const Frame f{plot.x_min, plot.x_max, plot.y_min, plot.y_max, plot.width, plot.height};
    std::ostringstream out;
    header(out, plot.width, plot.height, plot.title);

    out << "<rect class=\"stripe\" x=\"" << px(f.x(plot.x_min)) << "\" y=\"" << px(f.y(plot.stripe_hi))
        << "\" width=\"" << px(f.x(plot.x_max) - f.x(plot.x_min)) << "\" height=\""
        << px(f.y(plot.stripe_lo) - f.y(plot.stripe_hi)) << "\" fill=\"#f6d7a7\" fill-opacity=\"0.6\" data-lo=\""
        << format_double(plot.stripe_lo) << "\" data-hi=\"" << format_double(plot.stripe_hi) << "\"/>\n";
    out << "<line class=\"mu0\" x1=\"" << px(f.x(plot.x_min)) << "\" y1=\"" << px(f.y(plot.mu0)) << "\" x2=\""
        << px(f.x(plot.x_max)) << "\" y2=\"" << px(f.y(plot.mu0))
        << "\" stroke=\"#555\" stroke-width=\"1.2\" stroke-dasharray=\"2,3\" data-value=\""
        << format_double(plot.mu0) << "\"/>\n";

    double half = 6.0;
    if (plot.t_a.size() > 1) {
        double gap = f.x(plot.t_a[1]) - f.x(plot.t_a[0]);
        for (std::size_t i = 2; i < plot.t_a.size(); ++i) gap = std::min(gap, f.x(plot.t_a[i]) - f.x(plot.t_a[i - 1]));
        half = std::clamp(0.3 * gap, 1.5, 14.0);
    }
    for (std::size_t i = 0; i < plot.t_a.size(); ++i) {
        const auto& b = plot.boxes[i];
        const double cx = f.x(plot.t_a[i]);
        out << "<g class=\"box\" data-t-a=\"" << format_double(plot.t_a[i]) << "\" data-outliers=\"" << b.outliers
            << "\" stroke=\"#9a9a9a\" fill=\"#dcdcdc\">";
        if (!std::isnan(b.median)) {
            out << "<line x1=\"" << px(cx) << "\" y1=\"" << px(f.y(b.whisker_lo)) << "\" x2=\"" << px(cx)
                << "\" y2=\"" << px(f.y(b.whisker_hi)) << "\"/>";
            out << "<rect x=\"" << px(cx - half) << "\" y=\"" << px(f.y(b.q3)) << "\" width=\"" << px(2 * half)
                << "\" height=\"" << px(f.y(b.q1) - f.y(b.q3)) << "\"/>";
            out << "<line x1=\"" << px(cx - half) << "\" y1=\"" << px(f.y(b.median)) << "\" x2=\"" << px(cx + half)
                << "\" y2=\"" << px(f.y(b.median)) << "\" stroke=\"#555\"/>";
        }
        out << "</g>\n";
    }
    for (std::size_t i = 0; i < plot.t_a.size(); ++i) {
        const double cy = std::isnan(plot.g_p[i]) ? f.y(plot.y_min) : f.y(plot.g_p[i]);
        out << "<circle class=\"gmean\" cx=\"" << px(f.x(plot.t_a[i])) << "\" cy=\"" << px(cy)
            << "\" r=\"4\" fill=\"" << (plot.valid[i] ? "#1f4e79" : "white")
            << "\" stroke=\"#1f4e79\" stroke-width=\"1.5\"/>\n";
    }
    axes(out, f, "latency t_a", "p-value");

    const double lx = plot.width - kRight + 20.0;
    out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect x=\"" << px(lx) << "\" y=\"" << px(kTop) << "\" width=\"14\" height=\"10\" fill=\"#dcdcdc\" "
           "stroke=\"#9a9a9a\"/><text x=\""
        << px(lx + 20) << "\" y=\"" << px(kTop + 9) << "\">p-values</text>\n";
    out << "<circle cx=\"" << px(lx + 7) << "\" cy=\"" << px(kTop + 25) << "\" r=\"4\" fill=\"#1f4e79\"/><text x=\""
        << px(lx + 20) << "\" y=\"" << px(kTop + 29) << "\">geometric mean</text>\n";
    out << "<rect x=\"" << px(lx) << "\" y=\"" << px(kTop + 40)
        << "\" width=\"14\" height=\"10\" fill=\"#f6d7a7\"/><text x=\"" << px(lx + 20) << "\" y=\"" << px(kTop + 49)
        << "\">95% null stripe</text>\n";
    out << "<line x1=\"" << px(lx) << "\" y1=\"" << px(kTop + 65) << "\" x2=\"" << px(lx + 14) << "\" y2=\""
        << px(kTop + 65) << "\" stroke=\"#555\" stroke-dasharray=\"2,3\"/><text x=\"" << px(lx + 20) << "\" y=\""
        << px(kTop + 69) << "\">null mean</text>\n";
    out << "</g>\n</svg>\n";
    return out.str();
}

std::string render_curve_svg(const std::vector<CurveSeries>& series, const std::string& x_label,
                             const std::string& y_label, const std::string& title) {
    double x_min = INFINITY;
    double x_max = -INFINITY;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw ValidationError("curve series: x and y differ in length");
        for (double v : s.x) {
            x_min = std::min(x_min, v);
            x_max = std::max(x_max, v);
        }
    }
    if (!(x_min < x_max)) throw ValidationError("curve plot needs at least two distinct x values");
    const int width = 900;
    const int height = 520;
    const Frame f{x_min, x_max, 0.0, 1.0, width, height};
    std::ostringstream out;
    header(out, width, height, title);
    axes(out, f, x_label, y_label);
    out << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* colour = kPalette[k % std::size(kPalette)];
        out << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < series[k].x.size(); ++i) {
            if (i > 0) out << ' ';
            out << px(f.x(series[k].x[i])) << ',' << px(f.y(std::clamp(series[k].y[i], 0.0, 1.0)));
        }
        out << "\"/>\n";
        const double ly = kTop + 18.0 * static_cast<double>(k);
        const double lx = width - kRight + 20.0;
        out << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(lx + 16) << "\" y2=\"" << px(ly)
            << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/><text x=\"" << px(lx + 22) << "\" y=\""
            << px(ly + 4) << "\">" << escape(series[k].label) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace xa
