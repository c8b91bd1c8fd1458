#include "aggsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace aggsim::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#2ca02c", "#d62728",
                                    "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Mapper {
    double px, py, pw, ph;  // plot viewport
    double x0, x1, y0, y1;  // data ranges
    double mx(double x) const {
        const double r = x1 - x0;
        return px + (r == 0.0 ? 0.5 : (x - x0) / r) * pw;
    }
    double my(double y) const {
        const double r = y1 - y0;
        return py + (1.0 - (r == 0.0 ? 0.5 : (y - y0) / r)) * ph;
    }
};

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series,
                       const std::optional<Band>& band) {
    double x_min = 0.0, x_max = 1.0, y_max = 0.0;
    bool any = false;
    auto take = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!any) {
                x_min = x_max = xs[i];
                any = true;
            }
            x_min = std::min(x_min, xs[i]);
            x_max = std::max(x_max, xs[i]);
            y_max = std::max(y_max, ys[i]);
        }
    };
    for (const Series& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("svg series: x/y length mismatch");
        take(s.x, s.y);
    }
    if (band) {
        take(band->x, band->lo);
        take(band->x, band->hi);
    }
    if (!any) x_min = 0.0, x_max = 1.0;
    if (x_max == x_min) x_max = x_min + 1.0;
    const double y_top = std::min(1.0, y_max <= 0.0 ? 1.0 : y_max * 1.15);

    const Mapper m{70.0, 46.0, 600.0, 380.0, x_min, x_max, 0.0, y_top};
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" "
           "height=\"500\" viewBox=\"0 0 860 500\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"860\" height=\"500\" fill=\"white\"/>\n"
        << "<text x=\"370\" y=\"26\" font-size=\"16\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << xml_escape(title) << "</text>\n";

    // gridlines and tick labels (5 divisions each way)
    out << "<g font-size=\"11\" font-family=\"sans-serif\" fill=\"#333\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = x_min + (x_max - x_min) * i / 5.0;
        const double fy = y_top * i / 5.0;
        const double gx = m.mx(fx), gy = m.my(fy);
        out << "<line x1=\"" << num(gx) << "\" y1=\"" << num(m.py) << "\" x2=\""
            << num(gx) << "\" y2=\"" << num(m.py + m.ph)
            << "\" stroke=\"#ddd\"/>\n";
        out << "<line x1=\"" << num(m.px) << "\" y1=\"" << num(gy) << "\" x2=\""
            << num(m.px + m.pw) << "\" y2=\"" << num(gy)
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << num(gx) << "\" y=\"" << num(m.py + m.ph + 16)
            << "\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
        out << "<text x=\"" << num(m.px - 8) << "\" y=\"" << num(gy + 4)
            << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    out << "</g>\n";

    if (band && !band->x.empty()) {
        out << "<polygon fill=\"#1f77b4\" fill-opacity=\"0.15\" stroke=\"none\" "
               "points=\"";
        for (std::size_t i = 0; i < band->x.size(); ++i)
            out << num(m.mx(band->x[i])) << ',' << num(m.my(band->hi[i])) << ' ';
        for (std::size_t i = band->x.size(); i-- > 0;)
            out << num(m.mx(band->x[i])) << ',' << num(m.my(band->lo[i])) << ' ';
        out << "\"/>\n";
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << num(m.mx(s.x[i])) << ',' << num(m.my(s.y[i])) << ' ';
        out << "\"/>\n";
        const double ly = 60.0 + 22.0 * static_cast<double>(k);
        out << "<line x1=\"690\" y1=\"" << num(ly) << "\" x2=\"716\" y2=\""
            << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"722\" y=\"" << num(ly + 4)
            << "\" font-size=\"12\" font-family=\"sans-serif\">"
            << xml_escape(s.label) << "</text>\n";
    }

    // plot frame and axis captions
    out << "<rect x=\"" << num(m.px) << "\" y=\"" << num(m.py) << "\" width=\""
        << num(m.pw) << "\" height=\"" << num(m.ph)
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(m.px + m.pw / 2) << "\" y=\"488\" "
           "font-size=\"13\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << num(m.py + m.ph / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" transform=\"rotate(-90 20 "
        << num(m.py + m.ph / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::string heatmap(const std::string& title,
                    const std::vector<std::string>& labels,
                    const std::vector<std::vector<double>>& values,
                    const std::vector<std::vector<bool>>& degenerate) {
    const std::size_t n = labels.size();
    if (values.size() != n || degenerate.size() != n)
        throw std::invalid_argument("heatmap: dimension mismatch");

    const double cell = 36.0, left = 150.0, top = 60.0;
    const double width = left + cell * static_cast<double>(n) + 40.0;
    const double height = top + cell * static_cast<double>(n) + 150.0;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
        << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
        << ' ' << num(height) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\""
        << num(height) << "\" fill=\"white\"/>\n"
        << "<text x=\"" << num(width / 2)
        << "\" y=\"28\" font-size=\"16\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << xml_escape(title) << "</text>\n";

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double x = left + cell * static_cast<double>(j);
            const double y = top + cell * static_cast<double>(i);
            std::string fill;
            if (degenerate[i][j]) {
                fill = "#bbbbbb";
            } else {
                // white -> red ramp
                const double v = std::clamp(values[i][j], 0.0, 1.0);
                const int g = static_cast<int>(std::lround(255.0 * (1.0 - v)));
                char buf[16];
                std::snprintf(buf, sizeof(buf), "#ff%02x%02x", g, g);
                fill = buf;
            }
            out << "<rect x=\"" << num(x) << "\" y=\"" << num(y)
                << "\" width=\"" << num(cell) << "\" height=\"" << num(cell)
                << "\" fill=\"" << fill << "\" stroke=\"#888\"/>\n";
            if (!degenerate[i][j])
                out << "<text x=\"" << num(x + cell / 2) << "\" y=\""
                    << num(y + cell / 2 + 4)
                    << "\" font-size=\"10\" text-anchor=\"middle\" "
                       "font-family=\"sans-serif\">"
                    << num(values[i][j]) << "</text>\n";
        }
        const double y = top + cell * static_cast<double>(i) + cell / 2 + 4;
        out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y)
            << "\" font-size=\"11\" text-anchor=\"end\" "
               "font-family=\"sans-serif\">"
            << xml_escape(labels[i]) << "</text>\n";
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double x = left + cell * static_cast<double>(j) + cell / 2;
        const double y = top + cell * static_cast<double>(n) + 10.0;
        out << "<text x=\"" << num(x) << "\" y=\"" << num(y)
            << "\" font-size=\"11\" text-anchor=\"end\" "
               "font-family=\"sans-serif\" transform=\"rotate(-60 " << num(x)
            << ' ' << num(y) << ")\">" << xml_escape(labels[j]) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace aggsim::svg
