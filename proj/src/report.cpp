#include "hnrmi/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hnrmi {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double process_param(const ProcessConfig& pc) {
    return pc.family == "stable" ? pc.sigma : pc.beta;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

// Maps data coordinates to SVG pixel coordinates.
struct Frame {
    double x0, x1, y0, y1;  // data ranges
    double w = 640, h = 400, ml = 50, mr = 15, mt = 15, mb = 35;

    double px(double x) const { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); }
    double py(double y) const { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); }
};

void svg_header(std::ostream& out, const Frame& f) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.w
        << "\" height=\"" << f.h << "\" viewBox=\"0 0 " << f.w << " " << f.h
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_axes(std::ostream& out, const Frame& f) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n",
                  f.px(f.x0), f.py(f.y0), f.px(f.x1), f.py(f.y0));
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"black\"/>\n",
                  f.px(f.x0), f.py(f.y0), f.px(f.x0), f.py(f.y1));
    out << buf;
    for (int i = 0; i <= 4; ++i) {
        const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                      "text-anchor=\"middle\">%g</text>\n",
                      f.px(x), f.py(f.y0) + 16.0, x);
        out << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                      "text-anchor=\"end\">%g</text>\n",
                      f.px(f.x0) - 5.0, f.py(y) + 4.0, y);
        out << buf;
    }
}

void svg_polyline(std::ostream& out, const Frame& f, const std::vector<double>& xs,
                  const std::vector<double>& ys, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    char buf[40];
    for (size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", f.px(xs[i]), f.py(ys[i]));
        out << buf;
    }
    out << "\"/>\n";
}

}  // namespace

void write_band_csv(const std::string& path, const BandReport& report) {
    std::ofstream out = open_out(path);
    out << "x,lower,upper,mean\n";
    for (size_t i = 0; i < report.grid.size(); ++i)
        out << fmt(report.grid[i]) << ',' << fmt(report.lower[i]) << ','
            << fmt(report.upper[i]) << ',' << fmt(report.mean_curve[i]) << '\n';
}

void write_interval_csv(const std::string& path,
                        const std::vector<IntervalCell>& cells) {
    std::ofstream out = open_out(path);
    out << "model,functional,sigma,zeta,length,lo,hi,se\n";
    for (const IntervalCell& c : cells)
        out << c.model << ',' << c.functional << ',' << fmt(process_param(c.process))
            << ',' << fmt(c.zeta) << ',' << fmt(c.length) << ',' << fmt(c.lo) << ','
            << fmt(c.hi) << ',' << fmt(c.se_length) << '\n';
}

void write_n0_csv(const std::string& path, const N0Report& report) {
    std::ofstream out = open_out(path);
    out << "j,exact_p,mc_p\n";
    const bool mc = !report.histogram.probs.empty();
    for (size_t j = 0; j < report.exact.probs.size(); ++j) {
        out << j << ',' << fmt(report.exact.probs[j]) << ',';
        if (mc) out << fmt(report.histogram.at(static_cast<int>(j)));
        out << '\n';
    }
}

void write_posterior_csv(const std::string& path,
                         const std::vector<PosteriorCell>& cells) {
    std::ofstream out = open_out(path);
    out << "sample_id,sigma,zeta,model,expected_proportion,se\n";
    for (const PosteriorCell& c : cells)
        out << c.sample.id << ',' << fmt(process_param(c.process)) << ','
            << fmt(c.zeta) << ',' << c.model << ',' << fmt(c.expected_proportion)
            << ',' << fmt(c.se) << '\n';
}

void write_variance_csv(const std::string& path,
                        const std::vector<VarianceGapCell>& cells) {
    std::ofstream out = open_out(path);
    out << "sigma,zeta,var_inner,var_outer,gap,se_gap,expected_gap\n";
    for (const VarianceGapCell& c : cells)
        out << fmt(process_param(c.process)) << ',' << fmt(c.zeta) << ','
            << fmt(c.var_inner) << ',' << fmt(c.var_outer) << ',' << fmt(c.gap)
            << ',' << fmt(c.se_gap) << ',' << fmt(c.expected_gap) << '\n';
}

void write_band_svg(const std::string& path, const BandReport& report) {
    std::ofstream out = open_out(path);
    Frame f{report.grid.front(), report.grid.back(), 0.0, 1.0};
    svg_header(out, f);
    svg_axes(out, f);
    svg_polyline(out, f, report.grid, report.lower, "#1f77b4");
    svg_polyline(out, f, report.grid, report.upper, "#1f77b4");
    svg_polyline(out, f, report.grid, report.mean_curve, "#d62728");
    out << "</svg>\n";
}

void write_n0_svg(const std::string& path, const N0Report& report) {
    std::ofstream out = open_out(path);
    const int n = static_cast<int>(report.exact.probs.size()) - 1;
    double ymax = 0.0;
    for (double p : report.exact.probs) ymax = std::max(ymax, p);
    for (double p : report.histogram.probs) ymax = std::max(ymax, p);
    if (ymax <= 0.0) ymax = 1.0;
    Frame f{-0.5, n + 0.5, 0.0, 1.1 * ymax};
    svg_header(out, f);
    svg_axes(out, f);
    char buf[256];
    const double bw = (f.px(1.0) - f.px(0.0)) * 0.8;
    for (int j = 0; j <= n; ++j) {
        const double x = f.px(j) - bw / 2, y = f.py(report.exact.probs[j]);
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                      "fill=\"#1f77b4\" fill-opacity=\"0.6\"/>\n",
                      x, y, bw, f.py(0.0) - y);
        out << buf;
    }
    if (!report.histogram.probs.empty()) {
        for (int j = 0; j <= n; ++j) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" "
                          "fill=\"#d62728\"/>\n",
                          f.px(j), f.py(report.histogram.at(j)));
            out << buf;
        }
    }
    out << "</svg>\n";
}

}  // namespace hnrmi
