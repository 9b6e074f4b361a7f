#include "qlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qlab {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> header)
    : path_(std::move(path)), header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
    if (fields.size() != header_.size())
        throw std::invalid_argument("CsvWriter: field count mismatch");
    rows_.push_back(fields);
}

void CsvWriter::write() const {
    std::ofstream out(path_);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_.string());
    auto emit = [&](const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << fields[i];
        }
        out << '\n';
    };
    emit(header_);
    for (const auto& row : rows_) emit(row);
}

namespace {

double axis_value(double v, bool log_scale) {
    return log_scale ? std::log10(v) : v;
}

}  // namespace

void write_svg_line_plot(const std::filesystem::path& path,
                         const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const SvgPlotOptions& opts) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("write_svg_line_plot: bad series");
    const int W = 640, H = 480, L = 70, R = 20, T = 50, B = 50;

    std::vector<double> px(xs.size()), py(ys.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        px[i] = axis_value(xs[i], opts.log_x);
        py[i] = axis_value(std::max(ys[i], opts.log_y ? 1e-300 : ys[i]),
                           opts.log_y);
    }
    auto [xmin_it, xmax_it] = std::minmax_element(px.begin(), px.end());
    auto [ymin_it, ymax_it] = std::minmax_element(py.begin(), py.end());
    double xmin = *xmin_it, xmax = *xmax_it, ymin = *ymin_it, ymax = *ymax_it;
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

    auto sx = [&](double v) {
        return L + (v - xmin) / (xmax - xmin) * (W - L - R);
    };
    auto sy = [&](double v) {
        return H - B - (v - ymin) / (ymax - ymin) * (H - T - B);
    };

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_svg_line_plot: cannot open " + path.string());
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!-- qlab svg generator " << kArtifactVersion << " -->\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
        << "\">\n"
        << "<rect width=\"" << W << "\" height=\"" << H
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">"
        << opts.title << "</text>\n";
    if (!opts.annotation.empty())
        out << "<text x=\"" << W / 2
            << "\" y=\"42\" text-anchor=\"middle\" font-size=\"12\">"
            << opts.annotation << "</text>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
        << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L
        << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << opts.x_label
        << (opts.log_x ? " (log10)" : "") << "</text>\n";
    out << "<text x=\"16\" y=\"" << (T + H - B) / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
           "16 "
        << (T + H - B) / 2 << ")\">" << opts.y_label
        << (opts.log_y ? " (log10)" : "") << "</text>\n";

    // axis extent labels
    out << "<text x=\"" << L << "\" y=\"" << H - B + 16
        << "\" font-size=\"10\">" << format_number(opts.log_x ? std::pow(10, xmin) : xmin)
        << "</text>\n"
        << "<text x=\"" << W - R << "\" y=\"" << H - B + 16
        << "\" text-anchor=\"end\" font-size=\"10\">"
        << format_number(opts.log_x ? std::pow(10, xmax) : xmax) << "</text>\n"
        << "<text x=\"" << L - 4 << "\" y=\"" << H - B
        << "\" text-anchor=\"end\" font-size=\"10\">"
        << format_number(opts.log_y ? std::pow(10, ymin) : ymin) << "</text>\n"
        << "<text x=\"" << L - 4 << "\" y=\"" << T + 10
        << "\" text-anchor=\"end\" font-size=\"10\">"
        << format_number(opts.log_y ? std::pow(10, ymax) : ymax) << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
           "points=\"";
    for (size_t i = 0; i < px.size(); ++i)
        out << sx(px[i]) << ',' << sy(py[i]) << ' ';
    out << "\"/>\n";
    for (size_t i = 0; i < px.size(); ++i)
        out << "<circle cx=\"" << sx(px[i]) << "\" cy=\"" << sy(py[i])
            << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
    out << "</svg>\n";
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log10(xs[i]);
        const double ly = std::log10(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qlab
