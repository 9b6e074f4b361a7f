#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qlab {

inline constexpr const char* kArtifactVersion = "0.1.0";

// All numeric output goes through this: 12 significant digits, locale-free.
std::string format_number(double x);

class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, std::vector<std::string> header);
    void add_row(const std::vector<std::string>& fields);
    void write() const;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct SvgPlotOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_x = false;
    bool log_y = false;
    std::string annotation;  // free-form line under the title
};

void write_svg_line_plot(const std::filesystem::path& path,
                         const std::vector<double>& xs,
                         const std::vector<double>& ys,
                         const SvgPlotOptions& opts);

// Least-squares slope of log10(y) vs log10(x).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace qlab
