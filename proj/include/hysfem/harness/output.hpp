#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hysfem::harness {

// Environment variable that prefixes relative output directories.
inline constexpr const char* kOutputRootEnv = "HYSFEM_OUTPUT_ROOT";

std::filesystem::path resolve_output_dir(const std::string& configured);
// Creates the directory (and parents) if needed.
std::filesystem::path ensure_dir(const std::filesystem::path& dir);

// 64-bit FNV-1a, stable across platforms.
std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    int width = 720;
    int height = 480;
};

// SVG 1.1 line plot. Each series is a <polyline> carrying its raw data in
// data-x / data-y attributes so the plot can be re-parsed.
void write_svg_plot(std::ostream& out, const PlotSpec& spec, const std::vector<Series>& series);

std::string format_double(double v, int digits = 17);

}  // namespace hysfem::harness
