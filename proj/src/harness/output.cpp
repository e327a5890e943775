#include "hysfem/harness/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace hysfem::harness {

std::filesystem::path resolve_output_dir(const std::string& configured) {
    std::filesystem::path dir(configured.empty() ? "." : configured);
    if (dir.is_relative()) {
        if (const char* root = std::getenv(kOutputRootEnv); root && *root) dir = std::filesystem::path(root) / dir;
    }
    return dir;
}

std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

std::string format_double(double v, int digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

namespace {

std::string xml_escape(const std::string& s) {
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

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

void write_svg_plot(std::ostream& out, const PlotSpec& spec, const std::vector<Series>& series) {
    const double left = 80, right = 20, top = 40, bottom = 60;
    const double W = spec.width, H = spec.height;
    const double pw = W - left - right, ph = H - top - bottom;

    auto usable = [&](double y) { return std::isfinite(y) && (!spec.log_y || y > 0.0); };
    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !usable(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
    if (ymax == ymin) ymin -= 0.5, ymax += 0.5;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\" data-log-y=\"" << (spec.log_y ? "true" : "false") << "\">\n";
    out << "  <title>" << xml_escape(spec.title) << "</title>\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "  <rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << W / 2 << "\" y=\"" << top / 2 + 6 << "\" text-anchor=\"middle\" font-size=\"16\">"
        << xml_escape(spec.title) << "</text>\n";
    out << "  <text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << xml_escape(spec.x_label) << "</text>\n";
    out << "  <text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
        << top + ph / 2 << ")\">" << xml_escape(spec.y_label) << "</text>\n";

    // axis ticks
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double sx = left + pw * i / 4.0;
        const double sy = top + ph - ph * i / 4.0;
        out << "  <text x=\"" << sx << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
            << format_double(fx, 4) << "</text>\n";
        const std::string ylab = spec.log_y ? "1e" + format_double(fy, 3) : format_double(fy, 4);
        out << "  <text x=\"" << left - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << ylab
            << "</text>\n";
    }

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::ostringstream xs, ys, pts;
        pts << std::fixed << std::setprecision(2);
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            xs << (i ? " " : "") << format_double(s.x[i]);
            ys << (i ? " " : "") << format_double(s.y[i]);
            if (std::isfinite(s.x[i]) && usable(s.y[i])) pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        std::string points = pts.str();
        if (!points.empty()) points.pop_back();
        out << "  <polyline data-series=\"" << xml_escape(s.name) << "\" data-x=\"" << xs.str() << "\" data-y=\""
            << ys.str() << "\" points=\"" << points << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "  <text x=\"" << left + pw - 10 << "\" y=\"" << top + 18 + 16 * static_cast<double>(k)
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << xml_escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace hysfem::harness
