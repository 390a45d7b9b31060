#include "aqil/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace aqil {
namespace {

constexpr double kWidth = 800, kPanelHeight = 260, kMargin = 50;

std::vector<double> moving_average(const std::vector<double>& v, int window) {
    std::vector<double> out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        sum += v[i];
        if (i >= static_cast<std::size_t>(window)) sum -= v[i - static_cast<std::size_t>(window)];
        out[i] = sum / static_cast<double>(std::min<std::size_t>(i + 1, static_cast<std::size_t>(window)));
    }
    return out;
}

void polyline(std::ostream& out, const std::vector<double>& v, double lo, double hi, double top,
              const char* color, double stroke) {
    const double span = hi > lo ? hi - lo : 1.0;
    const double plot_w = kWidth - 2 * kMargin, plot_h = kPanelHeight - 2 * kMargin;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke << "\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = kMargin + (v.size() > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(v.size() - 1) : 0.0);
        const double y = top + kMargin + plot_h * (1.0 - (v[i] - lo) / span);
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
        out << buf;
    }
    out << "\"/>\n";
}

void panel(std::ostream& out, const std::vector<double>& values, int window, double top, const std::string& label) {
    const auto avg = moving_average(values, window);
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    char buf[128];
    out << "<rect x=\"" << kMargin << "\" y=\"" << top + kMargin << "\" width=\"" << kWidth - 2 * kMargin
        << "\" height=\"" << kPanelHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << top + kMargin - 8 << "\" font-size=\"14\">" << label
        << " and average (window " << window << ")</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", hi);
    out << "<text x=\"4\" y=\"" << top + kMargin + 4 << "\" font-size=\"10\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", lo);
    out << "<text x=\"4\" y=\"" << top + kPanelHeight - kMargin << "\" font-size=\"10\">" << buf << "</text>\n";
    polyline(out, values, lo, hi, top, "#7aa6d6", 1.0);
    polyline(out, avg, lo, hi, top, "#d62728", 2.0);
}

}  // namespace

std::string curves_svg(const std::vector<EpisodeLog>& logs, const std::string& title, int window) {
    if (logs.empty()) throw std::invalid_argument("no episodes to plot");
    std::vector<double> loss, score;
    for (const auto& l : logs) {
        loss.push_back(l.mean_loss);
        score.push_back(l.score);
    }
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << 2 * kPanelHeight + 30
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"20\" font-size=\"16\">" << title << "</text>\n";
    panel(out, loss, window, 30, "Loss");
    panel(out, score, window, 30 + kPanelHeight, "Reward");
    out << "</svg>\n";
    return out.str();
}

void write_curves_svg(const std::filesystem::path& path, const std::vector<EpisodeLog>& logs,
                      const std::string& title) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << curves_svg(logs, title);
}

}  // namespace aqil
