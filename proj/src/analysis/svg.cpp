#include "ela/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

namespace ela::analysis {

namespace {

struct Rgb {
  double r, g, b;
};

// Blue - near-white - red; exact white is reserved for undefined tiles.
constexpr std::array<std::pair<double, Rgb>, 5> kStops{{
    {-1.0, {33, 102, 172}},
    {-0.5, {146, 197, 222}},
    {0.0, {247, 247, 247}},
    {0.5, {244, 165, 130}},
    {1.0, {178, 24, 43}},
}};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
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

std::ofstream open_for_write(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  return file;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) >= 1e4 || std::abs(v) < 1e-2))
    std::snprintf(buf, sizeof buf, "%.2e", v);
  else
    std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string diverging_color(double r) {
  r = std::clamp(r, -1.0, 1.0);
  std::size_t k = 0;
  while (k + 2 < kStops.size() && r > kStops[k + 1].first) ++k;
  const auto& [x0, c0] = kStops[k];
  const auto& [x1, c1] = kStops[k + 1];
  const double t = (r - x0) / (x1 - x0);
  auto channel = [t](double a, double b) { return static_cast<int>(std::lround(a + t * (b - a))); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(c0.r, c1.r), channel(c0.g, c1.g), channel(c0.b, c1.b));
  return buf;
}

void render_heatmap(const CorrelationMatrix& corr, std::ostream& out, const HeatmapOptions& options) {
  const auto n = corr.size();
  const int t = options.tile_size;
  const int left = 90, bottom = 90, top = 40, right = 80;
  const auto side = static_cast<int>(n) * t;
  const int width = left + side + right;
  const int height = top + side + bottom;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  if (!options.title.empty())
    out << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
        << escape(options.title) << "</text>\n";

  out << "<g shape-rendering=\"crispEdges\">\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = top + static_cast<int>(n - 1 - i) * t;
    for (Eigen::Index j = 0; j < n; ++j) {
      const int x = left + static_cast<int>(j) * t;
      const auto r = corr.at(i, j);
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << t << "\" height=\"" << t << "\" fill=\""
          << (r ? diverging_color(*r) : std::string("#ffffff")) << "\"/>\n";
    }
  }
  out << "</g>\n";

  if (options.block_size > 0) {
    out << "<g stroke=\"#404040\" stroke-width=\"0.5\">\n";
    for (Eigen::Index k = 0; k <= n; k += options.block_size) {
      const int p = static_cast<int>(k) * t;
      out << "<line x1=\"" << left + p << "\" y1=\"" << top << "\" x2=\"" << left + p << "\" y2=\"" << top + side
          << "\"/>\n";
      out << "<line x1=\"" << left << "\" y1=\"" << top + side - p << "\" x2=\"" << left + side << "\" y2=\""
          << top + side - p << "\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g font-family=\"sans-serif\" font-size=\"" << std::max(4, std::min(10, t)) << "\">\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool show = options.all_labels || options.block_size <= 0 || i % options.block_size == 0;
    if (!show) continue;
    const auto& label = escape(corr.labels[static_cast<std::size_t>(i)]);
    const double cy = top + static_cast<double>(n - 1 - i) * t + t * 0.8;
    out << "<text x=\"" << left - 4 << "\" y=\"" << fmt(cy) << "\" text-anchor=\"end\">" << label << "</text>\n";
    const double cx = left + static_cast<double>(i) * t + t * 0.8;
    out << "<text transform=\"translate(" << fmt(cx) << ',' << top + side + 4
        << ") rotate(-90)\" text-anchor=\"end\">" << label << "</text>\n";
  }
  out << "</g>\n";

  // Color bar.
  const int bar_x = left + side + 20;
  const int steps = 40;
  const double step_h = static_cast<double>(side) / steps;
  for (int s = 0; s < steps; ++s) {
    const double r = 1.0 - 2.0 * (s + 0.5) / steps;
    out << "<rect x=\"" << bar_x << "\" y=\"" << fmt(top + s * step_h) << "\" width=\"12\" height=\""
        << fmt(step_h + 0.01) << "\" fill=\"" << diverging_color(r) << "\"/>\n";
  }
  out << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<text x=\"" << bar_x + 16 << "\" y=\"" << top + 8 << "\">1</text>\n";
  out << "<text x=\"" << bar_x + 16 << "\" y=\"" << top + side / 2 + 4 << "\">0</text>\n";
  out << "<text x=\"" << bar_x + 16 << "\" y=\"" << top + side << "\">-1</text>\n";
  out << "</g>\n</svg>\n";
}

void render_heatmap(const CorrelationMatrix& corr, const std::string& path, const HeatmapOptions& options) {
  auto file = open_for_write(path);
  render_heatmap(corr, file, options);
  if (!file) fail(ErrorCode::io, "failed writing '" + path + "'");
}

void render_line_plot(const std::vector<LineSeries>& series, std::ostream& out, const LinePlotOptions& options) {
  static constexpr std::array<const char*, 6> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#d62728", "#8c564b"};
  const int width = 640, height = 420, left = 80, right = 150, top = 40, bottom = 60;
  const int pw = width - left - right, ph = height - top - bottom;

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (const double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    for (const double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1;
  if (!(ymin <= ymax)) ymin = 0, ymax = 1;
  if (xmin == xmax) xmin -= 0.5, xmax += 0.5;
  if (ymin == ymax) ymin -= 0.5, ymax += 0.5;
  auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) { return top + ph - (v - ymin) / (ymax - ymin) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  if (!options.title.empty())
    out << "<text x=\"" << left + pw / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" << escape(options.title)
        << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    out << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << tick_label(xv)
        << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << fmt(sy(yv) + 4) << "\" text-anchor=\"end\">" << tick_label(yv)
        << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">"
      << escape(options.x_label) << "</text>\n";
  out << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(options.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = palette[k % palette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      out << (i ? " " : "") << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i]));
    out << "\"/>\n";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      out << "<circle cx=\"" << fmt(sx(s.x[i])) << "\" cy=\"" << fmt(sy(s.y[i])) << "\" r=\"2\" fill=\"" << color
          << "\"/>\n";
    const int ly = top + 14 + static_cast<int>(k) * 16;
    out << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 28 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + pw + 32 << "\" y=\"" << ly << "\">" << escape(s.name) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

void render_line_plot(const std::vector<LineSeries>& series, const std::string& path, const LinePlotOptions& options) {
  auto file = open_for_write(path);
  render_line_plot(series, file, options);
  if (!file) fail(ErrorCode::io, "failed writing '" + path + "'");
}

}  // namespace ela::analysis
