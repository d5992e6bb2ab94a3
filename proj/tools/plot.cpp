#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pigp/stats.hpp"

namespace pigp::cli {

namespace {

struct Series {
  std::vector<double> med, lo, hi;  // cumulative regret band
  std::vector<double> smooth;       // smoothed per-step regret
  std::vector<double> wall;         // median seconds per step
};

const char* color_for(const std::string& algo) {
  if (algo == "pi-gp-ucb") return "#1f77b4";
  if (algo == "igp-ucb") return "#d62728";
  if (algo == "uniform") return "#7f7f7f";
  return "#2ca02c";
}

std::vector<std::filesystem::path> trace_files(
    const std::filesystem::path& dir) {
  std::vector<std::pair<long, std::filesystem::path>> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trace_seed", 0) == 0 && name.size() > 14 &&
        name.substr(name.size() - 4) == ".csv")
      found.emplace_back(std::atol(name.c_str() + 10), entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<std::filesystem::path> out;
  for (auto& [seed, path] : found) out.push_back(std::move(path));
  return out;
}

Series summarise_algo(const std::vector<std::filesystem::path>& files,
                      std::size_t window) {
  std::vector<std::vector<double>> cum, smooth, wall;
  std::size_t steps = SIZE_MAX;
  for (const auto& path : files) {
    const RunTrace tr = read_trace_csv(path);
    std::vector<double> regret, clock;
    for (const StepRecord& r : tr.steps) {
      regret.push_back(r.regret);
      clock.push_back(r.wall_clock_s);
    }
    cum.push_back(cumulative_sum(regret));
    smooth.push_back(top_hat_smooth(regret, window));
    wall.push_back(std::move(clock));
    steps = std::min(steps, regret.size());
  }
  if (cum.empty() || steps == 0)
    throw std::runtime_error("plot: no usable traces");

  Series s;
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<double> c, sm, w;
    for (std::size_t i = 0; i < cum.size(); ++i) {
      c.push_back(cum[i][t]);
      sm.push_back(smooth[i][t]);
      w.push_back(wall[i][t]);
    }
    s.med.push_back(percentile(c, 50.0));
    s.lo.push_back(percentile(c, 2.5));
    s.hi.push_back(percentile(c, 97.5));
    s.smooth.push_back(percentile(sm, 50.0));
    s.wall.push_back(percentile(std::move(w), 50.0));
  }
  return s;
}

// --- minimal SVG assembly -------------------------------------------------

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (v != 0.0 && (std::abs(v) < 1e-2 || std::abs(v) >= 1e5))
    std::snprintf(buf, sizeof buf, "%.1e", v);
  else if (std::abs(v - std::round(v)) < 1e-9)
    std::snprintf(buf, sizeof buf, "%.0f", v);
  else
    std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

struct Panel {
  double x0, y0, w, h;       // plot area in page coordinates
  double xmin, xmax, ymin, ymax;

  double px(double x) const {
    return x0 + (x - xmin) / (xmax - xmin) * w;
  }
  double py(double y) const {
    return y0 + h - (y - ymin) / (ymax - ymin) * h;
  }
};

void draw_polyline(std::ostream& svg, const Panel& p,
                   const std::vector<double>& ys, const char* color,
                   const char* dash) {
  const std::size_t n = ys.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 1200);
  svg << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.4\"";
  if (dash && *dash) svg << " stroke-dasharray=\"" << dash << "\"";
  svg << " points=\"";
  for (std::size_t i = 0; i < n; i += stride)
    svg << fixed2(p.px(static_cast<double>(i + 1))) << ','
        << fixed2(p.py(ys[i])) << ' ';
  if ((n - 1) % stride != 0)
    svg << fixed2(p.px(static_cast<double>(n))) << ','
        << fixed2(p.py(ys[n - 1]));
  svg << "\"/>\n";
}

void draw_axes(std::ostream& svg, const Panel& p, const std::string& title,
               const std::string& ylabel) {
  svg << "<rect x=\"" << fixed2(p.x0) << "\" y=\"" << fixed2(p.y0)
      << "\" width=\"" << fixed2(p.w) << "\" height=\"" << fixed2(p.h)
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  svg << "<text x=\"" << fixed2(p.x0) << "\" y=\"" << fixed2(p.y0 - 8)
      << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#333\">"
      << title << "</text>\n";

  const double xstep = nice_step(p.xmax - p.xmin, 6);
  for (double x = std::ceil(p.xmin / xstep) * xstep; x <= p.xmax + 1e-9;
       x += xstep) {
    svg << "<line x1=\"" << fixed2(p.px(x)) << "\" y1=\"" << fixed2(p.y0 + p.h)
        << "\" x2=\"" << fixed2(p.px(x)) << "\" y2=\""
        << fixed2(p.y0 + p.h + 4) << "\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << fixed2(p.px(x)) << "\" y=\""
        << fixed2(p.y0 + p.h + 17)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
           "text-anchor=\"middle\">"
        << tick_label(x) << "</text>\n";
  }
  const double ystep = nice_step(p.ymax - p.ymin, 4);
  for (double y = std::ceil(p.ymin / ystep) * ystep; y <= p.ymax + 1e-9;
       y += ystep) {
    svg << "<line x1=\"" << fixed2(p.x0 - 4) << "\" y1=\"" << fixed2(p.py(y))
        << "\" x2=\"" << fixed2(p.x0) << "\" y2=\"" << fixed2(p.py(y))
        << "\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << fixed2(p.x0 - 7) << "\" y=\""
        << fixed2(p.py(y) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
           "text-anchor=\"end\">"
        << tick_label(y) << "</text>\n";
  }
  svg << "<text x=\"" << fixed2(p.x0 - 52) << "\" y=\""
      << fixed2(p.y0 + p.h / 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\" "
         "transform=\"rotate(-90 "
      << fixed2(p.x0 - 52) << ' ' << fixed2(p.y0 + p.h / 2) << ")\" "
      << "text-anchor=\"middle\">" << ylabel << "</text>\n";
}

double max_of(const std::map<std::string, Series>& all,
              std::vector<double> Series::*field) {
  double m = 0.0;
  for (const auto& [name, s] : all)
    for (double v : s.*field) m = std::max(m, v);
  return m;
}

}  // namespace

int build_plots(const std::filesystem::path& in,
                const std::filesystem::path& out,
                std::vector<std::string> algos, std::size_t window) {
  if (algos.empty()) {
    for (const auto& entry : std::filesystem::directory_iterator(in))
      if (entry.is_directory() && !trace_files(entry.path()).empty())
        algos.push_back(entry.path().filename().string());
    std::sort(algos.begin(), algos.end());
  }
  if (algos.empty())
    throw std::runtime_error("plot: no algorithm directories under " +
                             in.string());

  std::map<std::string, Series> all;
  std::size_t steps = SIZE_MAX;
  for (const std::string& algo : algos) {
    const auto files = trace_files(in / algo);
    if (files.empty())
      throw std::runtime_error("plot: no traces under " +
                               (in / algo).string());
    all[algo] = summarise_algo(files, window);
    steps = std::min(steps, all[algo].med.size());
  }

  std::filesystem::create_directories(out);

  // wide table with one column group per algorithm
  {
    std::ofstream csv(out / "plot_data.csv");
    csv << "t";
    for (const auto& [name, s] : all)
      csv << ',' << name << "_cum_med," << name << "_cum_lo," << name
          << "_cum_hi," << name << "_smooth," << name << "_wall";
    csv << '\n';
    for (std::size_t t = 0; t < steps; ++t) {
      csv << (t + 1);
      for (const auto& [name, s] : all)
        csv << ',' << format_double(s.med[t]) << ',' << format_double(s.lo[t])
            << ',' << format_double(s.hi[t]) << ','
            << format_double(s.smooth[t]) << ',' << format_double(s.wall[t]);
      csv << '\n';
    }
  }

  const double width = 860, panel_h = 230, left = 78, right = 24, top = 44,
               gap = 52;
  const double plot_w = width - left - right;
  const double height = top + 3 * panel_h + 2 * gap + 36;

  std::ofstream svg(out / "regret.svg");
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const Panel p1{left, top, plot_w, panel_h, 1.0, double(steps), 0.0,
                 std::max(1e-12, 1.05 * max_of(all, &Series::hi))};
  const Panel p2{left, top + panel_h + gap, plot_w, panel_h, 1.0,
                 double(steps), 0.0,
                 std::max(1e-12, 1.05 * max_of(all, &Series::smooth))};
  const Panel p3{left, top + 2 * (panel_h + gap), plot_w, panel_h, 1.0,
                 double(steps), 0.0,
                 std::max(1e-12, 1.05 * max_of(all, &Series::wall))};

  draw_axes(svg, p1, "cumulative regret (median, 2.5/97.5 band)",
            "cumulative regret");
  draw_axes(svg, p2,
            "per-step regret (top-hat window " + std::to_string(window) + ")",
            "regret per step");
  draw_axes(svg, p3, "compute per step", "seconds");

  for (const auto& [name, s] : all) {
    const char* c = color_for(name);
    draw_polyline(svg, p1, s.lo, c, "3,4");
    draw_polyline(svg, p1, s.hi, c, "3,4");
    draw_polyline(svg, p1, s.med, c, "");
    draw_polyline(svg, p2, s.smooth, c, "");
    draw_polyline(svg, p3, s.wall, c, "");
  }

  // legend inside the first panel
  double ly = top + 16;
  for (const auto& [name, s] : all) {
    const double lx = left + plot_w - 170;
    svg << "<line x1=\"" << fixed2(lx) << "\" y1=\"" << fixed2(ly - 4)
        << "\" x2=\"" << fixed2(lx + 26) << "\" y2=\"" << fixed2(ly - 4)
        << "\" stroke=\"" << color_for(name) << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed2(lx + 32) << "\" y=\"" << fixed2(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">"
        << name << "</text>\n";
    ly += 16;
  }
  svg << "<text x=\"" << fixed2(left + plot_w / 2) << "\" y=\""
      << fixed2(height - 8)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\" "
         "text-anchor=\"middle\">step</text>\n";
  svg << "</svg>\n";
  return 0;
}

int plot_command(const PlotOptions& popts) {
  const std::filesystem::path in = popts.in;
  const std::filesystem::path out =
      popts.out.empty() ? in : std::filesystem::path(popts.out);
  build_plots(in, out, popts.algos, popts.window);
  std::printf("wrote %s and %s\n", (out / "plot_data.csv").c_str(),
              (out / "regret.svg").c_str());
  return 0;
}

}  // namespace pigp::cli
