#include "beamforge/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace beamforge {

PlotKind plot_kind_from_name(const std::string& name) {
  if (name == "loss") return PlotKind::kLoss;
  if (name == "sweep") return PlotKind::kSweep;
  throw std::invalid_argument("unknown plot kind '" + name +
                              "' (expected loss or sweep)");
}

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error("CSV is missing column '" + name + "'");
  }
};

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Csv csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (first) {
      csv.header = std::move(fields);
      first = false;
    } else {
      csv.rows.push_back(std::move(fields));
    }
  }
  if (csv.header.empty() || csv.rows.empty()) {
    throw std::runtime_error("'" + path + "': no data rows to plot");
  }
  return csv;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("bad numeric field '" + s + "'");
  return v;
}

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (hi <= lo) hi = lo + 1.0;
  const double range = hi - lo;
  double step = std::pow(10.0, std::floor(std::log10(range / target)));
  for (double mult : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
    if (range / (step * mult) <= target) {
      step *= mult;
      break;
    }
  }
  std::vector<double> ticks;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 1e-9 * range; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * range ? 0.0 : t);
  }
  return ticks;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void render_series(const std::vector<Series>& series, const std::string& title,
                   const std::string& x_label, const std::string& y_label,
                   const std::string& svg_path) {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  bool first = true;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        first = false;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  if (first) throw std::runtime_error("no points to plot");
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo = std::min(y_lo - y_pad, y_lo >= 0.0 && y_lo < y_pad ? 0.0 : y_lo - y_pad);
  y_hi += y_pad;

  const double width = 720.0, height = 480.0;
  const double ml = 72.0, mr = 150.0, mt = 44.0, mb = 56.0;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

  std::ofstream out(svg_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + svg_path + "' for writing");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\">\n";
  out << "<rect width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"24\" font-family=\"sans-serif\""
      << " font-size=\"16\" text-anchor=\"middle\">" << title << "</text>\n";

  for (double t : nice_ticks(x_lo, x_hi, 6)) {
    const double px = sx(t);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(mt) << "\" x2=\""
        << fmt(px) << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << fmt(t) << "</text>\n";
  }
  for (double t : nice_ticks(y_lo, y_hi, 6)) {
    const double py = sy(t);
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(py) << "\" x2=\""
        << fmt(ml + pw) << "\" y2=\"" << fmt(py)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
        << fmt(t) << "</text>\n";
  }
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 14)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">"
      << x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << fmt(mt + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 20 " << fmt(mt + ph / 2) << ")\">" << y_label
      << "</text>\n";

  for (const Series& s : series) {
    if (s.points.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) out << " ";
      out << fmt(sx(s.points[i].first)) << "," << fmt(sy(s.points[i].second));
    }
    out << "\"/>\n";
  }

  double ly = mt + 10.0;
  for (const Series& s : series) {
    out << "<line x1=\"" << fmt(ml + pw + 12) << "\" y1=\"" << fmt(ly)
        << "\" x2=\"" << fmt(ml + pw + 36) << "\" y2=\"" << fmt(ly)
        << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(ml + pw + 42) << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name
        << "</text>\n";
    ly += 20.0;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed on '" + svg_path + "'");
}

}  // namespace

void render_plot(const std::string& csv_path, PlotKind kind,
                 const std::string& svg_path) {
  const Csv csv = read_csv(csv_path);
  std::vector<Series> series;

  if (kind == PlotKind::kLoss) {
    const int ce = csv.column("epoch");
    const int ct = csv.column("train_loss");
    const int cv = csv.column("val_loss");
    Series train{"train loss", "#1f77b4", {}};
    Series val{"validation loss", "#d62728", {}};
    for (const auto& row : csv.rows) {
      train.points.emplace_back(to_double(row[ce]), to_double(row[ct]));
      val.points.emplace_back(to_double(row[ce]), to_double(row[cv]));
    }
    series = {train, val};
    render_series(series, "Training convergence", "epoch", "loss", svg_path);
    return;
  }

  const int cs = csv.column("snr_db");
  const int cm = csv.column("method");
  const int cr = csv.column("spectral_efficiency");
  const std::map<std::string, std::string> colors = {
      {"genie", "#2ca02c"}, {"nn", "#1f77b4"}, {"random", "#d62728"}};
  std::map<std::string, Series> by_method;
  for (const auto& row : csv.rows) {
    const std::string& method = row[cm];
    auto [it, inserted] = by_method.try_emplace(method);
    if (inserted) {
      it->second.name = method;
      const auto color = colors.find(method);
      it->second.color = color == colors.end() ? "#7f7f7f" : color->second;
    }
    it->second.points.emplace_back(to_double(row[cs]), to_double(row[cr]));
  }
  for (auto& [name, s] : by_method) {
    std::sort(s.points.begin(), s.points.end());
    series.push_back(s);
  }
  render_series(series, "Spectral efficiency vs SNR", "SNR (dB)",
                "spectral efficiency (bits/s/Hz)", svg_path);
}

}  // namespace beamforge
