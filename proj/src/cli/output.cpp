#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace snev::cli {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string fmt_prec(double v, int prec) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, prec);
  return std::string(buf, res.ptr);
}

std::string fmt_fixed2(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return fmt_double(v.get<double>());
  throw std::runtime_error("csv_cell: unsupported value type");
}

std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<nlohmann::json>& records) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const nlohmann::json& rec : records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      if (rec.contains(columns[i])) out += csv_cell(rec.at(columns[i]));
    }
    out += '\n';
  }
  return out;
}

std::string svg_chart(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<SvgSeries>& series) {
  constexpr int kW = 720, kH = 480;
  constexpr double kL = 80, kR = 30, kT = 46, kB = 56;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (const SvgSeries& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmin <= xmax)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double xpad = 0.04 * (xmax - xmin), ypad = 0.07 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
       "viewBox=\"0 0 720 480\">\n";
  s += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"360\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" + title + "</text>\n";

  // frame
  s += "<rect x=\"" + fmt_fixed2(kL) + "\" y=\"" + fmt_fixed2(kT) + "\" width=\"" +
       fmt_fixed2(kW - kL - kR) + "\" height=\"" + fmt_fixed2(kH - kT - kB) +
       "\" fill=\"none\" stroke=\"#404040\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    const double gx = px(xv), gy = py(yv);
    s += "<line x1=\"" + fmt_fixed2(gx) + "\" y1=\"" + fmt_fixed2(kH - kB) + "\" x2=\"" +
         fmt_fixed2(gx) + "\" y2=\"" + fmt_fixed2(kH - kB + 6) + "\" stroke=\"#404040\"/>\n";
    s += "<text x=\"" + fmt_fixed2(gx) + "\" y=\"" + fmt_fixed2(kH - kB + 22) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         fmt_prec(xv, 4) + "</text>\n";
    s += "<line x1=\"" + fmt_fixed2(kL - 6) + "\" y1=\"" + fmt_fixed2(gy) + "\" x2=\"" +
         fmt_fixed2(kL) + "\" y2=\"" + fmt_fixed2(gy) + "\" stroke=\"#404040\"/>\n";
    s += "<text x=\"" + fmt_fixed2(kL - 10) + "\" y=\"" + fmt_fixed2(gy + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
         fmt_prec(yv, 4) + "</text>\n";
  }
  s += "<text x=\"" + fmt_fixed2((kL + kW - kR) / 2) + "\" y=\"" + fmt_fixed2(kH - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + x_label +
       "</text>\n";
  s += "<text x=\"20\" y=\"" + fmt_fixed2((kT + kH - kB) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 "
       "20 " + fmt_fixed2((kT + kH - kB) / 2) + ")\">" + y_label + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const SvgSeries& ser = series[k];
    const char* col = kColors[k % 4];
    std::string pts;
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      pts += fmt_fixed2(px(ser.x[i])) + "," + fmt_fixed2(py(ser.y[i])) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(col) + "\" stroke-width=\"1.5\" points=\"" +
         pts + "\"/>\n";
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(ser.x[i]) || !std::isfinite(ser.y[i])) continue;
      s += "<circle cx=\"" + fmt_fixed2(px(ser.x[i])) + "\" cy=\"" + fmt_fixed2(py(ser.y[i])) +
           "\" r=\"3\" fill=\"" + std::string(col) + "\"/>\n";
    }
    const double ly = kT + 18.0 + 18.0 * static_cast<double>(k);
    s += "<line x1=\"" + fmt_fixed2(kW - kR - 150) + "\" y1=\"" + fmt_fixed2(ly - 4) + "\" x2=\"" +
         fmt_fixed2(kW - kR - 126) + "\" y2=\"" + fmt_fixed2(ly - 4) + "\" stroke=\"" +
         std::string(col) + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt_fixed2(kW - kR - 120) + "\" y=\"" + fmt_fixed2(ly) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + ser.name + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace snev::cli
