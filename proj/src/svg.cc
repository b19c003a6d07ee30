#include "cdoxai/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cdoxai {

namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string Header(int width, int height, const std::string& title,
                   const std::string& comment) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  // "--" is not allowed inside XML comments.
  std::string safe = comment;
  for (std::size_t p; (p = safe.find("--")) != std::string::npos;) safe.replace(p, 2, "- -");
  s += "<!-- " + safe + " -->\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
       "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + std::to_string(width / 2) +
       "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + XmlEscape(title) + "</text>\n";
  return s;
}

}  // namespace

std::string XmlEscape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string BarChartSvg(const std::string& title,
                        std::span<const std::string> labels,
                        std::span<const double> values,
                        const std::string& comment) {
  const int bar_h = 18;
  const int left = 140;
  const int plot_w = 420;
  const int top = 36;
  const int n = static_cast<int>(std::min(labels.size(), values.size()));
  const int width = left + plot_w + 80;
  const int height = top + n * (bar_h + 4) + 20;
  double max_v = 0.0;
  for (int i = 0; i < n; ++i) max_v = std::max(max_v, values[i]);
  if (max_v <= 0.0) max_v = 1.0;

  std::string s = Header(width, height, title, comment);
  for (int i = 0; i < n; ++i) {
    const double y = top + i * (bar_h + 4);
    const double w = plot_w * std::max(0.0, values[i]) / max_v;
    s += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + Num(y + bar_h - 5) +
         "\" text-anchor=\"end\">" + XmlEscape(labels[i]) + "</text>\n";
    s += "<rect x=\"" + std::to_string(left) + "\" y=\"" + Num(y) + "\" width=\"" +
         Num(w) + "\" height=\"" + std::to_string(bar_h) + "\" fill=\"#1f77b4\"/>\n";
    s += "<text x=\"" + Num(left + w + 4) + "\" y=\"" + Num(y + bar_h - 5) + "\">" +
         Label(values[i]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string ScatterSvg(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       std::span<const std::pair<double, double>> points,
                       const std::string& comment) {
  const int width = 560;
  const int height = 400;
  const double left = 70, right = 20, top = 36, bottom = 50;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  double x0 = 0, x1 = 1, y0 = -1, y1 = 1;
  if (!points.empty()) {
    x0 = x1 = points.front().first;
    y0 = y1 = points.front().second;
    for (const auto& [x, y] : points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    y0 = std::min(y0, 0.0);
    y1 = std::max(y1, 0.0);
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto sx = [&](double x) { return left + pw * (x - x0) / (x1 - x0); };
  auto sy = [&](double y) { return top + ph * (1.0 - (y - y0) / (y1 - y0)); };

  std::string s = Header(width, height, title, comment);
  s += "<rect x=\"" + Num(left) + "\" y=\"" + Num(top) + "\" width=\"" + Num(pw) +
       "\" height=\"" + Num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  s += "<line x1=\"" + Num(left) + "\" y1=\"" + Num(sy(0)) + "\" x2=\"" + Num(left + pw) +
       "\" y2=\"" + Num(sy(0)) + "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  for (const auto& [x, y] : points) {
    s += "<circle cx=\"" + Num(sx(x)) + "\" cy=\"" + Num(sy(y)) + "\" r=\"2\" fill=\"" +
         (y >= 0 ? "#d62728" : "#1f77b4") + "\" fill-opacity=\"0.6\"/>\n";
  }
  s += "<text x=\"" + Num(left) + "\" y=\"" + Num(top + ph + 16) + "\">" + Label(x0) + "</text>\n";
  s += "<text x=\"" + Num(left + pw) + "\" y=\"" + Num(top + ph + 16) +
       "\" text-anchor=\"end\">" + Label(x1) + "</text>\n";
  s += "<text x=\"" + Num(left - 4) + "\" y=\"" + Num(top + 10) + "\" text-anchor=\"end\">" +
       Label(y1) + "</text>\n";
  s += "<text x=\"" + Num(left - 4) + "\" y=\"" + Num(top + ph) + "\" text-anchor=\"end\">" +
       Label(y0) + "</text>\n";
  s += "<text x=\"" + Num(left + pw / 2) + "\" y=\"" + Num(height - 12.0) +
       "\" text-anchor=\"middle\">" + XmlEscape(x_label) + "</text>\n";
  s += "<text transform=\"translate(16," + Num(top + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + XmlEscape(y_label) + "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace cdoxai
