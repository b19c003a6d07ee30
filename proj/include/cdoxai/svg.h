#ifndef CDOXAI_SVG_H_
#define CDOXAI_SVG_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cdoxai {

// Horizontal bar chart, one bar per label in the given order. `comment` is
// embedded verbatim as an XML comment.
std::string BarChartSvg(const std::string& title,
                        std::span<const std::string> labels,
                        std::span<const double> values,
                        const std::string& comment);

// Scatter of (x, y) points with a dashed y = 0 reference line.
std::string ScatterSvg(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       std::span<const std::pair<double, double>> points,
                       const std::string& comment);

std::string XmlEscape(const std::string& text);

}  // namespace cdoxai

#endif  // CDOXAI_SVG_H_
