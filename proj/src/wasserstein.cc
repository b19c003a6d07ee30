#include <algorithm>
#include <cmath>
#include <vector>

#include "cdoxai/error.h"
#include "cdoxai/shap.h"

namespace cdoxai {

double Wasserstein1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySample, "Wasserstein distance of an empty sample");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());

  // Sweep the merged support; between consecutive support points both
  // empirical CDFs are constant.
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double previous = std::min(x.front(), y.front());
  double total = 0.0;
  while (i < x.size() || j < y.size()) {
    double next;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j])) {
      next = x[i];
    } else {
      next = y[j];
    }
    total += std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny) *
             (next - previous);
    while (i < x.size() && x[i] == next) ++i;
    while (j < y.size() && y[j] == next) ++j;
    previous = next;
  }
  return total;
}

}  // namespace cdoxai
