#pragma once

#include <span>

namespace cspi {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of y against x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Least-squares slope of ln y against ln x; all values must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace cspi
