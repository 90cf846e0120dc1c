#pragma once

#include <functional>
#include <span>

namespace pchaos {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod (G7/K15) with a global error budget. Intervals
// with the largest error estimate are bisected until the summed estimate
// drops below max(abs_tol, rel_tol * |value|) or the interval budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-10, double rel_tol = 1e-12,
                                    int max_intervals = 4000);

// Same, with forced breakpoints (kinks, oscillation panels). `points` must be
// ascending and lie in [a, b].
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> points, double abs_tol = 1e-10,
                                    double rel_tol = 1e-12, int max_intervals_per_panel = 2000);

// Fixed 15-point Kronrod rule on [a, b]; returns value and |K15 - G7|.
QuadratureResult gauss_kronrod_15(const std::function<double(double)>& f, double a, double b);

}  // namespace pchaos
