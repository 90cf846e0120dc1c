#include "pseudochaos/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace pchaos {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace

QuadratureResult gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = wgk[7] * fc;
  double gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    kron += wgk[j] * fsum;
    if (j % 2 == 1) gauss += wg[j / 2] * fsum;
  }
  QuadratureResult r;
  r.value = kron * h;
  r.error_estimate = std::abs((kron - gauss) * h);
  r.evaluations = 15;
  return r;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, int max_intervals) {
  QuadratureResult total;
  if (a == b) return total;
  std::priority_queue<Panel> heap;
  auto first = gauss_kronrod_15(f, a, b);
  heap.push({a, b, first.value, first.error_estimate});
  double value = first.value, error = first.error_estimate;
  int evals = first.evaluations;
  while (static_cast<int>(heap.size()) < max_intervals &&
         error > std::max(abs_tol, rel_tol * std::abs(value))) {
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (m <= p.a || m >= p.b) {
      // Interval cannot be split further in double precision.
      heap.push({p.a, p.b, p.value, 0.0});
      error -= p.error;
      break;
    }
    auto l = gauss_kronrod_15(f, p.a, m);
    auto r = gauss_kronrod_15(f, m, p.b);
    evals += 30;
    value += l.value + r.value - p.value;
    error += l.error_estimate + r.error_estimate - p.error;
    heap.push({p.a, m, l.value, l.error_estimate});
    heap.push({m, p.b, r.value, r.error_estimate});
  }
  // Resum to avoid drift from the running updates.
  value = 0.0;
  error = 0.0;
  std::vector<Panel> panels;
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : panels) {
    value += p.value;
    error += p.error;
  }
  total.value = value;
  total.error_estimate = error;
  total.evaluations = evals;
  total.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
  return total;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::span<const double> points, double abs_tol,
                                    double rel_tol, int max_intervals_per_panel) {
  QuadratureResult total;
  if (points.size() < 2) return total;
  const double share = abs_tol / static_cast<double>(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] <= points[i]) continue;
    auto r = integrate_adaptive(f, points[i], points[i + 1], share, rel_tol,
                                max_intervals_per_panel);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  return total;
}

}  // namespace pchaos
