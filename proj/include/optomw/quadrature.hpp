#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace optomw::quadrature {

/// Integral of a matrix-valued function with its entry-wise error bound.
template <class Value>
struct Result {
  Value value;
  Value error;
  int intervals = 0;
  bool converged = false;
};

struct Options {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_intervals = 20000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class Value>
double max_abs(const Value& v) {
  return v.cwiseAbs().maxCoeff();
}

template <class Value>
struct Panel {
  double a, b;
  Value value, error;
  double priority;
  bool operator<(const Panel& o) const { return priority < o.priority; }
};

template <class Value, class F>
Panel<Value> rule15(F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const Value fc = f(mid);
  Value kronrod = kKronrod[7] * fc;
  Value gauss = kGauss[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const Value sum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrod[j] * sum;
    if (j % 2 == 1) gauss += kGauss[j / 2] * sum;
  }
  Panel<Value> p{a, b, half * kronrod, (half * (kronrod - gauss)).cwiseAbs(), 0.0};
  p.priority = max_abs(p.error);
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod over a list of panels [x_k, x_{k+1}] in a
/// variable where `f` is smooth. Subdivides the panel with the largest error
/// until sum(error) <= max(abs_tol, rel_tol * max|value|) entry-wise.
template <class Value, class F>
Result<Value> integrate_panels(F&& f, const std::vector<double>& breakpoints, const Options& opt) {
  using detail::max_abs;
  using detail::Panel;
  std::priority_queue<Panel<Value>> open;
  std::vector<Panel<Value>> closed;

  Result<Value> r;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k + 1] > breakpoints[k])) continue;
    auto p = detail::rule15<Value>(f, breakpoints[k], breakpoints[k + 1]);
    if (open.empty() && closed.empty()) {
      r.value = p.value;
      r.error = p.error;
    } else {
      r.value += p.value;
      r.error += p.error;
    }
    open.push(std::move(p));
  }
  int count = static_cast<int>(open.size());

  auto satisfied = [&] {
    return max_abs(r.error) <= std::max(opt.abs_tol, opt.rel_tol * max_abs(r.value));
  };
  while (!open.empty() && !satisfied() && count < opt.max_intervals) {
    Panel<Value> worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 1e-14 * (std::abs(worst.a) + std::abs(worst.b))) {
      closed.push_back(std::move(worst));
      continue;
    }
    auto left = detail::rule15<Value>(f, worst.a, mid);
    auto right = detail::rule15<Value>(f, mid, worst.b);
    r.value += left.value + right.value - worst.value;
    r.error += left.error + right.error - worst.error;
    open.push(std::move(left));
    open.push(std::move(right));
    ++count;
  }
  r.converged = satisfied();

  // Re-sum from the panels to drop the running-update roundoff.
  bool first = true;
  auto accumulate = [&](const Panel<Value>& p) {
    if (first) {
      r.value = p.value;
      r.error = p.error;
      first = false;
    } else {
      r.value += p.value;
      r.error += p.error;
    }
  };
  for (const auto& p : closed) accumulate(p);
  while (!open.empty()) {
    accumulate(open.top());
    open.pop();
  }
  r.intervals = count;
  return r;
}

/// Integral over the whole real line. Between the sorted `breakpoints` the
/// integrand is used directly; beyond the outer ones x = edge +/- scale (1/t - 1),
/// t in (0, 1], which maps an O(1/x^2) tail onto a smooth finite integrand.
template <class Value, class F>
Result<Value> integrate_real_line(F&& f, std::vector<double> breakpoints, double tail_scale,
                                  const Options& opt) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  const double lo = breakpoints.front();
  const double hi = breakpoints.back();
  const double width = hi - lo;

  // One parameter s covers the line: s in [-1, 0) left tail, [0, width] the
  // finite range, (width, width + 1] right tail.
  auto mapped = [&](double s) -> Value {
    if (s < 0.0) {
      const double t = 1.0 + s;  // (0, 1]
      const double x = lo - tail_scale * (1.0 / t - 1.0);
      return f(x) * (tail_scale / (t * t));
    }
    if (s > width) {
      const double t = 1.0 - (s - width);
      const double x = hi + tail_scale * (1.0 / t - 1.0);
      return f(x) * (tail_scale / (t * t));
    }
    return f(lo + s);
  };

  std::vector<double> params;
  params.reserve(breakpoints.size() + 6);
  for (double t : {-1.0, -0.5, -0.1}) params.push_back(t);
  for (double x : breakpoints) params.push_back(x - lo);
  for (double t : {0.1, 0.5, 1.0}) params.push_back(width + t);
  return integrate_panels<Value>(mapped, params, opt);
}

}  // namespace optomw::quadrature
