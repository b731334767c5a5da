#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "critmed/errors.hpp"

namespace critmed {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-300;
  // Bisections allowed on top of the initial partition.
  int max_subdivisions = 20000;
  // Tail truncation: stop once a panel adds less than this fraction of the
  // accumulated value.
  double tail_threshold = 1e-16;

  void validate() const;
};

template <typename T>
struct IntegralResult {
  T value{};
  double error_estimate = 0.0;
  long evaluations = 0;

  IntegralResult& operator+=(const IntegralResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evaluations += o.evaluations;
    return *this;
  }
};

/// Thrown when the requested tolerance cannot be met. Carries the best
/// available estimate.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, IntegralResult<std::complex<double>> best)
      : Error(ErrorKind::QuadratureFailure, what), best_(best) {}
  const IntegralResult<std::complex<double>>& best_estimate() const noexcept { return best_; }

 private:
  IntegralResult<std::complex<double>> best_;
};

namespace detail {

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

struct ErrorModel {
  double error;
  bool roundoff;  // estimate sits at the rounding floor
};

// QUADPACK-style error scaling for one real component.
inline ErrorModel scaled_error(double kronrod, double gauss, double resasc, double resabs) {
  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  return {std::max(err, floor), err <= floor};
}

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool roundoff;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T res_k = fc * kWgk[7];
  T res_g = fc * kWg[3];
  T fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    res_k += kWgk[j] * (fv1[j] + fv2[j]);
    if (j % 2 == 1) res_g += kWg[j / 2] * (fv1[j] + fv2[j]);
  }
  // Per-component absolute integrals for the error model.
  auto component = [&](auto part) {
    const double mean = part(res_k) * 0.5;
    double resabs = kWgk[7] * std::abs(part(fc));
    double resasc = kWgk[7] * std::abs(part(fc) - mean);
    for (int j = 0; j < 7; ++j) {
      resabs += kWgk[j] * (std::abs(part(fv1[j])) + std::abs(part(fv2[j])));
      resasc += kWgk[j] * (std::abs(part(fv1[j]) - mean) + std::abs(part(fv2[j]) - mean));
    }
    const double h = std::abs(half);
    return scaled_error(part(res_k) * half, part(res_g) * half, resasc * h, resabs * h);
  };
  if constexpr (std::is_same_v<T, double>) {
    const ErrorModel e = component([](double v) { return v; });
    return {a, b, res_k * half, e.error, e.roundoff};
  } else {
    const ErrorModel re = component([](const T& v) { return v.real(); });
    const ErrorModel im = component([](const T& v) { return v.imag(); });
    return {a, b, res_k * half, std::hypot(re.error, im.error), re.roundoff && im.roundoff};
  }
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over the partition
/// given by `breakpoints` (sorted, including both ends). The segment with the
/// largest error is bisected until the summed error meets
/// max(abs_tol, rel_tol |I|) or the subdivision budget is spent.
///
/// Stops early when the worst segment is already at its rounding floor.
/// Reports through `converged` instead of throwing so callers can combine
/// partial integrals before deciding.
template <typename T, typename F>
IntegralResult<T> integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                     const QuadratureConfig& cfg, bool* converged) {
  using detail::Segment;
  std::priority_queue<Segment<T>> heap;
  IntegralResult<T> out;
  T total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    auto s = detail::gk15<T>(f, breakpoints[i], breakpoints[i + 1]);
    out.evaluations += 15;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  auto tolerance = [&]() {
    return std::max(cfg.abs_tol, cfg.rel_tol * detail::magnitude(total));
  };
  int subdivisions = 0;
  bool ok = true;
  while (!heap.empty() && total_err > tolerance()) {
    if (subdivisions >= cfg.max_subdivisions) {
      ok = false;
      break;
    }
    Segment<T> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.roundoff || !(mid > worst.a && mid < worst.b)) {
      ok = false;
      break;
    }
    heap.pop();
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    out.evaluations += 30;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (subdivisions % 256 == 0) {
      // Resum to keep cancellation drift out of the running totals.
      auto copy = heap;
      total = T{};
      total_err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }
  // Final compensated sum.
  std::vector<Segment<T>> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(),
            [](const Segment<T>& x, const Segment<T>& y) { return x.a < y.a; });
  T sum{}, comp{};
  double err = 0.0;
  for (const auto& s : segs) {
    const T y = s.value - comp;
    const T t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    err += s.error;
  }
  out.value = sum;
  out.error_estimate = err;
  if (converged) *converged = ok && err <= std::max(cfg.abs_tol, cfg.rel_tol * detail::magnitude(sum)) * 1.000001;
  return out;
}

}  // namespace critmed
