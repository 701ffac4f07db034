#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace percolab {

// Compensated accumulation; trial statistics are summed in index order so
// results do not depend on how trials were scheduled.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct MeanCi {
  double mean = 0.0;
  double stddev = 0.0;
  double half_width = 0.0;  // z * stddev / sqrt(n)
  std::size_t n = 0;
};

inline MeanCi mean_ci(const std::vector<double>& xs, double z = 1.96) {
  MeanCi out;
  out.n = xs.size();
  if (xs.empty()) return out;
  KahanSum s;
  for (double x : xs) s.add(x);
  out.mean = s.value() / static_cast<double>(xs.size());
  KahanSum sq;
  for (double x : xs) sq.add((x - out.mean) * (x - out.mean));
  if (xs.size() > 1) {
    out.stddev = std::sqrt(sq.value() / static_cast<double>(xs.size() - 1));
    out.half_width = z * out.stddev / std::sqrt(static_cast<double>(xs.size()));
  }
  return out;
}

inline double binomial_half_width(double p_hat, std::size_t n, double z = 1.96) {
  if (n == 0) return 0.0;
  return z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need two equal-length samples");
  const double n = static_cast<double>(x.size());
  KahanSum sx, sy;
  for (double v : x) sx.add(v);
  for (double v : y) sy.add(v);
  const double mx = sx.value() / n, my = sy.value() / n;
  KahanSum sxx, sxy, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  LinearFit f;
  if (sxx.value() == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  f.slope = sxy.value() / sxx.value();
  f.intercept = my - f.slope * mx;
  f.r_squared = syy.value() == 0.0 ? 1.0 : (sxy.value() * sxy.value()) / (sxx.value() * syy.value());
  return f;
}

// Runs fn(i) for i in [0, n) over the given number of workers.  Each index is
// an independent unit with its own random stream, so the schedule cannot
// change any result; outputs must be written to per-index slots.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    std::size_t lo = w * chunk;
    if (lo >= n) break;
    std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline unsigned default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : hc;
}

}  // namespace percolab
