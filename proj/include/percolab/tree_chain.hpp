#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "percolab/rng.hpp"

namespace percolab {

// Distance-from-start of the walk on the infinite deg-regular tree is itself
// a chain on {0,1,2,...}: from 0 it steps up; from k >= 1 it steps up with
// probability (deg-1)/deg and down with 1/deg.  The delayed variant proposes
// uniformly among self and the deg neighbors, so it additionally holds with
// probability 1/(deg+1).  deg = 2 gives the one-dimensional lattice.
// Working through the distance law sidesteps materializing trees whose balls
// outgrow memory at the horizons the estimators need.
struct RegularTreeChain {
  int deg;
  bool delayed;

  RegularTreeChain(int deg_, bool delayed_) : deg(deg_), delayed(delayed_) {
    if (deg < 2) throw std::invalid_argument("RegularTreeChain: deg must be >= 2");
  }

  double up_from_zero() const { return delayed ? static_cast<double>(deg) / (deg + 1) : 1.0; }
  double up() const {
    return delayed ? static_cast<double>(deg - 1) / (deg + 1)
                   : static_cast<double>(deg - 1) / deg;
  }
  double down() const { return delayed ? 1.0 / (deg + 1) : 1.0 / deg; }

  // number of vertices at distance k
  double sphere_size(long k) const {
    if (k < 0) throw std::invalid_argument("sphere_size: negative distance");
    if (k == 0) return 1.0;
    return deg * std::pow(static_cast<double>(deg - 1), static_cast<double>(k - 1));
  }

  // exact distance law at time t, entries 0..min(t, radius_cap)
  std::vector<double> distribution(long t, long radius_cap = -1) const {
    if (t < 0) throw std::invalid_argument("distribution: negative time");
    long len = radius_cap >= 0 ? std::min(t, radius_cap) : t;
    std::vector<double> q(len + 1, 0.0), next(len + 1, 0.0);
    q[0] = 1.0;
    const double pu0 = up_from_zero(), pu = up(), pd = down();
    const double stay0 = 1.0 - pu0, stay = 1.0 - pu - pd;
    for (long s = 0; s < t; ++s) {
      std::fill(next.begin(), next.end(), 0.0);
      next[0] += q[0] * stay0;
      if (len >= 1) next[1] += q[0] * pu0;
      for (long k = 1; k <= len; ++k) {
        if (q[k] == 0.0) continue;
        next[k - 1] += q[k] * pd;
        next[k] += q[k] * stay;
        if (k + 1 <= len) next[k + 1] += q[k] * pu;
        // mass that would leave the cap is dropped; callers keep t <= cap
        // whenever the full law matters
      }
      q.swap(next);
    }
    return q;
  }

  // walk-distribution value at any single vertex at distance k (radial symmetry)
  double mu_at_distance(const std::vector<double>& q, long k) const {
    if (k < 0 || k >= static_cast<long>(q.size())) return 0.0;
    return q[k] / sphere_size(k);
  }

  double return_probability(long t) const {
    auto q = distribution(t);
    return q[0];
  }

  double exact_mean_distance(long t) const {
    auto q = distribution(t);
    double m = 0.0;
    for (long k = 0; k < static_cast<long>(q.size()); ++k) m += q[k] * static_cast<double>(k);
    return m;
  }

  long sample_distance(long t, CounterRng& rng) const {
    long k = 0;
    const double pu0 = up_from_zero(), pu = up(), pd = down();
    for (long s = 0; s < t; ++s) {
      double u = rng.uniform();
      if (k == 0) {
        if (u < pu0) k = 1;
      } else {
        if (u < pu) ++k;
        else if (u < pu + pd) --k;
      }
    }
    return k;
  }

  // entropy of the full walk distribution, computed from the radial law
  double entropy(long t) const {
    auto q = distribution(t);
    double h = 0.0;
    for (long k = 0; k < static_cast<long>(q.size()); ++k) {
      if (q[k] <= 0.0) continue;
      h += q[k] * (std::log(sphere_size(k)) - std::log(q[k]));
    }
    return h;
  }
};

}  // namespace percolab
