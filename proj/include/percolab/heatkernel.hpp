#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "percolab/rng.hpp"

namespace percolab {

// Symmetric generator with nonnegative off-diagonal entries and zero row sums:
// the cone of continuous-time doubly stochastic semigroups exp(tA).
struct GeneratorMatrix {
  Eigen::MatrixXd a;
  int n() const { return static_cast<int>(a.rows()); }
};

inline void validate_generator(const GeneratorMatrix& g, double tol = 1e-12) {
  const auto& a = g.a;
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("generator: matrix must be square and nonempty");
  int n = g.n();
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol)
        throw std::invalid_argument("generator: matrix is not symmetric");
      if (i != j && a(i, j) < -tol)
        throw std::invalid_argument("generator: negative off-diagonal entry");
      row += a(i, j);
    }
    if (std::abs(row) > tol) throw std::invalid_argument("generator: row sum is not zero");
  }
}

inline GeneratorMatrix random_generator(int n, CounterRng& rng, double scale = 1.0) {
  GeneratorMatrix g;
  g.a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double c = scale * rng.uniform();
      g.a(i, j) = c;
      g.a(j, i) = c;
    }
  for (int i = 0; i < n; ++i) g.a(i, i) = -(g.a.row(i).sum() - g.a(i, i));
  return g;
}

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> heat_kernel_impl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a, Scalar t) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("heat_kernel: eigendecomposition failed");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = es.eigenvalues();
  for (int i = 0; i < w.size(); ++i) w(i) = std::exp(t * w(i));
  Mat b = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  // the decomposition leaves asymmetry at roundoff level; fold it away
  b = ((b + Mat(b.transpose())) / Scalar(2)).eval();
  return b;
}

template <typename Scalar>
Scalar entropy_impl(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& b,
                    Scalar clamp_tol) {
  Scalar h = 0;
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Scalar x = b(i, j);
      if (x < -clamp_tol) throw std::invalid_argument("matrix_entropy: negative entry");
      if (x <= Scalar(0)) continue;  // 0 log 0 = 0; clamped negatives likewise
      h -= x * std::log(x);
    }
  return h;
}

}  // namespace detail

// B = exp(tA) by symmetric eigendecomposition; doubly stochastic within 1e-10,
// entries below zero by at most 1e-12 are clamped.
inline Eigen::MatrixXd heat_kernel(const GeneratorMatrix& g, double t,
                                   double stochastic_tol = 1e-10, double clamp_tol = 1e-12) {
  validate_generator(g);
  if (!(t >= 0.0)) throw std::invalid_argument("heat_kernel: t must be >= 0");
  Eigen::MatrixXd b = detail::heat_kernel_impl<double>(g.a, t);
  int n = g.n();
  for (int i = 0; i < n; ++i) {
    double row = b.row(i).sum(), col = b.col(i).sum();
    if (std::abs(row - 1.0) > stochastic_tol || std::abs(col - 1.0) > stochastic_tol)
      throw std::runtime_error("heat_kernel: result is not doubly stochastic within tolerance");
    for (int j = 0; j < n; ++j) {
      if (b(i, j) < -clamp_tol)
        throw std::runtime_error("heat_kernel: entry below the clamp tolerance");
      if (b(i, j) < 0.0) b(i, j) = 0.0;
    }
  }
  return b;
}

// Sum of -b log b over all entries, with 0 log 0 = 0.
inline double matrix_entropy(const Eigen::MatrixXd& b, double clamp_tol = 1e-12) {
  return detail::entropy_impl<double>(b, clamp_tol);
}

inline double binary_entropy(double x) {
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log(1.0 - x);
  return h;
}

// H(exp(tA)) along a time grid; the drift toward n log n is reported, not assumed.
struct EntropyCurve {
  std::vector<double> t_grid, h_values;
  bool nondecreasing = true;
  double max_dip = 0.0;
};

inline EntropyCurve entropy_in_time(const GeneratorMatrix& g, const std::vector<double>& t_grid,
                                    double dip_tol = 1e-8) {
  EntropyCurve out;
  out.t_grid = t_grid;
  for (double t : t_grid) out.h_values.push_back(matrix_entropy(heat_kernel(g, t)));
  for (std::size_t i = 1; i < out.h_values.size(); ++i) {
    if (!(t_grid[i] >= t_grid[i - 1]))
      throw std::invalid_argument("entropy_in_time: t_grid must be nondecreasing");
    double dip = out.h_values[i - 1] - out.h_values[i];
    if (dip > out.max_dip) out.max_dip = dip;
    if (dip > dip_tol) out.nondecreasing = false;
  }
  return out;
}

// One candidate entropy decrease under an off-diagonal increase of the
// generator, carried with everything needed to reproduce it.
struct ViolationCertificate {
  Eigen::MatrixXd a;
  double t = 0.0;
  int i = 0, j = 0;
  double step = 0.0;
  double h_base = 0.0, h_pert = 0.0;        // double precision
  double h_base_hi = 0.0, h_pert_hi = 0.0;  // long double re-verification
  bool verified = false;                    // decrease survives at higher precision
};

inline std::string certificate_text(const ViolationCertificate& c) {
  char buf[128];
  std::string s;
  std::snprintf(buf, sizeof(buf), "t=%.17g pair=(%d,%d) step=%.17g\n", c.t, c.i, c.j, c.step);
  s += buf;
  std::snprintf(buf, sizeof(buf), "H_base=%.17g H_pert=%.17g (hi: %.17g vs %.17g)\n", c.h_base,
                c.h_pert, c.h_base_hi, c.h_pert_hi);
  s += buf;
  for (int r = 0; r < c.a.rows(); ++r) {
    for (int q = 0; q < c.a.cols(); ++q) {
      std::snprintf(buf, sizeof(buf), "%s%.17g", q ? " " : "", c.a(r, q));
      s += buf;
    }
    s += '\n';
  }
  return s;
}

struct ProbeReport {
  int n = 0;
  long trials = 0;
  double step = 0.0;
  std::vector<double> t_grid;
  long comparisons = 0;
  std::vector<ViolationCertificate> candidates;  // every dip beyond tolerance
  long verified_count = 0;
  // the experiment is conclusive when nothing dipped, or every dip survives
  // re-verification (a reproducible counterexample is a valid outcome)
  bool conclusive() const {
    return candidates.empty() ||
           verified_count == static_cast<long>(candidates.size());
  }
};

namespace detail {

inline long double entropy_hi(const Eigen::MatrixXd& a, long double t) {
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  MatL al = a.cast<long double>();
  MatL bl = heat_kernel_impl<long double>(al, t);
  for (int i = 0; i < bl.rows(); ++i)
    for (int j = 0; j < bl.cols(); ++j)
      if (bl(i, j) < 0) bl(i, j) = 0;
  return entropy_impl<long double>(bl, static_cast<long double>(1e-12));
}

}  // namespace detail

// Random search for an entropy decrease when one off-diagonal pair of the
// generator is raised (diagonal compensated).  Candidates found in double are
// re-run in long double; only survivors count as violations.
inline ProbeReport monotonicity_probe(int n, long trials, const std::vector<double>& t_grid,
                                      double step, std::uint64_t seed, double tol = 1e-8) {
  if (n < 2 || n > 8) throw std::invalid_argument("monotonicity_probe: n must be in [2, 8]");
  if (step < 0.0) throw std::invalid_argument("monotonicity_probe: step must be >= 0");
  ProbeReport out;
  out.n = n;
  out.trials = trials;
  out.step = step;
  out.t_grid = t_grid;
  const int pairs = n * (n - 1) / 2;
  for (long trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, substream(stream::kTrial, static_cast<std::uint64_t>(trial)));
    GeneratorMatrix base = random_generator(n, rng);
    int pk = static_cast<int>(rng.below(static_cast<std::uint64_t>(pairs)));
    int i = 0, j = 1;
    for (int a = 0, idx = 0; a < n && idx <= pk; ++a)
      for (int b = a + 1; b < n && idx <= pk; ++b, ++idx)
        if (idx == pk) {
          i = a;
          j = b;
        }
    GeneratorMatrix pert = base;
    pert.a(i, j) += step;
    pert.a(j, i) += step;
    pert.a(i, i) -= step;
    pert.a(j, j) -= step;
    for (double t : t_grid) {
      double h0 = matrix_entropy(heat_kernel(base, t));
      double h1 = matrix_entropy(heat_kernel(pert, t));
      ++out.comparisons;
      if (h1 - h0 < -tol) {
        ViolationCertificate c;
        c.a = base.a;
        c.t = t;
        c.i = i;
        c.j = j;
        c.step = step;
        c.h_base = h0;
        c.h_pert = h1;
        long double g0 = detail::entropy_hi(base.a, static_cast<long double>(t));
        long double g1 = detail::entropy_hi(pert.a, static_cast<long double>(t));
        c.h_base_hi = static_cast<double>(g0);
        c.h_pert_hi = static_cast<double>(g1);
        c.verified = (g1 - g0) < -static_cast<long double>(tol);
        if (c.verified) ++out.verified_count;
        out.candidates.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace percolab
