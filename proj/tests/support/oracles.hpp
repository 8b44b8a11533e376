// Independent reference computations for the tests. Everything here is
// written from the model definitions directly, in long double, without
// calling the library's efficiency or queue code.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline long double f_eff(long double c, long double gamma) {
  return gamma <= 0 ? 0.0L : std::exp(-c / gamma);
}

// Full-buffer probability from the plain power sum of rho^m.
inline long double pi_k(long double q, long double f, int k) {
  if (f == 0) return 1.0L;
  if (q == 1) return 1.0L;
  const long double rho = q * (1 - f) / ((1 - q) * f);
  long double s = 0, term = 1;
  for (int m = 0; m <= k; ++m) {
    s += term;
    if (m < k) term *= rho;
  }
  return term / s;
}

inline long double phi(long double q, long double f, int k) { return (1 - f) * pi_k(q, f, k); }

inline long double ee_cross(long double rate, long double q, int k, long double b, long double c,
                            long double gamma, long double p) {
  const long double f = f_eff(c, gamma);
  if (f == 0) return 0.0L;
  const long double ph = phi(q, f, k);
  return rate * q * (1 - ph) / (b + q * p * (1 - ph) / f);
}

inline long double ee_fixed(long double rate, long double b, long double c, long double gamma,
                            long double p) {
  return rate * f_eff(c, gamma) / (b + p);
}

inline long double ee_good(long double rate, long double c, long double gamma, long double p) {
  return rate * f_eff(c, gamma) / p;
}

// Throughput and cost-ratio pair: A = Rq(1 - phi), B = q(1 - phi)/f.
struct Pair {
  long double throughput;
  long double cost_ratio;
};

// 1 - phi = f pi_K + (1 - pi_K), with 1 - pi_K summed directly so tiny f
// does not cancel.
inline long double one_minus_phi(long double q, long double f, int k) {
  if (f == 0) return 0.0L;
  if (q == 1) return f;
  const long double rho = q * (1 - f) / ((1 - q) * f);
  long double s = 0, below = 0, term = 1;
  for (int m = 0; m <= k; ++m) {
    s += term;
    if (m < k) below += term;
    if (m < k) term *= rho;
  }
  // Divide through by rho^K first when rho is large.
  if (rho > 1) {
    long double inv = 1, sum_inv = 0, below_inv = 0;
    for (int m = 0; m <= k; ++m) {
      sum_inv += inv;
      if (m > 0) below_inv += inv;
      inv /= rho;
    }
    return (f + below_inv) / sum_inv;
  }
  return f * term / s + below / s;
}

inline Pair pair_at(long double rate, long double q, int k, long double c, long double gamma) {
  const long double f = f_eff(c, gamma);
  const long double keep = one_minus_phi(q, f, k);
  return {rate * q * keep, f == 0 ? 1.0L : q * keep / f};
}

// Moments of an exponential with the given mean truncated to [lo, hi],
// by composite Simpson integration.
struct Moments {
  double mean;
  double var;
};

inline Moments truncated_exponential(double mean, double lo, double hi, int intervals = 200000) {
  auto dens = [&](double x) { return std::exp(-x / mean); };
  const double h = (hi - lo) / intervals;
  long double z = 0, m1 = 0, m2 = 0;
  for (int j = 0; j <= intervals; ++j) {
    const double x = lo + j * h;
    const double w = (j == 0 || j == intervals) ? 1 : (j % 2 ? 4 : 2);
    z += w * dens(x);
    m1 += w * x * dens(x);
    m2 += w * x * x * dens(x);
  }
  const double mu = static_cast<double>(m1 / z);
  return {mu, static_cast<double>(m2 / z) - mu * mu};
}

}  // namespace oracle
