#include "xlpc/efficiency.hpp"

#include <cmath>
#include <limits>

#include "xlpc/errors.hpp"

namespace xlpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_gamma(double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("SINR must be non-negative");
}

}  // namespace

EfficiencyCurve::EfficiencyCurve(double c) : c_(c) {
  if (!(c > 0.0)) throw DomainError("efficiency constant c must be > 0");
}

double EfficiencyCurve::operator()(double gamma) const {
  require_gamma(gamma);
  if (gamma == 0.0) return 0.0;
  return std::exp(-c_ / gamma);
}

double EfficiencyCurve::derivative(double gamma) const {
  require_gamma(gamma);
  if (gamma == 0.0) return 0.0;
  return c_ / (gamma * gamma) * std::exp(-c_ / gamma);
}

QueueStats queue_stats_for_success(double f, double q, int k) {
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("success probability must lie in [0, 1]");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("arrival probability must lie in (0, 1]");
  if (k < 1) throw DomainError("buffer size must be >= 1");

  QueueStats s;
  s.q = q;
  s.k = k;
  s.f = f;
  if (f == 0.0) {
    s.rho = kInf;
    s.pi_k = 1.0;
    s.phi = 1.0;
    s.transmit_ratio = 1.0 / q;
    return s;
  }
  if (q == 1.0) {
    s.rho = f == 1.0 ? 0.0 : kInf;
    s.pi_k = f == 1.0 ? 0.0 : 1.0;
    s.phi = (1.0 - f) * s.pi_k;
    s.transmit_ratio = (1.0 - s.phi) / f;
    return s;
  }

  const double one_minus_f = 1.0 - f;
  s.rho = q * one_minus_f / ((1.0 - q) * f);
  if (s.rho > 1.0) {
    // 1/pi = sum_{m=0..K} rho^{-m}; powers of 1/rho stay bounded.
    const double r = 1.0 / s.rho;
    double term = 1.0;
    double tail = 0.0;  // sum_{m=1..K} r^{m-1}
    for (int m = 1; m <= k; ++m) {
      tail += term;
      term *= r;
    }
    const double total = 1.0 + r * tail;
    s.pi_k = 1.0 / total;
    // (1 - pi) / f = r * tail / total / f, with r / f = (1 - q) / (q (1 - f)).
    const double r_over_f = (1.0 - q) / (q * one_minus_f);
    s.transmit_ratio = (r_over_f * tail + 1.0) / total;
  } else {
    double power = 1.0;
    double total = 0.0;
    for (int m = 0; m <= k; ++m) {
      total += power;
      if (m < k) power *= s.rho;
    }
    s.pi_k = power / total;
    s.transmit_ratio = (1.0 - one_minus_f * s.pi_k) / f;
  }
  s.phi = one_minus_f * s.pi_k;
  return s;
}

QueueStats queue_stats(const EfficiencyCurve& curve, const SystemParams& params, double gamma) {
  return queue_stats_for_success(curve(gamma), params.arrival_q, params.buffer_k);
}

double ee_goodman(const SystemParams& params, double gamma, double power) {
  if (!(power > 0.0)) throw DomainError("Goodman efficiency is unbounded at zero power");
  return params.rate_r * EfficiencyCurve::from(params)(gamma) / power;
}

double ee_fixedcost(const SystemParams& params, double gamma, double power) {
  if (!(power >= 0.0)) throw DomainError("power must be non-negative");
  if (params.b_fixed + power <= 0.0) throw DomainError("zero total power cost");
  return params.rate_r * EfficiencyCurve::from(params)(gamma) / (params.b_fixed + power);
}

UtilityTerms utility_terms(const SystemParams& params, double gamma) {
  const QueueStats s = queue_stats(EfficiencyCurve::from(params), params, gamma);
  UtilityTerms t;
  // R q (1 - phi), taken through the transmit ratio: 1 - phi cancels badly
  // when f is tiny and phi is within an ulp of one.
  t.throughput = params.rate_r * params.arrival_q * s.f * s.transmit_ratio;
  t.cost_ratio = params.arrival_q * s.transmit_ratio;
  return t;
}

double ee_crosslayer(const SystemParams& params, double gamma, double power) {
  if (!(power >= 0.0)) throw DomainError("power must be non-negative");
  if (params.b_fixed + power <= 0.0) throw DomainError("zero total power cost");
  const UtilityTerms t = utility_terms(params, gamma);
  if (t.throughput == 0.0) return 0.0;
  return t.throughput / (params.b_fixed + power * t.cost_ratio);
}

Derivatives derivatives(const EfficiencyCurve& curve, const SystemParams& params, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("derivatives need SINR > 0");
  Derivatives d;
  const double f = curve(gamma);
  d.df = curve.derivative(gamma);
  const double q = params.arrival_q;
  const int k = params.buffer_k;
  if (f == 0.0) {
    // exp(-c/gamma) underflowed; every term carries a factor of f.
    return d;
  }
  const QueueStats s = queue_stats_for_success(f, q, k);
  if (q == 1.0) {
    d.dphi = -d.df;
    return d;
  }
  d.drho = -q * d.df / ((1.0 - q) * f * f);
  if (s.rho > 1.0) {
    // pi^2 * sum_{m=1..K} m r^{m+1}, kept as r^2 * sum m r^{m-1}
    const double r = 1.0 / s.rho;
    double acc = 0.0;
    double rp = 1.0;
    for (int m = 1; m <= k; ++m) {
      acc += m * rp;
      rp *= r;
    }
    d.dpi_drho = s.pi_k * s.pi_k * r * r * acc;
    // drho * r^2 folded together: drho alone overflows once f^2 underflows.
    const double rf = (1.0 - q) / (q * (1.0 - f));
    const double chain = -q * d.df / (1.0 - q) * rf * rf * s.pi_k * s.pi_k * acc;
    d.dphi = -d.df * s.pi_k + (1.0 - f) * chain;
    return d;
  } else {
    // sum_{m=1..K} m rho^{2K-m-1} / S^2, S = sum_{m=0..K} rho^m
    double total = 0.0;
    double p = 1.0;
    for (int m = 0; m <= k; ++m) {
      total += p;
      p *= s.rho;
    }
    double acc = 0.0;
    for (int m = 1; m <= k; ++m) acc += m * std::pow(s.rho, 2 * k - m - 1);
    d.dpi_drho = acc / (total * total);
  }
  d.dphi = -d.df * s.pi_k + (1.0 - f) * d.drho * d.dpi_drho;
  return d;
}

}  // namespace xlpc
