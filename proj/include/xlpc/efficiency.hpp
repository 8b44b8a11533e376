#pragma once

#include "xlpc/channel.hpp"

namespace xlpc {

/// Packet success rate f(x) = exp(-c/x). Sigmoidal: convex on (0, c/2],
/// concave beyond, f(0) = 0 and f -> 1.
class EfficiencyCurve {
 public:
  explicit EfficiencyCurve(double c);
  static EfficiencyCurve from(const SystemParams& params) {
    return EfficiencyCurve(params.efficiency_c());
  }

  double c() const { return c_; }
  double operator()(double gamma) const;
  double derivative(double gamma) const;

 private:
  double c_;
};

/// Finite-buffer statistics at one SINR.
struct QueueStats {
  double q = 0.0;
  int k = 0;
  double f = 0.0;
  double rho = 0.0;    // load ratio, +inf when f = 0
  double pi_k = 0.0;   // stationary probability that the buffer is full
  double phi = 0.0;    // packet loss probability (1 - f) * pi_k
  /// (1 - phi) / f, the expected number of transmissions per offered packet
  /// scaled by its acceptance; tends to 1/q as f -> 0.
  double transmit_ratio = 0.0;
};

/// Statistics for a given success probability f in [0, 1].
QueueStats queue_stats_for_success(double f, double q, int k);

QueueStats queue_stats(const EfficiencyCurve& curve, const SystemParams& params, double gamma);

/// Goodman metric R f(gamma) / p. Requires p > 0.
double ee_goodman(const SystemParams& params, double gamma, double power);

/// Fixed-cost metric R f(gamma) / (b + p).
double ee_fixedcost(const SystemParams& params, double gamma, double power);

/// Cross-layer metric R q (1 - phi) / (b + q p (1 - phi) / f).
double ee_crosslayer(const SystemParams& params, double gamma, double power);

/// The two SINR-dependent factors of the cross-layer metric:
/// throughput = R q (1 - phi) and cost_ratio = q (1 - phi) / f, so that
/// ee_crosslayer = throughput / (b + p * cost_ratio).
struct UtilityTerms {
  double throughput = 0.0;
  double cost_ratio = 0.0;
};
UtilityTerms utility_terms(const SystemParams& params, double gamma);

struct Derivatives {
  double df = 0.0;           // f'(gamma)
  double dphi = 0.0;         // phi'(gamma)
  double drho = 0.0;         // d rho / d gamma
  double dpi_drho = 0.0;     // d pi_k / d rho
};

/// First derivatives at gamma > 0, phi' via the chain rule through rho.
Derivatives derivatives(const EfficiencyCurve& curve, const SystemParams& params, double gamma);

}  // namespace xlpc
