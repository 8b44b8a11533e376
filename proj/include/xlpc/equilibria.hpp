#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "xlpc/channel.hpp"

namespace xlpc {

enum class EquilibriumKind { Nash, OperatingPoint, MaxUtility, MinMax };

std::string to_string(EquilibriumKind kind);

/// One static solution concept evaluated on one channel state.
///
/// For MaxUtility and MinMax each user's entry is computed in its own
/// scenario (opponents silent, resp. at full power), so the vectors are a
/// per-user record rather than a jointly played profile.
struct StaticEquilibrium {
  EquilibriumKind kind = EquilibriumKind::Nash;
  PowerProfile profile;
  std::vector<double> sinrs;
  std::vector<double> utilities;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // operating point only
  int sweeps = 0;                                            // Nash only
};

struct SolverOptions {
  double window_lo = 1e-6;   // SINR search window, in units of c
  double window_hi = 1e3;
  double ne_tolerance = 1e-10;  // max power change per sweep, in units of p_max
  int ne_max_sweeps = 10'000;
};

/// Left-hand side of the first-order condition du/dp = 0 expressed in SINR,
///   b * ratio * phi'(gamma) + q ((1 - phi) / f)^2 (f - gamma f'(gamma)),
/// where ratio = |g|^2 / interference = d gamma / d p. Negative while the
/// utility still increases with power.
double best_response_condition(const SystemParams& params, double gain_over_interference,
                               double gamma);

/// Unique SINR solving the first-order condition for the given ratio.
/// The condition is negative for every gamma <= c, so the search starts at c.
double optimal_sinr(const SystemParams& params, double gain_over_interference,
                    const SolverOptions& opts = {});

/// Cross-layer utility of user i under `profile`.
double utility(const SystemParams& params, const ChannelState& channel,
               const PowerProfile& profile, std::size_t i);
std::vector<double> utilities(const SystemParams& params, const ChannelState& channel,
                              const PowerProfile& profile);

/// Power maximizing user i's utility against the other entries of `profile`
/// (entry i is ignored), clamped to [0, p_max].
double best_response(const SystemParams& params, const ChannelState& channel, std::size_t i,
                     const PowerProfile& profile, const SolverOptions& opts = {});

/// Sequential best-response sweeps from the all-zero profile.
StaticEquilibrium solve_ne(const SystemParams& params, const ChannelState& channel,
                           const SolverOptions& opts = {});

struct UserOptimum {
  double sinr = 0.0;
  double power = 0.0;
  double utility = 0.0;
};

/// Highest utility user i can reach: all opponents silent, own power at the
/// unconstrained optimum sigma^2 * gamma / |g_i|^2.
UserOptimum max_utility_sinr(const SystemParams& params, const ChannelState& channel,
                             std::size_t i, const SolverOptions& opts = {});

/// Threat level: user i's best response while every opponent transmits p_max.
UserOptimum minmax_sinr(const SystemParams& params, const ChannelState& channel, std::size_t i,
                        const SolverOptions& opts = {});

StaticEquilibrium max_utility_point(const SystemParams& params, const ChannelState& channel,
                                    const SolverOptions& opts = {});
StaticEquilibrium minmax_point(const SystemParams& params, const ChannelState& channel,
                               const SolverOptions& opts = {});

/// Channel-inversion rule p_i = alpha / |g_i|^2 with alpha chosen to
/// maximize the expected sum utility.
struct OperatingPoint {
  double alpha = 0.0;
  double common_sinr = 0.0;
  double expected_sum_utility = 0.0;
  bool flat = false;      // objective flat; alpha reported at the upper bound
  bool unimodal = true;   // coarse scan showed a single maximum
  std::size_t draws = 0;

  PowerProfile powers(const ChannelState& channel) const;
};

/// SINR shared by all users when every p_i |g_i|^2 equals alpha.
double op_common_sinr(const SystemParams& params, double alpha);

/// Mean over `draws` of the sum utility under the rule with this alpha.
double op_objective(const SystemParams& params, std::span<const ChannelState> draws,
                    double alpha);

/// Largest admissible alpha: p_max * nu_min keeps every p_i <= p_max.
double op_alpha_cap(const SystemParams& params);

OperatingPoint solve_op(const SystemParams& params, std::span<const ChannelState> draws);
OperatingPoint solve_op(const SystemParams& params, std::uint64_t seed, std::size_t mc_draws);

StaticEquilibrium op_equilibrium(const SystemParams& params, const ChannelState& channel,
                                 const OperatingPoint& op);

}  // namespace xlpc
