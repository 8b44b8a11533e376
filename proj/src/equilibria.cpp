#include "xlpc/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xlpc/efficiency.hpp"
#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"

namespace xlpc {

std::string to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Nash:
      return "NE";
    case EquilibriumKind::OperatingPoint:
      return "OP";
    case EquilibriumKind::MaxUtility:
      return "MAX";
    case EquilibriumKind::MinMax:
      return "MINMAX";
  }
  return "?";
}

double best_response_condition(const SystemParams& params, double gain_over_interference,
                               double gamma) {
  const EfficiencyCurve curve = EfficiencyCurve::from(params);
  const Derivatives d = derivatives(curve, params, gamma);
  const QueueStats s = queue_stats(curve, params, gamma);
  const double f = s.f;
  return params.b_fixed * gain_over_interference * d.dphi +
         params.arrival_q * s.transmit_ratio * s.transmit_ratio * (f - gamma * d.df);
}

double optimal_sinr(const SystemParams& params, double gain_over_interference,
                    const SolverOptions& opts) {
  const double c = params.efficiency_c();
  const double lo = std::max(opts.window_lo * c, c);
  const double hi = opts.window_hi * c;
  auto h = [&](double g) { return best_response_condition(params, gain_over_interference, g); };
  const double h_lo = h(lo);
  if (h_lo >= 0.0) return lo;
  const double h_hi = h(hi);
  if (h_hi < 0.0) {
    std::ostringstream msg;
    msg << "best response: no root of the first-order condition in SINR window [" << lo << ", "
        << hi << "] (ratio=" << gain_over_interference << ", b=" << params.b_fixed
        << ", q=" << params.arrival_q << ", h(lo)=" << h_lo << ", h(hi)=" << h_hi << ")";
    throw ConvergenceError(msg.str());
  }
  return find_root(h, lo, hi);
}

double utility(const SystemParams& params, const ChannelState& channel,
               const PowerProfile& profile, std::size_t i) {
  return ee_crosslayer(params, sinr(params, channel, profile, i), profile[i]);
}

std::vector<double> utilities(const SystemParams& params, const ChannelState& channel,
                              const PowerProfile& profile) {
  std::vector<double> u(channel.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = utility(params, channel, profile, i);
  return u;
}

double best_response(const SystemParams& params, const ChannelState& channel, std::size_t i,
                     const PowerProfile& profile, const SolverOptions& opts) {
  const double noise_plus_interference = interference(params, channel, profile, i);
  const double gamma = optimal_sinr(params, channel[i] / noise_plus_interference, opts);
  return std::clamp(gamma * noise_plus_interference / channel[i], 0.0, params.p_max);
}

namespace {

StaticEquilibrium evaluate(EquilibriumKind kind, const SystemParams& params,
                           const ChannelState& channel, PowerProfile profile) {
  StaticEquilibrium eq;
  eq.kind = kind;
  eq.sinrs.resize(channel.size());
  for (std::size_t i = 0; i < channel.size(); ++i) eq.sinrs[i] = sinr(params, channel, profile, i);
  eq.utilities = utilities(params, channel, profile);
  eq.profile = std::move(profile);
  return eq;
}

}  // namespace

StaticEquilibrium solve_ne(const SystemParams& params, const ChannelState& channel,
                           const SolverOptions& opts) {
  params.validate();
  check_channel(params, channel);
  PowerProfile p{std::vector<double>(channel.size(), 0.0)};
  const double tol = opts.ne_tolerance * params.p_max;
  for (int sweep = 1; sweep <= opts.ne_max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 0; i < channel.size(); ++i) {
      const double next = best_response(params, channel, i, p, opts);
      change = std::max(change, std::abs(next - p[i]));
      p[i] = next;
    }
    if (change < tol) {
      StaticEquilibrium eq = evaluate(EquilibriumKind::Nash, params, channel, std::move(p));
      eq.sweeps = sweep;
      return eq;
    }
  }
  throw ConvergenceError("solve_ne: best-response sweeps did not converge within " +
                         std::to_string(opts.ne_max_sweeps) + " sweeps");
}

UserOptimum max_utility_sinr(const SystemParams& params, const ChannelState& channel,
                             std::size_t i, const SolverOptions& opts) {
  UserOptimum out;
  out.sinr = optimal_sinr(params, channel[i] / params.noise_var, opts);
  out.power = out.sinr * params.noise_var / channel[i];
  const UtilityTerms t = utility_terms(params, out.sinr);
  out.utility = t.throughput / (params.b_fixed + out.power * t.cost_ratio);
  return out;
}

UserOptimum minmax_sinr(const SystemParams& params, const ChannelState& channel, std::size_t i,
                        const SolverOptions& opts) {
  PowerProfile p{std::vector<double>(channel.size(), params.p_max)};
  p[i] = best_response(params, channel, i, p, opts);
  UserOptimum out;
  out.power = p[i];
  out.sinr = sinr(params, channel, p, i);
  out.utility = ee_crosslayer(params, out.sinr, out.power);
  return out;
}

StaticEquilibrium max_utility_point(const SystemParams& params, const ChannelState& channel,
                                    const SolverOptions& opts) {
  StaticEquilibrium eq;
  eq.kind = EquilibriumKind::MaxUtility;
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const UserOptimum o = max_utility_sinr(params, channel, i, opts);
    eq.profile.powers.push_back(o.power);
    eq.sinrs.push_back(o.sinr);
    eq.utilities.push_back(o.utility);
  }
  return eq;
}

StaticEquilibrium minmax_point(const SystemParams& params, const ChannelState& channel,
                               const SolverOptions& opts) {
  StaticEquilibrium eq;
  eq.kind = EquilibriumKind::MinMax;
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const UserOptimum o = minmax_sinr(params, channel, i, opts);
    eq.profile.powers.push_back(o.power);
    eq.sinrs.push_back(o.sinr);
    eq.utilities.push_back(o.utility);
  }
  return eq;
}

PowerProfile OperatingPoint::powers(const ChannelState& channel) const {
  PowerProfile p{std::vector<double>(channel.size())};
  for (std::size_t i = 0; i < channel.size(); ++i) p[i] = alpha / channel[i];
  return p;
}

double op_common_sinr(const SystemParams& params, double alpha) {
  return alpha / (params.noise_var +
                  (params.n_users - 1) * alpha / static_cast<double>(params.spreading_l));
}

double op_alpha_cap(const SystemParams& params) { return params.p_max * params.nu_min; }

double op_objective(const SystemParams& params, std::span<const ChannelState> draws,
                    double alpha) {
  const UtilityTerms t = utility_terms(params, op_common_sinr(params, alpha));
  if (t.throughput == 0.0) return 0.0;
  std::vector<double> sums(draws.size());
  for (std::size_t k = 0; k < draws.size(); ++k) {
    CompensatedSum acc;
    for (double g : draws[k].gains_sq) {
      acc.add(t.throughput / (params.b_fixed + (alpha / g) * t.cost_ratio));
    }
    sums[k] = acc.value();
  }
  return compensated_mean(sums);
}

OperatingPoint solve_op(const SystemParams& params, std::span<const ChannelState> draws) {
  params.validate();
  if (draws.empty()) throw DomainError("solve_op needs at least one channel draw");
  const double hi = op_alpha_cap(params);
  const double lo = hi * 1e-8;
  const MaximizeResult best =
      maximize_on_log_grid([&](double a) { return op_objective(params, draws, a); }, lo, hi);
  OperatingPoint op;
  op.alpha = best.x;
  op.common_sinr = op_common_sinr(params, op.alpha);
  op.expected_sum_utility = best.value;
  op.flat = best.flat;
  op.unimodal = best.unimodal;
  op.draws = draws.size();
  return op;
}

OperatingPoint solve_op(const SystemParams& params, std::uint64_t seed, std::size_t mc_draws) {
  if (mc_draws < 1) throw DomainError("solve_op needs mc_draws >= 1");
  const auto draws = sample_channels(params, seed, mc_draws);
  return solve_op(params, draws);
}

StaticEquilibrium op_equilibrium(const SystemParams& params, const ChannelState& channel,
                                 const OperatingPoint& op) {
  StaticEquilibrium eq = evaluate(EquilibriumKind::OperatingPoint, params, channel,
                                  op.powers(channel));
  eq.alpha = op.alpha;
  return eq;
}

}  // namespace xlpc
