#include "xlpc/repeated.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "xlpc/csv.hpp"
#include "xlpc/efficiency.hpp"
#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"

namespace xlpc {

void derive_thresholds(UserConstants& uc, const SystemParams& params) {
  const double b = params.b_fixed;
  const double s2 = params.noise_var;
  const double vmin = params.nu_min;
  const double vmax = params.nu_max;
  const double others_max = static_cast<double>(params.n_users - 1) * params.p_max;

  const double coop_hi = uc.g * vmax / (b * vmin + uc.alpha * uc.h);
  const double coop_lo = uc.g * vmin / (b * vmax + uc.alpha * uc.h);
  uc.theta = uc.a * vmax / (b * vmin + uc.gamma_bar * s2 * uc.b) - coop_hi;
  uc.lambda_cap =
      uc.e * vmin / (b * vmax + uc.gamma_star * (s2 + uc.opponent_power_ne * vmax) * uc.f);
  uc.omega = uc.c * vmin / (b * vmax + uc.gamma_hat * (s2 + others_max * vmax) * uc.d);
  uc.gamma_big = uc.theta;
  uc.psi = coop_lo - uc.lambda_cap;
}

FolkConstants folk_constants(const SystemParams& params, const ChannelState& channel,
                             const OperatingPoint& op, const SolverOptions& opts) {
  return folk_constants(params, channel, op, solve_ne(params, channel, opts), opts);
}

FolkConstants folk_constants(const SystemParams& params, const ChannelState& channel,
                             const OperatingPoint& op, const StaticEquilibrium& ne,
                             const SolverOptions& opts) {
  params.validate();
  check_channel(params, channel);
  if (ne.kind != EquilibriumKind::Nash || ne.profile.size() != channel.size()) {
    throw DomainError("folk_constants needs the Nash equilibrium of this channel");
  }
  if (!(op.alpha > 0.0)) throw DomainError("folk_constants needs a solved operating point");

  FolkConstants out;
  const double gamma_tilde = op_common_sinr(params, op.alpha);
  const auto coop = utility_terms(params, gamma_tilde);
  for (std::size_t i = 0; i < channel.size(); ++i) {
    UserConstants uc;
    uc.gamma_bar = max_utility_sinr(params, channel, i, opts).sinr;
    uc.gamma_hat = minmax_sinr(params, channel, i, opts).sinr;
    uc.gamma_star = ne.sinrs[i];
    uc.gamma_tilde = gamma_tilde;
    uc.alpha = op.alpha;
    for (std::size_t j = 0; j < channel.size(); ++j) {
      if (j != i) uc.opponent_power_ne += ne.profile[j];
    }
    const auto bar = utility_terms(params, uc.gamma_bar);
    const auto hat = utility_terms(params, uc.gamma_hat);
    const auto star = utility_terms(params, uc.gamma_star);
    uc.a = bar.throughput;
    uc.b = bar.cost_ratio;
    uc.c = hat.throughput;
    uc.d = hat.cost_ratio;
    uc.e = star.throughput;
    uc.f = star.cost_ratio;
    uc.g = coop.throughput;
    uc.h = coop.cost_ratio;
    derive_thresholds(uc, params);
    out.users.push_back(uc);
  }
  return out;
}

long long t_min(const UserConstants& uc) {
  const double gap = uc.lambda_cap - uc.omega;
  if (!(gap > 0.0)) throw InfeasibleError("no finite horizon supports cooperation");
  const double ratio = std::ceil(uc.theta / gap);
  if (!std::isfinite(ratio) || ratio > 9e18) throw InfeasibleError("T_min overflows");
  return std::max(1LL, static_cast<long long>(ratio));
}

long long t_min(const FolkConstants& constants) {
  if (constants.users.empty()) throw DomainError("empty folk constants");
  long long worst = 1;
  for (const auto& uc : constants.users) worst = std::max(worst, t_min(uc));
  return worst;
}

double lambda_max(const UserConstants& uc) {
  if (uc.psi < 0.0 || std::isnan(uc.psi)) {
    throw InfeasibleError(
        "OP does not dominate NE under bounds; no discount factor sustains cooperation");
  }
  if (uc.psi == 0.0) return 0.0;
  if (uc.gamma_big <= 0.0) return 1.0;
  return uc.psi / (uc.gamma_big + uc.psi);
}

double lambda_max(const FolkConstants& constants) {
  if (constants.users.empty()) throw DomainError("empty folk constants");
  double lo = 1.0;
  for (const auto& uc : constants.users) lo = std::min(lo, lambda_max(uc));
  return lo;
}

PowerControlGame::PowerControlGame(SystemParams params, std::vector<ChannelState> channels,
                                   OperatingPoint op, SolverOptions opts)
    : params_(std::move(params)), channels_(std::move(channels)), op_(op), opts_(opts) {
  params_.validate();
  if (channels_.empty()) throw DomainError("PowerControlGame needs at least one channel state");
  ne_.reserve(channels_.size());
  for (const auto& ch : channels_) {
    check_channel(params_, ch);
    ne_.push_back(solve_ne(params_, ch, opts_).profile);
  }
}

std::size_t PowerControlGame::index(std::size_t t) const {
  if (channels_.size() == 1) return 0;
  if (t >= channels_.size()) throw DomainError("stage beyond the channel sequence");
  return t;
}

const ChannelState& PowerControlGame::channel(std::size_t t) const { return channels_[index(t)]; }

std::size_t PowerControlGame::n_users() const { return static_cast<std::size_t>(params_.n_users); }

double PowerControlGame::p_max() const { return params_.p_max; }

std::vector<double> PowerControlGame::utilities(std::size_t t, const PowerProfile& p) const {
  return xlpc::utilities(params_, channel(t), p);
}

std::vector<double> PowerControlGame::sinrs(std::size_t t, const PowerProfile& p) const {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = sinr(params_, channel(t), p, i);
  return out;
}

double PowerControlGame::observable(std::size_t t, const PowerProfile& p) const {
  return received_power(params_, channel(t), p);
}

double PowerControlGame::best_response(std::size_t t, std::size_t i, const PowerProfile& p) const {
  return xlpc::best_response(params_, channel(t), i, p, opts_);
}

PowerProfile PowerControlGame::cooperative(std::size_t t) const { return op_.powers(channel(t)); }

PowerProfile PowerControlGame::nash(std::size_t t) const { return ne_[index(t)]; }

std::string to_string(RepeatedModel model) {
  return model == RepeatedModel::Finite ? "FRG" : "DRG";
}

std::size_t discounted_horizon(double lambda, double tail_mass, std::size_t horizon_cap) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("discount must lie in (0, 1)");
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw DomainError("tail mass must lie in (0, 1)");
  if (horizon_cap == 0) throw DomainError("horizon cap must be >= 1");
  // (1 - lambda)^t < tail_mass  <=>  t > log(tail_mass) / log1p(-lambda)
  const double t = std::floor(std::log(tail_mass) / std::log1p(-lambda)) + 1.0;
  if (!(t < static_cast<double>(horizon_cap))) return horizon_cap;
  return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

namespace {

struct Plan {
  std::function<PowerProfile(std::size_t)> base;     // prescribed before detection
  std::function<PowerProfile(std::size_t)> punish;   // prescribed after detection
  std::function<double(std::size_t)> weight;         // stage weight in v_i
};

RepeatedGameOutcome rollout(const StageGame& game, std::size_t stages, const Plan& plan,
                            const DeviationScript& script, const RepeatedOptions& opts) {
  const std::size_t n = game.n_users();
  if (script.deviator && *script.deviator >= n) throw DomainError("deviator index out of range");
  if (script.deviator && script.stage == 0) throw DomainError("deviation stage is 1-based");

  RepeatedGameOutcome out;
  out.stages = stages;
  std::vector<CompensatedSum> acc(n);
  CompensatedSum welfare;
  bool punishing = false;
  if (opts.record_traces) out.traces.reserve(stages);

  for (std::size_t t = 1; t <= stages; ++t) {
    const std::size_t k = t - 1;
    const PowerProfile prescribed = punishing ? plan.punish(k) : plan.base(k);
    PowerProfile actions = prescribed;
    bool deviated = false;
    if (script.deviator && t >= script.stage) {
      const std::size_t i = *script.deviator;
      double p = prescribed[i];
      if (t == script.stage) {
        p = script.power ? *script.power : game.best_response(k, i, actions);
      } else if (script.after == AfterDeviation::BestRespond) {
        p = game.best_response(k, i, actions);
      } else {
        p = plan.base(k)[i];
      }
      actions[i] = p;
      deviated = p != prescribed[i];
    }

    const auto u = game.utilities(k, actions);
    const double y = game.observable(k, actions);
    const double w = plan.weight(t);
    double stage_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc[i].add(w * u[i]);
      stage_sum += u[i];
    }
    welfare.add(w * stage_sum);

    if (opts.record_traces) {
      StageRecord rec;
      rec.t = t;
      rec.sinrs = game.sinrs(k, actions);
      rec.utilities = u;
      rec.received_power = y;
      rec.deviated = deviated;
      rec.punishing = punishing;
      rec.powers = actions;
      out.traces.push_back(std::move(rec));
    }

    if (!punishing) {
      const double expected = game.observable(k, prescribed);
      if (std::abs(y - expected) > opts.detection_tol * std::abs(expected) + opts.noise_floor) {
        punishing = true;
        out.detected_at = t;
      }
    }
  }

  out.avg_utilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.avg_utilities[i] = acc[i].value();
  out.welfare = welfare.value();
  return out;
}

}  // namespace

RepeatedGameOutcome run_frg(const StageGame& game, std::size_t horizon, long long tmin,
                            const DeviationScript& script, const RepeatedOptions& opts) {
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  if (tmin < 1) throw DomainError("T_min must be >= 1");
  const bool ne_throughout = static_cast<long long>(horizon) < tmin;
  const std::size_t coop_stages = ne_throughout ? 0 : horizon - static_cast<std::size_t>(tmin);
  const double inv_t = 1.0 / static_cast<double>(horizon);
  const std::size_t n = game.n_users();
  const double pmax = game.p_max();

  Plan plan;
  plan.base = [&](std::size_t k) { return k < coop_stages ? game.cooperative(k) : game.nash(k); };
  plan.punish = [&](std::size_t) { return PowerProfile{std::vector<double>(n, pmax)}; };
  plan.weight = [&](std::size_t) { return inv_t; };

  auto out = rollout(game, horizon, plan, script, opts);
  out.model = RepeatedModel::Finite;
  out.threshold = static_cast<double>(tmin);
  out.ne_throughout = ne_throughout;
  // Welfare is the plain double sum; averages carry the 1/T weight.
  out.welfare *= static_cast<double>(horizon);
  return out;
}

RepeatedGameOutcome run_drg(const StageGame& game, double lambda, double lambda_threshold,
                            std::size_t horizon_cap, const DeviationScript& script,
                            const RepeatedOptions& opts) {
  const std::size_t stages = discounted_horizon(lambda, opts.tail_mass, horizon_cap);
  Plan plan;
  plan.base = [&](std::size_t k) { return game.cooperative(k); };
  plan.punish = [&](std::size_t k) { return game.nash(k); };
  plan.weight = [&](std::size_t t) {
    return lambda * std::pow(1.0 - lambda, static_cast<double>(t - 1));
  };
  auto out = rollout(game, stages, plan, script, opts);
  out.model = RepeatedModel::Discounted;
  out.threshold = lambda_threshold;
  out.lambda = lambda;
  return out;
}

RepeatedGameOutcome run_nash(const StageGame& game, const RepeatedGameOutcome& like,
                             const RepeatedOptions& opts) {
  Plan plan;
  plan.base = [&](std::size_t k) { return game.nash(k); };
  plan.punish = plan.base;
  const double lambda = like.lambda;
  const double inv_t = 1.0 / static_cast<double>(like.stages);
  if (like.model == RepeatedModel::Finite) {
    plan.weight = [&](std::size_t) { return inv_t; };
  } else {
    plan.weight = [&](std::size_t t) {
      return lambda * std::pow(1.0 - lambda, static_cast<double>(t - 1));
    };
  }
  auto out = rollout(game, like.stages, plan, {}, opts);
  out.model = like.model;
  out.threshold = like.threshold;
  out.lambda = like.lambda;
  out.ne_throughout = true;
  if (like.model == RepeatedModel::Finite) out.welfare *= static_cast<double>(like.stages);
  return out;
}

double welfare_ratio(const RepeatedGameOutcome& outcome, const RepeatedGameOutcome& baseline) {
  if (outcome.stages != baseline.stages || outcome.model != baseline.model ||
      outcome.lambda != baseline.lambda) {
    throw DomainError("welfare ratio needs the baseline on the same horizon");
  }
  if (baseline.welfare == 0.0) throw DomainError("baseline welfare is zero");
  return outcome.welfare / baseline.welfare;
}

double frg_welfare_ratio(std::size_t horizon, long long tmin, double coop_sum, double ne_sum) {
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  const double t = static_cast<double>(horizon);
  if (static_cast<long long>(horizon) < tmin) return 1.0;
  const double tm = static_cast<double>(tmin);
  return ((t - tm) * coop_sum + tm * ne_sum) / (t * ne_sum);
}

void write_trace_csv(std::ostream& out, const RepeatedGameOutcome& outcome) {
  CsvWriter csv(out);
  csv.row("t", "i", "p", "gamma", "u", "P_y", "deviated", "punishing");
  for (const auto& rec : outcome.traces) {
    for (std::size_t i = 0; i < rec.powers.size(); ++i) {
      csv.row(rec.t, i + 1, rec.powers[i], rec.sinrs[i], rec.utilities[i], rec.received_power,
              rec.deviated, rec.punishing);
    }
  }
}

}  // namespace xlpc
