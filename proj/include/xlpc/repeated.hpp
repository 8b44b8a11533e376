#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "xlpc/channel.hpp"
#include "xlpc/equilibria.hpp"

namespace xlpc {

/// Bound constants for one user. A..H are the throughput / cost-ratio pairs
/// at the max-utility (A, B), min-max (C, D), Nash (E, F) and operating-point
/// (G, H) SINRs; the threshold terms follow from them with the channel
/// bounds nu_min / nu_max substituted for |g_i|^2.
struct UserConstants {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0, f = 0.0, g = 0.0, h = 0.0;
  double gamma_bar = 0.0;
  double gamma_hat = 0.0;
  double gamma_star = 0.0;
  double gamma_tilde = 0.0;
  double alpha = 0.0;
  double opponent_power_ne = 0.0;  // sum_{j != i} p_j^*
  double theta = 0.0;
  double lambda_cap = 0.0;
  double omega = 0.0;
  double gamma_big = 0.0;
  double psi = 0.0;
};

struct FolkConstants {
  std::vector<UserConstants> users;
};

/// Fills theta, lambda_cap, omega, gamma_big and psi from the raw fields.
void derive_thresholds(UserConstants& uc, const SystemParams& params);

/// Constants on one channel state; the Nash profile is solved here.
FolkConstants folk_constants(const SystemParams& params, const ChannelState& channel,
                             const OperatingPoint& op, const SolverOptions& opts = {});
FolkConstants folk_constants(const SystemParams& params, const ChannelState& channel,
                             const OperatingPoint& op, const StaticEquilibrium& ne,
                             const SolverOptions& opts = {});

/// Per-user ceil(theta / (lambda_cap - omega)), at least 1.
long long t_min(const UserConstants& uc);
/// Largest per-user horizon; throws InfeasibleError if any user has
/// lambda_cap <= omega.
long long t_min(const FolkConstants& constants);

/// psi / (gamma_big + psi); 0 when psi == 0, 1 when gamma_big <= 0.
double lambda_max(const UserConstants& uc);
/// Smallest per-user value; throws InfeasibleError if any psi < 0.
double lambda_max(const FolkConstants& constants);

/// One stage game of a repeated interaction, indexed by stage t (0-based).
/// The cooperative and Nash profiles define the action plans; the observable
/// is the public signal used for deviation detection.
class StageGame {
 public:
  virtual ~StageGame() = default;
  virtual std::size_t n_users() const = 0;
  virtual double p_max() const = 0;
  virtual std::vector<double> utilities(std::size_t t, const PowerProfile& p) const = 0;
  virtual std::vector<double> sinrs(std::size_t t, const PowerProfile& p) const = 0;
  virtual double observable(std::size_t t, const PowerProfile& p) const = 0;
  virtual double best_response(std::size_t t, std::size_t i, const PowerProfile& p) const = 0;
  virtual PowerProfile cooperative(std::size_t t) const = 0;
  virtual PowerProfile nash(std::size_t t) const = 0;
};

/// The power-control game on a block-fading channel sequence. A sequence of
/// length one is reused at every stage; otherwise stage t uses state t.
class PowerControlGame : public StageGame {
 public:
  PowerControlGame(SystemParams params, std::vector<ChannelState> channels, OperatingPoint op,
                   SolverOptions opts = {});

  std::size_t n_users() const override;
  double p_max() const override;
  std::vector<double> utilities(std::size_t t, const PowerProfile& p) const override;
  std::vector<double> sinrs(std::size_t t, const PowerProfile& p) const override;
  /// Received power sigma^2 + sum_i p_i |g_i|^2.
  double observable(std::size_t t, const PowerProfile& p) const override;
  double best_response(std::size_t t, std::size_t i, const PowerProfile& p) const override;
  PowerProfile cooperative(std::size_t t) const override;
  PowerProfile nash(std::size_t t) const override;

  std::size_t stages() const { return channels_.size(); }
  const ChannelState& channel(std::size_t t) const;
  const SystemParams& params() const { return params_; }
  const OperatingPoint& op() const { return op_; }

 private:
  std::size_t index(std::size_t t) const;

  SystemParams params_;
  std::vector<ChannelState> channels_;
  OperatingPoint op_;
  SolverOptions opts_;
  std::vector<PowerProfile> ne_;
};

enum class RepeatedModel { Finite, Discounted };
std::string to_string(RepeatedModel model);

enum class AfterDeviation { Conform, BestRespond };

/// Unilateral deviation: at `stage` (1-based) the deviator plays `power` if
/// given, else its myopic best response to the others' planned actions.
/// Afterwards it either returns to its plan or best-responds every stage.
struct DeviationScript {
  std::optional<std::size_t> deviator;
  std::size_t stage = 1;
  AfterDeviation after = AfterDeviation::Conform;
  std::optional<double> power;
};

struct RepeatedOptions {
  double detection_tol = 1e-9;   // relative to the expected observable
  double noise_floor = 0.0;      // absolute slack added to the detection test
  double tail_mass = 1e-12;      // discounted horizon truncation
  bool record_traces = true;
};

struct StageRecord {
  std::size_t t = 0;  // 1-based
  PowerProfile powers;
  std::vector<double> sinrs;
  std::vector<double> utilities;
  double received_power = 0.0;
  bool deviated = false;
  bool punishing = false;
};

struct RepeatedGameOutcome {
  RepeatedModel model = RepeatedModel::Finite;
  double threshold = 0.0;     // T_min or lambda_max used by the plan
  double lambda = 0.0;        // discounted model only
  std::size_t stages = 0;
  bool ne_throughout = false;
  std::optional<std::size_t> detected_at;
  std::vector<StageRecord> traces;
  std::vector<double> avg_utilities;  // v_i^T or v_i^lambda
  double welfare = 0.0;               // sum_i of the stage-weighted utilities summed over t
};

/// Number of stages kept for discount lambda: the first t with
/// (1 - lambda)^t < tail_mass, capped at horizon_cap.
std::size_t discounted_horizon(double lambda, double tail_mass, std::size_t horizon_cap);

/// Finite game of T stages: operating point for T - T_min stages, Nash for
/// the last T_min, grim punishment at p_max after a detected deviation.
/// With T < T_min the Nash profile is played throughout.
RepeatedGameOutcome run_frg(const StageGame& game, std::size_t horizon, long long tmin,
                            const DeviationScript& script = {}, const RepeatedOptions& opts = {});

/// Discounted game: operating point until a deviation is detected, Nash
/// forever after.
RepeatedGameOutcome run_drg(const StageGame& game, double lambda, double lambda_threshold,
                            std::size_t horizon_cap, const DeviationScript& script = {},
                            const RepeatedOptions& opts = {});

/// Nash profile at every stage, weighted like `like`.
RepeatedGameOutcome run_nash(const StageGame& game, const RepeatedGameOutcome& like,
                             const RepeatedOptions& opts = {});

/// Welfare of `outcome` over the Nash baseline on the same stages.
double welfare_ratio(const RepeatedGameOutcome& outcome, const RepeatedGameOutcome& baseline);

/// Closed-form finite-game ratio
/// [(T - T_min) sum u~ + T_min sum u*] / (T sum u*), for stationary utilities.
double frg_welfare_ratio(std::size_t horizon, long long tmin, double coop_sum, double ne_sum);

/// CSV rows t,i,p,gamma,u,P_y,deviated,punishing.
void write_trace_csv(std::ostream& out, const RepeatedGameOutcome& outcome);

}  // namespace xlpc
