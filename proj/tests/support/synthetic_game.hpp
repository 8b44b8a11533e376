// Quadratic stage game with closed-form equilibria, used to exercise the
// repeated-game machinery at small horizons:
//   u_i(p) = 2 a p_i - p_i^2 - k sum_{j != i} p_j
// Best response is always a; the symmetric welfare optimum is
// a - k (N - 1) / 2. With p_max just above a the min-max payoff sits only
// slightly below the Nash payoff, which keeps T_min small.
#pragma once

#include <cmath>
#include <vector>

#include "xlpc/repeated.hpp"

class SyntheticStageGame : public xlpc::StageGame {
 public:
  SyntheticStageGame(std::size_t n, double a, double k, double pmax)
      : n_(n), a_(a), k_(k), pmax_(pmax) {}

  std::size_t n_users() const override { return n_; }
  double p_max() const override { return pmax_; }

  std::vector<double> utilities(std::size_t, const xlpc::PowerProfile& p) const override {
    double total = 0.0;
    for (double x : p.powers) total += x;
    std::vector<double> u(n_);
    for (std::size_t i = 0; i < n_; ++i) u[i] = 2 * a_ * p[i] - p[i] * p[i] - k_ * (total - p[i]);
    return u;
  }
  std::vector<double> sinrs(std::size_t, const xlpc::PowerProfile& p) const override {
    return p.powers;
  }
  double observable(std::size_t, const xlpc::PowerProfile& p) const override {
    double y = 1.0;
    for (double x : p.powers) y += x;
    return y;
  }
  double best_response(std::size_t, std::size_t, const xlpc::PowerProfile&) const override {
    return std::min(a_, pmax_);
  }
  xlpc::PowerProfile cooperative(std::size_t) const override {
    return {std::vector<double>(n_, coop_power())};
  }
  xlpc::PowerProfile nash(std::size_t) const override { return {std::vector<double>(n_, a_)}; }

  double coop_power() const { return a_ - k_ * (n_ - 1) / 2.0; }
  double m() const { return k_ * (n_ - 1); }
  double u_coop() const { return coop_power() * (2 * a_ - coop_power()) - m() * coop_power(); }
  double u_nash() const { return a_ * a_ - m() * a_; }
  double u_dev() const { return a_ * a_ - m() * coop_power(); }
  double u_minmax() const { return a_ * a_ - m() * pmax_; }

  // Constants chosen so every bound collapses to the exact payoff it stands
  // for: sigma^2 = nu = 1, b = 0, B = H = gamma_bar = alpha = 1.
  xlpc::SystemParams params() const {
    xlpc::SystemParams p;
    p.n_users = static_cast<int>(n_);
    p.noise_var = 1.0;
    p.nu_min = p.nu_max = 1.0;
    p.b_fixed = 0.0;
    p.p_max = pmax_;
    return p;
  }
  xlpc::FolkConstants constants() const {
    xlpc::UserConstants uc;
    uc.a = u_dev();
    uc.b = 1.0;
    uc.gamma_bar = 1.0;
    uc.g = u_coop();
    uc.h = 1.0;
    uc.alpha = 1.0;
    uc.e = u_nash();
    uc.gamma_star = 1.0;
    uc.opponent_power_ne = a_ * (n_ - 1);
    uc.f = 1.0 / (1.0 + uc.opponent_power_ne);
    uc.c = u_minmax();
    uc.gamma_hat = 1.0;
    uc.d = 1.0 / (1.0 + (n_ - 1) * pmax_);
    xlpc::derive_thresholds(uc, params());
    xlpc::FolkConstants fc;
    fc.users.assign(n_, uc);
    return fc;
  }

 private:
  std::size_t n_;
  double a_, k_, pmax_;
};
