#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "xlpc/efficiency.hpp"
#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"
#include "xlpc/queue_oracle.hpp"

using namespace xlpc;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> gamma_grid() { return log_space(1e-2, 1e3, 300); }

}  // namespace

TEST_SUITE("efficiency") {
  TEST_CASE("efficiency curve values") {
    const EfficiencyCurve f(1.0);
    CHECK(f(0.0) == 0.0);
    CHECK(f(1e6) > 1.0 - 1e-5);
    CHECK(f(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(f(-1e-9), DomainError);
    CHECK_THROWS_AS(EfficiencyCurve(0.0), DomainError);
  }

  TEST_CASE("efficiency curve is increasing and sigmoidal") {
    const EfficiencyCurve f(1.0);
    const auto xs = log_space(2e-3, 1e3, 400);
    for (std::size_t k = 1; k < xs.size(); ++k) CHECK(f(xs[k]) > f(xs[k - 1]));
    // Second difference changes sign at c/2.
    auto second = [&](double x) {
      const double h = 1e-4 * x;
      return f(x + h) - 2 * f(x) + f(x - h);
    };
    CHECK(second(0.3) > 0.0);
    CHECK(second(0.7) < 0.0);
  }

  TEST_CASE("symmetric load gives a uniform buffer") {
    SystemParams p;
    const EfficiencyCurve curve = EfficiencyCurve::from(p);
    const double g = p.efficiency_c() / std::log(2.0);
    const auto s = queue_stats(curve, p, g);
    CHECK(s.f == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.rho == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.pi_k == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
    CHECK(s.phi == doctest::Approx(0.5 / 11.0).epsilon(1e-12));
  }

  TEST_CASE("zero SINR loses everything") {
    SystemParams p;
    const auto s = queue_stats(EfficiencyCurve::from(p), p, 0.0);
    CHECK(s.f == 0.0);
    CHECK(std::isinf(s.rho));
    CHECK(s.pi_k == 1.0);
    CHECK(s.phi == 1.0);
    CHECK(s.transmit_ratio == doctest::Approx(1.0 / p.arrival_q));
  }

  TEST_CASE("queue statistics against the power-sum oracle") {
    for (double q : {0.05, 0.3, 0.5, 0.9, 0.999}) {
      for (int k : {1, 3, 10, 40}) {
        for (double f : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.999999}) {
          const auto s = queue_stats_for_success(f, q, k);
          CHECK(rel(s.pi_k, static_cast<double>(oracle::pi_k(q, f, k))) < 1e-12);
          CHECK(s.phi == doctest::Approx((1 - f) * s.pi_k).epsilon(1e-15));
          CHECK(s.pi_k >= 0.0);
          CHECK(s.pi_k <= 1.0);
        }
      }
    }
    const auto big = queue_stats_for_success(1e-12, 0.9, 200);
    CHECK(big.pi_k == doctest::Approx(1.0).epsilon(1e-9));
    const auto q1 = queue_stats_for_success(0.3, 1.0, 10);
    CHECK(q1.pi_k == 1.0);
    CHECK(q1.phi == doctest::Approx(0.7));
  }

  TEST_CASE("full-buffer probability agrees with the simulated chain") {
    const auto s = queue_stats_for_success(0.8, 0.5, 10);
    const auto sim = simulate_queue(0.8, 0.5, 10, 1'000'000, 17);
    CHECK(std::abs(sim.full_fraction - s.pi_k) < 1e-2);
  }

  TEST_CASE("Goodman metric") {
    SystemParams p;
    CHECK(ee_goodman(p, 1e15, 0.1) == doctest::Approx(1e7).epsilon(1e-12));
    CHECK(ee_goodman(p, 0.0, 0.1) == 0.0);
    CHECK(ee_goodman(p, 1.0, 0.01) == doctest::Approx(1e6 * std::exp(-1.0) / 0.01).epsilon(1e-14));
    CHECK_THROWS_AS(ee_goodman(p, 1.0, 0.0), DomainError);
  }

  TEST_CASE("fixed-cost metric") {
    SystemParams p;
    CHECK(ee_fixedcost(p, 0.0, 0.0) == 0.0);
    auto q = p;
    q.arrival_q = 0.1;
    CHECK(ee_fixedcost(p, 2.0, 0.03) == ee_fixedcost(q, 2.0, 0.03));
    const double expect = static_cast<double>(oracle::ee_fixed(1e6, 5e-3, 1.0, 2.0, 0.03));
    CHECK(ee_fixedcost(p, 2.0, 0.03) == doctest::Approx(expect).epsilon(1e-14));
    p.b_fixed = 0.0;
    CHECK_THROWS_AS(ee_fixedcost(p, 1.0, 0.0), DomainError);
  }

  TEST_CASE("cross-layer metric") {
    SystemParams p;
    CHECK(ee_crosslayer(p, 0.0, 0.0) == 0.0);
    const double expect = static_cast<double>(oracle::ee_cross(1e6, 0.5, 10, 5e-3, 1.0, 2.0, 0.05));
    CHECK(ee_crosslayer(p, 2.0, 0.05) == doctest::Approx(expect).epsilon(1e-13));
    auto q1 = p;
    q1.arrival_q = 1.0 - 1e-9;
    CHECK(rel(ee_crosslayer(q1, 3.0, 0.02), ee_fixedcost(q1, 3.0, 0.02)) < 1e-6);
    p.b_fixed = 0.0;
    CHECK_THROWS_AS(ee_crosslayer(p, 1.0, 0.0), DomainError);
  }

  TEST_CASE("utility terms compose the cross-layer metric") {
    SystemParams p;
    for (double g : gamma_grid()) {
      const auto t = utility_terms(p, g);
      const auto o = oracle::pair_at(1e6, 0.5, 10, 1.0, g);
      CHECK(rel(t.throughput, static_cast<double>(o.throughput)) < 1e-12);
      CHECK(rel(t.cost_ratio, static_cast<double>(o.cost_ratio)) < 1e-12);
      CHECK(t.throughput == doctest::Approx(p.rate_r * EfficiencyCurve(1.0)(g) * t.cost_ratio)
                               .epsilon(1e-12));
    }
  }

  TEST_CASE("derivatives against central differences") {
    SystemParams p;
    const EfficiencyCurve curve = EfficiencyCurve::from(p);
    for (double g : log_space(0.05, 200.0, 120)) {
      const auto d = derivatives(curve, p, g);
      const double h = 1e-5 * g;
      const double fd_f = (curve(g + h) - curve(g - h)) / (2 * h);
      CHECK(rel(d.df, fd_f) < 1e-6);
      // Differenced in long double so round-off stays below the tolerance.
      auto phi = [&](long double x) {
        return oracle::phi(0.5L, oracle::f_eff(1.0L, x), p.buffer_k);
      };
      const double fd_phi = static_cast<double>((phi(g + h) - phi(g - h)) / (2 * h));
      if (std::abs(fd_phi) > 1e-12) CHECK(rel(d.dphi, fd_phi) < 1e-5);
      CHECK(d.dphi < 0.0);
      CHECK(d.dpi_drho > 0.0);
    }
    CHECK_THROWS_AS(derivatives(curve, p, 0.0), DomainError);
  }

  TEST_CASE("loss probability decreases in SINR") {
    for (double q : {0.2, 0.5, 0.8}) {
      SystemParams p;
      p.arrival_q = q;
      const EfficiencyCurve curve = EfficiencyCurve::from(p);
      double prev = 1.0 + 1e-12;
      for (double g : log_space(5e-2, 30.0, 500)) {
        const double phi = queue_stats(curve, p, g).phi;
        CHECK(phi < prev);
        prev = phi;
      }
    }
  }

  TEST_CASE("full-buffer probability against buffer size and load") {
    // pi_K = rho^K (rho - 1) / (rho^{K+1} - 1) falls with K on both sides of
    // rho = 1 and tends to max(0, 1 - 1/rho).
    for (double rho_target : {0.3, 0.9, 1.1, 4.0}) {
      const double q = 0.5;
      const double f = q / (q + rho_target * (1 - q));  // gives rho = rho_target
      double prev = queue_stats_for_success(f, q, 1).pi_k;
      for (int k = 2; k <= 20; ++k) {
        const double now = queue_stats_for_success(f, q, k).pi_k;
        CHECK(now < prev);
        prev = now;
      }
      const double limit = std::max(0.0, 1.0 - 1.0 / rho_target);
      CHECK(std::abs(queue_stats_for_success(f, q, 2000).pi_k - limit) < 1e-3);
    }
    for (int k : {1, 5, 10}) {
      double prev = 0.0;
      for (double rho : log_space(1e-2, 1e2, 60)) {
        const double now = queue_stats_for_success(1.0 / (1.0 + rho), 0.5, k).pi_k;
        CHECK(now > prev);
        prev = now;
      }
    }
  }

  TEST_CASE("cross-layer tends to Goodman when q -> 1 and b -> 0") {
    SystemParams p;
    p.arrival_q = 1.0 - 1e-9;
    p.b_fixed = 1e-12 * p.p_max;
    for (double g : log_space(0.1, 100.0, 40)) {
      for (double pw : log_space(1e-4, 0.1, 25)) {
        CHECK(rel(ee_crosslayer(p, g, pw), ee_goodman(p, g, pw)) < 1e-4);
      }
    }
  }

  TEST_CASE("metrics are quasi-concave in own power at fixed interference") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      SystemParams p;
      p.b_fixed = 1e-2 * u01(rng);
      p.arrival_q = 0.05 + 0.9 * u01(rng);
      const double gain = 0.1 + 9.9 * u01(rng);
      const double noise = p.noise_var * (1.0 + 50.0 * u01(rng));
      const auto powers = log_space(1e-6, 1.0, 2000);
      std::vector<double> cross, fixed, good;
      for (double pw : powers) {
        const double g = pw * gain / noise;
        cross.push_back(ee_crosslayer(p, g, pw));
        fixed.push_back(ee_fixedcost(p, g, pw));
        good.push_back(ee_goodman(p, g, pw));
      }
      CHECK(slope_sign_changes(cross) <= 1);
      CHECK(slope_sign_changes(fixed) <= 1);
      CHECK(slope_sign_changes(good) <= 1);
    }
  }
}
