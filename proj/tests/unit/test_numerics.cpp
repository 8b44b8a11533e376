#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <vector>

#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"

using namespace xlpc;

TEST_SUITE("numerics") {
  TEST_CASE("compensated sum keeps small terms next to large ones") {
    std::vector<double> xs{1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_sum(xs) == 2.0);
    CHECK(compensated_mean(xs) == 0.5);
    CHECK_THROWS_AS(compensated_mean(std::vector<double>{}), DomainError);
  }

  TEST_CASE("find_root on a cubic and on a flat-tailed sigmoid") {
    const double r = find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0);
    CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
    const double s = find_root([](double x) { return std::exp(-1.0 / x) - 0.5; }, 1e-3, 1e3);
    CHECK(s == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), ConvergenceError);
  }

  TEST_CASE("golden section and log-grid maximization") {
    auto fn = [](double x) { return -(std::log(x) - 1.0) * (std::log(x) - 1.0); };
    CHECK(golden_section_maximize(fn, 0.1, 10.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-7));
    const auto r = maximize_on_log_grid(fn, 1e-3, 1e3);
    CHECK(r.x == doctest::Approx(std::exp(1.0)).epsilon(1e-7));
    CHECK(r.unimodal);
    CHECK_FALSE(r.flat);

    const auto flat = maximize_on_log_grid([](double) { return 3.0; }, 1.0, 2.0);
    CHECK(flat.flat);
    CHECK(flat.x == 2.0);

    const auto bimodal = maximize_on_log_grid(
        [](double x) { return std::sin(std::log(x) * 3.0); }, 1e-2, 1e2);
    CHECK_FALSE(bimodal.unimodal);
  }

  TEST_CASE("slope sign changes ignore flat steps") {
    std::vector<double> a{1, 2, 2, 3, 1};
    CHECK(slope_sign_changes(a) == 1);
    std::vector<double> b{1, 2, 1, 2};
    CHECK(slope_sign_changes(b) == 2);
  }

  TEST_CASE("log_space hits both endpoints") {
    const auto xs = log_space(1e-4, 0.1, 7);
    REQUIRE(xs.size() == 7);
    CHECK(xs.front() == 1e-4);
    CHECK(xs.back() == 0.1);
    for (std::size_t k = 1; k < xs.size(); ++k) CHECK(xs[k] > xs[k - 1]);
  }

  TEST_CASE("derive_seed gives distinct streams") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 4; ++s) {
      for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(s, k));
    }
    CHECK(seen.size() == 4000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  }

  TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t k) { hits[k]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t k) {
                      if (k == 5) throw DomainError("boom");
                    }),
                    DomainError);
  }
}
