#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace xlpc {

/// Neumaier-compensated accumulator. Summation order still matters for the
/// last bit, so callers that need bit-reproducible results must feed terms in
/// a fixed order.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);
double compensated_mean(std::span<const double> xs);

struct RootOptions {
  double x_tol = 1e-14;   // relative to the bracket midpoint
  int max_iter = 200;
};

/// Finds a root of `fn` in [lo, hi] given fn(lo) and fn(hi) of opposite
/// sign (or zero). Secant steps are taken when they stay inside the bracket
/// and shrink it fast enough; otherwise the step falls back to bisection.
double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 const RootOptions& opts = {});

struct MaximizeResult {
  double x = 0.0;
  double value = 0.0;
  bool unimodal = true;   // coarse scan showed a single slope sign change
  bool flat = false;      // objective constant to relative 1e-12 on the scan
};

/// Maximizes a univariate function on [lo, hi]: a log-spaced coarse scan
/// locates the best cell, then golden-section search refines inside the two
/// neighbouring cells. Requires 0 < lo < hi.
MaximizeResult maximize_on_log_grid(const std::function<double(double)>& fn, double lo, double hi,
                                    int scan_points = 200, double x_tol = 1e-12);

/// Golden-section maximization on [lo, hi] for a unimodal function.
double golden_section_maximize(const std::function<double(double)>& fn, double lo, double hi,
                               double x_tol = 1e-12, int max_iter = 500);

/// Counts sign changes of the discrete slope of `values`, ignoring zero steps.
int slope_sign_changes(std::span<const double> values);

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t count);

/// SplitMix64 mixing of a base seed with a stream index, used to give every
/// Monte Carlo draw its own independent engine seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Runs fn(k) for k in [0, count) on up to hardware_concurrency threads.
/// Each index is processed exactly once; fn must only write to per-index state.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace xlpc
