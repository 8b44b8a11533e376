#include "xlpc/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "xlpc/errors.hpp"

namespace xlpc {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double compensated_mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("mean of an empty sequence");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

double find_root(const std::function<double(double)>& fn, double lo, double hi,
                 const RootOptions& opts) {
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
    throw ConvergenceError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "], f(lo)=" + std::to_string(flo) +
                           " f(hi)=" + std::to_string(fhi));
  }
  double prev_width = hi - lo;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double width = hi - lo;
    const double mid = 0.5 * (lo + hi);
    if (width <= opts.x_tol * std::max(std::abs(mid), 1e-300)) return mid;

    double x = lo - flo * (hi - lo) / (fhi - flo);
    // Bisect when the secant step leaves the bracket, hugs an endpoint, or
    // the last step failed to halve the bracket.
    const double guard = 1e-3 * width;
    if (!(x > lo + guard && x < hi - guard) || width > 0.5 * prev_width) {
      x = mid;
    }
    prev_width = width;
    const double fx = fn(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  throw ConvergenceError("find_root: iteration cap reached");
}

double golden_section_maximize(const std::function<double(double)>& fn, double lo, double hi,
                               double x_tol, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < max_iter; ++it) {
    if (hi - lo <= x_tol * std::max(std::abs(lo) + std::abs(hi), 1e-300)) break;
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = fn(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = fn(d);
    }
  }
  return fc >= fd ? c : d;
}

int slope_sign_changes(std::span<const double> values) {
  int changes = 0;
  int last = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double step = values[k] - values[k - 1];
    const int s = step > 0.0 ? 1 : (step < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {hi};
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("log_space needs 0 < lo <= hi");
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

MaximizeResult maximize_on_log_grid(const std::function<double(double)>& fn, double lo, double hi,
                                    int scan_points, double x_tol) {
  if (scan_points < 3) scan_points = 3;
  const auto xs = log_space(lo, hi, static_cast<std::size_t>(scan_points));
  std::vector<double> ys(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) ys[k] = fn(xs[k]);

  const auto best = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());

  MaximizeResult res;
  res.unimodal = slope_sign_changes(ys) <= 1;
  res.flat = std::abs(*mx - *mn) <= 1e-12 * std::max(std::abs(*mx), 1e-300);
  if (res.flat) {
    res.x = hi;
    res.value = ys.back();
    return res;
  }
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[std::min(best + 1, xs.size() - 1)];
  const double x = golden_section_maximize(fn, a, b, x_tol);
  const double fx = fn(x);
  if (fx >= ys[best]) {
    res.x = x;
    res.value = fx;
  } else {
    res.x = xs[best];
    res.value = ys[best];
  }
  return res;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace xlpc
