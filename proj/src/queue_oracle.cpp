#include "xlpc/queue_oracle.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "xlpc/csv.hpp"
#include "xlpc/efficiency.hpp"
#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"

namespace xlpc {

QueueSimResult simulate_queue(double f, double q, int k, std::uint64_t slots, std::uint64_t seed,
                              const QueueLoad& load) {
  if (slots < 1) throw DomainError("slots must be >= 1");
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("success probability outside [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("arrival probability outside [0, 1]");
  if (k < 1) throw DomainError("buffer size must be >= 1");

  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::uint64_t> visits(static_cast<std::size_t>(k) + 1, 0);
  std::uint64_t offered = 0, dropped = 0, delivered = 0, attempts = 0;
  int n = 0;
  for (std::uint64_t s = 0; s < slots; ++s) {
    ++visits[static_cast<std::size_t>(n)];
    // Both uniforms are always consumed so streams stay aligned across f.
    const bool arrival = unit(engine) < q;
    const bool success = unit(engine) < f;
    if (arrival) {
      ++offered;
      ++n;
    }
    if (n > 0) {
      ++attempts;
      if (success) {
        ++delivered;
        --n;
      }
    }
    if (n > k) {
      ++dropped;
      n = k;
    }
  }

  QueueSimResult r;
  r.q = q;
  r.f = f;
  r.k = k;
  r.slots = slots;
  r.seed = seed;
  const double total = static_cast<double>(slots);
  r.occupancy.resize(visits.size());
  for (std::size_t m = 0; m < visits.size(); ++m) r.occupancy[m] = visits[m] / total;
  r.full_fraction = r.occupancy.back();
  r.loss_fraction = (1.0 - f) * r.full_fraction;
  r.dropped_fraction = offered > 0 ? static_cast<double>(dropped) / offered : 0.0;
  r.delivered_rate = delivered / total;
  r.attempt_rate = attempts / total;
  const double cost = load.b_fixed + load.power * r.attempt_rate;
  r.energy_per_bit = r.delivered_rate > 0.0 ? cost / (load.rate_r * r.delivered_rate)
                                            : std::numeric_limits<double>::infinity();
  return r;
}

QueueSimResult simulate_queue(const SystemParams& params, double gamma, double power,
                              std::uint64_t slots, std::uint64_t seed) {
  params.validate();
  const double f = EfficiencyCurve::from(params)(gamma);
  return simulate_queue(f, params.arrival_q, params.buffer_k, slots, seed,
                        {power, params.b_fixed, params.rate_r});
}

double simulated_efficiency(const QueueSimResult& r, const QueueLoad& load) {
  if (r.delivered_rate == 0.0) return 0.0;
  const double cost = load.b_fixed + load.power * r.attempt_rate;
  if (!(cost > 0.0)) throw DomainError("zero energy cost with non-zero delivery");
  return load.rate_r * r.delivered_rate / cost;
}

std::vector<double> birth_death_distribution(double q, double f, int k) {
  const auto stats = queue_stats_for_success(f, q, k);
  std::vector<double> pi(static_cast<std::size_t>(k) + 1, 0.0);
  if (std::isinf(stats.rho)) {
    pi.back() = 1.0;
    return pi;
  }
  // Work relative to the largest term so neither rho << 1 nor rho >> 1 overflows.
  const double rho = stats.rho;
  const double log_rho = std::log(rho);
  const double top = rho > 1.0 ? k * log_rho : 0.0;
  double norm = 0.0;
  for (int m = 0; m <= k; ++m) {
    pi[static_cast<std::size_t>(m)] = rho == 0.0 ? (m == 0 ? 1.0 : 0.0) : std::exp(m * log_rho - top);
    norm += pi[static_cast<std::size_t>(m)];
  }
  for (double& x : pi) x /= norm;
  return pi;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("distributions differ in support size");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

PolicyComparison compare_policies(const SystemParams& params,
                                  std::span<const ChannelState> channel_draws,
                                  const PowerPolicy& policy_a, const PowerPolicy& policy_b,
                                  std::uint64_t slots, std::uint64_t seed) {
  params.validate();
  if (channel_draws.empty()) throw DomainError("compare_policies needs channel draws");
  const std::size_t n = static_cast<std::size_t>(params.n_users);
  PolicyComparison out;
  out.per_draw_a.assign(channel_draws.size(), 0.0);
  out.per_draw_b.assign(channel_draws.size(), 0.0);

  auto welfare = [&](const ChannelState& ch, const PowerPolicy& policy, std::size_t d) {
    const PowerProfile p = policy(ch);
    check_profile(params, p);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const QueueLoad load{p[i], params.b_fixed, params.rate_r};
      const double f = EfficiencyCurve::from(params)(sinr(params, ch, p, i));
      const auto r = simulate_queue(f, params.arrival_q, params.buffer_k, slots,
                                    derive_seed(seed, d * n + i), load);
      sum += simulated_efficiency(r, load);
    }
    return sum;
  };

  parallel_for(channel_draws.size(), [&](std::size_t d) {
    check_channel(params, channel_draws[d]);
    out.per_draw_a[d] = welfare(channel_draws[d], policy_a, d);
    out.per_draw_b[d] = welfare(channel_draws[d], policy_b, d);
  });
  out.welfare_a = compensated_mean(out.per_draw_a);
  out.welfare_b = compensated_mean(out.per_draw_b);
  return out;
}

void write_queue_csv_header(std::ostream& out) {
  CsvWriter(out).row("q", "f", "K", "slots", "full_fraction", "loss_fraction", "dropped_fraction",
                     "seed");
}

void write_queue_csv_row(std::ostream& out, const QueueSimResult& r) {
  CsvWriter(out).row(r.q, r.f, r.k, r.slots, r.full_fraction, r.loss_fraction, r.dropped_fraction,
                     r.seed);
}

}  // namespace xlpc
