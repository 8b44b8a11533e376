#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "xlpc/channel.hpp"

namespace xlpc {

/// Slot dynamics: a packet arrives with probability q and joins the buffer,
/// the head-of-line packet (possibly the new one) is sent and leaves with
/// probability f, and a packet that finds the buffer over capacity K is
/// dropped. Occupancy statistics are taken at the start of each slot.
struct QueueSimResult {
  double q = 0.0;
  double f = 0.0;
  int k = 0;
  std::uint64_t slots = 0;
  std::uint64_t seed = 0;
  double full_fraction = 0.0;     // time share with K packets buffered
  double loss_fraction = 0.0;     // (1 - f) * full_fraction
  double dropped_fraction = 0.0;  // dropped arrivals / offered arrivals
  double delivered_rate = 0.0;    // packets per slot
  double attempt_rate = 0.0;      // transmissions per slot
  double energy_per_bit = 0.0;    // (b + p * attempt_rate) / (R * delivered_rate)
  std::vector<double> occupancy;  // empirical distribution over 0..K
};

struct QueueLoad {
  double power = 0.0;   // transmit power while sending
  double b_fixed = 0.0;
  double rate_r = 1.0;
};

/// Simulation for a given success probability.
QueueSimResult simulate_queue(double f, double q, int k, std::uint64_t slots, std::uint64_t seed,
                              const QueueLoad& load = {});

/// Simulation for a user at SINR gamma transmitting with `power`.
QueueSimResult simulate_queue(const SystemParams& params, double gamma, double power,
                              std::uint64_t slots, std::uint64_t seed);

/// Cross-layer efficiency measured on a run: R * delivered / (b + p * attempts).
double simulated_efficiency(const QueueSimResult& r, const QueueLoad& load);

/// Birth-death stationary distribution over 0..K with ratio rho.
std::vector<double> birth_death_distribution(double q, double f, int k);

double total_variation(std::span<const double> a, std::span<const double> b);

using PowerPolicy = std::function<PowerProfile(const ChannelState&)>;

struct PolicyComparison {
  double welfare_a = 0.0;  // mean over draws of the summed simulated efficiency
  double welfare_b = 0.0;
  std::vector<double> per_draw_a;
  std::vector<double> per_draw_b;
  double relative_gain() const { return (welfare_a - welfare_b) / welfare_b; }
};

/// Runs both policies through the queue simulation with one random stream per
/// (draw, user) shared by the two policies.
PolicyComparison compare_policies(const SystemParams& params,
                                  std::span<const ChannelState> channel_draws,
                                  const PowerPolicy& policy_a, const PowerPolicy& policy_b,
                                  std::uint64_t slots, std::uint64_t seed);

/// CSV rows q,f,K,slots,full_fraction,loss_fraction,dropped_fraction,seed.
void write_queue_csv_header(std::ostream& out);
void write_queue_csv_row(std::ostream& out, const QueueSimResult& r);

}  // namespace xlpc
