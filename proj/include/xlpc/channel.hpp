#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xlpc {

/// Scalar constants of the multiple-access model. Powers are in Watt, rates in
/// bit/s, bandwidth in Hz; the channel bounds apply to squared gains |g_i|^2.
struct SystemParams {
  int n_users = 2;
  double noise_var = 1e-3;
  double p_max = 0.1;
  double b_fixed = 5e-3;
  double arrival_q = 0.5;
  int buffer_k = 10;
  double rate_r = 1e6;
  double bandwidth_r0 = 1e6;
  int spreading_l = 2;
  double nu_min = 0.1;
  double nu_max = 10.0;
  double fading_mean = 1.0;  // mean of the untruncated exponential |g|^2

  /// c = 2^(R/R0) - 1.
  double efficiency_c() const;

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

/// Field names accepted by the config parser, in serialization order.
const std::vector<std::string>& param_keys();

/// Sets one field from its textual value. Unknown keys and values that do not
/// parse as the field's type throw DomainError. Does not validate the result.
void set_param(SystemParams& params, std::string_view key, std::string_view value);

/// Textual value of one field, printed with round-trip precision.
std::string get_param(const SystemParams& params, std::string_view key);

/// Parses a flat `key = value` text ('#' starts a comment). Missing keys keep
/// their defaults.
SystemParams parse_params(std::string_view text, SystemParams base = {});
SystemParams load_params(const std::string& path, SystemParams base = {});
std::string params_to_text(const SystemParams& params);

struct ChannelState {
  std::vector<double> gains_sq;

  std::size_t size() const { return gains_sq.size(); }
  double operator[](std::size_t i) const { return gains_sq[i]; }
};

struct PowerProfile {
  std::vector<double> powers;

  std::size_t size() const { return powers.size(); }
  double operator[](std::size_t i) const { return powers[i]; }
  double& operator[](std::size_t i) { return powers[i]; }
};

void check_channel(const SystemParams& params, const ChannelState& channel);
void check_profile(const SystemParams& params, const PowerProfile& profile);

struct SamplerOptions {
  std::uint64_t max_attempts = 1'000'000;  // rejection cap per gain
};

/// Draws N i.i.d. exponential squared gains with mean `fading_mean`,
/// rejection-resampled into [nu_min, nu_max]. Deterministic in the seed.
ChannelState sample_channel(const SystemParams& params, std::uint64_t seed,
                            const SamplerOptions& opts = {});

/// `count` channel states; state k is drawn from derive_seed(seed, k) so any
/// subset can be regenerated independently.
std::vector<ChannelState> sample_channels(const SystemParams& params, std::uint64_t seed,
                                          std::size_t count, const SamplerOptions& opts = {});

/// Interference-plus-noise seen by user i: sigma^2 + (1/L) sum_{j!=i} p_j g_j.
double interference(const SystemParams& params, const ChannelState& channel,
                    const PowerProfile& profile, std::size_t i);

/// SINR of user i with the 1/L spreading gain applied to interference only.
double sinr(const SystemParams& params, const ChannelState& channel, const PowerProfile& profile,
            std::size_t i);

/// Receiver-side total power sigma^2 + sum_i p_i g_i (no spreading factor).
double received_power(const SystemParams& params, const ChannelState& channel,
                      const PowerProfile& profile);

}  // namespace xlpc
