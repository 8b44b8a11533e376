#include "xlpc/channel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"

namespace xlpc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw DomainError("parameter '" + std::string(key) + "': '" + s + "' is not a number");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("parameter '" + std::string(key) + "': '" + s + "' is not an integer");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct Field {
  const char* name;
  double SystemParams::*real = nullptr;
  int SystemParams::*integer = nullptr;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"n_users", nullptr, &SystemParams::n_users},
      {"noise_var", &SystemParams::noise_var, nullptr},
      {"p_max", &SystemParams::p_max, nullptr},
      {"b_fixed", &SystemParams::b_fixed, nullptr},
      {"arrival_q", &SystemParams::arrival_q, nullptr},
      {"buffer_k", nullptr, &SystemParams::buffer_k},
      {"rate_r", &SystemParams::rate_r, nullptr},
      {"bandwidth_r0", &SystemParams::bandwidth_r0, nullptr},
      {"spreading_l", nullptr, &SystemParams::spreading_l},
      {"nu_min", &SystemParams::nu_min, nullptr},
      {"nu_max", &SystemParams::nu_max, nullptr},
      {"fading_mean", &SystemParams::fading_mean, nullptr},
  };
  return table;
}

const Field& find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.name) return f;
  }
  throw DomainError("unknown parameter '" + std::string(key) + "'");
}

}  // namespace

double SystemParams::efficiency_c() const { return std::exp2(rate_r / bandwidth_r0) - 1.0; }

void SystemParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("invalid parameters: ") + what);
  };
  require(n_users >= 1, "n_users must be >= 1");
  require(noise_var > 0.0, "noise_var must be > 0");
  require(p_max > 0.0, "p_max must be > 0");
  require(b_fixed >= 0.0, "b_fixed must be >= 0");
  require(arrival_q > 0.0 && arrival_q <= 1.0, "arrival_q must lie in (0, 1]");
  require(buffer_k >= 1, "buffer_k must be >= 1");
  require(rate_r > 0.0 && bandwidth_r0 > 0.0, "rate_r and bandwidth_r0 must be > 0");
  require(spreading_l >= 1, "spreading_l must be >= 1");
  require(nu_min > 0.0 && nu_min <= nu_max, "need 0 < nu_min <= nu_max");
  require(fading_mean > 0.0, "fading_mean must be > 0");
  require(efficiency_c() > 0.0, "efficiency constant c must be > 0");
}

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.emplace_back(f.name);
    return k;
  }();
  return keys;
}

void set_param(SystemParams& params, std::string_view key, std::string_view value) {
  const Field& f = find_field(trim(key));
  if (f.real) {
    params.*(f.real) = parse_double(key, value);
  } else {
    params.*(f.integer) = parse_int(key, value);
  }
}

std::string get_param(const SystemParams& params, std::string_view key) {
  const Field& f = find_field(key);
  if (f.real) return format_double(params.*(f.real));
  return std::to_string(params.*(f.integer));
}

SystemParams parse_params(std::string_view text, SystemParams base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    set_param(base, trim(std::string_view(t).substr(0, eq)), std::string_view(t).substr(eq + 1));
  }
  return base;
}

SystemParams load_params(const std::string& path, SystemParams base) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str(), base);
}

std::string params_to_text(const SystemParams& params) {
  std::string out;
  for (const auto& key : param_keys()) {
    out += key + " = " + get_param(params, key) + "\n";
  }
  return out;
}

void check_channel(const SystemParams& params, const ChannelState& channel) {
  if (channel.size() != static_cast<std::size_t>(params.n_users)) {
    throw DomainError("channel has " + std::to_string(channel.size()) + " gains, expected " +
                      std::to_string(params.n_users));
  }
  for (double g : channel.gains_sq) {
    if (!(g >= params.nu_min && g <= params.nu_max)) {
      throw DomainError("channel gain " + format_double(g) + " outside [nu_min, nu_max]");
    }
  }
}

void check_profile(const SystemParams& params, const PowerProfile& profile) {
  if (profile.size() != static_cast<std::size_t>(params.n_users)) {
    throw DomainError("power profile has wrong length");
  }
  // alpha / nu_min can land one ulp above p_max; allow for that rounding.
  const double cap = params.p_max * (1.0 + 1e-12);
  for (double p : profile.powers) {
    if (!(p >= 0.0 && p <= cap)) {
      throw DomainError("power " + format_double(p) + " outside [0, p_max]");
    }
  }
}

ChannelState sample_channel(const SystemParams& params, std::uint64_t seed,
                            const SamplerOptions& opts) {
  params.validate();
  ChannelState state;
  state.gains_sq.resize(static_cast<std::size_t>(params.n_users));
  if (params.nu_min == params.nu_max) {
    std::fill(state.gains_sq.begin(), state.gains_sq.end(), params.nu_min);
    return state;
  }
  std::mt19937_64 engine(seed);
  std::exponential_distribution<double> exp_dist(1.0 / params.fading_mean);
  for (auto& g : state.gains_sq) {
    std::uint64_t attempts = 0;
    for (;;) {
      const double x = exp_dist(engine);
      if (x >= params.nu_min && x <= params.nu_max) {
        g = x;
        break;
      }
      if (++attempts >= opts.max_attempts) {
        throw ConvergenceError("sample_channel: support [nu_min, nu_max] rejected " +
                               std::to_string(attempts) + " consecutive draws");
      }
    }
  }
  return state;
}

std::vector<ChannelState> sample_channels(const SystemParams& params, std::uint64_t seed,
                                          std::size_t count, const SamplerOptions& opts) {
  std::vector<ChannelState> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(sample_channel(params, derive_seed(seed, k), opts));
  }
  return out;
}

double interference(const SystemParams& params, const ChannelState& channel,
                    const PowerProfile& profile, std::size_t i) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < channel.size(); ++j) {
    if (j != i) acc.add(profile[j] * channel[j]);
  }
  return params.noise_var + acc.value() / static_cast<double>(params.spreading_l);
}

double sinr(const SystemParams& params, const ChannelState& channel, const PowerProfile& profile,
            std::size_t i) {
  return profile[i] * channel[i] / interference(params, channel, profile, i);
}

double received_power(const SystemParams& params, const ChannelState& channel,
                      const PowerProfile& profile) {
  CompensatedSum acc;
  acc.add(params.noise_var);
  for (std::size_t j = 0; j < channel.size(); ++j) acc.add(profile[j] * channel[j]);
  return acc.value();
}

}  // namespace xlpc
