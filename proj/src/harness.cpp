#include "xlpc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <fstream>
#include <optional>
#include <sstream>

#include "xlpc/bargaining.hpp"
#include "xlpc/csv.hpp"
#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"
#include "xlpc/queue_oracle.hpp"
#include "xlpc/repeated.hpp"

namespace xlpc {

using nlohmann::ordered_json;

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_table() {
  static const std::vector<std::pair<Scenario, std::string>> table{
      {Scenario::Region, "region"},
      {Scenario::EquilibriaVsN, "equilibria_vs_n"},
      {Scenario::TminVsB, "tmin_vs_b"},
      {Scenario::TminVsQ, "tmin_vs_q"},
      {Scenario::LambdaVsEta, "lambda_vs_eta"},
      {Scenario::LambdaVsQ, "lambda_vs_q"},
      {Scenario::WelfareFrg, "welfare_frg"},
      {Scenario::WelfareDrg, "welfare_drg"},
      {Scenario::QueueCompare, "queue_compare"},
  };
  return table;
}

// Stream tags keep the random streams of different scenario stages apart.
constexpr std::uint64_t kChannelStream = 0x11;
constexpr std::uint64_t kOpStream = 0x22;
constexpr std::uint64_t kRegionStream = 0x33;
constexpr std::uint64_t kQueueStream = 0x44;
constexpr std::uint64_t kStageStream = 0x55;

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw DomainError("option " + std::string(key) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.size() - start
                                                                         : comma - start);
    out.push_back(parse_number<T>(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (int k = 0; lo + k * step <= hi + 1e-12; ++k) out.push_back(std::round((lo + k * step) * 1e12) / 1e12);
  return out;
}

struct Model {
  std::string name;
  SystemParams params;
};

std::vector<Model> both_models(const SystemParams& params) {
  return {{"crosslayer", params}, {"goodman", goodman_mode(params)}};
}

struct FolkSummary {
  double tmin_mean = std::nan("");
  std::size_t tmin_supported = 0;
  double lambda_mean = std::nan("");
  std::size_t lambda_supported = 0;
  double coop_welfare = 0.0;  // mean sum utility at the operating point
  double ne_welfare = 0.0;    // mean sum utility at the Nash equilibrium
};

OperatingPoint solve_op_for(const SystemParams& params, const ExperimentSpec& spec) {
  return solve_op(params, derive_seed(spec.seed, kOpStream),
                  static_cast<std::size_t>(spec.options.op_draws));
}

std::vector<ChannelState> channels_for(const SystemParams& params, const ExperimentSpec& spec,
                                       std::size_t count) {
  return sample_channels(params, derive_seed(spec.seed, kChannelStream), count);
}

// Per draw: T_min is the largest user requirement and lambda_max the
// smallest user bound; draws where a bound does not exist are left out of
// that average and counted separately.
FolkSummary summarize_folk(const SystemParams& params, std::span<const ChannelState> draws,
                           const OperatingPoint& op) {
  const std::size_t m = draws.size();
  std::vector<double> tmins(m, std::nan("")), lambdas(m, std::nan("")), coop(m), ne(m);
  parallel_for(m, [&](std::size_t d) {
    const auto eq = solve_ne(params, draws[d]);
    const auto fc = folk_constants(params, draws[d], op, eq);
    try {
      tmins[d] = static_cast<double>(t_min(fc));
    } catch (const InfeasibleError&) {
    }
    try {
      lambdas[d] = lambda_max(fc);
    } catch (const InfeasibleError&) {
    }
    const auto op_u = utilities(params, draws[d], op.powers(draws[d]));
    coop[d] = std::accumulate(op_u.begin(), op_u.end(), 0.0);
    ne[d] = std::accumulate(eq.utilities.begin(), eq.utilities.end(), 0.0);
  });
  FolkSummary s;
  std::vector<double> t_ok, l_ok;
  for (std::size_t d = 0; d < m; ++d) {
    if (!std::isnan(tmins[d])) t_ok.push_back(tmins[d]);
    if (!std::isnan(lambdas[d])) l_ok.push_back(lambdas[d]);
  }
  s.tmin_supported = t_ok.size();
  s.lambda_supported = l_ok.size();
  if (!t_ok.empty()) s.tmin_mean = compensated_mean(t_ok);
  if (!l_ok.empty()) s.lambda_mean = compensated_mean(l_ok);
  s.coop_welfare = compensated_mean(coop);
  s.ne_welfare = compensated_mean(ne);
  return s;
}

SystemParams with_users(SystemParams p, int n) {
  p.n_users = n;
  return p;
}

void scenario_region(const ExperimentSpec& spec, CsvWriter& csv) {
  const auto& params = spec.params;
  const std::size_t n = static_cast<std::size_t>(params.n_users);
  const auto channel = sample_channel(params, derive_seed(spec.seed, kChannelStream));
  const auto op = solve_op_for(params, spec);
  RegionOptions ro;
  ro.grid_per_user = static_cast<std::size_t>(spec.options.grid);
  ro.seed = derive_seed(spec.seed, kRegionStream);
  auto region = convexify(sample_region(params, channel, ro), ro);
  const auto ne = solve_ne(params, channel);
  const auto nb = solve_nb(region, ne.utilities);
  const auto op_eq = op_equilibrium(params, channel, op);

  csv.field("kind").field("index");
  for (std::size_t i = 1; i <= n; ++i) csv.field("p_" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) csv.field("u_" + std::to_string(i));
  csv.field("pareto").end_row();
  std::vector<char> on_front(region.points.size(), 0);
  for (std::size_t v : region.pareto) on_front[v] = 1;
  for (std::size_t k = 0; k < region.points.size(); ++k) {
    csv.field("region").field(k);
    for (double x : region.points[k].profile.powers) csv.field(x);
    for (double x : region.points[k].utilities) csv.field(x);
    csv.field(on_front[k] != 0).end_row();
  }
  auto emit = [&](const char* kind, const std::vector<double>& p, const std::vector<double>& u) {
    csv.field(kind).field(0);
    for (double x : p) csv.field(x);
    for (double x : u) csv.field(x);
    csv.field(0).end_row();
  };
  emit("NE", ne.profile.powers, ne.utilities);
  emit("OP", op_eq.profile.powers, op_eq.utilities);
  std::vector<double> nb_power(n, 0.0);
  if (!nb.empty_improvement) {
    nb_power = mix(nb.profile_a.powers, nb.profile_b.powers, nb.tau);
  } else {
    nb_power = ne.profile.powers;
  }
  emit(nb.approximate ? "NB_approx" : "NB", nb_power, nb.utilities);
}

void scenario_equilibria_vs_n(const ExperimentSpec& spec, CsvWriter& csv) {
  csv.row("N", "kind", "user", "mean_power", "mean_utility", "draws", "approximate");
  for (int n : spec.options.n_list) {
    const auto params = with_users(spec.params, n);
    const auto draws = channels_for(params, spec, spec.draws);
    const auto op = solve_op_for(params, spec);
    const std::size_t m = draws.size();
    const std::size_t nu = static_cast<std::size_t>(n);
    std::vector<std::vector<double>> ne_p(m), ne_u(m), op_p(m), op_u(m);
    parallel_for(m, [&](std::size_t d) {
      const auto eq = solve_ne(params, draws[d]);
      ne_p[d] = eq.profile.powers;
      ne_u[d] = eq.utilities;
      const auto p = op.powers(draws[d]);
      op_p[d] = p.powers;
      op_u[d] = utilities(params, draws[d], p);
    });
    const std::size_t nb_m = std::min<std::size_t>(m, static_cast<std::size_t>(spec.options.nb_draws));
    std::vector<std::vector<double>> nb_p(nb_m), nb_u(nb_m);
    std::vector<char> nb_approx(nb_m, 0);
    RegionOptions ro;
    ro.grid_per_user = static_cast<std::size_t>(spec.options.nb_grid);
    parallel_for(nb_m, [&](std::size_t d) {
      RegionOptions local = ro;
      local.seed = derive_seed(spec.seed ^ kRegionStream, d);
      const auto region = convexify(sample_region(params, draws[d], local), local);
      const auto nb = solve_nb(region, ne_u[d]);
      nb_u[d] = nb.utilities;
      nb_p[d] = nb.empty_improvement ? ne_p[d]
                                     : mix(nb.profile_a.powers, nb.profile_b.powers, nb.tau);
      nb_approx[d] = nb.approximate;
    });
    auto emit = [&](const char* kind, const std::vector<std::vector<double>>& p,
                    const std::vector<std::vector<double>>& u, bool approx) {
      for (std::size_t i = 0; i < nu; ++i) {
        std::vector<double> pi, ui;
        for (std::size_t d = 0; d < p.size(); ++d) {
          pi.push_back(p[d][i]);
          ui.push_back(u[d][i]);
        }
        csv.row(n, kind, i + 1, compensated_mean(pi), compensated_mean(ui), p.size(), approx);
      }
    };
    emit("NE", ne_p, ne_u, false);
    emit("OP", op_p, op_u, false);
    if (nb_m > 0) {
      emit("NB", nb_p, nb_u, std::any_of(nb_approx.begin(), nb_approx.end(), [](char c) { return c != 0; }));
    }
  }
}

void folk_sweep_rows(const ExperimentSpec& spec, CsvWriter& csv, bool want_tmin,
                     const std::vector<std::pair<std::string, std::vector<SystemParams>>>& series) {
  for (const auto& [model, list] : series) {
    for (const auto& params : list) {
      const auto draws = channels_for(params, spec, spec.draws);
      const auto op = solve_op_for(params, spec);
      const auto s = summarize_folk(params, draws, op);
      const double eta = static_cast<double>(params.n_users) / params.spreading_l;
      csv.row(params.n_users, params.spreading_l, eta, model, params.b_fixed, params.arrival_q,
              want_tmin ? s.tmin_mean : s.lambda_mean,
              want_tmin ? s.tmin_supported : s.lambda_supported, draws.size());
    }
  }
}

void scenario_folk_sweep(const ExperimentSpec& spec, CsvWriter& csv) {
  const bool want_tmin = spec.scenario == Scenario::TminVsB || spec.scenario == Scenario::TminVsQ;
  csv.row("N", "L", "eta", "model", "b", "q", want_tmin ? "tmin" : "lambda_max", "supported",
          "draws");
  for (int n : spec.options.n_list) {
    const auto base = with_users(spec.params, n);
    std::vector<SystemParams> cross;
    std::vector<SystemParams> good;
    switch (spec.scenario) {
      case Scenario::TminVsB:
        for (double b : spec.options.b_list) {
          auto p = base;
          p.b_fixed = b;
          cross.push_back(p);
        }
        good.push_back(goodman_mode(base));
        break;
      case Scenario::TminVsQ:
      case Scenario::LambdaVsQ:
        for (double q : spec.options.q_list) {
          auto p = base;
          p.arrival_q = q;
          cross.push_back(p);
        }
        good.push_back(goodman_mode(base));
        break;
      case Scenario::LambdaVsEta:
        for (int l : spec.options.l_list) {
          auto p = base;
          p.spreading_l = l;
          cross.push_back(p);
          good.push_back(goodman_mode(p));
        }
        break;
      default:
        throw DomainError("not a threshold sweep");
    }
    folk_sweep_rows(spec, csv, want_tmin, {{"crosslayer", cross}, {"goodman", good}});
  }
}

void scenario_welfare_frg(const ExperimentSpec& spec, CsvWriter& csv) {
  csv.row("N", "L", "model", "tmin", "horizon", "coop_welfare", "ne_welfare", "ratio", "supported");
  for (int n : spec.options.n_list) {
    for (const auto& [name, params] : both_models(with_users(spec.params, n))) {
      const auto draws = channels_for(params, spec, spec.draws);
      const auto op = solve_op_for(params, spec);
      const auto s = summarize_folk(params, draws, op);
      if (s.tmin_supported == 0) continue;
      const auto tmin = static_cast<long long>(std::ceil(s.tmin_mean));
      const auto horizon = static_cast<std::size_t>(std::ceil(spec.options.t_factor * tmin));
      csv.row(n, params.spreading_l, name, tmin, horizon, s.coop_welfare, s.ne_welfare,
              frg_welfare_ratio(horizon, tmin, s.coop_welfare, s.ne_welfare), s.tmin_supported);
    }
  }
}

void scenario_welfare_drg(const ExperimentSpec& spec, CsvWriter& csv) {
  csv.row("N", "L", "model", "lambda", "lambda_max", "stages", "w_drg", "w_ne", "ratio");
  const auto cap = static_cast<std::size_t>(spec.options.horizon_cap);
  RepeatedOptions ro;
  ro.record_traces = false;
  for (int n : spec.options.n_list) {
    for (const auto& [name, params] : both_models(with_users(spec.params, n))) {
      const auto draws = channels_for(params, spec, spec.draws);
      const auto op = solve_op_for(params, spec);
      const auto s = summarize_folk(params, draws, op);
      if (s.lambda_supported == 0 || !(s.lambda_mean > 0.0)) continue;
      PowerControlGame game(params, sample_channels(params, derive_seed(spec.seed, kStageStream), cap),
                            op);
      for (double frac : spec.options.lambda_fracs) {
        const double lambda = std::min(frac * s.lambda_mean, 1.0 - 1e-12);
        const auto out = run_drg(game, lambda, s.lambda_mean, cap, {}, ro);
        const auto base = run_nash(game, out, ro);
        csv.row(n, params.spreading_l, name, lambda, s.lambda_mean, out.stages, out.welfare,
                base.welfare, welfare_ratio(out, base));
      }
    }
  }
}

void scenario_queue_compare(const ExperimentSpec& spec, CsvWriter& csv) {
  csv.row("N", "L", "q", "b", "policy", "alpha", "welfare", "relative_gain", "draws", "slots");
  const auto& params = spec.params;
  auto goodman_params = params;
  goodman_params.arrival_q = 1.0 - 1e-9;
  const auto op_cross = solve_op_for(params, spec);
  const auto op_good = solve_op_for(goodman_params, spec);
  const auto draws = channels_for(params, spec, static_cast<std::size_t>(spec.options.queue_draws));
  const auto cmp = compare_policies(
      params, draws, [&](const ChannelState& ch) { return op_cross.powers(ch); },
      [&](const ChannelState& ch) { return op_good.powers(ch); },
      static_cast<std::uint64_t>(spec.options.slots), derive_seed(spec.seed, kQueueStream));
  csv.row(params.n_users, params.spreading_l, params.arrival_q, params.b_fixed, "crosslayer",
          op_cross.alpha, cmp.welfare_a, cmp.relative_gain(), draws.size(), spec.options.slots);
  csv.row(params.n_users, params.spreading_l, params.arrival_q, params.b_fixed, "q_to_1",
          op_good.alpha, cmp.welfare_b, 0.0, draws.size(), spec.options.slots);
}

ordered_json params_json(const SystemParams& p) {
  ordered_json j;
  for (const auto& key : param_keys()) {
    const auto text = get_param(p, key);
    if (key == "n_users" || key == "buffer_k" || key == "spreading_l") {
      j[key] = std::stoll(text);
    } else {
      j[key] = std::stod(text);
    }
  }
  return j;
}

std::string json_scalar_text(const ordered_json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  throw DomainError("manifest value is not a scalar");
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [k, name] : scenario_table()) {
    if (k == s) return name;
  }
  throw DomainError("unknown scenario");
}

Scenario parse_scenario(std::string_view name) {
  for (const auto& [k, n] : scenario_table()) {
    if (n == name) return k;
  }
  throw DomainError("unknown scenario '" + std::string(name) + "'");
}

const std::vector<Scenario>& all_scenarios() {
  static const std::vector<Scenario> all = [] {
    std::vector<Scenario> v;
    for (const auto& [k, n] : scenario_table()) v.push_back(k);
    return v;
  }();
  return all;
}

SystemParams defaults() { return SystemParams{}; }

SystemParams goodman_mode(SystemParams params) {
  params.b_fixed = 0.0;
  params.arrival_q = 1.0 - 1e-9;
  return params;
}

ScenarioOptions default_options(Scenario s) {
  ScenarioOptions o;
  const auto qs = grid(0.1, 0.9, 0.1);
  switch (s) {
    case Scenario::EquilibriaVsN:
      o.n_list = {2, 3, 4, 5};
      break;
    case Scenario::TminVsB:
      o.n_list = {3, 4};
      o.b_list = {0.0, 1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2};
      break;
    case Scenario::TminVsQ:
      o.n_list = {3, 4, 5};
      o.q_list = qs;
      break;
    case Scenario::LambdaVsEta:
      o.n_list = {2, 3, 4};
      o.l_list = {1, 2, 3, 4, 5, 6, 8, 10};
      break;
    case Scenario::LambdaVsQ:
      o.n_list = {2, 3, 4};
      o.q_list = qs;
      break;
    case Scenario::WelfareFrg:
      o.n_list = {2, 3, 4};
      break;
    case Scenario::WelfareDrg:
      o.n_list = {2, 3, 4};
      o.lambda_fracs = grid(0.1, 1.0, 0.1);
      break;
    case Scenario::Region:
    case Scenario::QueueCompare:
      break;
  }
  return o;
}

const std::vector<std::string>& option_keys() {
  static const std::vector<std::string> keys{
      "n_list", "l_list",    "q_list", "b_list",   "lambda_fracs", "t_factor", "horizon_cap",
      "grid",   "nb_draws", "nb_grid", "queue_draws", "slots",     "op_draws"};
  return keys;
}

ExperimentSpec make_spec(Scenario s) {
  ExperimentSpec spec;
  spec.scenario = s;
  spec.options = default_options(s);
  switch (s) {
    case Scenario::TminVsB:
    case Scenario::TminVsQ:
      spec.params.spreading_l = 5;
      break;
    case Scenario::QueueCompare:
      spec.params.spreading_l = 4;
      spec.params.b_fixed = 0.045;
      break;
    case Scenario::Region:
      spec.draws = 2000;
      break;
    default:
      break;
  }
  return spec;
}

void apply_override(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  const auto& pk = param_keys();
  if (std::find(pk.begin(), pk.end(), key) != pk.end()) {
    set_param(spec.params, key, value);
  } else {
    auto& o = spec.options;
    if (key == "n_list") o.n_list = parse_list<int>(key, value);
    else if (key == "l_list") o.l_list = parse_list<int>(key, value);
    else if (key == "q_list") o.q_list = parse_list<double>(key, value);
    else if (key == "b_list") o.b_list = parse_list<double>(key, value);
    else if (key == "lambda_fracs") o.lambda_fracs = parse_list<double>(key, value);
    else if (key == "t_factor") o.t_factor = parse_number<double>(key, value);
    else if (key == "horizon_cap") o.horizon_cap = parse_number<int>(key, value);
    else if (key == "grid") o.grid = parse_number<int>(key, value);
    else if (key == "nb_draws") o.nb_draws = parse_number<int>(key, value);
    else if (key == "nb_grid") o.nb_grid = parse_number<int>(key, value);
    else if (key == "queue_draws") o.queue_draws = parse_number<int>(key, value);
    else if (key == "slots") o.slots = parse_number<long long>(key, value);
    else if (key == "op_draws") o.op_draws = parse_number<int>(key, value);
    else throw DomainError("unknown key '" + std::string(key) + "'");
  }
  spec.overrides.emplace_back(std::string(key), std::string(value));
}

void apply_override(ExperimentSpec& spec, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw DomainError("expected key=value, got '" + std::string(assignment) + "'");
  }
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  apply_override(spec, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void validate_spec(const ExperimentSpec& spec) {
  spec.params.validate();
  const auto& o = spec.options;
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
  };
  need(spec.draws >= 1, "draws must be >= 1");
  need(o.op_draws >= 1, "op_draws must be >= 1");
  need(o.grid >= 2 && o.nb_grid >= 2, "grid sizes must be >= 2");
  need(o.t_factor >= 1.0, "t_factor must be >= 1");
  need(o.horizon_cap >= 1, "horizon_cap must be >= 1");
  need(o.nb_draws >= 0, "nb_draws must be >= 0");
  need(o.queue_draws >= 1 && o.slots >= 1, "queue_draws and slots must be >= 1");

  auto check_n = [&](int n) {
    need(n >= 2, "scenario needs at least two users");
    with_users(spec.params, n).validate();
  };
  auto need_list = [&](bool non_empty, const char* name) {
    need(non_empty, std::string(name) + " must not be empty for scenario " + to_string(spec.scenario));
  };
  switch (spec.scenario) {
    case Scenario::Region:
      need(spec.params.n_users >= 2, "region scenario needs at least two users");
      if (spec.params.n_users <= 3) {
        need(std::pow(o.grid, spec.params.n_users) <= 5e6, "region lattice too large");
      }
      break;
    case Scenario::QueueCompare:
      need(spec.params.arrival_q < 1.0, "queue_compare needs q < 1");
      break;
    case Scenario::TminVsB:
      need_list(!o.b_list.empty(), "b_list");
      for (double b : o.b_list) need(b >= 0.0 && std::isfinite(b), "b_list entries must be >= 0");
      break;
    case Scenario::TminVsQ:
    case Scenario::LambdaVsQ:
      need_list(!o.q_list.empty(), "q_list");
      for (double q : o.q_list) need(q > 0.0 && q <= 1.0, "q_list entries must lie in (0, 1]");
      break;
    case Scenario::LambdaVsEta:
      need_list(!o.l_list.empty(), "l_list");
      for (int l : o.l_list) need(l >= 1, "l_list entries must be >= 1");
      break;
    case Scenario::WelfareDrg:
      need_list(!o.lambda_fracs.empty(), "lambda_fracs");
      for (double f : o.lambda_fracs) need(f > 0.0 && f <= 1.0, "lambda_fracs must lie in (0, 1]");
      break;
    default:
      break;
  }
  if (spec.scenario != Scenario::Region && spec.scenario != Scenario::QueueCompare) {
    need_list(!o.n_list.empty(), "n_list");
    for (int n : o.n_list) check_n(n);
  }
  if (spec.scenario == Scenario::EquilibriaVsN) {
    for (int n : o.n_list) {
      if (n <= 3) need(std::pow(o.nb_grid, n) <= 5e6, "nb_grid lattice too large");
    }
  }
}

std::string run_scenario_csv(const ExperimentSpec& spec) {
  validate_spec(spec);
  std::ostringstream out;
  CsvWriter csv(out);
  switch (spec.scenario) {
    case Scenario::Region:
      scenario_region(spec, csv);
      break;
    case Scenario::EquilibriaVsN:
      scenario_equilibria_vs_n(spec, csv);
      break;
    case Scenario::TminVsB:
    case Scenario::TminVsQ:
    case Scenario::LambdaVsEta:
    case Scenario::LambdaVsQ:
      scenario_folk_sweep(spec, csv);
      break;
    case Scenario::WelfareFrg:
      scenario_welfare_frg(spec, csv);
      break;
    case Scenario::WelfareDrg:
      scenario_welfare_drg(spec, csv);
      break;
    case Scenario::QueueCompare:
      scenario_queue_compare(spec, csv);
      break;
  }
  return out.str();
}

ordered_json manifest_for(const ExperimentSpec& spec) {
  ordered_json m;
  m["tool"] = "xlpc";
  m["version"] = kVersion;
  m["scenario"] = to_string(spec.scenario);
  m["seed"] = spec.seed;
  m["draws"] = spec.draws;
  m["params"] = params_json(spec.params);
  const auto& o = spec.options;
  ordered_json opts;
  opts["n_list"] = o.n_list;
  opts["l_list"] = o.l_list;
  opts["q_list"] = o.q_list;
  opts["b_list"] = o.b_list;
  opts["lambda_fracs"] = o.lambda_fracs;
  opts["t_factor"] = o.t_factor;
  opts["horizon_cap"] = o.horizon_cap;
  opts["grid"] = o.grid;
  opts["nb_draws"] = o.nb_draws;
  opts["nb_grid"] = o.nb_grid;
  opts["queue_draws"] = o.queue_draws;
  opts["slots"] = o.slots;
  opts["op_draws"] = o.op_draws;
  m["options"] = opts;
  ordered_json ov = ordered_json::array();
  for (const auto& [k, v] : spec.overrides) ov.push_back({{"key", k}, {"value", v}});
  m["overrides"] = ov;
  return m;
}

ExperimentSpec spec_from_manifest(const ordered_json& m) {
  try {
    ExperimentSpec spec = make_spec(parse_scenario(m.at("scenario").get<std::string>()));
    spec.seed = m.at("seed").get<std::uint64_t>();
    spec.draws = m.at("draws").get<std::size_t>();
    SystemParams params;
    for (const auto& [key, value] : m.at("params").items()) set_param(params, key, json_scalar_text(value));
    spec.params = params;
    const auto& o = m.at("options");
    auto& so = spec.options;
    so.n_list = o.at("n_list").get<std::vector<int>>();
    so.l_list = o.at("l_list").get<std::vector<int>>();
    so.q_list = o.at("q_list").get<std::vector<double>>();
    so.b_list = o.at("b_list").get<std::vector<double>>();
    so.lambda_fracs = o.at("lambda_fracs").get<std::vector<double>>();
    so.t_factor = o.at("t_factor").get<double>();
    so.horizon_cap = o.at("horizon_cap").get<int>();
    so.grid = o.at("grid").get<int>();
    so.nb_draws = o.at("nb_draws").get<int>();
    so.nb_grid = o.at("nb_grid").get<int>();
    so.queue_draws = o.at("queue_draws").get<int>();
    so.slots = o.at("slots").get<long long>();
    so.op_draws = o.at("op_draws").get<int>();
    spec.overrides.clear();
    if (m.contains("overrides")) {
      for (const auto& e : m.at("overrides")) {
        spec.overrides.emplace_back(e.at("key").get<std::string>(), e.at("value").get<std::string>());
      }
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed manifest: ") + e.what());
  }
}

ExperimentSpec load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open manifest " + path);
  ordered_json m;
  try {
    m = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed manifest: ") + e.what());
  }
  return spec_from_manifest(m);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  const auto start = std::chrono::steady_clock::now();
  const std::string csv = run_scenario_csv(spec);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  fs::create_directories(spec.out_dir);
  const std::string name = to_string(spec.scenario);
  const fs::path csv_path = fs::path(spec.out_dir) / (name + ".csv");
  const fs::path manifest_path = fs::path(spec.out_dir) / (name + ".manifest.json");
  {
    std::ofstream out(csv_path, std::ios::binary);
    out << csv;
    if (!out) throw Error("failed to write " + csv_path.string());
  }
  ExperimentResult result;
  result.manifest = manifest_for(spec);
  result.manifest["outputs"] = {csv_path.filename().string()};
  result.manifest["wall_time_s"] = wall;
  {
    std::ofstream out(manifest_path, std::ios::binary);
    out << result.manifest.dump(2) << '\n';
    if (!out) throw Error("failed to write " + manifest_path.string());
  }
  result.files = {csv_path.string(), manifest_path.string()};
  return result;
}

}  // namespace xlpc
