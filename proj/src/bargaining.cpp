#include "xlpc/bargaining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "xlpc/csv.hpp"
#include "xlpc/equilibria.hpp"
#include "xlpc/errors.hpp"
#include "xlpc/numerics.hpp"

namespace xlpc {

std::vector<double> power_lattice(const SystemParams& params, const RegionOptions& opts) {
  if (opts.grid_per_user < 2) throw DomainError("grid_per_user must be >= 2");
  std::vector<double> lattice{0.0};
  const auto rest = log_space(params.p_max * opts.floor_ratio, params.p_max, opts.grid_per_user - 1);
  lattice.insert(lattice.end(), rest.begin(), rest.end());
  return lattice;
}

UtilityRegion sample_region(const SystemParams& params, const ChannelState& channel,
                            const RegionOptions& opts) {
  params.validate();
  check_channel(params, channel);
  const std::size_t n = channel.size();
  const auto lattice = power_lattice(params, opts);

  UtilityRegion region;
  region.n_users = n;
  auto add = [&](PowerProfile p) {
    auto u = utilities(params, channel, p);
    region.points.push_back({std::move(p), std::move(u)});
  };

  if (static_cast<int>(n) <= opts.max_exhaustive_users) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= lattice.size();
    region.points.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t k = 0; k < total; ++k) {
      PowerProfile p{std::vector<double>(n)};
      for (std::size_t i = 0; i < n; ++i) p[i] = lattice[idx[i]];
      add(std::move(p));
      for (std::size_t i = 0; i < n; ++i) {
        if (++idx[i] < lattice.size()) break;
        idx[i] = 0;
      }
    }
    return region;
  }

  region.exhaustive = false;
  std::mt19937_64 engine(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_lo = std::log(params.p_max * opts.floor_ratio);
  const double log_hi = std::log(params.p_max);
  const double zero_prob = 1.0 / static_cast<double>(opts.grid_per_user);
  region.points.reserve(opts.random_samples + 1);
  add(PowerProfile{std::vector<double>(n, 0.0)});
  for (std::size_t k = 0; k < opts.random_samples; ++k) {
    PowerProfile p{std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = unit(engine) < zero_prob ? 0.0 : std::exp(log_lo + (log_hi - log_lo) * unit(engine));
    }
    add(std::move(p));
  }
  return region;
}

namespace {

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

double cross(const std::vector<double>& o, const std::vector<double>& a,
             const std::vector<double>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

std::vector<std::size_t> pareto_front(const std::vector<std::vector<double>>& utilities) {
  std::vector<std::size_t> order(utilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> sums(utilities.size());
  for (std::size_t k = 0; k < utilities.size(); ++k) {
    sums[k] = std::accumulate(utilities[k].begin(), utilities[k].end(), 0.0);
  }
  // A point can only be dominated by one with a strictly larger sum, or an
  // equal sum and an identical vector; scanning in decreasing sum order lets
  // each candidate be checked against the front found so far.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sums[a] > sums[b]; });
  std::vector<std::size_t> front;
  for (std::size_t k : order) {
    bool dominated = false;
    for (std::size_t j : front) {
      if (dominates(utilities[j], utilities[k]) || utilities[j] == utilities[k]) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(k);
  }
  std::sort(front.begin(), front.end());
  return front;
}

UtilityRegion convexify(UtilityRegion region, const RegionOptions& opts) {
  region.hull.clear();
  region.pareto.clear();
  region.segments.clear();
  region.convexified = true;
  const auto& pts = region.points;
  if (pts.empty()) return region;

  std::vector<std::vector<double>> us;
  us.reserve(pts.size());
  for (const auto& p : pts) us.push_back(p.utilities);

  if (region.n_users == 2) {
    // Andrew's monotone chain on the utility plane.
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return us[a] < us[b];
    });
    order.erase(std::unique(order.begin(), order.end(),
                            [&](std::size_t a, std::size_t b) { return us[a] == us[b]; }),
                order.end());
    if (order.size() < 3) {
      region.hull = order;
    } else {
      std::vector<std::size_t> h(2 * order.size());
      std::size_t k = 0;
      for (std::size_t idx : order) {
        while (k >= 2 && cross(us[h[k - 2]], us[h[k - 1]], us[idx]) <= 0.0) --k;
        h[k++] = idx;
      }
      for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
        const std::size_t idx = order[t];
        while (k >= lower && cross(us[h[k - 2]], us[h[k - 1]], us[idx]) <= 0.0) --k;
        h[k++] = idx;
      }
      h.resize(k - 1);
      region.hull = std::move(h);
    }
    // Outer boundary: hull vertices not dominated by another vertex, which
    // on a convex polygon form a contiguous chain ordered by u_1.
    std::vector<std::vector<double>> hv;
    for (std::size_t idx : region.hull) hv.push_back(us[idx]);
    for (std::size_t local : pareto_front(hv)) region.pareto.push_back(region.hull[local]);
    std::sort(region.pareto.begin(), region.pareto.end(),
              [&](std::size_t a, std::size_t b) { return us[a][0] < us[b][0]; });
    for (std::size_t k = 0; k + 1 < region.pareto.size(); ++k) {
      region.segments.emplace_back(region.pareto[k], region.pareto[k + 1]);
    }
    return region;
  }

  region.pareto = pareto_front(us);
  if (region.n_users == 1) return region;

  // Pairwise time sharing among the vertices with the largest utility sums.
  std::vector<std::size_t> top = region.pareto;
  if (top.size() > opts.max_segment_vertices) {
    std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(opts.max_segment_vertices),
                      top.end(), [&](std::size_t a, std::size_t b) {
                        return std::accumulate(us[a].begin(), us[a].end(), 0.0) >
                               std::accumulate(us[b].begin(), us[b].end(), 0.0);
                      });
    top.resize(opts.max_segment_vertices);
    std::sort(top.begin(), top.end());
  }
  for (std::size_t a = 0; a < top.size(); ++a) {
    for (std::size_t b = a + 1; b < top.size(); ++b) region.segments.emplace_back(top[a], top[b]);
  }
  return region;
}

std::vector<double> mix(const std::vector<double>& a, const std::vector<double>& b, double tau) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = tau * a[i] + (1.0 - tau) * b[i];
  return out;
}

double time_share_weight(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& u) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    num += (u[i] - b[i]) * d;
    den += d * d;
  }
  if (den == 0.0) return 1.0;
  return num / den;
}

bool hull_contains(const UtilityRegion& region, const std::vector<double>& u, double tol) {
  if (region.n_users != 2) throw DomainError("hull_contains supports two users only");
  const auto& h = region.hull;
  if (h.empty()) return false;
  if (h.size() == 1) {
    const auto& v = region.points[h[0]].utilities;
    return std::abs(v[0] - u[0]) <= tol && std::abs(v[1] - u[1]) <= tol;
  }
  for (std::size_t k = 0; k < h.size(); ++k) {
    const auto& a = region.points[h[k]].utilities;
    const auto& b = region.points[h[(k + 1) % h.size()]].utilities;
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    const double len = std::hypot(ex, ey);
    if (len == 0.0) continue;
    // Signed distance to the left of the counter-clockwise edge.
    const double dist = (ex * (u[1] - a[1]) - ey * (u[0] - a[0])) / len;
    if (dist < -tol) return false;
  }
  return true;
}

double nash_product(const std::vector<double>& u, const std::vector<double>& ne) {
  double prod = 1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double gain = u[i] - ne[i];
    if (!(gain > 0.0)) return 0.0;
    prod *= gain;
  }
  return prod;
}

NBResult solve_nb(const UtilityRegion& region, const std::vector<double>& ne_utilities) {
  if (!region.convexified) throw DomainError("solve_nb needs a convexified region");
  if (ne_utilities.size() != region.n_users) throw DomainError("NE utility vector has wrong size");
  const auto& pts = region.points;

  NBResult best;
  best.approximate = !region.exhaustive;
  std::size_t best_a = 0;
  std::size_t best_b = 0;
  bool found = false;

  auto consider = [&](std::size_t a, std::size_t b, double tau) {
    const auto u = mix(pts[a].utilities, pts[b].utilities, tau);
    const double m = nash_product(u, ne_utilities);
    if (m > best.nash_product) {
      best.nash_product = m;
      best.utilities = u;
      best.tau = tau;
      best_a = a;
      best_b = b;
      found = true;
    }
  };

  for (std::size_t v : region.pareto) consider(v, v, 1.0);

  for (const auto& [a, b] : region.segments) {
    const auto& ua = pts[a].utilities;
    const auto& ub = pts[b].utilities;
    // Each gain tau*(ua-ub) + (ub - ne) is affine; intersect positivity.
    double lo = 0.0;
    double hi = 1.0;
    for (std::size_t i = 0; i < ua.size() && lo < hi; ++i) {
      const double slope = ua[i] - ub[i];
      const double offset = ub[i] - ne_utilities[i];
      if (slope == 0.0) {
        if (!(offset > 0.0)) hi = lo - 1.0;
      } else if (slope > 0.0) {
        lo = std::max(lo, -offset / slope);
      } else {
        hi = std::min(hi, -offset / slope);
      }
    }
    if (!(lo < hi)) continue;
    // Sum of logs of positive affine functions is concave in tau.
    auto log_product = [&](double tau) {
      double s = 0.0;
      for (std::size_t i = 0; i < ua.size(); ++i) {
        const double gain = tau * ua[i] + (1.0 - tau) * ub[i] - ne_utilities[i];
        if (!(gain > 0.0)) return -std::numeric_limits<double>::infinity();
        s += std::log(gain);
      }
      return s;
    };
    consider(a, b, golden_section_maximize(log_product, lo, hi, 1e-13));
  }

  if (!found) {
    best.utilities = ne_utilities;
    best.nash_product = 0.0;
    best.tau = 1.0;
    best.empty_improvement = true;
    return best;
  }
  best.profile_a = pts[best_a].profile;
  best.profile_b = pts[best_b].profile;
  return best;
}

void write_region_csv(std::ostream& out, const UtilityRegion& region) {
  const std::size_t n = region.n_users;
  CsvWriter csv(out);
  csv.field("kind").field("index");
  for (std::size_t i = 1; i <= n; ++i) csv.field("p_" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) csv.field("u_" + std::to_string(i));
  csv.field("pareto").end_row();
  std::vector<char> on_front(region.points.size(), 0);
  for (std::size_t v : region.pareto) on_front[v] = 1;
  for (std::size_t k = 0; k < region.points.size(); ++k) {
    const auto& p = region.points[k];
    csv.field("region").field(k);
    for (double x : p.profile.powers) csv.field(x);
    for (double x : p.utilities) csv.field(x);
    csv.field(on_front[k] != 0).end_row();
  }
}

}  // namespace xlpc
