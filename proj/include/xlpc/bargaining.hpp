#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "xlpc/channel.hpp"

namespace xlpc {

struct RegionPoint {
  PowerProfile profile;
  std::vector<double> utilities;
};

/// Sampled achievable-utility region together with its time-sharing
/// convexification. Hull and Pareto entries index into `points`; a boundary
/// segment (a, b) stands for every mixture tau * u_a + (1 - tau) * u_b.
struct UtilityRegion {
  std::size_t n_users = 0;
  std::vector<RegionPoint> points;
  std::vector<std::size_t> hull;      // 2 users: hull vertices, counter-clockwise
  std::vector<std::size_t> pareto;    // non-dominated vertices
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  bool exhaustive = true;             // false when sampled at random
  bool convexified = false;
};

struct RegionOptions {
  std::size_t grid_per_user = 24;      // lattice size per user, counting p = 0
  double floor_ratio = 1e-4;           // smallest non-zero lattice power / p_max
  int max_exhaustive_users = 3;        // beyond this, sample profiles at random
  std::size_t random_samples = 20'000;
  std::uint64_t seed = 1;
  std::size_t max_segment_vertices = 200;  // >= 3 users: vertices paired for time sharing
};

/// Power lattice {0} plus log-spaced values up to p_max.
std::vector<double> power_lattice(const SystemParams& params, const RegionOptions& opts);

UtilityRegion sample_region(const SystemParams& params, const ChannelState& channel,
                            const RegionOptions& opts = {});

/// Indices of mutually non-dominated utility vectors.
std::vector<std::size_t> pareto_front(const std::vector<std::vector<double>>& utilities);

/// Adds hull, Pareto vertices and boundary segments. Two users get the exact
/// planar hull; with more users every pair of top Pareto vertices is a
/// candidate time-sharing segment.
UtilityRegion convexify(UtilityRegion region, const RegionOptions& opts = {});

/// Utility vector of the mixture tau * a + (1 - tau) * b.
std::vector<double> mix(const std::vector<double>& a, const std::vector<double>& b, double tau);

/// Least-squares tau such that mix(a, b, tau) is closest to u.
double time_share_weight(const std::vector<double>& a, const std::vector<double>& b,
                         const std::vector<double>& u);

/// Two-user membership test against the convex hull, with absolute slack.
bool hull_contains(const UtilityRegion& region, const std::vector<double>& u, double tol = 0.0);

struct NBResult {
  std::vector<double> utilities;
  PowerProfile profile_a;
  PowerProfile profile_b;
  double tau = 1.0;          // fraction of time spent on profile_a
  double nash_product = 0.0;
  bool empty_improvement = false;  // NE already Pareto-optimal on the sample
  bool approximate = false;        // region was sampled at random
};

/// Nash product prod_i (u_i - u_i^NE) at u, or 0 if u is outside the
/// improvement region.
double nash_product(const std::vector<double>& u, const std::vector<double>& ne);

/// Maximizes the Nash product over the Pareto boundary of a convexified region.
NBResult solve_nb(const UtilityRegion& region, const std::vector<double>& ne_utilities);

/// CSV rows "kind,index,p_1..p_N,u_1..u_N,pareto" for every sampled point.
void write_region_csv(std::ostream& out, const UtilityRegion& region);

}  // namespace xlpc
