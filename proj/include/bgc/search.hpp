#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bgc/parallel.hpp"
#include "bgc/spaces.hpp"
#include "bgc/vector.hpp"

namespace bgc {

/// A real function of a vector pair, maximised by the engines below.
///
/// `convex` declares that on B_X x B_X the objective agrees on S_X x S_X with
/// a jointly convex function (or an increasing image of one), so its
/// supremum over sphere pairs is attained at a pair of extreme points.
/// A NaN return marks a guarded point; engines skip it.
struct Objective {
  std::function<double(std::span<const double>, std::span<const double>)> eval;
  bool convex = false;
  std::string name;
};

enum class Engine { Grid2D, MultiStart, VertexExact };
enum class Sense { Sup, Inf };

inline std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::Grid2D: return "grid2d";
    case Engine::MultiStart: return "multistart";
    case Engine::VertexExact: return "exact";
  }
  return "?";
}

/// Result of a supremum (or infimum) search.
///
/// For non-exact engines `value` is attained at the witness, hence a lower
/// bound of the true supremum (an upper bound when sense == Inf).
struct Estimate {
  double value = std::numeric_limits<double>::quiet_NaN();
  Vector first;
  Vector second;
  Engine strategy = Engine::Grid2D;
  bool exact = false;
  std::int64_t evaluations = 0;
  Sense sense = Sense::Sup;
  std::map<std::string, double> metadata;
  std::map<std::string, std::string> notes;
};

enum class StrategyKind { Auto, Exact, Grid2D, MultiStart };

/// Strategy selection plus engine parameters.
struct Strategy {
  StrategyKind kind = StrategyKind::Auto;
  int resolution = 1024;
  int refine = 40;
  int starts = 128;
  int steps = 400;
  std::uint64_t seed = 7;

  static Strategy exact() { return {StrategyKind::Exact}; }
  static Strategy grid2d(int res = 1024, int refine_iters = 40) {
    Strategy s{StrategyKind::Grid2D};
    s.resolution = res;
    s.refine = refine_iters;
    return s;
  }
  static Strategy multistart(int starts = 128, int steps = 400, std::uint64_t seed = 7) {
    Strategy s{StrategyKind::MultiStart};
    s.starts = starts;
    s.steps = steps;
    s.seed = seed;
    return s;
  }

  /// `exact`, `auto`, `grid2d:res=1024,refine=40`, `multistart:starts=128,steps=400,seed=7`.
  static Strategy parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    Strategy s;
    if (head == "exact") {
      s.kind = StrategyKind::Exact;
    } else if (head == "auto") {
      s.kind = StrategyKind::Auto;
    } else if (head == "grid2d") {
      s.kind = StrategyKind::Grid2D;
    } else if (head == "multistart") {
      s.kind = StrategyKind::MultiStart;
    } else {
      throw std::invalid_argument("unknown strategy '" + std::string(head) + "'");
    }
    if (colon == std::string_view::npos) return s;
    for (auto part : detail::split_top(text.substr(colon + 1), ',')) {
      part = detail::trim(part);
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("invalid strategy option '" + std::string(part) + "'");
      }
      const std::string_view key = part.substr(0, eq);
      const double v = detail::parse_double(part.substr(eq + 1), key);
      if (v != std::floor(v) || v < 0 || v > 1e12) {
        throw std::invalid_argument("strategy option '" + std::string(key) + "' must be a non-negative integer");
      }
      auto set = [&](StrategyKind owner, int& field) {
        if (s.kind != owner) throw std::invalid_argument("strategy option '" + std::string(key) + "' not valid for " + std::string(head));
        field = static_cast<int>(v);
      };
      if (key == "res") {
        set(StrategyKind::Grid2D, s.resolution);
      } else if (key == "refine") {
        set(StrategyKind::Grid2D, s.refine);
      } else if (key == "starts") {
        set(StrategyKind::MultiStart, s.starts);
      } else if (key == "steps") {
        set(StrategyKind::MultiStart, s.steps);
      } else if (key == "seed" && s.kind == StrategyKind::MultiStart) {
        s.seed = static_cast<std::uint64_t>(v);
      } else {
        throw std::invalid_argument("unknown strategy option '" + std::string(key) + "'");
      }
    }
    return s;
  }

  [[nodiscard]] std::string to_string() const {
    switch (kind) {
      case StrategyKind::Auto: return "auto";
      case StrategyKind::Exact: return "exact";
      case StrategyKind::Grid2D:
        return "grid2d:res=" + std::to_string(resolution) + ",refine=" + std::to_string(refine);
      case StrategyKind::MultiStart:
        return "multistart:starts=" + std::to_string(starts) + ",steps=" + std::to_string(steps) +
               ",seed=" + std::to_string(seed);
    }
    return "?";
  }
};

namespace detail {

/// Best point found so far, with a total order: larger value first, then the
/// lexicographically smaller witness (first then second). Order-independent reduction.
struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> a;
  std::vector<double> b;
  bool valid = false;
};

inline bool lex_less(std::span<const double> a1, std::span<const double> b1, std::span<const double> a2,
                     std::span<const double> b2) {
  for (std::size_t i = 0; i < a1.size(); ++i) {
    if (a1[i] != a2[i]) return a1[i] < a2[i];
  }
  for (std::size_t i = 0; i < b1.size(); ++i) {
    if (b1[i] != b2[i]) return b1[i] < b2[i];
  }
  return false;
}

/// True when (value, a, b) should replace c.
inline bool improves(const Candidate& c, double value, std::span<const double> a, std::span<const double> b) {
  if (!std::isfinite(value)) return false;
  if (!c.valid || value > c.value) return true;
  return value == c.value && lex_less(a, b, c.a, c.b);
}

inline void offer(Candidate& c, double value, std::span<const double> a, std::span<const double> b) {
  if (!improves(c, value, a, b)) return;
  c.value = value;
  c.a.assign(a.begin(), a.end());
  c.b.assign(b.begin(), b.end());
  c.valid = true;
}

inline void merge(Candidate& into, const Candidate& other) {
  if (other.valid) offer(into, other.value, other.a, other.b);
}

inline Estimate to_estimate(const Candidate& c, Engine engine, std::int64_t evals) {
  if (!c.valid) throw std::runtime_error("objective produced no finite value on the search domain");
  Estimate e;
  e.value = c.value;
  e.first = Vector(c.a);
  e.second = Vector(c.b);
  e.strategy = engine;
  e.exact = engine == Engine::VertexExact;
  e.evaluations = evals;
  return e;
}

inline constexpr double kInvPhi = 0.6180339887498948482;

/// Golden-section maximisation of g on [lo, hi]; returns the best evaluated point.
template <class G>
std::pair<double, double> golden_max(G&& g, double lo, double hi, int iters, std::int64_t& evals) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = g(x1);
  double f2 = g(x2);
  evals += 2;
  double best_x = x1;
  double best_f = f1;
  auto note = [&](double x, double f) {
    if (std::isfinite(f) && (!std::isfinite(best_f) || f > best_f)) {
      best_x = x;
      best_f = f;
    }
  };
  note(x2, f2);
  for (int i = 0; i < iters; ++i) {
    // NaN compares false, so a guarded point is treated as lower.
    if (f1 >= f2 || std::isnan(f2)) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = g(x1);
      note(x1, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = g(x2);
      note(x2, f2);
    }
    ++evals;
  }
  return {best_x, best_f};
}

inline constexpr int kGoldenIters = 32;
inline constexpr int kBallRadii = 4;

inline std::array<double, 2> unit_at(const NormedSpace& space, double theta) {
  const std::array<double, 2> dir{std::cos(theta), std::sin(theta)};
  const double n = space.norm(dir);
  return {dir[0] / n, dir[1] / n};
}

/// splitmix64; used to derive independent per-start seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform and Gaussian draws defined bit-for-bit on top of mt19937_64,
/// independent of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double gaussian() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline void random_point(const NormedSpace& space, Region region, Rng& rng, std::span<double> out) {
  double nrm = 0.0;
  while (!(nrm > 1e-12)) {
    for (double& c : out) c = rng.gaussian();
    nrm = space.norm(out);
  }
  double scale = 1.0 / nrm;
  if (region == Region::Ball) scale *= std::pow(rng.uniform(), 1.0 / static_cast<double>(out.size()));
  for (double& c : out) c *= scale;
}

/// Maps v back into the region; false when v collapsed to zero on the sphere.
inline bool project(const NormedSpace& space, Region region, std::span<double> v) {
  const double n = space.norm(v);
  if (region == Region::Sphere) {
    if (!(n > 1e-300)) return false;
    for (double& c : v) c /= n;
  } else if (n > 1.0) {
    for (double& c : v) c /= n;
  }
  return true;
}

}  // namespace detail

/// Exhaustive angular grid over pairs in R^2 followed by coordinate-wise
/// golden-section ascent around the best grid cell.
///
/// Sphere: grid points are unit(cos t, sin t) for t = 2 pi k / resolution.
/// Ball: the origin plus radii 1/4..1 on a grid of resolution/4 angles; the
/// refinement then also moves the radii.
inline Estimate sup_pairs_2d(const NormedSpace& space, const Objective& f, Region region, int resolution,
                             int refine_iters) {
  if (space.dim() != 2) throw std::invalid_argument("grid2d strategy requires a 2-dimensional space");
  if (resolution < 8) throw std::invalid_argument("grid2d resolution must be at least 8");
  if (refine_iters < 0) throw std::invalid_argument("refine iterations must be non-negative");

  const int angles = region == Region::Sphere ? resolution : std::max(8, resolution / 4);
  const double dtheta = 2.0 * std::numbers::pi / angles;
  struct GridPoint {
    std::array<double, 2> v;
    double theta;
    double radius;
  };
  std::vector<GridPoint> pts;
  if (region == Region::Ball) pts.push_back({{0.0, 0.0}, 0.0, 0.0});
  const int radii = region == Region::Sphere ? 1 : detail::kBallRadii;
  for (int r = 1; r <= radii; ++r) {
    const double rad = static_cast<double>(r) / radii;
    for (int k = 0; k < angles; ++k) {
      const double th = dtheta * k;
      auto u = detail::unit_at(space, th);
      pts.push_back({{rad * u[0], rad * u[1]}, th, rad});
    }
  }

  const std::size_t n = pts.size();
  std::vector<detail::Candidate> rows(n);
  std::vector<std::size_t> row_j(n, 0);
  parallel::for_each_index(n, [&](std::size_t i) {
    detail::Candidate& best = rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f.eval(pts[i].v, pts[j].v);
      if (detail::improves(best, v, pts[i].v, pts[j].v)) {
        detail::offer(best, v, pts[i].v, pts[j].v);
        row_j[i] = j;
      }
    }
  });
  detail::Candidate best;
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].valid && detail::improves(best, rows[i].value, rows[i].a, rows[i].b)) {
      detail::merge(best, rows[i]);
      bi = i;
      bj = row_j[i];
    }
  }
  std::int64_t evals = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n);
  if (!best.valid) return detail::to_estimate(best, Engine::Grid2D, evals);

  // Refinement coordinates: (theta1, theta2) or (theta1, r1, theta2, r2).
  std::vector<double> cur;
  std::vector<double> width;
  if (region == Region::Sphere) {
    cur = {pts[bi].theta, pts[bj].theta};
    width = {dtheta, dtheta};
  } else {
    cur = {pts[bi].theta, pts[bi].radius, pts[bj].theta, pts[bj].radius};
    const double dr = 1.0 / radii;
    width = {dtheta, dr, dtheta, dr};
  }
  std::vector<std::array<double, 2>> vecs(2);
  auto build = [&](const std::vector<double>& c) {
    if (region == Region::Sphere) {
      vecs[0] = detail::unit_at(space, c[0]);
      vecs[1] = detail::unit_at(space, c[1]);
    } else {
      auto u = detail::unit_at(space, c[0]);
      auto w = detail::unit_at(space, c[2]);
      vecs[0] = {c[1] * u[0], c[1] * u[1]};
      vecs[1] = {c[3] * w[0], c[3] * w[1]};
    }
  };
  auto value_at = [&](const std::vector<double>& c) {
    build(c);
    return f.eval(vecs[0], vecs[1]);
  };
  auto is_radius = [&](std::size_t k) { return region == Region::Ball && (k % 2 == 1); };

  for (int round = 0; round < refine_iters; ++round) {
    bool improved = false;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      double lo = cur[k] - width[k];
      double hi = cur[k] + width[k];
      if (is_radius(k)) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
      }
      std::vector<double> trial = cur;
      auto g = [&](double x) {
        trial[k] = x;
        return value_at(trial);
      };
      auto [x, val] = detail::golden_max(g, lo, hi, detail::kGoldenIters, evals);
      // Radius 1 sits on the boundary; golden section only sees the interior.
      if (is_radius(k)) {
        const double at_one = g(1.0);
        ++evals;
        if (std::isfinite(at_one) && (!std::isfinite(val) || at_one > val)) {
          x = 1.0;
          val = at_one;
        }
      }
      trial[k] = x;
      build(trial);
      if (detail::improves(best, val, vecs[0], vecs[1]) && val > best.value) {
        detail::offer(best, val, vecs[0], vecs[1]);
        cur = trial;
        improved = true;
      }
    }
    if (!improved) {
      for (double& w : width) w *= 0.5;
    }
  }
  return detail::to_estimate(best, Engine::Grid2D, evals);
}

/// Multi-start pattern ascent in any dimension.
///
/// Start i draws its initial pair from an RNG seeded by (seed, i), so the
/// start set for N starts is a prefix of the set for 2N starts. Each step
/// tries +-h on every coordinate of (x1, x2), re-projecting onto the region;
/// h halves when a full sweep fails to improve.
inline Estimate sup_pairs_nd(const NormedSpace& space, const Objective& f, Region region, int starts, int steps,
                             std::uint64_t seed) {
  if (starts < 1) throw std::invalid_argument("multistart needs at least one start");
  if (steps < 1) throw std::invalid_argument("multistart needs at least one step");
  const std::size_t n = space.dim();
  std::vector<detail::Candidate> results(static_cast<std::size_t>(starts));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(starts), 0);

  parallel::for_each_index(results.size(), [&](std::size_t s) {
    detail::Rng rng(detail::mix64(seed ^ detail::mix64(static_cast<std::uint64_t>(s) + 1)));
    std::vector<double> x(2 * n);
    std::span<double> x1(x.data(), n);
    std::span<double> x2(x.data() + n, n);
    detail::random_point(space, region, rng, x1);
    detail::random_point(space, region, rng, x2);
    double cur = f.eval(x1, x2);
    std::int64_t evals = 1;
    if (!std::isfinite(cur)) cur = -std::numeric_limits<double>::infinity();

    std::vector<double> trial(2 * n);
    double h = 0.5;
    for (int step = 0; step < steps && h > 1e-15; ++step) {
      bool improved = false;
      for (std::size_t c = 0; c < 2 * n; ++c) {
        for (double sign : {1.0, -1.0}) {
          trial = x;
          trial[c] += sign * h;
          std::span<double> half(trial.data() + (c < n ? 0 : n), n);
          if (!detail::project(space, region, half)) continue;
          const double v = f.eval(std::span<const double>(trial.data(), n),
                                  std::span<const double>(trial.data() + n, n));
          ++evals;
          if (std::isfinite(v) && v > cur) {
            cur = v;
            x = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    counts[s] = evals;
    if (std::isfinite(cur)) detail::offer(results[s], cur, x1, x2);
  });

  detail::Candidate best;
  std::int64_t evals = 0;
  for (std::size_t s = 0; s < results.size(); ++s) {
    detail::merge(best, results[s]);
    evals += counts[s];
  }
  return detail::to_estimate(best, Engine::MultiStart, evals);
}

inline constexpr std::size_t kMaxVertexPairs = 50'000'000;

/// Exact maximum of a convex objective over all ordered extreme-point pairs.
inline Estimate sup_vertex_pairs(const NormedSpace& space, const Objective& f) {
  if (!f.convex) {
    throw std::invalid_argument("exact strategy requires a convex objective" +
                                (f.name.empty() ? std::string() : " ('" + f.name + "' is not)"));
  }
  const std::vector<Vector> ext = extreme_points(space);
  const std::size_t n = ext.size();
  if (n * n > kMaxVertexPairs) throw std::invalid_argument("too many extreme-point pairs to enumerate");
  std::vector<detail::Candidate> rows(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      detail::offer(rows[i], f.eval(ext[i].coords(), ext[j].coords()), ext[i].coords(), ext[j].coords());
    }
  });
  detail::Candidate best;
  for (const auto& r : rows) detail::merge(best, r);
  return detail::to_estimate(best, Engine::VertexExact, static_cast<std::int64_t>(n * n));
}

struct SweepResult {
  double t_star = 0.0;
  double value = 0.0;
  std::int64_t evaluations = 0;
};

/// Grid scan of g on [lo, hi] plus golden-section refinement around the best
/// grid point. Ties go to the smallest t. The value is attained, so it is a
/// lower bound of sup g.
template <class G>
SweepResult t_sweep(G&& g, double lo, double hi, int grid, int refine_iters) {
  if (!(lo <= hi)) throw std::invalid_argument("t_sweep needs lo <= hi");
  if (grid < 3) throw std::invalid_argument("t_sweep grid must have at least 3 points");
  auto checked = [&](double t) {
    const double v = g(t);
    if (!std::isfinite(v)) throw std::domain_error("t_sweep objective is not finite at t = " + detail::format_number(t));
    return v;
  };
  SweepResult r;
  std::size_t best_k = 0;
  const double step = (hi - lo) / (grid - 1);
  for (int k = 0; k < grid; ++k) {
    const double t = (k == grid - 1) ? hi : lo + step * k;
    const double v = checked(t);
    ++r.evaluations;
    if (k == 0 || v > r.value) {
      r.value = v;
      r.t_star = t;
      best_k = static_cast<std::size_t>(k);
    }
  }
  if (refine_iters > 0 && hi > lo) {
    const double a = best_k == 0 ? lo : lo + step * (static_cast<double>(best_k) - 1);
    const double b = std::min(hi, lo + step * (static_cast<double>(best_k) + 1));
    auto [t, v] = detail::golden_max(checked, a, b, refine_iters, r.evaluations);
    if (v > r.value) {
      r.value = v;
      r.t_star = t;
    }
  }
  return r;
}

/// Maximises f over the region with the requested strategy.
/// Auto picks exact enumeration for convex objectives on polyhedral spaces,
/// the 2D grid in the plane, and multi-start otherwise.
inline Estimate maximize(const NormedSpace& space, const Objective& f, Region region, const Strategy& s) {
  switch (s.kind) {
    case StrategyKind::Exact:
      return sup_vertex_pairs(space, f);
    case StrategyKind::Grid2D:
      return sup_pairs_2d(space, f, region, s.resolution, s.refine);
    case StrategyKind::MultiStart:
      return sup_pairs_nd(space, f, region, s.starts, s.steps, s.seed);
    case StrategyKind::Auto:
      break;
  }
  if (f.convex && space.is_polyhedral() && (space.dim() <= kMaxCubeDim)) return sup_vertex_pairs(space, f);
  if (space.dim() == 2) return sup_pairs_2d(space, f, region, s.resolution, s.refine);
  return sup_pairs_nd(space, f, region, s.starts, s.steps, s.seed);
}

/// Infimum through the same engines: maximise -f and flip the sign back.
inline Estimate minimize(const NormedSpace& space, const Objective& f, Region region, const Strategy& s) {
  Objective neg{[&f](std::span<const double> a, std::span<const double> b) { return -f.eval(a, b); }, false,
                f.name};
  Strategy effective = s;
  if (effective.kind == StrategyKind::Exact) throw std::invalid_argument("exact strategy cannot compute an infimum");
  Estimate e = maximize(space, neg, region, effective);
  e.value = -e.value;
  e.sense = Sense::Inf;
  return e;
}

}  // namespace bgc
