#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "bgc/constants.hpp"
#include "bgc/orthogonality.hpp"
#include "bgc/parallel.hpp"
#include "bgc/search.hpp"
#include "bgc/spaces.hpp"

namespace bgc::verify {

enum class Profile { Fast, Thorough };

inline std::string_view to_string(Profile p) { return p == Profile::Fast ? "fast" : "thorough"; }

inline Profile parse_profile(std::string_view text) {
  if (text == "fast") return Profile::Fast;
  if (text == "thorough") return Profile::Thorough;
  throw std::invalid_argument("unknown profile '" + std::string(text) + "'");
}

using Params = std::map<std::string, double>;

struct CheckResult {
  std::string check_id;
  std::string space;
  Params params;
  std::map<std::string, double> values;
  std::map<std::string, std::string> notes;
  bool passed = false;
  double slack_declared = 0.0;
  double slack_used = 0.0;
  std::int64_t runtime_ms = 0;
};

struct SuiteReport {
  std::uint64_t seed = 7;
  Profile profile = Profile::Fast;
  std::vector<std::string> spaces;
  std::vector<CheckResult> checks;
  std::size_t passed = 0;
  std::size_t failed = 0;
};

/// Tolerance of an estimate compared against a closed form or another estimate.
inline constexpr double kExactSlack = 1e-6;
inline constexpr double kSampledSlack = 1e-3;
/// Floating-point allowance on sides that are safe under lower-bound estimation.
inline constexpr double kRoundingSlack = 1e-9;
/// Monotonicity / convexity slack on parameter grids.
inline constexpr double kShapeSlack = 1e-6;

inline const std::vector<double> kAlphaGrid{0.0, 0.1, 0.25, 0.4, 0.5};
inline const std::vector<double> kPGrid{1.0, 2.0, 3.0};
inline const std::vector<double> kQGrid{2.0, 4.0};

inline double tolerance(const Estimate& e) {
  return e.strategy == Engine::VertexExact ? kExactSlack : kSampledSlack;
}

struct Settings {
  Strategy strategy;
  int t_grid = 101;
  int t_grid_smooth = 101;
  int t_refine = 30;
  int lemma_samples = 10000;
  int psi_samples = 200;
};

inline Settings settings_for(Profile profile, std::uint64_t seed) {
  Settings s;
  if (profile == Profile::Fast) {
    s.strategy.resolution = 256;
    s.strategy.refine = 30;
    s.strategy.starts = 32;
    s.strategy.steps = 200;
    s.t_grid = 41;
    s.t_grid_smooth = 21;
    s.t_refine = 20;
    s.lemma_samples = 2000;
    s.psi_samples = 50;
  } else {
    s.strategy.resolution = 1024;
    s.strategy.refine = 40;
    s.strategy.starts = 128;
    s.strategy.steps = 400;
  }
  s.strategy.seed = seed;
  return s;
}

/// Shared state of a verification run: settings plus a memo of estimates,
/// so that checks sharing a constant do not recompute it.
class Context {
 public:
  Context(Profile profile, std::uint64_t seed) : profile_(profile), seed_(seed), settings_(settings_for(profile, seed)) {}

  [[nodiscard]] Profile profile() const noexcept { return profile_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const Settings& settings() const noexcept { return settings_; }
  [[nodiscard]] const Strategy& strategy() const noexcept { return settings_.strategy; }

  template <class Fn>
  Estimate memo(const NormedSpace& space, const std::string& key, Fn&& fn) {
    const std::string full = space.descriptor() + "|" + key;
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(full); it != cache_.end()) return it->second;
    }
    Estimate e = fn();
    std::lock_guard lock(mutex_);
    return cache_.try_emplace(full, std::move(e)).first->second;
  }

  Estimate cinj_iso(const NormedSpace& x, double alpha, double p) {
    return memo(x, "cinj_iso:" + num(alpha) + ":" + num(p), [&] { return bgc::cinj_iso(x, alpha, p, strategy()); });
  }
  Estimate cinj_via_gamma(const NormedSpace& x, double alpha, double p) {
    return memo(x, "cinj_via_gamma:" + num(alpha) + ":" + num(p),
                [&] { return bgc::cinj_via_gamma(x, alpha, p, strategy()); });
  }
  Estimate gamma_p(const NormedSpace& x, double p, double t) {
    return memo(x, "gamma_p:" + num(p) + ":" + num(t), [&] { return bgc::gamma_p(x, p, t, strategy()); });
  }
  Estimate gamma_yang(const NormedSpace& x, double t) {
    return memo(x, "gamma_yang:" + num(t), [&] { return bgc::gamma_yang(x, t, strategy()); });
  }
  Estimate james(const NormedSpace& x) {
    return memo(x, "james", [&] { return bgc::james(x, strategy()); });
  }
  Estimate schaffer(const NormedSpace& x) {
    return memo(x, "schaffer", [&] { return bgc::schaffer(x, strategy()); });
  }
  Estimate rho(const NormedSpace& x, double t) {
    return memo(x, "rho:" + num(t), [&] { return bgc::rho(x, t, strategy()); });
  }
  Estimate cnj_modified_p(const NormedSpace& x, double p) {
    return memo(x, "cnj_modified_p:" + num(p), [&] { return bgc::cnj_modified_p(x, p, strategy()); });
  }
  Estimate omega_prime(const NormedSpace& x) {
    return memo(x, "omega_prime", [&] { return bgc::omega_prime(x, strategy()); });
  }
  int t_grid(const NormedSpace& x) const { return x.is_smooth() ? settings_.t_grid_smooth : settings_.t_grid; }

 private:
  static std::string num(double v) { return bgc::detail::format_number(v); }

  Profile profile_;
  std::uint64_t seed_;
  Settings settings_;
  std::mutex mutex_;
  std::map<std::string, Estimate> cache_;
};

namespace detail {

inline double param(const Params& params, const std::string& check, const char* name) {
  auto it = params.find(name);
  if (it == params.end()) throw std::invalid_argument("check " + check + " requires parameter '" + name + "'");
  return it->second;
}

/// Accumulates the one- or two-sided comparisons of a check.
class Verdict {
 public:
  explicit Verdict(CheckResult& r) : r_(r) { r_.passed = true; }

  /// lhs <= rhs, allowing `slack`.
  void at_most(double lhs, double rhs, double slack) { record(std::max(0.0, lhs - rhs), slack); }
  /// |a - b| <= slack.
  void close(double a, double b, double slack) { record(std::abs(a - b), slack); }
  void holds(bool ok, double used = 0.0, double slack = 0.0) {
    r_.slack_declared = std::max(r_.slack_declared, slack);
    r_.slack_used = std::max(r_.slack_used, used);
    if (!ok) r_.passed = false;
  }

 private:
  void record(double used, double slack) {
    if (!(used <= slack)) r_.passed = false;  // NaN fails
    r_.slack_used = std::max(r_.slack_used, std::isnan(used) ? std::numeric_limits<double>::infinity() : used);
    r_.slack_declared = std::max(r_.slack_declared, slack);
  }
  CheckResult& r_;
};

inline bool is_lp_kind(const NormedSpace& x) { return !std::holds_alternative<PolygonNorm>(x.kind()); }

inline bool exponent_is(const NormedSpace& x, double q) {
  return is_lp_kind(x) && !x.exponent().is_infinite() && x.exponent().value() == q;
}

inline bool exponent_infinite(const NormedSpace& x) { return is_lp_kind(x) && x.exponent().is_infinite(); }

inline std::uint64_t seed_for(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : tag) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return bgc::detail::mix64(seed ^ h);
}

inline double pw(double x, double p) { return bgc::detail::power(x, p); }

// ---------------------------------------------------------------------------
// Checks. Each takes (space, params, context, result) and fills values and
// the verdict.

using CheckFn = std::function<void(const NormedSpace&, const Params&, Context&, CheckResult&)>;

inline void bounds_pp(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  const Estimate c = ctx.cinj_iso(x, a, p);
  const double lower = pw(1.0 - a, p) + pw(a, p);
  const double upper = 2.0 * pw(1.0 - a, p);
  r.values = {{"measured", c.value}, {"lower", lower}, {"upper", upper}};
  Verdict v(r);
  v.at_most(lower, c.value, tolerance(c));
  v.at_most(c.value, upper, kRoundingSlack);
}

inline void identity_cr(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  const Estimate direct = ctx.cinj_iso(x, a, p);
  const Estimate via = ctx.cinj_via_gamma(x, a, p);
  r.values = {{"cinj_iso", direct.value}, {"half_gamma", via.value}, {"difference", direct.value - via.value}};
  Verdict(r).close(direct.value, via.value, tolerance(direct) + tolerance(via));
}

inline void equivalence_t(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  const int grid = ctx.t_grid(x);
  const int refine = ctx.settings().t_refine;
  const Estimate a = ctx.memo(x, "cnj_p:" + bgc::detail::format_number(p) + ":" + std::to_string(grid),
                              [&] { return cnj_p(x, p, ctx.strategy(), grid, refine); });
  const Estimate b = ctx.memo(x, "cnj_p_via_cinj:" + bgc::detail::format_number(p) + ":" + std::to_string(grid),
                              [&] { return cnj_p_via_cinj(x, p, ctx.strategy(), grid, refine); });
  r.values = {{"cnj_p", a.value}, {"via_cinj", b.value}, {"t_star", a.metadata.at("t_star")}};
  Verdict(r).close(a.value, b.value, tolerance(a) + tolerance(b));
}

inline void alpha_monotone_convex(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  constexpr int kPoints = 21;
  std::vector<double> c(kPoints);
  for (int k = 0; k < kPoints; ++k) c[k] = ctx.cinj_via_gamma(x, 0.5 * k / (kPoints - 1), p).value;
  Verdict v(r);
  double worst_mono = 0.0;
  double worst_increase = 0.0;
  double worst_convex = 0.0;
  for (int k = 0; k + 1 < kPoints; ++k) {
    worst_mono = std::max(worst_mono, c[k] - c[k + 1]);
    worst_increase = std::max(worst_increase, c[k + 1] - c[k]);
    v.at_most(c[k], c[k + 1], kShapeSlack);
  }
  for (int k = 1; k + 1 < kPoints; ++k) {
    worst_convex = std::max(worst_convex, c[k] - 0.5 * (c[k - 1] + c[k + 1]));
    v.at_most(c[k], 0.5 * (c[k - 1] + c[k + 1]), kShapeSlack);
  }
  r.values = {{"points", kPoints}, {"c_at_0", c.front()}, {"c_at_half", c.back()},
              {"max_decrease", worst_mono}, {"max_increase", worst_increase}, {"max_convexity_excess", worst_convex}};
}

inline void gamma_monotone_t(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  constexpr int kPoints = 21;
  std::vector<double> g(kPoints);
  for (int k = 0; k < kPoints; ++k) g[k] = ctx.gamma_p(x, p, static_cast<double>(k) / (kPoints - 1)).value;
  Verdict v(r);
  double worst = 0.0;
  for (int k = 0; k + 1 < kPoints; ++k) {
    worst = std::max(worst, g[k] - g[k + 1]);
    v.at_most(g[k], g[k + 1], kShapeSlack);
  }
  r.values = {{"points", kPoints}, {"gamma_at_0", g.front()}, {"gamma_at_1", g.back()}, {"max_decrease", worst}};
}

inline void sphere_ball_equal(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  const double t = param(pr, r.check_id, "t");
  const Estimate sphere = ctx.gamma_p(x, p, t);
  const Estimate ball = ctx.memo(x, "gamma_p_ball:" + bgc::detail::format_number(p) + ":" + bgc::detail::format_number(t),
                                 [&] { return maximize(x, objectives::gamma_p(x, p, t), Region::Ball, ctx.strategy()); });
  r.values = {{"sphere", sphere.value}, {"ball", ball.value}};
  Verdict(r).close(sphere.value, ball.value, tolerance(sphere) + tolerance(ball));
}

inline void pq_ordering(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  const double q = param(pr, r.check_id, "q");
  if (!(p <= q)) throw std::invalid_argument("pq_ordering needs p <= q");
  const Estimate cp = ctx.cinj_via_gamma(x, a, p);
  const Estimate cq = ctx.cinj_via_gamma(x, a, q);
  const double upper = std::pow(2.0, 1.0 - p / q) * std::pow(cq.value, p / q);
  r.values = {{"c_p", cp.value}, {"c_q", cq.value}, {"upper", upper}};
  Verdict v(r);
  v.at_most(cq.value, cp.value, tolerance(cp));
  v.at_most(cp.value, upper, tolerance(cq));
}

inline void rho_sandwich(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  const Estimate c = ctx.cinj_iso(x, a, p);
  const Estimate rho = ctx.rho(x, 1.0 - 2.0 * a);
  const Estimate tilde = ctx.cnj_modified_p(x, p);
  const double lower = std::pow(2.0, 1.0 - p) * pw(rho.value + 1.0, p);
  r.values = {{"lower", lower}, {"measured", c.value}, {"upper", tilde.value}, {"rho", rho.value}};
  r.notes["upper"] = "cnj_modified_p, inferred definition";
  Verdict v(r);
  v.at_most(lower, c.value, tolerance(c));
  v.at_most(c.value, tilde.value, tolerance(tilde));
}

inline void james_sandwich(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  const Estimate c = ctx.cinj_iso(x, a, p);
  const Estimate j = ctx.james(x);
  const double lower = pw(j.value - 2.0 * a, p) / std::pow(2.0, p - 1.0);
  const double upper = (std::pow(2.0, p) * pw(a, p) + std::pow(2.0, 2.0 * p) * pw(1.0 - 2.0 * a, p)) / pw(j.value, p);
  r.values = {{"lower", lower}, {"measured", c.value}, {"upper", upper}, {"james", j.value}};
  Verdict v(r);
  // J is a lower-bound estimate: the left side grows with J and the right side shrinks.
  v.at_most(lower, c.value, tolerance(c) + tolerance(j));
  v.at_most(c.value, upper, tolerance(j));
}

inline void js_identity(const NormedSpace& x, const Params&, Context& ctx, CheckResult& r) {
  const Estimate j = ctx.james(x);
  const Estimate s = ctx.schaffer(x);
  r.values = {{"james", j.value}, {"schaffer", s.value}, {"product", j.value * s.value},
              {"james_isosceles_form", j.metadata.at("isosceles_form")}};
  Verdict v(r);
  v.close(j.value * s.value, 2.0, 2.0 * (tolerance(j) + tolerance(s)));
}

inline void omega_identity(const NormedSpace& x, const Params&, Context& ctx, CheckResult& r) {
  const Estimate o = ctx.omega_prime(x);
  const double rhs = o.metadata.at("nine_tenths_gamma_third");
  r.values = {{"omega_prime", o.value}, {"nine_tenths_gamma_third", rhs}};
  Verdict(r).close(o.value, rhs, 2.0 * tolerance(o));
}

/// Both sandwiches on randomly generated isosceles pairs, with relative tolerance 1e-9.
inline void lemma_ll_bounds(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const int samples = pr.contains("samples") ? static_cast<int>(pr.at("samples")) : ctx.settings().lemma_samples;
  bgc::detail::Rng rng(seed_for(ctx.seed(), "lemma_ll_bounds"));
  const std::size_t n = x.dim();
  std::vector<double> u1(n);
  std::vector<double> u2(n);
  std::vector<double> x1(n);
  std::vector<double> x2(n);
  constexpr double kTol = 1e-9;
  std::int64_t violations = 0;
  double worst = 0.0;
  auto check = [&](double lo, double mid, double hi, double scale) {
    const double excess = std::max(lo - mid, mid - hi) / std::max(scale, 1.0);
    worst = std::max(worst, excess);
    if (excess > kTol) ++violations;
  };
  for (int s = 0; s < samples; ++s) {
    bgc::detail::random_point(x, Region::Sphere, rng, u1);
    bgc::detail::random_point(x, Region::Sphere, rng, u2);
    combine(1.0, u1, 1.0, u2, x1);
    combine(1.0, u1, -1.0, u2, x2);
    const double plus = norm_of(x, 1.0, x1, 1.0, x2);
    const double minus = norm_of(x, 1.0, x1, -1.0, x2);
    const double small = 2.0 * rng.uniform() - 1.0;
    const double big = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + 3.0 * rng.uniform());
    const double at_small = norm_of(x, 1.0, x1, small, x2);
    const double at_big = norm_of(x, 1.0, x1, big, x2);
    for (double side : {plus, minus}) {
      check(std::abs(small) * side, at_small, side, side);
      check(side, at_big, std::abs(big) * side, std::abs(big) * side);
    }
  }
  r.values = {{"samples", samples}, {"violations", static_cast<double>(violations)}, {"max_relative_excess", worst}};
  Verdict(r).holds(violations == 0, worst, kTol);
}

inline void example_closed_form(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r, double expected) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  const Estimate c = ctx.cinj_iso(x, a, p);
  r.values = {{"measured", c.value}, {"expected", expected}};
  Verdict v(r);
  v.at_most(expected, c.value, tolerance(c));
  v.at_most(c.value, expected, kRoundingSlack);
}

inline void example_l1(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  example_closed_form(x, pr, ctx, r, 2.0 * pw(1.0 - param(pr, r.check_id, "alpha"), param(pr, r.check_id, "p")));
}

inline void example_lp(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  example_closed_form(x, pr, ctx, r, pw(1.0 - a, p) + pw(a, p));
}

inline void example_cnj_p(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  const int grid = ctx.t_grid(x);
  const Estimate c = ctx.memo(x, "cnj_p:" + bgc::detail::format_number(p) + ":" + std::to_string(grid),
                              [&] { return cnj_p(x, p, ctx.strategy(), grid, ctx.settings().t_refine); });
  r.values = {{"measured", c.value}, {"expected", 2.0}};
  Verdict(r).close(c.value, 2.0, tolerance(c));
}

inline void remark_alpha_half(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  const Estimate c = ctx.cinj_iso(x, 0.5, p);
  const double expected = std::pow(2.0, 1.0 - p);
  r.values = {{"measured", c.value}, {"expected", expected}};
  Verdict(r).close(c.value, expected, tolerance(c));
}

inline void remark_gamma_zero(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  const Estimate g = ctx.gamma_p(x, p, 0.0);
  const double expected = std::pow(2.0, 2.0 - p);
  r.values = {{"measured", g.value}, {"expected", expected}};
  Verdict(r).close(g.value, expected, tolerance(g));
}

inline double dichotomy_margin(double alpha) { return std::min(0.1, 0.25 * (1.0 - 2.0 * alpha)); }

inline void nonsquare_dichotomy(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double a = param(pr, r.check_id, "alpha");
  const double p = param(pr, r.check_id, "p");
  const Estimate c = ctx.cinj_iso(x, a, p);
  const Estimate j = ctx.james(x);
  const double bound = 2.0 * pw(1.0 - a, p);
  const bool nonsquare = j.value < 2.0 - tolerance(j);
  r.values = {{"measured", c.value}, {"bound", bound}, {"james", j.value}, {"uniformly_non_square", nonsquare ? 1.0 : 0.0}};
  Verdict v(r);
  if (!nonsquare || a == 0.5) {
    if (a == 0.5 && nonsquare) r.notes["alpha_half"] = "both sides of the dichotomy coincide at alpha = 1/2";
    v.close(c.value, bound, tolerance(c));
    return;
  }
  const double margin = dichotomy_margin(a);
  r.values["margin"] = margin;
  r.values["gap"] = bound - c.value;
  v.at_most(c.value, bound - margin, 0.0);
}

/// Finite-alpha proxy of the smoothness limit. Thresholds by space class:
/// smooth lp with q >= 2: strictly decreasing, final <= 0.01;
/// smooth lp with 1 < q < 2: strictly decreasing, final <= first / 2;
/// lp with q in {1, inf} at p = 1: every quotient >= 0.9;
/// other polygons: final >= 0.1 and final >= 0.9 * first.
inline void smoothness_limit(const NormedSpace& x, const Params&, Context& ctx, CheckResult& r) {
  const std::vector<double> alphas{0.45, 0.49, 0.499};
  const bool smooth = x.is_smooth();
  const bool cube_like = detail::exponent_is(x, 1.0) || detail::exponent_infinite(x);
  const double p = smooth ? 2.0 : 1.0;
  std::vector<double> qs;
  for (double a : alphas) {
    const double c = ctx.cinj_via_gamma(x, a, p).value;
    const double quotient = (std::pow(std::pow(2.0, p - 1.0) * c, 1.0 / p) - 1.0) / (1.0 - 2.0 * a);
    qs.push_back(quotient);
    char label[32];
    std::snprintf(label, sizeof label, "quotient@%g", a);
    r.values[label] = quotient;
  }
  r.params["p"] = p;
  Verdict v(r);
  if (smooth) {
    for (std::size_t k = 0; k + 1 < qs.size(); ++k) v.holds(qs[k + 1] < qs[k]);
    if (x.exponent().value() >= 2.0) {
      r.notes["threshold"] = "strictly decreasing, final <= 0.01";
      v.at_most(qs.back(), 0.01, 0.0);
    } else {
      r.notes["threshold"] = "strictly decreasing, final <= first/2";
      v.at_most(qs.back(), 0.5 * qs.front(), 0.0);
    }
  } else if (cube_like) {
    r.notes["threshold"] = "every quotient >= 0.9";
    for (double q : qs) v.at_most(0.9, q, 0.0);
  } else {
    r.notes["threshold"] = "final >= 0.1 and final >= 0.9 * first";
    v.at_most(0.1, qs.back(), 0.0);
    v.at_most(0.9 * qs.front(), qs.back(), 0.0);
  }
}

/// psi(r) = ||r x1 + t x2||^p + ||r x1 - t x2||^p on random sphere pairs:
/// evenness and midpoint convexity on r in [-2, 2].
inline void psi_even_convex(const NormedSpace& x, const Params& pr, Context& ctx, CheckResult& r) {
  const double p = param(pr, r.check_id, "p");
  const int samples = ctx.settings().psi_samples;
  bgc::detail::Rng rng(seed_for(ctx.seed(), "psi_even_convex"));
  const std::size_t n = x.dim();
  std::vector<double> u(n);
  std::vector<double> w(n);
  constexpr int kR = 41;
  constexpr double kTol = 1e-12;
  double worst_even = 0.0;
  double worst_convex = 0.0;
  for (int s = 0; s < samples; ++s) {
    bgc::detail::random_point(x, Region::Sphere, rng, u);
    bgc::detail::random_point(x, Region::Sphere, rng, w);
    for (double t : {0.0, 0.5, 1.0}) {
      auto psi = [&](double rr) { return pw(norm_of(x, rr, u, t, w), p) + pw(norm_of(x, rr, u, -t, w), p); };
      std::vector<double> vals(kR);
      for (int k = 0; k < kR; ++k) vals[k] = psi(-2.0 + 4.0 * k / (kR - 1));
      for (int k = 0; k < kR; ++k) {
        const double scale = std::max(1.0, std::abs(vals[k]));
        worst_even = std::max(worst_even, std::abs(vals[k] - vals[kR - 1 - k]) / scale);
      }
      for (int k = 1; k + 1 < kR; ++k) {
        const double scale = std::max(1.0, std::abs(vals[k]));
        worst_convex = std::max(worst_convex, (vals[k] - 0.5 * (vals[k - 1] + vals[k + 1])) / scale);
      }
    }
  }
  r.values = {{"samples", samples}, {"max_even_defect", worst_even}, {"max_convexity_excess", worst_convex}};
  Verdict v(r);
  v.at_most(worst_even, 0.0, kTol);
  v.at_most(worst_convex, 0.0, kTol);
}

// ---------------------------------------------------------------------------
// Catalog.

struct CheckSpec {
  std::string id;
  std::function<bool(const NormedSpace&)> applies;
  std::function<std::vector<Params>(const NormedSpace&)> grid;
  CheckFn run;
};

inline std::vector<Params> alpha_p_grid(const NormedSpace&) {
  std::vector<Params> out;
  for (double a : kAlphaGrid) {
    for (double p : kPGrid) out.push_back({{"alpha", a}, {"p", p}});
  }
  return out;
}

inline std::vector<Params> p_grid(const NormedSpace&) {
  std::vector<Params> out;
  for (double p : kPGrid) out.push_back({{"p", p}});
  return out;
}

inline std::vector<Params> no_params(const NormedSpace&) { return {Params{}}; }

inline bool always(const NormedSpace&) { return true; }

inline const std::vector<CheckSpec>& catalog() {
  static const std::vector<CheckSpec> specs = [] {
    std::vector<CheckSpec> c;
    c.push_back({"alpha_monotone_convex", always, p_grid, alpha_monotone_convex});
    c.push_back({"bounds_pp", always, alpha_p_grid, bounds_pp});
    c.push_back({"equivalence_t", always, p_grid, equivalence_t});
    c.push_back({"example_cnj_p",
                 [](const NormedSpace& x) { return exponent_is(x, 1.0) || exponent_infinite(x); }, p_grid,
                 example_cnj_p});
    c.push_back({"example_l1", [](const NormedSpace& x) { return exponent_is(x, 1.0); }, alpha_p_grid, example_l1});
    c.push_back({"example_linf", exponent_infinite, alpha_p_grid, example_l1});
    c.push_back({"example_lp",
                 [](const NormedSpace& x) {
                   return is_lp_kind(x) && !x.exponent().is_infinite() && x.exponent().value() >= 2.0;
                 },
                 [](const NormedSpace& x) {
                   std::vector<Params> out;
                   for (double a : kAlphaGrid) out.push_back({{"alpha", a}, {"p", x.exponent().value()}});
                   return out;
                 },
                 example_lp});
    c.push_back({"gamma_monotone_t", always, p_grid, gamma_monotone_t});
    c.push_back({"identity_cr", always, alpha_p_grid, identity_cr});
    c.push_back({"james_sandwich", always, alpha_p_grid, james_sandwich});
    c.push_back({"js_identity", always, no_params, js_identity});
    c.push_back({"lemma_ll_bounds", always, no_params, lemma_ll_bounds});
    c.push_back({"nonsquare_dichotomy", always, alpha_p_grid, nonsquare_dichotomy});
    c.push_back({"omega_identity", always, no_params, omega_identity});
    c.push_back({"pq_ordering", always,
                 [](const NormedSpace&) {
                   std::vector<Params> out;
                   for (double a : kAlphaGrid) {
                     for (double p : kPGrid) {
                       for (double q : kQGrid) {
                         if (p <= q) out.push_back({{"alpha", a}, {"p", p}, {"q", q}});
                       }
                     }
                   }
                   return out;
                 },
                 pq_ordering});
    c.push_back({"psi_even_convex", always, p_grid, psi_even_convex});
    c.push_back({"remark_alpha_half", always, p_grid, remark_alpha_half});
    c.push_back({"remark_gamma_zero", always, p_grid, remark_gamma_zero});
    c.push_back({"rho_sandwich", always, alpha_p_grid, rho_sandwich});
    c.push_back({"smoothness_limit", always, no_params, smoothness_limit});
    c.push_back({"sphere_ball_equal", always,
                 [](const NormedSpace&) {
                   std::vector<Params> out;
                   for (double p : kPGrid) {
                     for (double t : {0.0, 0.5, 1.0}) out.push_back({{"p", p}, {"t", t}});
                   }
                   return out;
                 },
                 sphere_ball_equal});
    return c;
  }();
  return specs;
}

inline const CheckSpec& find_check(std::string_view id) {
  for (const auto& c : catalog()) {
    if (c.id == id) return c;
  }
  throw std::invalid_argument("unknown check '" + std::string(id) + "'");
}

}  // namespace detail

inline std::vector<std::string> check_ids() {
  std::vector<std::string> ids;
  for (const auto& c : detail::catalog()) ids.push_back(c.id);
  return ids;
}

/// Runs one catalog check. Throws for unknown ids, inapplicable spaces and
/// invalid parameters; a violated inequality is reported, not thrown.
inline CheckResult run_check(std::string_view check_id, const NormedSpace& space, const Params& params, Context& ctx) {
  const detail::CheckSpec& spec = detail::find_check(check_id);
  if (!spec.applies(space)) {
    throw std::invalid_argument("check " + spec.id + " does not apply to " + space.descriptor());
  }
  CheckResult r;
  r.check_id = spec.id;
  r.space = space.descriptor();
  r.params = params;
  const auto start = std::chrono::steady_clock::now();
  spec.run(space, params, ctx, r);
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline CheckResult run_check(std::string_view check_id, const NormedSpace& space, const Params& params,
                             Profile profile = Profile::Fast, std::uint64_t seed = 7) {
  Context ctx(profile, seed);
  return run_check(check_id, space, params, ctx);
}

inline bool result_less(const CheckResult& a, const CheckResult& b) {
  return std::tie(a.check_id, a.space, a.params) < std::tie(b.check_id, b.space, b.params);
}

/// Full catalog over the given spaces with the default parameter grids.
/// Individual failures, including exceptions inside a check, are recorded.
inline SuiteReport run_suite(const std::vector<NormedSpace>& spaces, std::uint64_t seed, Profile profile,
                             const std::vector<std::string>& only = {}) {
  if (spaces.empty()) throw std::invalid_argument("empty space list");
  for (const auto& id : only) (void)detail::find_check(id);

  struct Job {
    const detail::CheckSpec* spec;
    const NormedSpace* space;
    Params params;
  };
  std::vector<Job> jobs;
  for (const auto& spec : detail::catalog()) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.id) == only.end()) continue;
    for (const auto& x : spaces) {
      if (!spec.applies(x)) continue;
      for (auto& params : spec.grid(x)) jobs.push_back({&spec, &x, std::move(params)});
    }
  }

  Context ctx(profile, seed);
  std::vector<CheckResult> results(jobs.size());
  parallel::for_each_index(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    try {
      results[i] = run_check(job.spec->id, *job.space, job.params, ctx);
    } catch (const std::exception& e) {
      CheckResult r;
      r.check_id = job.spec->id;
      r.space = job.space->descriptor();
      r.params = job.params;
      r.passed = false;
      r.notes["error"] = e.what();
      results[i] = std::move(r);
    }
  });

  SuiteReport report;
  report.seed = seed;
  report.profile = profile;
  for (const auto& x : spaces) report.spaces.push_back(x.descriptor());
  std::sort(results.begin(), results.end(), result_less);
  report.checks = std::move(results);
  for (const auto& r : report.checks) (r.passed ? report.passed : report.failed) += 1;
  return report;
}

// ---------------------------------------------------------------------------
// Serialisation. Timings are excluded unless asked for, so that equal runs
// give byte-identical documents.

inline nlohmann::json to_json(const CheckResult& r, bool timings = false) {
  nlohmann::json j;
  j["check_id"] = r.check_id;
  j["space"] = r.space;
  j["params"] = r.params;
  j["values"] = r.values;
  j["passed"] = r.passed;
  j["slack_declared"] = r.slack_declared;
  j["slack_used"] = r.slack_used;
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (timings) j["runtime_ms"] = r.runtime_ms;
  return j;
}

inline nlohmann::json to_json(const SuiteReport& report, bool timings = false) {
  const Settings s = settings_for(report.profile, report.seed);
  nlohmann::json j;
  j["seed"] = report.seed;
  j["profile"] = std::string(to_string(report.profile));
  j["spaces"] = report.spaces;
  j["config"] = {
      {"alpha_grid", kAlphaGrid},
      {"p_grid", kPGrid},
      {"q_grid", kQGrid},
      {"grid2d", {{"resolution", s.strategy.resolution}, {"refine", s.strategy.refine}}},
      {"multistart", {{"starts", s.strategy.starts}, {"steps", s.strategy.steps}}},
      {"t_grid", s.t_grid},
      {"t_grid_smooth", s.t_grid_smooth},
      {"lemma_samples", s.lemma_samples},
      {"psi_samples", s.psi_samples},
      {"slack", {{"exact", kExactSlack}, {"sampled", kSampledSlack}, {"rounding", kRoundingSlack}, {"shape", kShapeSlack}}},
  };
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& r : report.checks) checks.push_back(to_json(r, timings));
  j["checks"] = std::move(checks);
  j["summary"] = {{"total", report.checks.size()}, {"passed", report.passed}, {"failed", report.failed}};
  return j;
}

}  // namespace bgc::verify
