#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <vector>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bgc/orthogonality.hpp"
#include "bgc/search.hpp"
#include "bgc/spaces.hpp"

namespace bgc {

enum class ConstantId {
  GammaP,
  CinjIso,
  CinjViaGamma,
  CnjP,
  CnjModifiedP,
  James,
  Schaffer,
  Rho,
  Jxp,
  NuP,
  OmegaPrime,
  SmoothnessQuotient,
};

inline constexpr std::array<std::pair<ConstantId, std::string_view>, 12> kConstantNames{{
    {ConstantId::GammaP, "gamma_p"},
    {ConstantId::CinjIso, "cinj_iso"},
    {ConstantId::CinjViaGamma, "cinj_via_gamma"},
    {ConstantId::CnjP, "cnj_p"},
    {ConstantId::CnjModifiedP, "cnj_modified_p"},
    {ConstantId::James, "james"},
    {ConstantId::Schaffer, "schaffer"},
    {ConstantId::Rho, "rho"},
    {ConstantId::Jxp, "jxp"},
    {ConstantId::NuP, "nu_p"},
    {ConstantId::OmegaPrime, "omega_prime"},
    {ConstantId::SmoothnessQuotient, "smoothness_quotient"},
}};

inline std::string_view to_string(ConstantId id) {
  for (const auto& [k, name] : kConstantNames) {
    if (k == id) return name;
  }
  return "?";
}

inline ConstantId parse_constant_id(std::string_view text) {
  for (const auto& [k, name] : kConstantNames) {
    if (name == text) return k;
  }
  throw std::invalid_argument("unknown constant '" + std::string(text) + "'");
}

namespace detail {

inline void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 0.5)) {
    throw std::invalid_argument("alpha must lie in [0, 1/2], got " + format_number(alpha));
  }
}

inline void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("p must be a finite number >= 1, got " + format_number(p));
  }
}

inline void require_t01(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t must lie in [0, 1], got " + format_number(t));
}

inline double power(double x, double p) noexcept {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

inline Vector rotate90(std::span<const double> v) { return Vector{-v[1], v[0]}; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Objectives. Each is a pure function of (u, v); the estimators below pair
// them with a search strategy.

namespace objectives {

/// (||u + t v||^p + ||u - t v||^p) / 2^(p-1)
inline Objective gamma_p(const NormedSpace& space, double p, double t) {
  const double scale = std::pow(2.0, 1.0 - p);
  return {[&space, p, t, scale](std::span<const double> u, std::span<const double> v) {
            return scale * (detail::power(norm_of(space, 1.0, u, t, v), p) +
                            detail::power(norm_of(space, 1.0, u, -t, v), p));
          },
          true, "gamma_p"};
}

/// Yang's (||u + t v||^2 + ||u - t v||^2) / 2, written with squares.
inline Objective gamma_yang(const NormedSpace& space, double t) {
  return {[&space, t](std::span<const double> u, std::span<const double> v) {
            const double a = norm_of(space, 1.0, u, t, v);
            const double b = norm_of(space, 1.0, u, -t, v);
            return (a * a + b * b) / 2.0;
          },
          true, "gamma_yang"};
}

/// Isosceles ratio at (x1, x2) = (u + v, u - v), computed from x1 and x2
/// directly: (||a x1 + (1-a) x2||^p + ||(1-a) x1 + a x2||^p) / ||x1 + x2||^p.
inline Objective cinj_ratio(const NormedSpace& space, double alpha, double p) {
  return {[&space, alpha, p](std::span<const double> u, std::span<const double> v) {
            const std::size_t n = u.size();
            std::vector<double> x1(n);
            std::vector<double> x2(n);
            combine(1.0, u, 1.0, v, x1);
            combine(1.0, u, -1.0, v, x2);
            const double sum_norm = norm_of(space, 1.0, x1, 1.0, x2);
            if (!(sum_norm > kSumNormGuard)) return std::numeric_limits<double>::quiet_NaN();
            const double num = detail::power(norm_of(space, alpha, x1, 1.0 - alpha, x2), p) +
                               detail::power(norm_of(space, 1.0 - alpha, x1, alpha, x2), p);
            return num / detail::power(sum_norm, p);
          },
          true, "cinj_ratio"};
}

/// (||u + v||^p + ||u - v||^p) / 2^p
inline Objective modified_cnj(const NormedSpace& space, double p) {
  const double scale = std::pow(2.0, -p);
  return {[&space, p, scale](std::span<const double> u, std::span<const double> v) {
            return scale * (detail::power(norm_of(space, 1.0, u, 1.0, v), p) +
                            detail::power(norm_of(space, 1.0, u, -1.0, v), p));
          },
          true, "cnj_modified_p"};
}

/// min(||u + v||, ||u - v||); not convex.
inline Objective james_min(const NormedSpace& space) {
  return {[&space](std::span<const double> u, std::span<const double> v) {
            return std::min(norm_of(space, 1.0, u, 1.0, v), norm_of(space, 1.0, u, -1.0, v));
          },
          false, "james_min"};
}

/// (||u + t v|| + ||u - t v||) / 2 - 1
inline Objective rho(const NormedSpace& space, double t) {
  return {[&space, t](std::span<const double> u, std::span<const double> v) {
            return (norm_of(space, 1.0, u, t, v) + norm_of(space, 1.0, u, -t, v)) / 2.0 - 1.0;
          },
          true, "rho"};
}

/// ((||u + t v||^p + ||u - t v||^p) / 2)^(1/p)
inline Objective jxp(const NormedSpace& space, double p, double t) {
  return {[&space, p, t](std::span<const double> u, std::span<const double> v) {
            const double s = (detail::power(norm_of(space, 1.0, u, t, v), p) +
                              detail::power(norm_of(space, 1.0, u, -t, v), p)) /
                             2.0;
            return p == 1.0 ? s : std::pow(s, 1.0 / p);
          },
          true, "jxp"};
}

/// (||a + b||^p + ||a - b||^p) / (||a||^p + ||b||^p) on ball pairs; not convex.
inline Objective nu_ratio(const NormedSpace& space, double p) {
  return {[&space, p](std::span<const double> a, std::span<const double> b) {
            const double den = detail::power(space.norm(a), p) + detail::power(space.norm(b), p);
            if (!(den > 1e-12)) return std::numeric_limits<double>::quiet_NaN();
            return (detail::power(norm_of(space, 1.0, a, 1.0, b), p) +
                    detail::power(norm_of(space, 1.0, a, -1.0, b), p)) /
                   den;
          },
          false, "nu_p"};
}

/// (||x1 + 2 x2||^2 + ||2 x1 + x2||^2) / (5 ||x1 + x2||^2) at (x1, x2) = (u + v, u - v).
inline Objective omega_ratio(const NormedSpace& space) {
  return {[&space](std::span<const double> u, std::span<const double> v) {
            const std::size_t n = u.size();
            std::vector<double> x1(n);
            std::vector<double> x2(n);
            combine(1.0, u, 1.0, v, x1);
            combine(1.0, u, -1.0, v, x2);
            const double s = norm_of(space, 1.0, x1, 1.0, x2);
            if (!(s > kSumNormGuard)) return std::numeric_limits<double>::quiet_NaN();
            const double a = norm_of(space, 1.0, x1, 2.0, x2);
            const double b = norm_of(space, 2.0, x1, 1.0, x2);
            return (a * a + b * b) / (5.0 * s * s);
          },
          true, "omega_prime"};
}

}  // namespace objectives

// ---------------------------------------------------------------------------
// Constants.

inline Estimate gamma_p(const NormedSpace& space, double p, double t, const Strategy& s = {}) {
  detail::require_p(p);
  detail::require_t01(t);
  Estimate e = maximize(space, objectives::gamma_p(space, p, t), Region::Sphere, s);
  e.metadata["p"] = p;
  e.metadata["t"] = t;
  return e;
}

/// Yang's gamma_X(t); should coincide with gamma_p at p = 2.
inline Estimate gamma_yang(const NormedSpace& space, double t, const Strategy& s = {}) {
  detail::require_t01(t);
  Estimate e = maximize(space, objectives::gamma_yang(space, t), Region::Sphere, s);
  e.metadata["t"] = t;
  return e;
}

/// Direct supremum over isosceles pairs, parametrised by sphere pairs (u1, u2)
/// through x1 = u1 + u2, x2 = u1 - u2. The witness is (u1, u2).
inline Estimate cinj_iso(const NormedSpace& space, double alpha, double p, const Strategy& s = {}) {
  detail::require_alpha(alpha);
  detail::require_p(p);
  Estimate e = maximize(space, objectives::cinj_ratio(space, alpha, p), Region::Sphere, s);
  e.metadata["alpha"] = alpha;
  e.metadata["p"] = p;
  e.notes["parametrization"] = "x1=u1+u2, x2=u1-u2 over unit sphere pairs (u1,u2)";
  return e;
}

inline Estimate cinj_via_gamma(const NormedSpace& space, double alpha, double p, const Strategy& s = {}) {
  detail::require_alpha(alpha);
  detail::require_p(p);
  Estimate e = gamma_p(space, p, 1.0 - 2.0 * alpha, s);
  e.value *= 0.5;
  e.metadata["alpha"] = alpha;
  e.notes["route"] = "half of gamma_p at t = 1 - 2 alpha";
  return e;
}

namespace detail {

template <class ValueAt>
Estimate sweep_t(ValueAt&& value_at, int t_grid, int t_refine) {
  std::int64_t inner_evals = 0;
  auto g = [&](double t) {
    Estimate e = value_at(t);
    inner_evals += e.evaluations;
    return e.value;
  };
  const SweepResult r = t_sweep(g, 0.0, 1.0, t_grid, t_refine);
  Estimate best = value_at(r.t_star);
  best.value = r.value;
  best.exact = false;
  best.evaluations = inner_evals;
  best.metadata["t_star"] = r.t_star;
  best.notes["outer_sup"] = "t_sweep over [0,1]; lower bound in t";
  return best;
}

}  // namespace detail

/// sup over t in [0,1] of gamma_p(t) / (1 + t^p).
inline Estimate cnj_p(const NormedSpace& space, double p, const Strategy& s = {}, int t_grid = 101,
                      int t_refine = 30) {
  detail::require_p(p);
  auto at = [&](double t) {
    Estimate e = gamma_p(space, p, t, s);
    e.value /= 1.0 + detail::power(t, p);
    return e;
  };
  Estimate e = detail::sweep_t(at, t_grid, t_refine);
  e.metadata["p"] = p;
  return e;
}

/// Cross-check route: sup over t of 2 cinj_iso((1 - t)/2) / (1 + t^p).
inline Estimate cnj_p_via_cinj(const NormedSpace& space, double p, const Strategy& s = {}, int t_grid = 101,
                               int t_refine = 30) {
  detail::require_p(p);
  auto at = [&](double t) {
    Estimate e = cinj_iso(space, (1.0 - t) / 2.0, p, s);
    e.value = 2.0 * e.value / (1.0 + detail::power(t, p));
    return e;
  };
  Estimate e = detail::sweep_t(at, t_grid, t_refine);
  e.metadata["p"] = p;
  e.notes["route"] = "2 cinj_iso((1-t)/2) / (1+t^p)";
  return e;
}

inline Estimate cnj_modified_p(const NormedSpace& space, double p, const Strategy& s = {}) {
  detail::require_p(p);
  Estimate e = maximize(space, objectives::modified_cnj(space, p), Region::Sphere, s);
  e.metadata["p"] = p;
  e.notes["definition"] = "inferred definition: sup (||x1+x2||^p+||x1-x2||^p)/2^p over unit sphere pairs";
  return e;
}

namespace detail {

/// Sup (or inf) of ||x1 + w|| over unit x1 and its unit isosceles partner w.
/// In the plane this is a sweep over the angle of x1 in [0, pi]; elsewhere a
/// multi-start search over (x1, in-plane direction).
inline Estimate iso_pair_extremum(const NormedSpace& space, Sense sense, const Strategy& s) {
  const double sign = sense == Sense::Sup ? 1.0 : -1.0;
  if (space.dim() == 2 && s.kind != StrategyKind::MultiStart) {
    std::int64_t evals = 0;
    auto at = [&](double theta) {
      const auto u = unit_at(space, theta);
      const Vector w = unit_iso_partner(space, u, rotate90(u).coords(), &evals);
      return std::make_pair(Vector{u[0], u[1]}, w);
    };
    auto g = [&](double theta) {
      auto [x1, w] = at(theta);
      ++evals;
      return sign * norm_of(space, 1.0, x1.coords(), 1.0, w.coords());
    };
    const SweepResult r = t_sweep(g, 0.0, std::numbers::pi, s.resolution, std::max(s.refine, 1));
    auto [x1, w] = at(r.t_star);
    Estimate e;
    e.value = norm_of(space, 1.0, x1.coords(), 1.0, w.coords());
    e.first = x1;
    e.second = w;
    e.strategy = Engine::Grid2D;
    e.evaluations = evals + r.evaluations;
    e.sense = sense;
    return e;
  }
  Objective f{[&space, sign](std::span<const double> x1, std::span<const double> d) {
                try {
                  const Vector w = unit_iso_partner(space, x1, d);
                  return sign * norm_of(space, 1.0, x1, 1.0, w.coords());
                } catch (const std::invalid_argument&) {
                  return std::numeric_limits<double>::quiet_NaN();
                }
              },
              false, "iso_pair_sum"};
  Strategy ms = s;
  if (ms.kind != StrategyKind::MultiStart) ms = Strategy::multistart(s.starts, s.steps, s.seed);
  Estimate raw = maximize(space, f, Region::Sphere, ms);
  Estimate e = raw;
  e.second = unit_iso_partner(space, raw.first.coords(), raw.second.coords());
  e.value = norm_of(space, 1.0, e.first.coords(), 1.0, e.second.coords());
  e.sense = sense;
  return e;
}

}  // namespace detail

/// James constant: sup of min(||x1+x2||, ||x1-x2||) over sphere pairs; the
/// isosceles form sup ||x1+x2|| over unit isosceles pairs is recorded in metadata.
inline Estimate james(const NormedSpace& space, const Strategy& s = {}) {
  Estimate e = maximize(space, objectives::james_min(space), Region::Sphere, s);
  const Estimate iso = detail::iso_pair_extremum(space, Sense::Sup, s);
  e.metadata["isosceles_form"] = iso.value;
  e.evaluations += iso.evaluations;
  return e;
}

/// Schaffer constant: inf of ||x1 + x2|| over unit isosceles pairs. The value
/// is attained, hence an upper bound of the true infimum.
inline Estimate schaffer(const NormedSpace& space, const Strategy& s = {}) {
  Estimate e = detail::iso_pair_extremum(space, Sense::Inf, s);
  const Estimate j = james(space, s);
  e.metadata["two_over_james"] = 2.0 / j.value;
  e.metadata["james"] = j.value;
  return e;
}

inline Estimate rho(const NormedSpace& space, double t, const Strategy& s = {}) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("rho needs t >= 0");
  Estimate e = maximize(space, objectives::rho(space, t), Region::Sphere, s);
  e.metadata["t"] = t;
  return e;
}

inline Estimate jxp(const NormedSpace& space, double p, double t, const Strategy& s = {}) {
  detail::require_p(p);
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("jxp needs t > 0");
  Estimate e = maximize(space, objectives::jxp(space, p, t), Region::Sphere, s);
  e.metadata["p"] = p;
  e.metadata["t"] = t;
  return e;
}

/// The ratio is invariant under joint scaling, so its supremum over non-zero
/// pairs is reached with max(||x1||, ||x2||) = 1: it is searched over ball pairs.
inline Estimate nu_p(const NormedSpace& space, double p, const Strategy& s = {}) {
  detail::require_p(p);
  Estimate e = maximize(space, objectives::nu_ratio(space, p), Region::Ball, s);
  e.metadata["p"] = p;
  e.notes["reduction"] = "degree-0 homogeneity: x1 in S_X, x2 in B_X up to swap; searched over B_X x B_X";
  return e;
}

inline Estimate omega_prime(const NormedSpace& space, const Strategy& s = {}) {
  Estimate e = maximize(space, objectives::omega_ratio(space), Region::Sphere, s);
  e.metadata["nine_tenths_gamma_third"] = 0.9 * gamma_yang(space, 1.0 / 3.0, s).value;
  e.notes["parametrization"] = "x1=u1+u2, x2=u1-u2 over unit sphere pairs (u1,u2)";
  return e;
}

/// ((2^(p-1) C(alpha, p))^(1/p) - 1) / (1 - 2 alpha), with C from cinj_via_gamma.
inline double smoothness_quotient(const NormedSpace& space, double p, double alpha, const Strategy& s = {}) {
  detail::require_p(p);
  if (!(alpha >= 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("smoothness_quotient needs alpha in [0, 1/2)");
  }
  const double c = cinj_via_gamma(space, alpha, p, s).value;
  return (std::pow(std::pow(2.0, p - 1.0) * c, 1.0 / p) - 1.0) / (1.0 - 2.0 * alpha);
}

// ---------------------------------------------------------------------------

/// One constant evaluation as requested from the command line.
struct ConstantRequest {
  ConstantId id = ConstantId::GammaP;
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<double> t;
  std::optional<double> q;
  Strategy strategy;
  int t_grid = 101;
};

inline Estimate compute(const NormedSpace& space, const ConstantRequest& r) {
  const std::string name(to_string(r.id));
  auto need = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw std::invalid_argument("constant " + name + " requires --" + flag);
    return *v;
  };
  const Strategy& s = r.strategy;
  switch (r.id) {
    case ConstantId::GammaP: return gamma_p(space, need(r.p, "p"), need(r.t, "t"), s);
    case ConstantId::CinjIso: return cinj_iso(space, need(r.alpha, "alpha"), need(r.p, "p"), s);
    case ConstantId::CinjViaGamma: return cinj_via_gamma(space, need(r.alpha, "alpha"), need(r.p, "p"), s);
    case ConstantId::CnjP: return cnj_p(space, need(r.p, "p"), s, r.t_grid);
    case ConstantId::CnjModifiedP: return cnj_modified_p(space, need(r.p, "p"), s);
    case ConstantId::James: return james(space, s);
    case ConstantId::Schaffer: return schaffer(space, s);
    case ConstantId::Rho: return rho(space, need(r.t, "t"), s);
    case ConstantId::Jxp: return jxp(space, need(r.p, "p"), need(r.t, "t"), s);
    case ConstantId::NuP: return nu_p(space, need(r.p, "p"), s);
    case ConstantId::OmegaPrime: return omega_prime(space, s);
    case ConstantId::SmoothnessQuotient: {
      const double p = need(r.p, "p");
      const double alpha = need(r.alpha, "alpha");
      if (!(alpha >= 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("smoothness_quotient needs alpha in [0, 1/2)");
      }
      Estimate e = cinj_via_gamma(space, alpha, p, s);
      e.metadata["cinj"] = e.value;
      e.value = smoothness_quotient(space, p, alpha, s);
      return e;
    }
  }
  throw std::invalid_argument("unhandled constant " + name);
}

}  // namespace bgc
