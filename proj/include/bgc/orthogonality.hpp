#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bgc/spaces.hpp"
#include "bgc/vector.hpp"

namespace bgc {

/// Relative tolerance of the isosceles predicate; scaled by max(||x||, ||y||, 1).
inline constexpr double kIsoTolerance = 1e-9;

/// Pairs whose ||x1 + x2|| falls at or below this are dropped from ratio objectives.
inline constexpr double kSumNormGuard = 1e-9;

/// Tolerance on ||u|| = 1 for inputs that must lie on the unit sphere.
inline constexpr double kUnitTolerance = 1e-9;

class CompletionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An isosceles-orthogonal pair x1 _|_I x2.
struct IsoPair {
  Vector x1;
  Vector x2;
  double defect = 0.0;    ///< ||x1 + x2|| - ||x1 - x2||
  double sum_norm = 0.0;  ///< ||x1 + x2||
};

inline double iso_defect(const NormedSpace& space, const Vector& x, const Vector& y) {
  detail::require_dim(space, x.dim());
  detail::require_dim(space, y.dim());
  return norm_of(space, 1.0, x.coords(), 1.0, y.coords()) -
         norm_of(space, 1.0, x.coords(), -1.0, y.coords());
}

inline bool is_isosceles(const NormedSpace& space, const Vector& x, const Vector& y,
                         double tol = kIsoTolerance) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
  const double scale = std::max({norm(space, x), norm(space, y), 1.0});
  return std::abs(iso_defect(space, x, y)) <= tol * scale;
}

namespace detail {

inline void require_unit(const NormedSpace& space, const Vector& u, const char* name) {
  const double n = norm(space, u);
  if (std::abs(n - 1.0) > kUnitTolerance) {
    throw std::invalid_argument(std::string(name) + " is not a unit vector (norm " + format_number(n) + ")");
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Euclidean unit vector in span{x, d} orthogonal to x; throws when d is parallel to x.
inline std::vector<double> plane_complement(std::span<const double> x, std::span<const double> d) {
  const double xx = dot(x, x);
  const double xd = dot(x, d);
  std::vector<double> r(d.begin(), d.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= (xd / xx) * x[i];
  const double rr = dot(r, r);
  if (!(rr > 1e-24 * std::max(1.0, dot(d, d)))) {
    throw std::invalid_argument("direction is parallel to the base vector");
  }
  const double inv = 1.0 / std::sqrt(rr);
  for (double& c : r) c *= inv;
  return r;
}

}  // namespace detail

/// (x1, x2) = (u1 + u2, u1 - u2) for unit u1, u2. Then x1 + x2 = 2 u1 and
/// x1 - x2 = 2 u2, so both have norm 2 and the pair is isosceles orthogonal.
inline IsoPair pair_from_sphere(const NormedSpace& space, const Vector& u1, const Vector& u2) {
  detail::require_dim(space, u1.dim());
  detail::require_dim(space, u2.dim());
  detail::require_unit(space, u1, "u1");
  detail::require_unit(space, u2, "u2");
  IsoPair pair{combine(1.0, u1, 1.0, u2), combine(1.0, u1, -1.0, u2), 0.0, 0.0};
  pair.sum_norm = norm_of(space, 1.0, pair.x1.coords(), 1.0, pair.x2.coords());
  pair.defect = pair.sum_norm - norm_of(space, 1.0, pair.x1.coords(), -1.0, pair.x2.coords());
  return pair;
}

/// Finds y = d + s*x with x _|_I y by sign-change bracketing and bisection in s.
///
/// The defect h(s) = ||(1+s)x + d|| - ||(1-s)x - d|| tends to +-2||x|| as
/// s -> +-inf. The bracket is grown outward from s = 0 by doubling (both
/// directions, positive first); the first root bracketed is returned. Roots
/// need not be unique, so other completions may exist.
inline Vector iso_complete(const NormedSpace& space, const Vector& x, const Vector& d,
                           double s_max = 1e6) {
  detail::require_dim(space, x.dim());
  detail::require_dim(space, d.dim());
  if (x.is_zero()) throw std::invalid_argument("iso_complete needs a non-zero base vector");
  (void)detail::plane_complement(x.coords(), d.coords());

  const double nx = norm(space, x);
  auto candidate = [&](double s) { return combine(1.0, d, s, x); };
  auto defect_at = [&](double s) { return iso_defect(space, x, candidate(s)); };
  auto converged = [&](double s, double h) {
    return std::abs(h) <= 1e-10 * std::max(nx, norm(space, candidate(s)));
  };

  const double h0 = defect_at(0.0);
  if (converged(0.0, h0)) return d;

  double lo = 0.0;
  double hlo = h0;
  double hi = 0.0;
  bool bracketed = false;
  for (double step = 1.0; step <= s_max && !bracketed; step *= 2.0) {
    for (double s : {step, -step}) {
      const double h = defect_at(s);
      if (converged(s, h)) return candidate(s);
      if ((h > 0.0) != (h0 > 0.0)) {
        // Tighten toward 0 using the previous probe on the same side.
        lo = (std::abs(s) == 1.0) ? 0.0 : s / 2.0;
        hlo = defect_at(lo);
        hi = s;
        bracketed = true;
        break;
      }
    }
  }
  if (!bracketed) {
    throw CompletionFailed("completion failed: no sign change of the isosceles defect for |s| <= " +
                           detail::format_number(s_max));
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = defect_at(mid);
    if (converged(mid, hm)) return candidate(mid);
    if ((hm > 0.0) == (hlo > 0.0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
    }
    if (mid == lo && mid == hi) break;
  }
  const double s = 0.5 * (lo + hi);
  if (!converged(s, defect_at(s))) {
    throw CompletionFailed("completion failed: bisection stalled above tolerance");
  }
  return candidate(s);
}

/// Unit vector w in span{x1, d} with x1 _|_I w, on the half-circle from x1 to -x1.
///
/// Along w(phi) = normalise(cos(phi) e + sin(phi) f), phi in [0, pi], the
/// defect runs from +2 to -2, so bisection brackets a root. Unit-norm
/// isosceles partners of a fixed x1 can form an arc in non-strictly convex
/// spaces; this returns one of them.
inline Vector unit_iso_partner(const NormedSpace& space, std::span<const double> x1,
                               std::span<const double> d, std::int64_t* evaluations = nullptr) {
  const std::vector<double> f = detail::plane_complement(x1, d);
  const double e_len = std::sqrt(detail::dot(x1, x1));
  const std::size_t n = x1.size();
  std::vector<double> dir(n);
  std::vector<double> w(n);
  auto point = [&](double phi) {
    const double c = std::cos(phi) / e_len;
    const double s = std::sin(phi);
    for (std::size_t i = 0; i < n; ++i) dir[i] = c * x1[i] + s * f[i];
    normalize_into(space, dir, w);
  };
  auto defect = [&]() {
    if (evaluations) *evaluations += 1;
    return norm_of(space, 1.0, x1, 1.0, w) - norm_of(space, 1.0, x1, -1.0, w);
  };
  double lo = 0.0;
  double hi = std::numbers::pi;
  for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    point(mid);
    const double h = defect();
    if (h == 0.0) return Vector(w);
    if (h > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  point(0.5 * (lo + hi));
  return Vector(w);
}

}  // namespace bgc
