#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bgc/vector.hpp"

namespace bgc {

/// Exponent of an lp norm. Infinity is a distinguished state, never a large float.
class Exponent {
 public:
  static Exponent finite(double q) {
    if (!(q >= 1.0) || !std::isfinite(q)) {
      throw std::invalid_argument("lp exponent must be a finite number >= 1 (or inf)");
    }
    return Exponent(q, false);
  }
  static Exponent infinity() noexcept { return Exponent(0.0, true); }

  [[nodiscard]] bool is_infinite() const noexcept { return infinite_; }
  /// Only meaningful when !is_infinite().
  [[nodiscard]] double value() const noexcept { return q_; }

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent(double q, bool inf) : q_(q), infinite_(inf) {}
  double q_ = 1.0;
  bool infinite_ = false;
};

enum class Region { Sphere, Ball };

inline std::string_view to_string(Region r) { return r == Region::Sphere ? "sphere" : "ball"; }

namespace detail {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_exponent(const Exponent& q) {
  return q.is_infinite() ? std::string("inf") : format_number(q.value());
}

inline double cross(const std::array<double, 2>& a, const std::array<double, 2>& b) noexcept {
  return a[0] * b[1] - a[1] * b[0];
}

inline double cross(const std::array<double, 2>& a, std::span<const double> b) noexcept {
  return a[0] * b[1] - a[1] * b[0];
}

inline double angle_of(double x, double y) noexcept {
  double a = std::atan2(y, x);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace detail

/// Centrally symmetric convex polygon used as a unit ball. Vertices are kept in
/// counterclockwise order starting from the smallest polar angle in [0, 2pi).
class Polygon {
 public:
  using Point = std::array<double, 2>;

  explicit Polygon(std::vector<Point> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
    const std::size_t n = vertices_.size();
    angles_.reserve(n);
    dets_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      angles_.push_back(detail::angle_of(vertices_[i][0], vertices_[i][1]));
      dets_.push_back(detail::cross(vertices_[i], vertices_[(i + 1) % n]));
    }
  }

  [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }

  /// Minkowski gauge: locate the angular sector of v, then solve
  /// v = a*V_k + b*V_{k+1} on that facet and its neighbours; gauge = max(a+b).
  [[nodiscard]] double gauge(std::span<const double> v) const noexcept {
    if (v[0] == 0.0 && v[1] == 0.0) return 0.0;
    const std::size_t n = vertices_.size();
    const double theta = detail::angle_of(v[0], v[1]);
    auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
    // Sector k spans [angle_k, angle_{k+1}); angles before angle_0 wrap to the last facet.
    std::size_t k = (it == angles_.begin()) ? n - 1 : static_cast<std::size_t>(it - angles_.begin()) - 1;
    double g = facet_value(k, v);
    g = std::max(g, facet_value((k + n - 1) % n, v));
    g = std::max(g, facet_value((k + 1) % n, v));
    return g;
  }

 private:
  [[nodiscard]] double facet_value(std::size_t k, std::span<const double> v) const noexcept {
    const Point& a = vertices_[k];
    const Point& b = vertices_[(k + 1) % vertices_.size()];
    // Cramer: coefficient on a is (v x b)/det, on b is (a x v)/det.
    const double ca = (v[0] * b[1] - v[1] * b[0]) / dets_[k];
    const double cb = detail::cross(a, v) / dets_[k];
    return ca + cb;
  }

  std::vector<Point> vertices_;
  std::vector<double> angles_;
  std::vector<double> dets_;
};

struct LpNorm {
  Exponent q;
};

struct WeightedLpNorm {
  Exponent q;
  std::vector<double> weights;
};

struct PolygonNorm {
  Polygon polygon;
};

using SpaceKind = std::variant<LpNorm, WeightedLpNorm, PolygonNorm>;

/// A finite-dimensional real normed space: lp, weighted lp, or a 2D polygonal gauge.
class NormedSpace {
 public:
  static NormedSpace lp(Exponent q, std::size_t dim) {
    if (dim < 2) throw std::invalid_argument("space dimension must be at least 2");
    return NormedSpace(dim, LpNorm{q});
  }

  static NormedSpace weighted_lp(Exponent q, std::vector<double> weights) {
    if (weights.size() < 2) throw std::invalid_argument("space dimension must be at least 2");
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("weights must be strictly positive and finite");
      }
    }
    const std::size_t dim = weights.size();
    return NormedSpace(dim, WeightedLpNorm{q, std::move(weights)});
  }

  static NormedSpace polygon(Polygon p) { return NormedSpace(2, PolygonNorm{std::move(p)}); }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] const SpaceKind& kind() const noexcept { return kind_; }

  /// Unchecked norm evaluation; the hot path of every search engine.
  [[nodiscard]] double norm(std::span<const double> v) const noexcept {
    return std::visit([&](const auto& k) { return eval(k, v); }, kind_);
  }

  /// True when the unit ball has a finite set of extreme points.
  [[nodiscard]] bool is_polyhedral() const noexcept {
    if (std::holds_alternative<PolygonNorm>(kind_)) return true;
    const Exponent& q = exponent();
    return q.is_infinite() || q.value() == 1.0;
  }

  /// True for lp / weighted lp with 1 < q < inf.
  [[nodiscard]] bool is_smooth() const noexcept { return !is_polyhedral(); }

  /// Exponent of lp kinds; throws for polygons.
  [[nodiscard]] const Exponent& exponent() const {
    if (const auto* lp = std::get_if<LpNorm>(&kind_)) return lp->q;
    if (const auto* w = std::get_if<WeightedLpNorm>(&kind_)) return w->q;
    throw std::logic_error("polygonal space has no lp exponent");
  }

  /// Text form accepted by parse_space().
  [[nodiscard]] std::string descriptor() const {
    using detail::format_exponent;
    using detail::format_number;
    if (const auto* lp = std::get_if<LpNorm>(&kind_)) {
      return "lp:q=" + format_exponent(lp->q) + ",dim=" + std::to_string(dim_);
    }
    if (const auto* w = std::get_if<WeightedLpNorm>(&kind_)) {
      std::string s = "wlp:q=" + format_exponent(w->q) + ",dim=" + std::to_string(dim_) + ",w=";
      for (std::size_t i = 0; i < w->weights.size(); ++i) {
        if (i) s += ';';
        s += format_number(w->weights[i]);
      }
      return s;
    }
    const auto& poly = std::get<PolygonNorm>(kind_).polygon;
    std::string s = "poly2d:v=";
    bool first = true;
    for (const auto& p : poly.vertices()) {
      if (!first) s += ';';
      first = false;
      s += "(" + format_number(p[0]) + "," + format_number(p[1]) + ")";
    }
    return s;
  }

 private:
  NormedSpace(std::size_t dim, SpaceKind kind) : dim_(dim), kind_(std::move(kind)) {}

  static double eval(const LpNorm& k, std::span<const double> v) noexcept {
    if (k.q.is_infinite()) {
      double m = 0.0;
      for (double c : v) m = std::max(m, std::abs(c));
      return m;
    }
    const double q = k.q.value();
    if (q == 1.0) {
      double s = 0.0;
      for (double c : v) s += std::abs(c);
      return s;
    }
    if (q == 2.0) {
      double s = 0.0;
      for (double c : v) s += c * c;
      return std::sqrt(s);
    }
    double s = 0.0;
    for (double c : v) s += std::pow(std::abs(c), q);
    return std::pow(s, 1.0 / q);
  }

  static double eval(const WeightedLpNorm& k, std::span<const double> v) noexcept {
    const auto& w = k.weights;
    if (k.q.is_infinite()) {
      double m = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, w[i] * std::abs(v[i]));
      return m;
    }
    const double q = k.q.value();
    double s = 0.0;
    if (q == 1.0) {
      for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::abs(v[i]);
      return s;
    }
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::pow(std::abs(v[i]), q);
    return std::pow(s, 1.0 / q);
  }

  static double eval(const PolygonNorm& k, std::span<const double> v) noexcept {
    return k.polygon.gauge(v);
  }

  std::size_t dim_;
  SpaceKind kind_;
};

namespace detail {

inline void require_dim(const NormedSpace& space, std::size_t dim) {
  if (dim != space.dim()) {
    throw std::invalid_argument("dimension mismatch: space has dim " + std::to_string(space.dim()) +
                                ", vector has dim " + std::to_string(dim));
  }
}

inline constexpr std::size_t kStackDim = 16;

/// Calls fn(span) with a scratch span holding a*u + b*v; no heap use for small dims.
template <class Fn>
decltype(auto) with_combination(double a, std::span<const double> u, double b,
                                std::span<const double> v, Fn&& fn) {
  if (u.size() <= kStackDim) {
    std::array<double, kStackDim> buf;
    std::span<double> out(buf.data(), u.size());
    combine(a, u, b, v, out);
    return fn(std::span<const double>(out));
  }
  std::vector<double> buf(u.size());
  combine(a, u, b, v, buf);
  return fn(std::span<const double>(buf));
}

}  // namespace detail

/// ||a*u + b*v|| without materialising the combination.
inline double norm_of(const NormedSpace& space, double a, std::span<const double> u, double b,
                      std::span<const double> v) {
  return detail::with_combination(a, u, b, v,
                                  [&](std::span<const double> w) { return space.norm(w); });
}

inline double norm(const NormedSpace& space, const Vector& v) {
  detail::require_dim(space, v.dim());
  for (double c : v.coords()) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite vector entry");
  }
  return space.norm(v.coords());
}

inline Vector unit_vector(const NormedSpace& space, const Vector& v) {
  const double n = norm(space, v);
  if (n == 0.0) throw std::invalid_argument("cannot normalise the zero vector");
  return (1.0 / n) * v;
}

/// Same as unit_vector() for raw coordinates; writes into out.
inline void normalize_into(const NormedSpace& space, std::span<const double> v, std::span<double> out) {
  const double n = space.norm(v);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
}

inline constexpr std::size_t kMaxCubeDim = 16;

/// All extreme points of the closed unit ball.
inline std::vector<Vector> extreme_points(const NormedSpace& space) {
  std::vector<Vector> pts;
  if (const auto* poly = std::get_if<PolygonNorm>(&space.kind())) {
    for (const auto& p : poly->polygon.vertices()) pts.push_back(Vector{p[0], p[1]});
    return pts;
  }
  const Exponent& q = space.exponent();
  const std::size_t n = space.dim();
  std::vector<double> w(n, 1.0);
  if (const auto* wl = std::get_if<WeightedLpNorm>(&space.kind())) w = wl->weights;

  if (!q.is_infinite() && q.value() == 1.0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (double s : {1.0, -1.0}) {
        auto e = Vector::zeros(n);
        e[i] = s / w[i];
        pts.push_back(std::move(e));
      }
    }
    return pts;
  }
  if (q.is_infinite()) {
    if (n > kMaxCubeDim) {
      throw std::invalid_argument("cube extreme-point enumeration is capped at dim " +
                                  std::to_string(kMaxCubeDim) + "; use a sampling strategy");
    }
    const std::size_t count = std::size_t{1} << n;
    pts.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
      auto e = Vector::zeros(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = ((mask >> i) & 1U ? -1.0 : 1.0) / w[i];
      pts.push_back(std::move(e));
    }
    return pts;
  }
  throw std::invalid_argument("no finite extreme set: unit ball of lp with 1<q<inf is strictly convex");
}

/// Validates a symmetric convex polygon and returns the space it gauges.
/// The full vertex list is required; symmetry is checked, never completed.
inline NormedSpace make_polyhedral_2d(std::span<const Vector> vertices) {
  using Point = Polygon::Point;
  if (vertices.size() < 4) throw std::invalid_argument("polygon needs at least 4 vertices");
  std::vector<Point> pts;
  double scale = 0.0;
  for (const auto& v : vertices) {
    if (v.dim() != 2) throw std::invalid_argument("polygon vertices must be 2-dimensional");
    if (v.is_zero()) throw std::invalid_argument("origin not interior: vertex at the origin");
    pts.push_back({v[0], v[1]});
    scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
  }
  const double tol = 1e-12 * scale;
  for (const auto& p : pts) {
    const bool has_mirror = std::any_of(pts.begin(), pts.end(), [&](const Point& o) {
      return std::abs(o[0] + p[0]) <= tol && std::abs(o[1] + p[1]) <= tol;
    });
    if (!has_mirror) throw std::invalid_argument("asymmetric vertex set: -v missing for some vertex v");
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return detail::angle_of(a[0], a[1]) < detail::angle_of(b[0], b[1]);
  });
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = pts[i];
    const Point& b = pts[(i + 1) % n];
    const Point& c = pts[(i + 2) % n];
    if (std::abs(a[0] - b[0]) <= tol && std::abs(a[1] - b[1]) <= tol) {
      throw std::invalid_argument("duplicate polygon vertex");
    }
    if (!(detail::cross(a, b) > tol * scale)) {
      throw std::invalid_argument("origin not interior to the polygon");
    }
    const double turn = detail::cross(Point{b[0] - a[0], b[1] - a[1]}, Point{c[0] - b[0], c[1] - b[1]});
    if (std::abs(turn) <= tol * scale) {
      throw std::invalid_argument("degenerate polygon: three collinear vertices");
    }
    if (turn < 0.0) throw std::invalid_argument("non-convex vertex ordering");
  }
  return NormedSpace::polygon(Polygon(std::move(pts)));
}

inline NormedSpace make_polyhedral_2d(std::initializer_list<Vector> vertices) {
  return make_polyhedral_2d(std::span<const Vector>(vertices.begin(), vertices.size()));
}

// Standard test spaces.
inline NormedSpace l1(std::size_t dim = 2) { return NormedSpace::lp(Exponent::finite(1.0), dim); }
inline NormedSpace l2(std::size_t dim = 2) { return NormedSpace::lp(Exponent::finite(2.0), dim); }
inline NormedSpace lq(double q, std::size_t dim = 2) { return NormedSpace::lp(Exponent::finite(q), dim); }
inline NormedSpace linf(std::size_t dim = 2) { return NormedSpace::lp(Exponent::infinity(), dim); }

inline NormedSpace regular_hexagon() {
  const double h = std::sqrt(3.0) / 2.0;
  return make_polyhedral_2d({Vector{1.0, 0.0}, Vector{0.5, h}, Vector{-0.5, h}, Vector{-1.0, 0.0},
                             Vector{-0.5, -h}, Vector{0.5, -h}});
}

// ---------------------------------------------------------------------------
// Descriptor parsing: lp:q=2,dim=3 | wlp:q=2,dim=2,w=1;2 | poly2d:v=(1,0);(0,1);...

namespace detail {

inline double parse_double(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid number for " + std::string(what) + ": '" + s + "'");
  }
  if (used != s.size()) {
    throw std::invalid_argument("invalid number for " + std::string(what) + ": '" + s + "'");
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Splits on sep, ignoring separators inside parentheses.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

inline Exponent parse_exponent(std::string_view text) {
  if (text == "inf" || text == "infinity") return Exponent::infinity();
  return Exponent::finite(parse_double(text, "q"));
}

}  // namespace detail

inline NormedSpace parse_space(std::string_view descriptor) {
  using namespace detail;
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("invalid space descriptor '" + std::string(descriptor) + "'");
  }
  const std::string_view kind = trim(descriptor.substr(0, colon));
  std::vector<std::pair<std::string_view, std::string_view>> fields;
  for (auto part : split_top(descriptor.substr(colon + 1), ',')) {
    part = trim(part);
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("invalid space field '" + std::string(part) + "'");
    }
    fields.emplace_back(trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
  }
  auto field = [&](std::string_view key) -> std::string_view {
    for (const auto& [k, v] : fields) {
      if (k == key) return v;
    }
    throw std::invalid_argument("space descriptor '" + std::string(descriptor) + "' lacks field '" +
                                std::string(key) + "'");
  };
  auto check_keys = [&](std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : fields) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw std::invalid_argument("unknown space field '" + std::string(k) + "'");
      }
    }
  };
  auto parse_dim = [&]() {
    const double d = parse_double(field("dim"), "dim");
    if (d != std::floor(d) || d < 2 || d > 1e6) throw std::invalid_argument("dim must be an integer >= 2");
    return static_cast<std::size_t>(d);
  };

  if (kind == "lp") {
    check_keys({"q", "dim"});
    return NormedSpace::lp(parse_exponent(field("q")), parse_dim());
  }
  if (kind == "wlp") {
    check_keys({"q", "dim", "w"});
    std::vector<double> w;
    for (auto t : split_top(field("w"), ';')) w.push_back(parse_double(trim(t), "w"));
    if (w.size() != parse_dim()) throw std::invalid_argument("weight count does not match dim");
    return NormedSpace::weighted_lp(parse_exponent(field("q")), std::move(w));
  }
  if (kind == "poly2d") {
    check_keys({"v"});
    std::vector<Vector> verts;
    for (auto t : split_top(field("v"), ';')) {
      t = trim(t);
      if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
        throw std::invalid_argument("polygon vertex must look like (x,y), got '" + std::string(t) + "'");
      }
      auto xy = split_top(t.substr(1, t.size() - 2), ',');
      if (xy.size() != 2) throw std::invalid_argument("polygon vertex must have two coordinates");
      verts.push_back(Vector{parse_double(trim(xy[0]), "vertex"), parse_double(trim(xy[1]), "vertex")});
    }
    return make_polyhedral_2d(verts);
  }
  throw std::invalid_argument("unknown space kind '" + std::string(kind) + "'");
}

}  // namespace bgc
