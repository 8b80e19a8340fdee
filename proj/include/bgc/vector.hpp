#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgc {

/// Coordinate tuple of a finite-dimensional real space.
///
/// A default-constructed Vector is empty and only used as a "no witness"
/// placeholder. Any Vector built from coordinates has dimension >= 2 and
/// finite entries.
class Vector {
 public:
  Vector() = default;

  explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) { validate(); }

  Vector(std::initializer_list<double> coords) : coords_(coords) { validate(); }

  explicit Vector(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {
    validate();
  }

  static Vector zeros(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

  [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
  [[nodiscard]] bool empty() const noexcept { return coords_.empty(); }

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] std::span<double> coords() noexcept { return coords_; }
  [[nodiscard]] const std::vector<double>& raw() const noexcept { return coords_; }

  [[nodiscard]] bool is_zero() const noexcept {
    return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
  }

  friend bool operator==(const Vector&, const Vector&) = default;
  friend auto operator<=>(const Vector& a, const Vector& b) {
    return std::lexicographical_compare_three_way(a.coords_.begin(), a.coords_.end(),
                                                  b.coords_.begin(), b.coords_.end(),
                                                  std::compare_weak_order_fallback);
  }

  Vector& operator+=(const Vector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Vector& operator*=(double s) {
    for (double& c : coords_) c *= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(double s, Vector v) { return v *= s; }
  friend Vector operator*(Vector v, double s) { return v *= s; }
  friend Vector operator-(Vector v) { return v *= -1.0; }

 private:
  void validate() const {
    if (coords_.size() < 2) {
      throw std::invalid_argument("vector dimension must be at least 2, got " +
                                  std::to_string(coords_.size()));
    }
    for (double c : coords_) {
      if (!std::isfinite(c)) throw std::invalid_argument("vector has a non-finite entry");
    }
  }
  void require_same_dim(const Vector& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("dimension mismatch");
  }

  std::vector<double> coords_;
};

/// out = a*u + b*v, coordinate-wise. Spans must have equal length.
inline void combine(double a, std::span<const double> u, double b, std::span<const double> v,
                    std::span<double> out) noexcept {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * u[i] + b * v[i];
}

inline Vector combine(double a, const Vector& u, double b, const Vector& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<double> out(u.dim());
  combine(a, u.coords(), b, v.coords(), out);
  return Vector(std::move(out));
}

}  // namespace bgc
