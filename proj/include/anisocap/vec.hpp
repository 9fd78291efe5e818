#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace anisocap {

/// Small dense vector with runtime dimension 2 or 3.
///
/// Everything in this library lives in R^2 or R^3, so a fixed-capacity
/// value type is simpler and faster than a heap-backed vector.
struct Vec {
  std::array<double, 3> a{0.0, 0.0, 0.0};
  int n = 2;

  Vec() = default;
  Vec(double x, double y) : a{x, y, 0.0}, n(2) {}
  Vec(double x, double y, double z) : a{x, y, z}, n(3) {}
  static Vec zero(int dim) {
    Vec v;
    v.n = dim;
    return v;
  }

  int dim() const { return n; }
  double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
  double x() const { return a[0]; }
  double y() const { return a[1]; }

  Vec operator+(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r[i] += o[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r[i] -= o[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r = *this;
    for (int i = 0; i < n; ++i) r[i] *= s;
    return r;
  }
  Vec operator-() const { return *this * -1.0; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * o[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  double norm1() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::fabs(a[static_cast<std::size_t>(i)]);
    return s;
  }
  double norm_inf() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s = std::max(s, std::fabs(a[static_cast<std::size_t>(i)]));
    return s;
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline void require_dim(const Vec& v, int dim, const char* what) {
  if (v.dim() != dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace anisocap
