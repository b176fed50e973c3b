#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

namespace fabricplast {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

/// Components T^{abcd} of a fourth-order surface tensor, a,b,c,d in {0,1}.
struct Tensor4 {
  std::array<double, 16> v{};

  static constexpr int index(int a, int b, int c, int d) { return ((a * 2 + b) * 2 + c) * 2 + d; }

  double& operator()(int a, int b, int c, int d) { return v[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return v[index(a, b, c, d)]; }

  Tensor4& operator+=(const Tensor4& o) {
    for (int i = 0; i < 16; ++i) v[i] += o.v[i];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (auto& x : v) x *= s;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 l, const Tensor4& r) { return l += r; }
  friend Tensor4 operator*(double s, Tensor4 t) { return t *= s; }

  double max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
};

/// (x ⊗ y)^{abcd} = x^{ab} y^{cd}
inline Tensor4 outer(const Mat2& x, const Mat2& y) {
  Tensor4 t;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) t(a, b, c, d) = x(a, b) * y(c, d);
  return t;
}

/// T^{abcd} x_{cd}
inline Mat2 contract(const Tensor4& t, const Mat2& x) {
  Mat2 r = Mat2::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) r(a, b) += t(a, b, c, d) * x(c, d);
  return r;
}

/// v^a v^b
inline Mat2 dyad(const Vec2& u, const Vec2& v) { return u * v.transpose(); }

/// (u^a v^b + u^b v^a) / 2
inline Mat2 sym_dyad(const Vec2& u, const Vec2& v) {
  return 0.5 * (u * v.transpose() + v * u.transpose());
}

/// x^{ab} y_{ab}
inline double ddot(const Mat2& x, const Mat2& y) { return (x.array() * y.array()).sum(); }

}  // namespace fabricplast
