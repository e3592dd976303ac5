/*
   Copyright 2026 The irf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>

namespace irf {

inline constexpr std::size_t kMaxDim = 3;

// A point of R^d for d <= 3, stored inline.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : dim_(dim) { assert(dim >= 1 && dim <= kMaxDim); }
  Point(std::initializer_list<double> values) : dim_(values.size()) {
    assert(dim_ >= 1 && dim_ <= kMaxDim);
    std::size_t i = 0;
    for (double v : values) x_[i++] = v;
  }
  static Point scalar(double v) { return Point{v}; }

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return x_[i]; }
  double& operator[](std::size_t i) noexcept { return x_[i]; }

  double norm() const noexcept {
    if (dim_ == 1) return std::fabs(x_[0]);
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += x_[i] * x_[i];
    return std::sqrt(s);
  }

  bool finite() const noexcept {
    for (std::size_t i = 0; i < dim_; ++i)
      if (!std::isfinite(x_[i])) return false;
    return true;
  }

  Point& operator+=(const Point& o) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) x_[i] += o.x_[i];
    return *this;
  }
  Point& operator-=(const Point& o) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) x_[i] -= o.x_[i];
    return *this;
  }
  Point& operator*=(double s) noexcept {
    for (std::size_t i = 0; i < dim_; ++i) x_[i] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
  friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
  friend Point operator*(double s, Point a) noexcept { return a *= s; }
  friend Point operator*(Point a, double s) noexcept { return a *= s; }

  friend bool operator==(const Point& a, const Point& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.x_[i] != b.x_[i]) return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (std::size_t i = 0; i < p.dim_; ++i) os << (i ? ", " : "") << p.x_[i];
    return os << ')';
  }

 private:
  std::array<double, kMaxDim> x_{};
  std::size_t dim_ = 1;
};

inline double dot(const Point& a, const Point& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const Point& a, const Point& b) noexcept { return (a - b).norm(); }

// Row-major d x d matrix, used for rotations.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim) {}
  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * kMaxDim + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * kMaxDim + j]; }

  Point operator*(const Point& x) const noexcept {
    Point y(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  Matrix operator*(const Matrix& b) const noexcept {
    Matrix c(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) s += (*this)(i, k) * b(k, j);
        c(i, j) = s;
      }
    return c;
  }

  Matrix transpose() const noexcept {
    Matrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  // max |R^T R - I| entry.
  double orthogonality_defect() const noexcept {
    const Matrix p = transpose() * *this;
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        worst = std::fmax(worst, std::fabs(p(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
  }

 private:
  std::array<double, kMaxDim * kMaxDim> a_{};
  std::size_t dim_ = 1;
};

}  // namespace irf
