#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "exprbm/errors.hpp"

namespace exprbm {

// Dense row-major matrix of doubles. Deliberately small: the models here are
// desk-scale and the file format wants direct access to the row-major buffer.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// out = A^T v + out0, with v of length rows(). Used for hidden inputs.
inline std::vector<double> matvec_transposed(const Matrix& a,
                                             std::span<const double> v,
                                             std::span<const double> add) {
  if (v.size() != a.rows() || add.size() != a.cols())
    throw DomainError("matvec_transposed: dimension mismatch");
  std::vector<double> out(add.begin(), add.end());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const double* arow = a.data() + i * a.cols();
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += arow[j] * vi;
  }
  return out;
}

// out = A v + add, with v of length cols(). Used for visible inputs.
inline std::vector<double> matvec(const Matrix& a, std::span<const double> v,
                                  std::span<const double> add) {
  if (v.size() != a.cols() || add.size() != a.rows())
    throw DomainError("matvec: dimension mismatch");
  std::vector<double> out(add.begin(), add.end());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.data() + i * a.cols();
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += arow[j] * v[j];
    out[i] += acc;
  }
  return out;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// M += scale * u v^T
inline void add_outer(Matrix& m, std::span<const double> u,
                      std::span<const double> v, double scale = 1.0) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double* mrow = m.data() + i * m.cols();
    const double ui = scale * u[i];
    for (std::size_t j = 0; j < m.cols(); ++j) mrow[j] += ui * v[j];
  }
}

}  // namespace exprbm
