#pragma once

#include <string>
#include <vector>

#include "ncx/ring.hpp"

namespace ncx {

// Dense matrix over a Ring, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring r, size_t rows, size_t cols);
  static Matrix identity(const Ring& r, size_t n);
  static Matrix from_ints(const Ring& r, const std::vector<std::vector<long>>& rows);
  static Matrix scalar(const Ring& r, size_t n, const Elem& c);

  const Ring& ring() const { return R_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const Elem& operator()(size_t i, size_t j) const { return e_[i * cols_ + j]; }
  Elem& operator()(size_t i, size_t j) { return e_[i * cols_ + j]; }
  const std::vector<Elem>& entries() const { return e_; }

  bool is_zero() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(const Elem& c) const;
  Matrix transpose() const;
  Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
  Matrix col(size_t j) const { return block(0, j, rows_, 1); }
  void set_block(size_t r0, size_t c0, const Matrix& b);
  // reinterpret entries in another ring (integer lift / reduction)
  Matrix over(const Ring& r) const;

  void swap_rows(size_t a, size_t b);
  void swap_cols(size_t a, size_t b);
  // row a += c * row b
  void add_row(size_t a, size_t b, const Elem& c);
  void add_col(size_t a, size_t b, const Elem& c);
  void scale_row(size_t a, const Elem& c);
  void scale_col(size_t a, const Elem& c);

  std::string str() const;

 private:
  Ring R_;
  size_t rows_ = 0, cols_ = 0;
  std::vector<Elem> e_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix hstack(const Ring& r, size_t rows, const std::vector<Matrix>& parts);
Matrix vstack(const Ring& r, size_t cols, const std::vector<Matrix>& parts);
Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
// drop zero columns
Matrix nonzero_cols(const Matrix& a);

}  // namespace ncx
