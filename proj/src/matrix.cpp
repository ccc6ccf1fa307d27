#include "ncx/matrix.hpp"

#include <sstream>

namespace ncx {

Matrix::Matrix(Ring r, size_t rows, size_t cols)
    : R_(std::move(r)), rows_(rows), cols_(cols), e_(rows * cols, R_.zero()) {}

Matrix Matrix::identity(const Ring& r, size_t n) { return scalar(r, n, r.one()); }

Matrix Matrix::scalar(const Ring& r, size_t n, const Elem& c) {
  Matrix m(r, n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

Matrix Matrix::from_ints(const Ring& r, const std::vector<std::vector<long>>& rows) {
  size_t nc = rows.empty() ? 0 : rows[0].size();
  Matrix m(r, rows.size(), nc);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < nc; ++j) m(i, j) = r.from_int(rows[i].at(j));
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : e_)
    if (!R_.is_zero(x)) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw MathError("ShapeMismatch", "matrix product shape mismatch");
  Matrix r(R_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Elem& a = (*this)(i, k);
      if (R_.is_zero(a)) continue;
      for (size_t j = 0; j < o.cols_; ++j) {
        const Elem& b = o(k, j);
        if (R_.is_zero(b)) continue;
        r(i, j) = R_.add(r(i, j), R_.mul(a, b));
      }
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw MathError("ShapeMismatch", "matrix sum shape mismatch");
  Matrix r(*this);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = R_.add(e_[i], o.e_[i]);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::operator-() const {
  Matrix r(*this);
  for (auto& x : r.e_) x = R_.neg(x);
  return r;
}

Matrix Matrix::scaled(const Elem& c) const {
  Matrix r(*this);
  for (auto& x : r.e_) x = R_.mul(c, x);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(R_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
  Matrix r(R_, nr, nc);
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

void Matrix::set_block(size_t r0, size_t c0, const Matrix& b) {
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::over(const Ring& r) const {
  Matrix m(r, rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) {
    const Elem& x = e_[i];
    if (R_.kind() == RingKind::Localized && r.kind() != RingKind::Localized)
      m.e_[i] = r.frac(x.a, x.b);
    else if (r.kind() == RingKind::Localized)
      m.e_[i] = R_.kind() == RingKind::Localized ? r.frac(x.a, x.b) : r.from_int(x.a);
    else if (r.kind() == RingKind::Cyclotomic)
      m.e_[i] = r.cyclo(x.a, R_.kind() == RingKind::Cyclotomic ? x.b : Int(0));
    else
      m.e_[i] = r.from_int(x.a);
  }
  return m;
}

void Matrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void Matrix::swap_cols(size_t a, size_t b) {
  if (a == b) return;
  for (size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void Matrix::add_row(size_t a, size_t b, const Elem& c) {
  if (R_.is_zero(c)) return;
  for (size_t j = 0; j < cols_; ++j) {
    const Elem& y = (*this)(b, j);
    if (!R_.is_zero(y)) (*this)(a, j) = R_.add((*this)(a, j), R_.mul(c, y));
  }
}

void Matrix::add_col(size_t a, size_t b, const Elem& c) {
  if (R_.is_zero(c)) return;
  for (size_t i = 0; i < rows_; ++i) {
    const Elem& y = (*this)(i, b);
    if (!R_.is_zero(y)) (*this)(i, a) = R_.add((*this)(i, a), R_.mul(c, y));
  }
}

void Matrix::scale_row(size_t a, const Elem& c) {
  for (size_t j = 0; j < cols_; ++j) (*this)(a, j) = R_.mul(c, (*this)(a, j));
}

void Matrix::scale_col(size_t a, const Elem& c) {
  for (size_t i = 0; i < rows_; ++i) (*this)(i, a) = R_.mul(c, (*this)(i, a));
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << R_.str((*this)(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw MathError("ShapeMismatch", "hstack row mismatch");
  Matrix r(a.ring(), a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw MathError("ShapeMismatch", "vstack column mismatch");
  Matrix r(a.ring(), a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

Matrix hstack(const Ring& ring, size_t rows, const std::vector<Matrix>& parts) {
  size_t c = 0;
  for (const auto& p : parts) c += p.cols();
  Matrix r(ring, rows, c);
  c = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw MathError("ShapeMismatch", "hstack row mismatch");
    r.set_block(0, c, p);
    c += p.cols();
  }
  return r;
}

Matrix vstack(const Ring& ring, size_t cols, const std::vector<Matrix>& parts) {
  size_t n = 0;
  for (const auto& p : parts) n += p.rows();
  Matrix r(ring, n, cols);
  n = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw MathError("ShapeMismatch", "vstack column mismatch");
    r.set_block(n, 0, p);
    n += p.rows();
  }
  return r;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix r(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const Ring& R = a.ring();
  Matrix r(R, a.rows() * b.rows(), a.cols() * b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      const Elem& x = a(i, j);
      if (R.is_zero(x)) continue;
      for (size_t k = 0; k < b.rows(); ++k)
        for (size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = R.mul(x, b(k, l));
    }
  return r;
}

Matrix nonzero_cols(const Matrix& a) {
  std::vector<size_t> keep;
  for (size_t j = 0; j < a.cols(); ++j)
    for (size_t i = 0; i < a.rows(); ++i)
      if (!a.ring().is_zero(a(i, j))) {
        keep.push_back(j);
        break;
      }
  Matrix r(a.ring(), a.rows(), keep.size());
  for (size_t k = 0; k < keep.size(); ++k)
    for (size_t i = 0; i < a.rows(); ++i) r(i, k) = a(i, keep[k]);
  return r;
}

}  // namespace ncx
