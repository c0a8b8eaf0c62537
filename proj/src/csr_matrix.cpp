#include "magma/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace magma {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                     std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0) throw std::invalid_argument("CsrMatrix: negative shape");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 || row_ptr_.front() != 0 ||
      static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size() ||
      col_idx_.size() != values_.size()) {
    throw std::invalid_argument("CsrMatrix: inconsistent storage arrays");
  }
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) {
        throw std::invalid_argument("CsrMatrix: column index out of range");
      }
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw std::invalid_argument("CsrMatrix: column indices not sorted/unique");
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  std::vector<int> count(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::out_of_range("CsrMatrix::from_triplets: index out of range");
    }
    ++count[t.row + 1];
  }
  for (int i = 0; i < rows; ++i) count[i + 1] += count[i];

  // bucket by row, preserving input order
  std::vector<Triplet> bucketed(triplets.size());
  {
    std::vector<int> next(count.begin(), count.end() - 1);
    for (const auto& t : triplets) bucketed[next[t.row]++] = t;
  }
  triplets.clear();
  triplets.shrink_to_fit();

  std::vector<int> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(bucketed.size() / 2);
  values.reserve(bucketed.size() / 2);
  for (int i = 0; i < rows; ++i) {
    auto first = bucketed.begin() + count[i];
    auto last = bucketed.begin() + count[i + 1];
    std::stable_sort(first, last, [](const Triplet& a, const Triplet& b) { return a.col < b.col; });
    for (auto it = first; it != last; ++it) {
      if (static_cast<int>(col_idx.size()) > row_ptr[i] && col_idx.back() == it->col) {
        values.back() += it->value;
      } else {
        col_idx.push_back(it->col);
        values.push_back(it->value);
      }
    }
    row_ptr[i + 1] = static_cast<int>(col_idx.size());
  }
  return CsrMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1);
  std::vector<int> col_idx(n);
  for (int i = 0; i <= n; ++i) row_ptr[i] = i;
  for (int i = 0; i < n; ++i) col_idx[i] = i;
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::zero(int rows, int cols) {
  return CsrMatrix(rows, cols, std::vector<int>(static_cast<std::size_t>(rows) + 1, 0), {}, {});
}

double CsrMatrix::at(int i, int j) const {
  auto first = col_idx_.begin() + row_ptr_[i];
  auto last = col_idx_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols_) || y.size() != static_cast<std::size_t>(rows_)) {
    throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
  }
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

Vector CsrMatrix::operator*(std::span<const double> x) const {
  Vector y(rows_);
  multiply(x, y);
  return y;
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(rows_) || y.size() != static_cast<std::size_t>(cols_)) {
    throw std::invalid_argument("CsrMatrix::multiply_transpose: dimension mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double xi = x[i];
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * xi;
  }
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<int> row_ptr(static_cast<std::size_t>(cols_) + 1, 0);
  for (int c : col_idx_) ++row_ptr[c + 1];
  for (int j = 0; j < cols_; ++j) row_ptr[j + 1] += row_ptr[j];
  std::vector<int> col_idx(nnz());
  std::vector<double> values(nnz());
  std::vector<int> next(row_ptr.begin(), row_ptr.end() - 1);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int dst = next[col_idx_[k]]++;
      col_idx[dst] = i;
      values[dst] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::multiply(const CsrMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
  // Gustavson row-by-row product with a dense accumulator.
  std::vector<int> marker(other.cols_, -1);
  std::vector<double> acc(other.cols_, 0.0);
  std::vector<int> row_ptr(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  std::vector<int> row_cols;
  for (int i = 0; i < rows_; ++i) {
    row_cols.clear();
    for (int ka = row_ptr_[i]; ka < row_ptr_[i + 1]; ++ka) {
      const int j = col_idx_[ka];
      const double a = values_[ka];
      for (int kb = other.row_ptr_[j]; kb < other.row_ptr_[j + 1]; ++kb) {
        const int c = other.col_idx_[kb];
        if (marker[c] != i) {
          marker[c] = i;
          acc[c] = 0.0;
          row_cols.push_back(c);
        }
        acc[c] += a * other.values_[kb];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (int c : row_cols) {
      col_idx.push_back(c);
      values.push_back(acc[c]);
    }
    row_ptr[i + 1] = static_cast<int>(col_idx.size());
  }
  return CsrMatrix(rows_, other.cols_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::add(const CsrMatrix& other, double scale) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("CsrMatrix::add: dimension mismatch");
  }
  std::vector<int> row_ptr(static_cast<std::size_t>(rows_) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(std::max(nnz(), other.nnz()));
  values.reserve(std::max(nnz(), other.nnz()));
  for (int i = 0; i < rows_; ++i) {
    int ka = row_ptr_[i];
    int kb = other.row_ptr_[i];
    const int ea = row_ptr_[i + 1];
    const int eb = other.row_ptr_[i + 1];
    while (ka < ea || kb < eb) {
      const int ca = ka < ea ? col_idx_[ka] : cols_;
      const int cb = kb < eb ? other.col_idx_[kb] : cols_;
      if (ca == cb) {
        col_idx.push_back(ca);
        values.push_back(values_[ka++] + scale * other.values_[kb++]);
      } else if (ca < cb) {
        col_idx.push_back(ca);
        values.push_back(values_[ka++]);
      } else {
        col_idx.push_back(cb);
        values.push_back(scale * other.values_[kb++]);
      }
    }
    row_ptr[i + 1] = static_cast<int>(col_idx.size());
  }
  return CsrMatrix(rows_, cols_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::scaled(double s) const {
  CsrMatrix m = *this;
  for (double& v : m.values_) v *= s;
  return m;
}

Vector CsrMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (int i = 0; i < static_cast<int>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::symmetry_defect() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  const CsrMatrix t = transpose();
  const CsrMatrix diff = add(t, -1.0);
  return diff.max_abs() / scale;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace magma
