#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace magma {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted and unique
/// within each row; explicit zeros may be stored.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
            std::vector<double> values);

  /// Duplicates are summed. Summation follows the order of `triplets` for
  /// entries with equal (row, col), so equal input gives identical output.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static CsrMatrix identity(int n);
  static CsrMatrix zero(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(int i, int j) const;

  /// y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;
  /// y = Mᵀ x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  CsrMatrix transpose() const;
  /// Sparse product this * other.
  CsrMatrix multiply(const CsrMatrix& other) const;
  /// this + scale * other (patterns are merged).
  CsrMatrix add(const CsrMatrix& other, double scale = 1.0) const;
  CsrMatrix scaled(double s) const;

  Vector diagonal() const;

  /// max |M_ij - M_ji| relative to max |M_ij|.
  double symmetry_defect() const;
  bool is_symmetric(double rel_tol = 1e-14) const { return symmetry_defect() <= rel_tol; }

  double max_abs() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += a x
void axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace magma
