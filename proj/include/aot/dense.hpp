#ifndef AOT_DENSE_HPP
#define AOT_DENSE_HPP

#include <cstddef>
#include <vector>

#include "aot/errors.hpp"

namespace aot {

/// Minimal dense row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("DenseMatrix: data size does not match rows*cols");
    }
  }

  /// Builds a matrix from row vectors; all rows must have equal length.
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
      throw ValidationError("matrix must have at least one row");
    }
    const std::size_t cols = rows.front().size();
    if (cols == 0) {
      throw ValidationError("matrix must have at least one column");
    }
    DenseMatrix out(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw ValidationError("ragged matrix: row " + std::to_string(i + 1) +
                              " has " + std::to_string(rows[i].size()) +
                              " entries, expected " + std::to_string(cols));
      }
      for (std::size_t j = 0; j < cols; ++j) out(i, j) = rows[i][j];
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace aot

#endif  // AOT_DENSE_HPP
