#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tncap {

// Dense row-major matrix sized for MAC state spaces (tens of states), not a
// general linear-algebra workhorse.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) {
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    bool operator==(const Matrix&) const = default;

    std::vector<double> apply(const std::vector<double>& v) const;
    double inf_norm() const;  // max absolute row sum

    // Nonnegative off-diagonal entries (generator-shaped).
    bool is_metzler() const;

    // Dense row-major dump, one CSV row per matrix row.
    std::string to_csv() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Solve a x = b by Gaussian elimination with partial pivoting; throws
// numeric_error when the pivot collapses.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// Stationary distribution of a CTMC generator: pi q = 0, sum(pi) = 1.
std::vector<double> stationary_of_generator(const Matrix& q);

}  // namespace tncap
