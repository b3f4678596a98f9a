#pragma once

#include <cstddef>
#include <vector>

#include "k3fat/oracle/field.hpp"

namespace k3fat::oracle {

/// Dense row-major matrix over a prime field.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void append_row(const std::vector<Elem>& row);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Elem> data_;
};

/// Rank by Gaussian elimination over the field.
std::size_t exact_rank(const PrimeField& f, Matrix m);

} // namespace k3fat::oracle
