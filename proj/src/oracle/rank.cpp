#include "k3fat/oracle/rank.hpp"

#include <stdexcept>
#include <utility>

namespace k3fat::oracle {

void Matrix::append_row(const std::vector<Elem>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("row width mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
}

std::size_t exact_rank(const PrimeField& f, Matrix m) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
        if (pivot == m.rows()) continue;
        if (pivot != rank)
            for (std::size_t c = col; c < m.cols(); ++c) std::swap(m(pivot, c), m(rank, c));
        const Elem inv = f.inv(m(rank, col));
        for (std::size_t c = col; c < m.cols(); ++c) m(rank, c) = f.mul(m(rank, c), inv);
        for (std::size_t r = rank + 1; r < m.rows(); ++r) {
            const Elem factor = m(r, col);
            if (factor == 0) continue;
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) = f.sub(m(r, c), f.mul(factor, m(rank, c)));
        }
        ++rank;
    }
    return rank;
}

} // namespace k3fat::oracle
