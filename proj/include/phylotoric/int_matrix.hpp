#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phylotoric/integers.hpp"

namespace phylotoric {

// Dense matrix over arbitrary-precision integers.  Row-major; rows are the
// unit of most operations because lattices are stored as row spans.
class IntMatrix {
public:
    IntMatrix() = default;

    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<Integer>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_)
                throw std::invalid_argument("IntMatrix: ragged initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(std::vector<std::vector<Integer>> rows) {
        IntMatrix m;
        m.rows_ = rows.size();
        m.cols_ = m.rows_ == 0 ? 0 : rows.front().size();
        m.data_.reserve(m.rows_ * m.cols_);
        for (auto& row : rows) {
            if (row.size() != m.cols_)
                throw std::invalid_argument("IntMatrix: ragged rows");
            for (auto& x : row) m.data_.push_back(std::move(x));
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) {
        return data_[i * cols_ + j];
    }
    const Integer& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    std::vector<Integer> row(std::size_t i) const {
        return std::vector<Integer>(data_.begin() + i * cols_,
                                    data_.begin() + (i + 1) * cols_);
    }

    void set_row(std::size_t i, const std::vector<Integer>& values) {
        if (values.size() != cols_)
            throw std::invalid_argument("IntMatrix: row length mismatch");
        std::copy(values.begin(), values.end(), data_.begin() + i * cols_);
    }

    void append_row(const std::vector<Integer>& values) {
        if (rows_ == 0 && cols_ == 0) cols_ = values.size();
        if (values.size() != cols_)
            throw std::invalid_argument("IntMatrix: row length mismatch");
        data_.insert(data_.end(), values.begin(), values.end());
        ++rows_;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap(data_[i * cols_ + c], data_[j * cols_ + c]);
    }

    bool row_is_zero(std::size_t i) const {
        for (std::size_t c = 0; c < cols_; ++c)
            if (data_[i * cols_ + c] != 0) return false;
        return true;
    }

    IntMatrix transposed() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix rows_subset(const std::vector<std::size_t>& indices) const {
        IntMatrix s(indices.size(), cols_);
        for (std::size_t i = 0; i < indices.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                s(i, j) = (*this)(indices[i], j);
        return s;
    }

    friend IntMatrix vstack(const IntMatrix& top, const IntMatrix& bottom) {
        if (top.rows_ == 0) return bottom;
        if (bottom.rows_ == 0) return top;
        if (top.cols_ != bottom.cols_)
            throw std::invalid_argument("vstack: column count mismatch");
        IntMatrix m(top.rows_ + bottom.rows_, top.cols_);
        m.data_ = top.data_;
        m.data_.insert(m.data_.end(), bottom.data_.begin(), bottom.data_.end());
        return m;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product: shape mismatch");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

// v * m for a row vector v of length m.rows().
inline std::vector<Integer> row_times(const std::vector<Integer>& v,
                                      const IntMatrix& m) {
    if (v.size() != m.rows())
        throw std::invalid_argument("row_times: shape mismatch");
    std::vector<Integer> out(m.cols());
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[k] * m(k, j);
    }
    return out;
}

}  // namespace phylotoric
