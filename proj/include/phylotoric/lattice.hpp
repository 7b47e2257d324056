#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phylotoric/int_matrix.hpp"
#include "phylotoric/integers.hpp"

namespace phylotoric {

namespace detail {

// Incremental row-style Hermite normal form.  Rows are kept in echelon order
// (strictly increasing pivot columns, positive pivots); take() finishes the
// canonical form by reducing the entries above each pivot into [0, pivot).
class HnfBuilder {
public:
    explicit HnfBuilder(std::size_t cols) : cols_(cols) {}

    void insert(std::vector<Integer> row) {
        if (row.size() != cols_)
            throw std::invalid_argument("HnfBuilder: row length mismatch");
        std::size_t slot = 0;
        std::size_t lead = 0;
        for (;;) {
            while (lead < cols_ && row[lead] == 0) ++lead;
            if (lead == cols_) return;
            while (slot < rows_.size() && pivot_col_[slot] < lead) ++slot;
            if (slot == rows_.size() || pivot_col_[slot] > lead) {
                if (row[lead] < 0)
                    for (auto& x : row) x = -x;
                rows_.insert(rows_.begin() + slot, std::move(row));
                pivot_col_.insert(pivot_col_.begin() + slot, lead);
                return;
            }
            std::vector<Integer>& piv = rows_[slot];
            if (row[lead] % piv[lead] == 0) {
                Integer q = row[lead] / piv[lead];
                for (std::size_t j = lead; j < cols_; ++j)
                    if (piv[j] != 0) row[j] -= q * piv[j];
            } else {
                Integer s, t;
                Integer g = ext_gcd(piv[lead], row[lead], s, t);
                Integer u = piv[lead] / g, v = row[lead] / g;
                // [[s,t],[-v,u]] is unimodular; the first output keeps the
                // slot with pivot g > 0, the second continues the walk.
                for (std::size_t j = lead; j < cols_; ++j) {
                    Integer a = std::move(piv[j]);
                    Integer b = std::move(row[j]);
                    piv[j] = s * a + t * b;
                    row[j] = u * b - v * a;
                }
            }
        }
    }

    // Finish canonicalization and emit the basis; the builder is left empty.
    IntMatrix take() {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t k = i + 1; k < rows_.size(); ++k) {
                std::size_t c = pivot_col_[k];
                Integer q = floor_div(rows_[i][c], rows_[k][c]);
                if (q == 0) continue;
                for (std::size_t j = c; j < cols_; ++j)
                    if (rows_[k][j] != 0) rows_[i][j] -= q * rows_[k][j];
            }
        IntMatrix out = IntMatrix::from_rows(std::move(rows_));
        rows_.clear();
        pivot_col_.clear();
        return out.rows() == 0 ? IntMatrix(0, cols_) : out;
    }

    int rank() const { return static_cast<int>(rows_.size()); }

private:
    std::size_t cols_;
    std::vector<std::vector<Integer>> rows_;
    std::vector<std::size_t> pivot_col_;
};

std::vector<Integer> snf_divisors(IntMatrix a);

}  // namespace detail

/**
 * Integer sublattice of Z^n, stored as its canonical basis: a row-style
 * Hermite normal form (strictly increasing pivot columns, positive pivots,
 * entries above each pivot reduced into [0, pivot)).  Uniqueness of the
 * canonical form makes equality a basis-matrix comparison.
 */
class Sublattice {
public:
    // Canonicalize the row span of arbitrary (possibly dependent) generators.
    explicit Sublattice(const IntMatrix& generators) : ambient_(generators.cols()) {
        detail::HnfBuilder builder(ambient_);
        for (std::size_t i = 0; i < generators.rows(); ++i) builder.insert(generators.row(i));
        basis_ = builder.take();
        recompute_pivots();
    }

    static Sublattice zero(std::size_t ambient) { return Sublattice(IntMatrix(0, ambient)); }
    static Sublattice full(std::size_t ambient) {
        return Sublattice(IntMatrix::identity(ambient));
    }

    std::size_t ambient() const { return ambient_; }
    int rank() const { return static_cast<int>(basis_.rows()); }
    const IntMatrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivot_columns() const { return pivot_cols_; }

    friend bool operator==(const Sublattice& a, const Sublattice& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    void recompute_pivots() {
        pivot_cols_.clear();
        for (std::size_t i = 0; i < basis_.rows(); ++i) {
            std::size_t c = 0;
            while (basis_(i, c) == 0) ++c;
            pivot_cols_.push_back(c);
        }
    }

    std::size_t ambient_ = 0;
    IntMatrix basis_;
    std::vector<std::size_t> pivot_cols_;
};

// Canonical form of the row span of A.
inline Sublattice hnf(const IntMatrix& a) { return Sublattice(a); }

// Left kernel {x in Z^m : xA = 0} for an m x n matrix A.  Row-reduces the
// augmented block [A | I] with unimodular operations; the identity block rows
// that end over a zero A-block form a basis, and because the tracking matrix
// stays unimodular the result is the full kernel (saturated by construction).
inline Sublattice kernel_of(const IntMatrix& a) {
    std::size_t m = a.rows(), n = a.cols();
    IntMatrix w(m, n + m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) w(i, j) = a(i, j);
        w(i, n + i) = 1;
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && w(p, c) == 0) ++p;
        if (p == m) continue;
        w.swap_rows(p, r);
        for (std::size_t i = r + 1; i < m; ++i) {
            if (w(i, c) == 0) continue;
            if (w(i, c) % w(r, c) == 0) {
                Integer q = w(i, c) / w(r, c);
                for (std::size_t j = c; j < n + m; ++j)
                    if (w(r, j) != 0) w(i, j) -= q * w(r, j);
            } else {
                Integer s, t;
                Integer g = ext_gcd(w(r, c), w(i, c), s, t);
                Integer u = w(r, c) / g, v = w(i, c) / g;
                for (std::size_t j = c; j < n + m; ++j) {
                    Integer x = std::move(w(r, j));
                    Integer y = std::move(w(i, j));
                    w(r, j) = s * x + t * y;
                    w(i, j) = u * y - v * x;
                }
            }
        }
        ++r;
    }
    IntMatrix ker(m - r, m);
    for (std::size_t i = r; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) ker(i - r, j) = w(i, n + j);
    return Sublattice(ker);
}

// Smallest saturated sublattice containing L: the double orthogonal
// complement {x : kx in L for some k >= 1}.
inline Sublattice saturate(const Sublattice& l) {
    Sublattice orth = kernel_of(l.basis().transposed());
    return kernel_of(orth.basis().transposed());
}

// Integer coordinates of v in L's basis (back-substitution down the HNF
// pivots); empty when v is not a lattice member.
inline std::optional<std::vector<Integer>> coordinates_in(const Sublattice& l,
                                                          const std::vector<Integer>& v) {
    if (v.size() != l.ambient())
        throw std::domain_error("coordinates_in: vector dimension mismatch");
    std::vector<Integer> rem = v;
    std::vector<Integer> coords(l.rank());
    const IntMatrix& b = l.basis();
    std::size_t row = 0;
    for (std::size_t c = 0; c < l.ambient(); ++c) {
        if (row < b.rows() && l.pivot_columns()[row] == c) {
            if (rem[c] % b(row, c) != 0) return std::nullopt;
            Integer q = rem[c] / b(row, c);
            if (q != 0)
                for (std::size_t j = c; j < l.ambient(); ++j)
                    if (b(row, j) != 0) rem[j] -= q * b(row, j);
            coords[row] = q;
            ++row;
        } else if (rem[c] != 0) {
            return std::nullopt;
        }
    }
    return coords;
}

inline bool contains(const Sublattice& l, const std::vector<Integer>& v) {
    return coordinates_in(l, v).has_value();
}

inline bool contains(const Sublattice& outer, const Sublattice& inner) {
    if (outer.ambient() != inner.ambient())
        throw std::domain_error("contains: ambient dimension mismatch");
    for (std::size_t i = 0; i < inner.basis().rows(); ++i)
        if (!contains(outer, inner.basis().row(i))) return false;
    return true;
}

// [M : L] for L ⊆ M, as the product of the elementary divisors of the
// coordinate matrix of L's basis in M's basis; empty (INFINITE) on rank drop.
inline std::optional<Integer> index_in(const Sublattice& l, const Sublattice& m) {
    if (l.ambient() != m.ambient())
        throw std::domain_error("index_in: ambient dimension mismatch");
    IntMatrix coords(l.rank(), m.rank());
    for (int i = 0; i < l.rank(); ++i) {
        auto x = coordinates_in(m, l.basis().row(i));
        if (!x) throw std::domain_error("index_in: first lattice is not contained in the second");
        coords.set_row(i, *x);
    }
    if (l.rank() < m.rank()) return std::nullopt;
    Integer index = 1;
    for (const Integer& d : detail::snf_divisors(coords)) index *= d;
    return index;
}

// Lattice generated by the union; canonical HNF of the stacked bases.
inline Sublattice lattice_sum(const std::vector<Sublattice>& ls) {
    if (ls.empty()) throw std::domain_error("lattice_sum: empty list");
    detail::HnfBuilder builder(ls.front().ambient());
    for (const Sublattice& l : ls) {
        if (l.ambient() != ls.front().ambient())
            throw std::domain_error("lattice_sum: ambient dimension mismatch");
        for (std::size_t i = 0; i < l.basis().rows(); ++i) builder.insert(l.basis().row(i));
    }
    return Sublattice(builder.take());
}

inline Sublattice lattice_sum(const Sublattice& a, const Sublattice& b) {
    return lattice_sum(std::vector<Sublattice>{a, b});
}

// L1 ∩ L2: rows (x|y) of the kernel of the stacked basis satisfy
// x·B1 = −y·B2, so the x-halves applied to B1 generate the intersection.
inline Sublattice intersect(const Sublattice& a, const Sublattice& b) {
    if (a.ambient() != b.ambient())
        throw std::domain_error("intersect: ambient dimension mismatch");
    if (a.rank() == 0 || b.rank() == 0) return Sublattice::zero(a.ambient());
    Sublattice k = kernel_of(vstack(a.basis(), b.basis()));
    IntMatrix left(k.rank(), a.rank());
    for (int i = 0; i < k.rank(); ++i)
        for (int j = 0; j < a.rank(); ++j) left(i, j) = k.basis()(i, j);
    return Sublattice(left * a.basis());
}

namespace detail {

// Elementary divisors d_1 | d_2 | ... of an integer matrix (Smith normal
// form diagonal, nonzero part only).
inline std::vector<Integer> snf_divisors(IntMatrix a) {
    std::size_t m = a.rows(), n = a.cols();
    std::vector<Integer> divisors;
    std::size_t t = 0;
    while (t < m && t < n) {
        // Pull a nonzero entry to (t,t).
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < m && !found; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a(i, j) != 0) {
                    pi = i;
                    pj = j;
                    found = true;
                    break;
                }
        if (!found) break;
        a.swap_rows(pi, t);
        if (pj != t)
            for (std::size_t i = 0; i < m; ++i) std::swap(a(i, pj), a(i, t));

        for (;;) {
            // The divisible fast path must bypass ext_gcd: a Bezout combine can
            // swap the pivot row/column and undo the other pass forever, while
            // plain subtraction leaves the pivot line untouched.
            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a(i, t) == 0) continue;
                if (a(i, t) % a(t, t) == 0) {
                    Integer q = a(i, t) / a(t, t);
                    for (std::size_t j = t; j < n; ++j)
                        if (a(t, j) != 0) a(i, j) -= q * a(t, j);
                    continue;
                }
                Integer s, u;
                Integer g = ext_gcd(a(t, t), a(i, t), s, u);
                Integer p = a(t, t) / g, q = a(i, t) / g;
                for (std::size_t j = t; j < n; ++j) {
                    Integer x = std::move(a(t, j));
                    Integer y = std::move(a(i, j));
                    a(t, j) = s * x + u * y;
                    a(i, j) = p * y - q * x;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0) continue;
                dirty = true;
                if (a(t, j) % a(t, t) == 0) {
                    Integer q = a(t, j) / a(t, t);
                    for (std::size_t i = t; i < m; ++i)
                        if (a(i, t) != 0) a(i, j) -= q * a(i, t);
                    continue;
                }
                Integer s, u;
                Integer g = ext_gcd(a(t, t), a(t, j), s, u);
                Integer p = a(t, t) / g, q = a(t, j) / g;
                for (std::size_t i = t; i < m; ++i) {
                    Integer x = std::move(a(i, t));
                    Integer y = std::move(a(i, j));
                    a(i, t) = s * x + u * y;
                    a(i, j) = p * y - q * x;
                }
            }
            // Column operations can reintroduce entries below the pivot.
            bool col_clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (a(i, t) != 0) col_clean = false;
            if (!dirty && col_clean) break;
        }

        // Divisibility repair: the pivot must divide every remaining entry.
        bool repaired = false;
        for (std::size_t i = t + 1; i < m && !repaired; ++i)
            for (std::size_t j = t + 1; j < n; ++j)
                if (a(i, j) % a(t, t) != 0) {
                    for (std::size_t jj = t; jj < n; ++jj) a(t, jj) += a(i, jj);
                    repaired = true;
                    break;
                }
        if (repaired) continue;  // redo elimination at the same t

        divisors.push_back(a(t, t) < 0 ? -a(t, t) : a(t, t));
        ++t;
    }
    return divisors;
}

}  // namespace detail

}  // namespace phylotoric
