/**
 * Dense integer matrices over arbitrary-precision integers and the Smith
 * normal form with unimodular transforms.
 */
#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace hfib {

using Integer = boost::multiprecision::cpp_int;

class IntMatrix
{
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::initializer_list<long long> values) : IntMatrix(rows, cols)
    {
        if (values.size() != rows * cols)
            throw InvalidArgument("IntMatrix: initializer has wrong size");
        std::size_t k = 0;
        for (long long v : values)
            data_[k++] = v;
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const IntMatrix&) const = default;

    bool is_zero() const
    {
        for (const auto& v : data_)
            if (v != 0)
                return false;
        return true;
    }

    IntMatrix operator*(const IntMatrix& b) const
    {
        if (cols_ != b.rows_)
            throw InvalidArgument("IntMatrix: dimension mismatch in product");
        IntMatrix c(rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k)
            {
                const Integer& a = (*this)(i, k);
                if (a == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0)
                        c(i, j) += a * b(k, j);
            }
        return c;
    }

    std::vector<Integer> apply(const std::vector<Integer>& v) const
    {
        if (v.size() != cols_)
            throw InvalidArgument("IntMatrix: vector length mismatch");
        std::vector<Integer> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (v[j] != 0 && (*this)(i, j) != 0)
                    out[i] += (*this)(i, j) * v[j];
        return out;
    }

    /// Rows [r0, r1) as a new matrix.
    IntMatrix row_block(std::size_t r0, std::size_t r1) const
    {
        IntMatrix m(r1 - r0, cols_);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(i - r0, j) = (*this)(i, j);
        return m;
    }

    /// Columns [c0, c1) as a new matrix.
    IntMatrix col_block(std::size_t c0, std::size_t c1) const
    {
        IntMatrix m(rows_, c1 - c0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = c0; j < c1; ++j)
                m(i, j - c0) = (*this)(i, j);
        return m;
    }

    std::string str() const
    {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i)
        {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < cols_; ++j)
                os << (j ? "," : "") << (*this)(i, j);
            os << "]";
        }
        os << "]";
        return os.str();
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// D = U * A * V with U, V unimodular and D diagonal, d_1 | d_2 | ... positive.
struct SmithForm
{
    IntMatrix U, U_inv, D, V, V_inv;
    std::vector<Integer> diagonal;  ///< the nonzero invariant factors
    std::size_t rank = 0;
};

enum SmithTrack : unsigned
{
    track_none = 0,
    track_U = 1,
    track_U_inv = 2,
    track_V = 4,
    track_V_inv = 8,
    track_all = 15
};

namespace detail {
inline std::atomic<bool>& snf_self_check()
{
    static std::atomic<bool> on{false};
    return on;
}
}  // namespace detail

/// When enabled (test mode) every call verifies U*A*V == D exactly.
inline void set_smith_self_check(bool on) { detail::snf_self_check().store(on); }

inline SmithForm smith_normal_form(const IntMatrix& A, unsigned track = track_all)
{
    const std::size_t m = A.rows(), n = A.cols();
    // Full tracking is needed for the self check.
    if (detail::snf_self_check().load())
        track = track_all;
    SmithForm S;
    IntMatrix& D = S.D;
    D = A;
    if (track & track_U)
        S.U = IntMatrix::identity(m);
    if (track & track_U_inv)
        S.U_inv = IntMatrix::identity(m);
    if (track & track_V)
        S.V = IntMatrix::identity(n);
    if (track & track_V_inv)
        S.V_inv = IntMatrix::identity(n);

    // Elementary operations, mirrored onto the tracked transforms.
    auto row_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {  // row_dst -= q row_src
        for (std::size_t j = 0; j < n; ++j)
            if (D(src, j) != 0)
                D(dst, j) -= q * D(src, j);
        if (track & track_U)
            for (std::size_t j = 0; j < m; ++j)
                if (S.U(src, j) != 0)
                    S.U(dst, j) -= q * S.U(src, j);
        if (track & track_U_inv)
            for (std::size_t i = 0; i < m; ++i)
                if (S.U_inv(i, dst) != 0)
                    S.U_inv(i, src) += q * S.U_inv(i, dst);
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& q) {  // col_dst -= q col_src
        for (std::size_t i = 0; i < m; ++i)
            if (D(i, src) != 0)
                D(i, dst) -= q * D(i, src);
        if (track & track_V)
            for (std::size_t i = 0; i < n; ++i)
                if (S.V(i, src) != 0)
                    S.V(i, dst) -= q * S.V(i, src);
        if (track & track_V_inv)
            for (std::size_t j = 0; j < n; ++j)
                if (S.V_inv(dst, j) != 0)
                    S.V_inv(src, j) += q * S.V_inv(dst, j);
    };
    auto row_swap = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t j = 0; j < n; ++j)
            std::swap(D(a, j), D(b, j));
        if (track & track_U)
            for (std::size_t j = 0; j < m; ++j)
                std::swap(S.U(a, j), S.U(b, j));
        if (track & track_U_inv)
            for (std::size_t i = 0; i < m; ++i)
                std::swap(S.U_inv(i, a), S.U_inv(i, b));
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t i = 0; i < m; ++i)
            std::swap(D(i, a), D(i, b));
        if (track & track_V)
            for (std::size_t i = 0; i < n; ++i)
                std::swap(S.V(i, a), S.V(i, b));
        if (track & track_V_inv)
            for (std::size_t j = 0; j < n; ++j)
                std::swap(S.V_inv(a, j), S.V_inv(b, j));
    };
    auto row_negate = [&](std::size_t r) {
        for (std::size_t j = 0; j < n; ++j)
            D(r, j) = -D(r, j);
        if (track & track_U)
            for (std::size_t j = 0; j < m; ++j)
                S.U(r, j) = -S.U(r, j);
        if (track & track_U_inv)
            for (std::size_t i = 0; i < m; ++i)
                S.U_inv(i, r) = -S.U_inv(i, r);
    };

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t)
    {
        // Minimal-absolute-value pivot in the trailing block.
        std::size_t pi = m, pj = n;
        Integer best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (D(i, j) != 0 && (pi == m || abs(D(i, j)) < best))
                {
                    best = abs(D(i, j));
                    pi = i;
                    pj = j;
                    if (best == 1)
                        goto found;
                }
    found:
        if (pi == m)
            break;
        row_swap(t, pi);
        col_swap(t, pj);
        for (;;)
        {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (D(i, t) != 0)
                {
                    Integer q = D(i, t) / D(t, t);
                    if (q != 0)
                        row_axpy(i, t, q);
                    if (D(i, t) != 0)
                        clean = false;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (D(t, j) != 0)
                {
                    Integer q = D(t, j) / D(t, t);
                    if (q != 0)
                        col_axpy(j, t, q);
                    if (D(t, j) != 0)
                        clean = false;
                }
            if (!clean)
            {
                // A remainder smaller than the pivot survived; move it to the pivot.
                std::size_t bi = t, bj = t;
                Integer b = abs(D(t, t));
                for (std::size_t i = t + 1; i < m; ++i)
                    if (D(i, t) != 0 && abs(D(i, t)) < b)
                    {
                        b = abs(D(i, t));
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D(t, j) != 0 && abs(D(t, j)) < b)
                    {
                        b = abs(D(t, j));
                        bi = t;
                        bj = j;
                    }
                row_swap(t, bi);
                col_swap(t, bj);
                continue;
            }
            // Divisibility: every trailing entry must be a multiple of the pivot.
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D(i, j) != 0 && D(i, j) % D(t, t) != 0)
                    {
                        bad = i;
                        break;
                    }
            if (bad == m)
                break;
            row_axpy(t, bad, Integer(-1));
        }
        if (D(t, t) < 0)
            row_negate(t);
        S.diagonal.push_back(D(t, t));
    }
    S.rank = S.diagonal.size();

    if (detail::snf_self_check().load())
    {
        if (!(S.U * A * S.V == D))
            throw std::logic_error("smith_normal_form: U*A*V != D");
        if (!(S.U * S.U_inv == IntMatrix::identity(m)) || !(S.V * S.V_inv == IntMatrix::identity(n)))
            throw std::logic_error("smith_normal_form: transforms are not inverse pairs");
        for (std::size_t i = 0; i + 1 < S.diagonal.size(); ++i)
            if (S.diagonal[i + 1] % S.diagonal[i] != 0)
                throw std::logic_error("smith_normal_form: divisibility chain broken");
    }
    return S;
}

/// Invariant factors only (no transforms).
inline std::vector<Integer> invariant_factors(const IntMatrix& A)
{
    return smith_normal_form(A, track_none).diagonal;
}

/**
 * A matrix whose columns are a basis of the lattice spanned by the columns of
 * A, in column echelon form. Columns are inserted one at a time into sparse
 * echelon vectors, combining with extended gcd steps on pivot clashes.
 */
inline IntMatrix column_lattice_basis(const IntMatrix& A)
{
    using Sparse = std::map<std::size_t, Integer>;
    const std::size_t m = A.rows(), n = A.cols();
    std::vector<Sparse> columns(n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (A(i, j) != 0)
                columns[j].emplace(i, A(i, j));
    auto combine = [](const Integer& x, const Sparse& a, const Integer& y, const Sparse& b) {
        Sparse r;
        for (const auto& [i, v] : a)
            r[i] += x * v;
        for (const auto& [i, v] : b)
            r[i] += y * v;
        for (auto it = r.begin(); it != r.end();)
            it = it->second == 0 ? r.erase(it) : std::next(it);
        return r;
    };
    std::map<std::size_t, Sparse> basis;  // pivot row -> echelon vector
    for (auto& v : columns)
        while (!v.empty())
        {
            std::size_t p = v.begin()->first;
            auto it = basis.find(p);
            if (it == basis.end())
            {
                basis.emplace(p, std::move(v));
                break;
            }
            Sparse& b = it->second;
            const Integer a = b.begin()->second, c = v.begin()->second;
            if (c % a == 0)
            {
                v = combine(Integer(1), v, Integer(-(c / a)), b);
                continue;
            }
            // g = x a + y c; (b, v) -> (x b + y v, (c/g) b - (a/g) v) is unimodular.
            Integer x0 = 1, x1 = 0, y0 = 0, y1 = 1, r0 = a, r1 = c;
            while (r1 != 0)
            {
                Integer q = r0 / r1;
                Integer t = r0 - q * r1;
                r0 = r1, r1 = t;
                t = x0 - q * x1;
                x0 = x1, x1 = t;
                t = y0 - q * y1;
                y0 = y1, y1 = t;
            }
            const Integer g = r0;
            Sparse nb = combine(x0, b, y0, v);
            Sparse nv = combine(c / g, b, -(a / g), v);
            b = std::move(nb);
            v = std::move(nv);
        }
    IntMatrix B(m, basis.size());
    std::size_t j = 0;
    for (const auto& [p, vec] : basis)
    {
        for (const auto& [i, val] : vec)
            B(i, j) = val;
        ++j;
    }
    return B;
}

}  // namespace hfib
