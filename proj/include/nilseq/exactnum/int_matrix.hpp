#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/bigint.hpp"

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace nilseq {

/// Square matrix of arbitrary-precision integers, row-major.
class IntMatrix {
public:
    IntMatrix() = default;

    explicit IntMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) : dim_(rows.size()), a_()
    {
        a_.reserve(dim_ * dim_);
        for (const auto& row : rows) {
            if (row.size() != dim_)
                throw error(errc::dimension_mismatch, "IntMatrix rows must all have length " + std::to_string(dim_));
            for (long long v : row)
                a_.emplace_back(v);
        }
    }

    static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows)
    {
        IntMatrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw error(errc::dimension_mismatch, "matrix must be square");
            for (std::size_t j = 0; j < rows.size(); ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix identity(std::size_t dim)
    {
        IntMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }

    BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    bool operator==(const IntMatrix& o) const = default;

    IntMatrix operator+(const IntMatrix& o) const
    {
        check_same(o);
        IntMatrix r(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k)
            r.a_[k] = a_[k] + o.a_[k];
        return r;
    }

    IntMatrix operator-(const IntMatrix& o) const
    {
        check_same(o);
        IntMatrix r(dim_);
        for (std::size_t k = 0; k < a_.size(); ++k)
            r.a_[k] = a_[k] - o.a_[k];
        return r;
    }

    IntMatrix operator*(const IntMatrix& o) const
    {
        check_same(o);
        IntMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t k = 0; k < dim_; ++k) {
                const BigInt& aik = (*this)(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < dim_; ++j)
                    r(i, j) += aik * o(k, j);
            }
        return r;
    }

    IntMatrix scaled(const BigInt& c) const
    {
        IntMatrix r = *this;
        for (auto& v : r.a_)
            v *= c;
        return r;
    }

    std::vector<BigInt> apply(const std::vector<BigInt>& x) const
    {
        if (x.size() != dim_)
            throw error(errc::dimension_mismatch, "vector length does not match matrix dimension");
        std::vector<BigInt> y(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                y[i] += (*this)(i, j) * x[j];
        return y;
    }

    IntMatrix transpose() const
    {
        IntMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                r(j, i) = (*this)(i, j);
        return r;
    }

    bool is_zero() const
    {
        for (const auto& v : a_)
            if (v != 0)
                return false;
        return true;
    }

    /// Fraction-free Bareiss elimination.
    BigInt determinant() const
    {
        if (dim_ == 0)
            return 1;
        std::vector<BigInt> m = a_;
        auto at = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * dim_ + j]; };
        BigInt sign = 1;
        BigInt prev = 1;
        for (std::size_t k = 0; k + 1 < dim_; ++k) {
            if (at(k, k) == 0) {
                std::size_t p = k + 1;
                while (p < dim_ && at(p, k) == 0)
                    ++p;
                if (p == dim_)
                    return 0;
                for (std::size_t j = 0; j < dim_; ++j)
                    std::swap(at(k, j), at(p, j));
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < dim_; ++i) {
                for (std::size_t j = k + 1; j < dim_; ++j)
                    at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
                at(i, k) = 0;
            }
            prev = at(k, k);
        }
        return sign * at(dim_ - 1, dim_ - 1);
    }

    bool in_gl() const
    {
        BigInt d = determinant();
        return d == 1 || d == -1;
    }

    void require_gl() const
    {
        if (!in_gl())
            throw error(errc::not_in_gl, "determinant is " + determinant().str() + ", expected +-1");
    }

    /// Exact inverse of a GL(d, Z) matrix (Gauss-Jordan over the rationals).
    IntMatrix inverse() const
    {
        require_gl();
        std::vector<Rational> m(dim_ * 2 * dim_);
        const std::size_t w = 2 * dim_;
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j)
                m[i * w + j] = Rational((*this)(i, j));
            m[i * w + dim_ + i] = 1;
        }
        for (std::size_t c = 0; c < dim_; ++c) {
            std::size_t p = c;
            while (m[p * w + c] == 0)
                ++p;
            if (p != c)
                for (std::size_t j = 0; j < w; ++j)
                    std::swap(m[c * w + j], m[p * w + j]);
            Rational piv = m[c * w + c];
            for (std::size_t j = 0; j < w; ++j)
                m[c * w + j] /= piv;
            for (std::size_t i = 0; i < dim_; ++i) {
                if (i == c || m[i * w + c] == 0)
                    continue;
                Rational f = m[i * w + c];
                for (std::size_t j = 0; j < w; ++j)
                    m[i * w + j] -= f * m[c * w + j];
            }
        }
        IntMatrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                r(i, j) = boost::multiprecision::numerator(m[i * w + dim_ + j]);
        return r;
    }

    /// S^n for any integer n; negative n requires S in GL(d, Z).
    IntMatrix pow(long long n) const
    {
        IntMatrix base = n < 0 ? inverse() : *this;
        unsigned long long e = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1ULL : static_cast<unsigned long long>(n);
        IntMatrix r = identity(dim_);
        while (e) {
            if (e & 1ULL)
                r = r * base;
            e >>= 1;
            if (e)
                base = base * base;
        }
        return r;
    }

    std::string str() const
    {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < dim_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < dim_; ++j)
                os << (j ? "," : "") << (*this)(i, j);
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    void check_same(const IntMatrix& o) const
    {
        if (o.dim_ != dim_)
            throw error(errc::dimension_mismatch, "matrix dimensions differ");
    }

    std::size_t dim_ = 0;
    std::vector<BigInt> a_;
};

} // namespace nilseq
