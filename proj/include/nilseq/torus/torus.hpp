#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/entropy.hpp"
#include "nilseq/exactnum/int_matrix.hpp"
#include "nilseq/exactnum/phase_polynomial.hpp"
#include "nilseq/exactnum/phase_scalar.hpp"
#include "nilseq/sequences/constructors.hpp"
#include "nilseq/sequences/stream.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nilseq {

/// Point of T^d; coordinates are kept reduced mod 1.
class TorusPoint {
public:
    TorusPoint() = default;
    explicit TorusPoint(std::vector<PhaseScalar> coords)
    {
        for (auto& c : coords)
            x_.push_back(c.reduce_mod_1());
    }

    std::size_t dim() const noexcept { return x_.size(); }
    const PhaseScalar& operator[](std::size_t i) const { return x_[i]; }
    const std::vector<PhaseScalar>& coords() const noexcept { return x_; }
    bool operator==(const TorusPoint&) const = default;

    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < x_.size(); ++i)
            s += (i ? ", " : "") + x_[i].str();
        return s + ")";
    }

private:
    std::vector<PhaseScalar> x_;
};

using Character = std::vector<BigInt>;

namespace detail {

inline PhaseScalar dot(const std::vector<BigInt>& v, const std::vector<PhaseScalar>& x)
{
    PhaseScalar s;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0)
            s += x[j] * v[j];
    return s;
}

inline void require_dims(const IntMatrix& a, std::size_t d, const char* what)
{
    if (a.dim() != d)
        throw error(errc::dimension_mismatch, std::string(what) + " has dimension " + std::to_string(d) + ", matrix is " +
                                                  std::to_string(a.dim()));
}

} // namespace detail

/// A^n x mod 1, exact; negative n uses the exact inverse.
inline TorusPoint orbit_point(const IntMatrix& a, const TorusPoint& x, long long n)
{
    a.require_gl();
    detail::require_dims(a, x.dim(), "point");
    IntMatrix an = a.pow(n);
    std::vector<PhaseScalar> y(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        std::vector<BigInt> row(x.dim());
        for (std::size_t j = 0; j < x.dim(); ++j)
            row[j] = an(i, j);
        y[i] = detail::dot(row, x.coords());
    }
    return TorusPoint(std::move(y));
}

/// <v, A^n x> mod 1 computed directly.
inline PhaseScalar character_phase(const IntMatrix& a, const TorusPoint& x, const Character& v, long long n)
{
    return detail::dot(v, orbit_point(a, x, n).coords()).reduce_mod_1();
}

struct CharacterSeq {
    SequenceStream stream;
    std::optional<EntropyReport> entropy;
    /// Residue r -> phase polynomial in t with a_{tm+r} = e(f_r(t)); zero entropy only.
    std::vector<PhasePolynomial> residue_polys;
    unsigned m = 0;
};

/// Polynomial form f_r(t) = sum_{i,j} v_i P_r(t)_{ij} x_j for zero-entropy A.
inline std::vector<PhasePolynomial> character_polys(const IntMatrix& a, unsigned m, const TorusPoint& x, const Character& v)
{
    auto polys = unipotent_power_polys(a, m);
    std::vector<PhasePolynomial> out;
    for (const auto& pm : polys) {
        PhasePolynomial f;
        for (std::size_t i = 0; i < x.dim(); ++i) {
            if (v[i] == 0)
                continue;
            for (std::size_t j = 0; j < x.dim(); ++j)
                if (!x[j].is_zero() && !pm(i, j).is_zero())
                    f = f + PhasePolynomial::from_integral(pm(i, j), x[j] * v[i]);
        }
        out.push_back(f.reduced_mod_1());
    }
    return out;
}

/// a_n = e(<v, A^n x>). Zero-entropy A gives the interleaved polynomial form,
/// tagged Nil; otherwise direct exact evaluation, tagged Unknown.
inline CharacterSeq character_seq(const IntMatrix& a, const TorusPoint& x, const Character& v)
{
    a.require_gl();
    detail::require_dims(a, x.dim(), "point");
    detail::require_dims(a, v.size(), "character");
    CharacterSeq out;
    out.entropy = classify_entropy(a);
    if (out.entropy->zero_entropy()) {
        out.m = *out.entropy->unipotence_order;
        out.residue_polys = character_polys(a, out.m, x, v);
        std::vector<SequenceStream> parts;
        for (const auto& f : out.residue_polys)
            parts.push_back(poly_exp(f));
        out.stream = interleave(parts, out.m).with_tag(interleave(parts, out.m).tag(), "character <v, A^n x>");
        return out;
    }
    out.stream = SequenceStream([a, x, v](std::int64_t n) { return e(character_phase(a, x, v, n)); }, 1.0, SeqTag::unknown(),
                                "character <v, A^n x> (positive entropy)");
    return out;
}

struct PolynomialFormReport {
    unsigned m = 0;
    std::vector<PhasePolynomial> residue_polys;
    long long checked = 0;
};

/// Checks e(<v, A^n x>) against the residue polynomial form for lo <= n <= hi,
/// exactly mod 1. Walks the orbit with one matrix product per step.
inline PolynomialFormReport verify_polynomial_form(const IntMatrix& a, const TorusPoint& x, const Character& v, long long lo,
                                                   long long hi)
{
    auto rep = classify_entropy(a);
    if (!rep.zero_entropy())
        throw error(errc::not_unipotent, "polynomial form needs a zero-entropy matrix");
    PolynomialFormReport out;
    out.m = *rep.unipotence_order;
    out.residue_polys = character_polys(a, out.m, x, v);
    const long long m = out.m;
    IntMatrix an = a.pow(lo);
    for (long long n = lo; n <= hi; ++n) {
        std::vector<PhaseScalar> y(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) {
            std::vector<BigInt> row(x.dim());
            for (std::size_t j = 0; j < x.dim(); ++j)
                row[j] = an(i, j);
            y[i] = detail::dot(row, x.coords());
        }
        PhaseScalar direct = detail::dot(v, y);
        long long r = ((n % m) + m) % m;
        long long t = (n - r) / m;
        if (!equal_mod_1(direct, out.residue_polys[static_cast<std::size_t>(r)].eval(t)))
            throw error(errc::mismatch_at, "polynomial form differs from the orbit at n = " + std::to_string(n));
        ++out.checked;
        an = a * an;
    }
    return out;
}

} // namespace nilseq
