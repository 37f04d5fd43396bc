#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/phase_scalar.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace nilseq {

using Site = std::vector<long long>;

inline std::string site_str(const Site& s)
{
    std::string r = "(";
    for (std::size_t i = 0; i < s.size(); ++i)
        r += (i ? "," : "") + std::to_string(s[i]);
    return r + ")";
}

/// coeff * e(phase). Unitaries in this library only ever touch the exact
/// phase, so norms are preserved bit for bit.
struct Amplitude {
    std::complex<double> coeff;
    PhaseScalar phase;

    std::complex<double> value() const { return coeff * e(phase); }
};

/// Atom of the discrete sector: a joint eigenvector with one eigenphase per
/// generator.
struct AtomEntry {
    std::complex<double> coeff;
    std::vector<PhaseScalar> eigenphases;
};

/// Finitely supported vector in l^2(Z^delta), plus an optional atomic part.
class SparseVector {
public:
    SparseVector() = default;
    explicit SparseVector(std::size_t dim) : dim_(dim) {}

    static SparseVector delta(const Site& s, std::complex<double> c = 1.0)
    {
        SparseVector v(s.size());
        v.add(s, c);
        return v;
    }

    std::size_t dim() const noexcept { return dim_; }
    const std::map<Site, Amplitude>& sites() const noexcept { return sites_; }
    const std::map<std::string, AtomEntry>& atoms() const noexcept { return atoms_; }
    bool empty() const noexcept { return sites_.empty() && atoms_.empty(); }

    /// Adds c * e(phase) at s; merging with an existing entry materializes it.
    void add(const Site& s, std::complex<double> c, const PhaseScalar& phase = {})
    {
        if (s.size() != dim_)
            throw error(errc::dimension_mismatch, "site " + site_str(s) + " in a " + std::to_string(dim_) + "-dimensional vector");
        if (c == std::complex<double>(0.0))
            return;
        auto it = sites_.find(s);
        if (it == sites_.end()) {
            sites_.emplace(s, Amplitude{c, phase});
            return;
        }
        if (it->second.phase == phase) {
            it->second.coeff += c;
        } else {
            it->second = Amplitude{it->second.value() + c * e(phase), PhaseScalar()};
        }
        if (it->second.coeff == std::complex<double>(0.0))
            sites_.erase(it);
    }

    void set(const Site& s, Amplitude a)
    {
        if (s.size() != dim_)
            throw error(errc::dimension_mismatch, "site " + site_str(s) + " in a " + std::to_string(dim_) + "-dimensional vector");
        if (a.coeff == std::complex<double>(0.0))
            sites_.erase(s);
        else
            sites_[s] = std::move(a);
    }

    void add_atom(const std::string& id, std::complex<double> c, std::vector<PhaseScalar> eigenphases)
    {
        if (c == std::complex<double>(0.0))
            return;
        auto [it, fresh] = atoms_.try_emplace(id, AtomEntry{c, eigenphases});
        if (!fresh) {
            if (!(it->second.eigenphases == eigenphases))
                throw error(errc::invalid_argument, "atom '" + id + "' redeclared with different eigenphases");
            it->second.coeff += c;
        }
    }

    std::complex<double> at(const Site& s) const
    {
        auto it = sites_.find(s);
        return it == sites_.end() ? std::complex<double>(0.0) : it->second.value();
    }

    double norm_sq() const
    {
        double s = 0.0;
        for (const auto& [k, a] : sites_)
            s += std::norm(a.coeff);
        for (const auto& [k, a] : atoms_)
            s += std::norm(a.coeff);
        return s;
    }

    double norm() const { return std::sqrt(norm_sq()); }

    /// Site part only.
    SparseVector lattice_part() const
    {
        SparseVector v(dim_);
        v.sites_ = sites_;
        return v;
    }

    SparseVector atomic_part() const
    {
        SparseVector v(dim_);
        v.atoms_ = atoms_;
        return v;
    }

private:
    std::size_t dim_ = 0;
    std::map<Site, Amplitude> sites_;
    std::map<std::string, AtomEntry> atoms_;
};

/// <a, b> = sum a_k conj(b_k), lattice and atomic parts together.
inline std::complex<double> inner(const SparseVector& a, const SparseVector& b)
{
    std::complex<double> s(0.0);
    for (const auto& [k, amp] : a.sites()) {
        auto it = b.sites().find(k);
        if (it != b.sites().end())
            s += amp.value() * std::conj(it->second.value());
    }
    for (const auto& [k, amp] : a.atoms()) {
        auto it = b.atoms().find(k);
        if (it != b.atoms().end())
            s += amp.coeff * std::conj(it->second.coeff);
    }
    return s;
}

} // namespace nilseq
