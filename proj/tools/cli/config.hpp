#pragma once

#include "nilseq/exactnum.hpp"
#include "nilseq/nctorus.hpp"
#include "nilseq/spectral.hpp"
#include "nilseq/torus.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

namespace nilseq::cli {

using json = nlohmann::json;

/// Raised while checking a config; maps to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] inline void invalid(const std::string& path, const std::string& msg) { throw ValidationError(path + ": " + msg); }

inline void check_keys(const json& j, const std::string& path, const std::set<std::string>& required,
                       const std::set<std::string>& optional = {})
{
    if (!j.is_object())
        invalid(path, "expected an object");
    for (const auto& [k, v] : j.items())
        if (!required.count(k) && !optional.count(k))
            invalid(path, "unknown key '" + k + "'");
    for (const auto& k : required)
        if (!j.contains(k))
            invalid(path, "missing key '" + k + "'");
}

inline const json& array_at(const json& j, const std::string& key, const std::string& path)
{
    const json& a = j.at(key);
    if (!a.is_array())
        invalid(path + "." + key, "expected an array");
    return a;
}

inline BigInt to_bigint(const json& j, const std::string& path)
{
    if (j.is_number_integer())
        return BigInt(j.get<long long>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos || s.find('-', 1) != std::string::npos)
            invalid(path, "'" + s + "' is not an integer");
        return BigInt(s);
    }
    invalid(path, "expected an integer");
}

inline long long to_ll(const json& j, const std::string& path)
{
    if (!j.is_number_integer())
        invalid(path, "expected an integer");
    return j.get<long long>();
}

inline std::uint64_t to_u64(const json& j, const std::string& path)
{
    if (!j.is_number_integer() || j.get<long long>() < 0)
        invalid(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

inline double to_double(const json& j, const std::string& path)
{
    if (!j.is_number())
        invalid(path, "expected a number");
    return j.get<double>();
}

inline std::string to_str(const json& j, const std::string& path)
{
    if (!j.is_string())
        invalid(path, "expected a string");
    return j.get<std::string>();
}

inline bool to_bool(const json& j, const std::string& path)
{
    if (!j.is_boolean())
        invalid(path, "expected true or false");
    return j.get<bool>();
}

/// Phase literals are strings over declared generators, or plain integers.
inline PhaseScalar to_phase(const json& j, const GeneratorTable& g, const std::string& path)
{
    if (j.is_number_integer())
        return PhaseScalar(j.get<long long>());
    try {
        return parse_phase(to_str(j, path), g);
    } catch (const error& e) {
        invalid(path, e.what());
    }
}

inline std::vector<PhaseScalar> to_phases(const json& j, const GeneratorTable& g, const std::string& path)
{
    if (!j.is_array())
        invalid(path, "expected an array of phase literals");
    std::vector<PhaseScalar> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(to_phase(j[i], g, path + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::vector<BigInt> to_ints(const json& j, const std::string& path)
{
    if (!j.is_array())
        invalid(path, "expected an array of integers");
    std::vector<BigInt> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(to_bigint(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline IntMatrix to_matrix(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty())
        invalid(path, "expected a nonempty square array of integer rows");
    std::vector<std::vector<BigInt>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        rows.push_back(to_ints(j[i], path + "[" + std::to_string(i) + "]"));
        if (rows.back().size() != j.size())
            invalid(path, "matrix must be square");
    }
    return IntMatrix::from_rows(rows);
}

inline GeneratorTable to_generators(const json& j, const std::string& path)
{
    GeneratorTable g;
    if (!j.is_object())
        invalid(path, "expected an object of id -> value");
    for (const auto& [id, v] : j.items()) {
        try {
            g.declare(id, to_str(v, path + "." + id));
        } catch (const error& e) {
            invalid(path + "." + id, e.what());
        }
    }
    return g;
}

inline PhasePolynomial to_phase_poly(const json& j, const GeneratorTable& g, const std::string& path)
{
    check_keys(j, path, {"coeffs"}, {"basis"});
    Basis basis = Basis::monomial;
    if (j.contains("basis")) {
        const auto b = to_str(j.at("basis"), path + ".basis");
        if (b == "binomial")
            basis = Basis::binomial;
        else if (b != "monomial")
            invalid(path + ".basis", "expected 'monomial' or 'binomial'");
    }
    return PhasePolynomial(basis, to_phases(j.at("coeffs"), g, path + ".coeffs"));
}

/// Integer-valued polynomial from binomial-basis coefficients.
inline IntegralPolynomial to_integral_poly(const json& j, const std::string& path)
{
    return IntegralPolynomial(to_ints(j, path));
}

inline Site to_site(const json& j, const std::string& path)
{
    Site s;
    for (const auto& v : to_ints(j, path))
        s.push_back(detail::to_ll(v, "site coordinate"));
    return s;
}

inline std::complex<double> to_complex(const json& j, const std::string& path)
{
    return {j.contains("re") ? to_double(j.at("re"), path + ".re") : 0.0, j.contains("im") ? to_double(j.at("im"), path + ".im") : 0.0};
}

/// [{site, re, im}] on Z^dim.
inline SparseVector to_state_vector(const json& j, std::size_t dim, const std::string& path)
{
    if (!j.is_array())
        invalid(path, "expected an array of {site, re, im}");
    SparseVector v(dim);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        check_keys(j[i], p, {"site"}, {"re", "im"});
        Site s = to_site(j[i].at("site"), p + ".site");
        if (s.size() != dim)
            invalid(p + ".site", "expected " + std::to_string(dim) + " coordinates");
        v.add(s, to_complex(j[i], p));
    }
    return v;
}

/// {sites: [...], atoms: [{id, re, im, eigenphases}]}.
inline SparseVector to_sparse_vector(const json& j, std::size_t dim, std::size_t generators, const GeneratorTable& g,
                                     const std::string& path)
{
    check_keys(j, path, {}, {"sites", "atoms"});
    SparseVector v = j.contains("sites") ? to_state_vector(j.at("sites"), dim, path + ".sites") : SparseVector(dim);
    if (j.contains("atoms")) {
        const json& a = array_at(j, "atoms", path);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string p = path + ".atoms[" + std::to_string(i) + "]";
            check_keys(a[i], p, {"id", "eigenphases"}, {"re", "im"});
            auto ph = to_phases(a[i].at("eigenphases"), g, p + ".eigenphases");
            if (ph.size() != generators)
                invalid(p + ".eigenphases", "expected one eigenphase per generator (" + std::to_string(generators) + ")");
            try {
                v.add_atom(to_str(a[i].at("id"), p + ".id"), to_complex(a[i], p), ph);
            } catch (const error& e) {
                invalid(p, e.what());
            }
        }
    }
    return v;
}

inline ThetaMatrix to_theta(const json& j, const GeneratorTable& g, const std::string& path)
{
    if (!j.is_array() || j.empty())
        invalid(path, "expected a square array of phase literals");
    std::vector<std::vector<PhaseScalar>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        rows.push_back(to_phases(j[i], g, path + "[" + std::to_string(i) + "]"));
        if (rows.back().size() != j.size())
            invalid(path, "theta must be square");
    }
    try {
        return ThetaMatrix(rows);
    } catch (const error& e) {
        invalid(path, e.what());
    }
}

/// word = {exponents, phase}.
inline WeylWord to_word(const json& j, const GeneratorTable& g, std::size_t dim, const std::string& path)
{
    check_keys(j, path, {"exponents"}, {"phase"});
    auto x = to_ints(j.at("exponents"), path + ".exponents");
    if (x.size() != dim)
        invalid(path + ".exponents", "expected " + std::to_string(dim) + " exponents");
    return WeylWord::monomial(std::move(x), j.contains("phase") ? to_phase(j.at("phase"), g, path + ".phase") : PhaseScalar());
}

inline ShiftPhaseOperator to_operator(const json& j, const GeneratorTable& g, std::size_t dim, const std::string& path)
{
    check_keys(j, path, {}, {"shift", "phase", "form"});
    ShiftPhaseOperator w = ShiftPhaseOperator::identity(dim);
    if (j.contains("shift"))
        w.r = to_site(j.at("shift"), path + ".shift");
    if (j.contains("phase"))
        w.phi = to_phase(j.at("phase"), g, path + ".phase");
    if (j.contains("form"))
        w.form = to_phases(j.at("form"), g, path + ".form");
    if (w.r.size() != dim || w.form.size() != dim)
        invalid(path, "shift and form need " + std::to_string(dim) + " entries");
    return w;
}

} // namespace nilseq::cli
