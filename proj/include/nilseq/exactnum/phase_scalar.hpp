#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/bigint.hpp"

#include <boost/math/constants/constants.hpp>

#include <cctype>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace nilseq {

/// A declared irrational generator. Generators are assumed rationally
/// independent of each other and of 1; nothing here verifies that.
struct Generator {
    std::string id;
    std::string label;
    HighPrec value;
};

using GeneratorRef = std::shared_ptr<const Generator>;

/// Exact element of Q + Q*g_1 + ... + Q*g_k. Irrational coefficients are never
/// reduced; reduce_mod_1 only touches the rational part.
class PhaseScalar {
public:
    struct Term {
        Rational coeff;
        GeneratorRef gen;
    };

    PhaseScalar() = default;
    PhaseScalar(Rational r) : rat_(std::move(r)) {}
    PhaseScalar(long long r) : rat_(r) {}
    PhaseScalar(const BigInt& r) : rat_(r) {}

    static PhaseScalar generator(GeneratorRef g, Rational coeff = 1)
    {
        PhaseScalar s;
        if (coeff != 0) {
            std::string id = g->id;
            s.irr_.emplace(std::move(id), Term{std::move(coeff), std::move(g)});
        }
        return s;
    }

    const Rational& rational_part() const noexcept { return rat_; }
    const std::map<std::string, Term>& irrational_terms() const noexcept { return irr_; }
    bool is_rational() const noexcept { return irr_.empty(); }
    bool is_zero() const noexcept { return irr_.empty() && rat_ == 0; }

    /// Equal iff rational parts and all generator coefficients agree.
    bool operator==(const PhaseScalar& o) const
    {
        if (rat_ != o.rat_ || irr_.size() != o.irr_.size())
            return false;
        for (auto a = irr_.begin(), b = o.irr_.begin(); a != irr_.end(); ++a, ++b)
            if (a->first != b->first || a->second.coeff != b->second.coeff)
                return false;
        return true;
    }

    PhaseScalar& operator+=(const PhaseScalar& o)
    {
        rat_ += o.rat_;
        for (const auto& [id, t] : o.irr_) {
            auto it = irr_.find(id);
            if (it == irr_.end()) {
                irr_.emplace(id, t);
                continue;
            }
            if (it->second.gen != t.gen && it->second.gen->value != t.gen->value)
                throw error(errc::generator_conflict, "generator '" + id + "' declared with two different values");
            it->second.coeff += t.coeff;
            if (it->second.coeff == 0)
                irr_.erase(it);
        }
        return *this;
    }

    PhaseScalar& operator-=(const PhaseScalar& o) { return *this += -o; }

    PhaseScalar& operator*=(const Rational& k)
    {
        if (k == 0) {
            rat_ = 0;
            irr_.clear();
            return *this;
        }
        rat_ *= k;
        for (auto& [id, t] : irr_)
            t.coeff *= k;
        return *this;
    }

    friend PhaseScalar operator+(PhaseScalar a, const PhaseScalar& b) { return a += b; }
    friend PhaseScalar operator-(PhaseScalar a, const PhaseScalar& b) { return a -= b; }
    friend PhaseScalar operator*(PhaseScalar a, const Rational& k) { return a *= k; }
    friend PhaseScalar operator*(const Rational& k, PhaseScalar a) { return a *= k; }
    friend PhaseScalar operator*(PhaseScalar a, const BigInt& k) { return a *= Rational(k); }
    friend PhaseScalar operator*(const BigInt& k, PhaseScalar a) { return a *= Rational(k); }
    friend PhaseScalar operator*(PhaseScalar a, long long k) { return a *= Rational(k); }
    friend PhaseScalar operator*(long long k, PhaseScalar a) { return a *= Rational(k); }

    PhaseScalar operator-() const
    {
        PhaseScalar r = *this;
        r.rat_ = -r.rat_;
        for (auto& [id, t] : r.irr_)
            t.coeff = -t.coeff;
        return r;
    }

    /// Moves the rational part into [0, 1).
    PhaseScalar reduce_mod_1() const
    {
        PhaseScalar r = *this;
        r.rat_ = frac(r.rat_);
        return r;
    }

    /// Numeric value at high precision.
    HighPrec to_high() const
    {
        HighPrec v = to_high_rational(rat_);
        for (const auto& [id, t] : irr_)
            v += scaled_value(t);
        return v;
    }

    double to_float() const { return static_cast<double>(to_high()); }

    /// Fractional part of the value, in [0, 1). Each component is reduced
    /// separately so large integer multiples of a generator lose nothing.
    HighPrec frac_high() const
    {
        HighPrec f = to_high_rational(frac(rat_));
        for (const auto& [id, t] : irr_)
            f += frac(scaled_value(t));
        return frac(f);
    }

    double frac_double() const
    {
        double f = static_cast<double>(frac_high());
        return f >= 1.0 ? 0.0 : f;
    }

    /// Literal form, e.g. "1/3 + 2*g1".
    std::string str() const
    {
        std::string s;
        if (rat_ != 0 || irr_.empty())
            s = to_string(rat_);
        for (const auto& [id, t] : irr_) {
            Rational c = t.coeff;
            bool neg = c < 0;
            if (neg)
                c = -c;
            if (s.empty())
                s = neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            if (c != 1)
                s += to_string(c) + "*";
            s += id;
        }
        return s;
    }

private:
    static HighPrec to_high_rational(const Rational& r) { return nilseq::to_high(r); }

    static HighPrec scaled_value(const Term& t)
    {
        return HighPrec(boost::multiprecision::numerator(t.coeff)) * t.gen->value /
               HighPrec(boost::multiprecision::denominator(t.coeff));
    }

    Rational rat_ = 0;
    std::map<std::string, Term> irr_;
};

inline bool equal_mod_1(const PhaseScalar& a, const PhaseScalar& b)
{
    PhaseScalar d = a - b;
    return d.is_rational() && boost::multiprecision::denominator(d.rational_part()) == 1;
}

/// e(x) = exp(2 pi i x)
inline std::complex<double> cis(double turns)
{
    double f = turns - std::floor(turns);
    if (f >= 0.5)
        f -= 1.0;
    const double a = 2.0 * std::numbers::pi * f;
    return {std::cos(a), std::sin(a)};
}

inline std::complex<double> e(const PhaseScalar& x) { return cis(x.frac_double()); }

/// Registry of declared generators and of the products of generator pairs
/// that multiply() may use.
class GeneratorTable {
public:
    GeneratorRef declare(const std::string& id, const std::string& label, HighPrec value)
    {
        if (auto it = gens_.find(id); it != gens_.end()) {
            if (it->second->value != value)
                throw error(errc::generator_conflict, "generator '" + id + "' redeclared with a different value");
            return it->second;
        }
        auto g = std::make_shared<const Generator>(Generator{id, label, std::move(value)});
        gens_.emplace(id, g);
        return g;
    }

    /// Declaration syntax "label : decimal", e.g. "sqrt2 : 1.41421356237309504880".
    /// The value may be omitted for the labels sqrtN, pi and e, which are then
    /// computed at full precision.
    GeneratorRef declare(const std::string& id, std::string_view spec)
    {
        auto colon = spec.find(':');
        std::string label = trim(spec.substr(0, colon));
        std::string value = colon == std::string_view::npos ? std::string() : trim(spec.substr(colon + 1));
        if (!valid_identifier(id))
            throw error(errc::parse_error, "invalid generator id '" + id + "'");
        if (!value.empty()) {
            if (!valid_decimal(value))
                throw error(errc::parse_error, "invalid decimal value '" + value + "' for generator " + id);
            return declare(id, label, HighPrec(value));
        }
        if (auto v = named_constant(label))
            return declare(id, label, *v);
        throw error(errc::parse_error, "generator '" + id + "' needs a decimal value");
    }

    GeneratorRef get(const std::string& id) const
    {
        auto it = gens_.find(id);
        if (it == gens_.end())
            throw error(errc::parse_error, "undeclared generator '" + id + "'");
        return it->second;
    }

    bool contains(const std::string& id) const { return gens_.count(id) != 0; }
    const std::map<std::string, GeneratorRef>& generators() const noexcept { return gens_; }

    void declare_product(const std::string& a, const std::string& b, PhaseScalar value)
    {
        get(a);
        get(b);
        products_.insert_or_assign(key(a, b), std::move(value));
    }

    const PhaseScalar* product(const std::string& a, const std::string& b) const
    {
        auto it = products_.find(key(a, b));
        return it == products_.end() ? nullptr : &it->second;
    }

    static std::optional<HighPrec> named_constant(const std::string& label)
    {
        if (label == "pi")
            return boost::math::constants::pi<HighPrec>();
        if (label == "e")
            return boost::math::constants::e<HighPrec>();
        if (label.rfind("sqrt", 0) == 0 && label.size() > 4) {
            for (std::size_t i = 4; i < label.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(label[i])))
                    return std::nullopt;
            return boost::multiprecision::sqrt(HighPrec(label.substr(4)));
        }
        return std::nullopt;
    }

private:
    static std::pair<std::string, std::string> key(const std::string& a, const std::string& b)
    {
        return a < b ? std::pair{a, b} : std::pair{b, a};
    }

    static std::string trim(std::string_view s)
    {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return std::string(s);
    }

    static bool valid_identifier(const std::string& s)
    {
        if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
            return false;
        for (char c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                return false;
        return true;
    }

    static bool valid_decimal(const std::string& s)
    {
        std::size_t i = 0;
        if (i < s.size() && (s[i] == '-' || s[i] == '+'))
            ++i;
        bool digits = false, dot = false;
        for (; i < s.size(); ++i) {
            if (std::isdigit(static_cast<unsigned char>(s[i])))
                digits = true;
            else if (s[i] == '.' && !dot)
                dot = true;
            else
                return false;
        }
        return digits;
    }

    std::map<std::string, GeneratorRef> gens_;
    std::map<std::pair<std::string, std::string>, PhaseScalar> products_;
};

/// Product of two phase scalars. Defined when one side is rational, or when
/// every generator pair that occurs has a declared product in `table`.
inline PhaseScalar multiply(const PhaseScalar& a, const PhaseScalar& b, const GeneratorTable* table = nullptr)
{
    if (a.is_rational())
        return b * a.rational_part();
    if (b.is_rational())
        return a * b.rational_part();
    PhaseScalar r = PhaseScalar(a.rational_part() * b.rational_part());
    for (const auto& [id, t] : b.irrational_terms())
        r += PhaseScalar::generator(t.gen, t.coeff * a.rational_part());
    for (const auto& [id, t] : a.irrational_terms())
        r += PhaseScalar::generator(t.gen, t.coeff * b.rational_part());
    for (const auto& [ia, ta] : a.irrational_terms())
        for (const auto& [ib, tb] : b.irrational_terms()) {
            const PhaseScalar* p = table ? table->product(ia, ib) : nullptr;
            if (!p)
                throw error(errc::non_closed_product, "product " + ia + "*" + ib + " is not declared");
            r += *p * (ta.coeff * tb.coeff);
        }
    return r;
}

namespace detail {

class PhaseParser {
public:
    PhaseParser(std::string_view s, const GeneratorTable& table) : s_(s), table_(table) {}

    PhaseScalar parse()
    {
        PhaseScalar r;
        skip();
        bool first = true;
        while (pos_ < s_.size() || first) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            PhaseScalar t = term();
            r += sign > 0 ? t : -t;
            first = false;
            skip();
        }
        return r;
    }

private:
    PhaseScalar term()
    {
        Rational coeff = 1;
        GeneratorRef gen;
        bool first = true;
        char op = '*';
        while (true) {
            skip();
            if (std::isalpha(static_cast<unsigned char>(peek()))) {
                if (op == '/')
                    fail("division by a generator");
                if (gen)
                    fail("product of two generators in a literal");
                gen = table_.get(ident());
            } else {
                Rational v = number();
                if (op == '/') {
                    if (v == 0)
                        fail("division by zero");
                    coeff /= v;
                } else {
                    coeff *= v;
                }
            }
            first = false;
            skip();
            if (peek() == '*' || peek() == '/') {
                op = peek();
                ++pos_;
                continue;
            }
            break;
        }
        (void)first;
        return gen ? PhaseScalar::generator(gen, coeff) : PhaseScalar(coeff);
    }

    Rational number()
    {
        std::size_t start = pos_;
        BigInt whole = 0;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            whole = whole * 10 + (s_[pos_++] - '0');
        Rational v(whole);
        if (peek() == '.') {
            ++pos_;
            BigInt scale = 1;
            BigInt fracpart = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                fracpart = fracpart * 10 + (s_[pos_++] - '0');
                scale *= 10;
            }
            v += Rational(fracpart, scale);
        }
        if (pos_ == start)
            fail("expected a number or generator");
        return v;
    }

    std::string ident()
    {
        std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
            ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw error(errc::parse_error, "phase literal '" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view s_;
    const GeneratorTable& table_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses literals such as "1/3 + 2*g1", "-g2/5", "0.25".
inline PhaseScalar parse_phase(std::string_view literal, const GeneratorTable& table)
{
    return detail::PhaseParser(literal, table).parse();
}

} // namespace nilseq
