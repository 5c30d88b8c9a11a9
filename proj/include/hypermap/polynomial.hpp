#pragma once

#include "hypermap/bigint.hpp"

#include <array>
#include <cctype>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hypermap {

/// Sparse polynomial in `Vars` variables with big-integer coefficients and integer
/// (possibly negative) exponents. Zero coefficients are never stored.
///
/// Terms iterate in the canonical print order: total degree descending, then the
/// exponent of the first variable descending, and so on.
template <std::size_t Vars>
class Polynomial {
public:
    using Exponents = std::array<int, Vars>;

    struct TermOrder {
        bool operator()(const Exponents& a, const Exponents& b) const
        {
            const int da = std::accumulate(a.begin(), a.end(), 0);
            const int db = std::accumulate(b.begin(), b.end(), 0);
            if (da != db) {
                return da > db;
            }
            return a > b;
        }
    };

    using Terms = std::map<Exponents, BigInt, TermOrder>;

    Polynomial() = default;

    static Polynomial constant(const BigInt& c)
    {
        Polynomial p;
        p.add_term(Exponents{}, c);
        return p;
    }

    static Polynomial monomial(const BigInt& c, const Exponents& e)
    {
        Polynomial p;
        p.add_term(e, c);
        return p;
    }

    static Polynomial variable(std::size_t index)
    {
        Exponents e{};
        e.at(index) = 1;
        return monomial(1, e);
    }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t term_count() const noexcept { return terms_.size(); }

    BigInt coefficient(const Exponents& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    void add_term(const Exponents& e, const BigInt& c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    /// Largest exponent of variable `index`; 0 for the zero polynomial.
    int degree(std::size_t index) const
    {
        if (terms_.empty()) {
            return 0;
        }
        int d = terms_.begin()->first.at(index);
        for (const auto& [e, c] : terms_) {
            d = std::max(d, e.at(index));
        }
        return d;
    }

    int min_exponent(std::size_t index) const
    {
        if (terms_.empty()) {
            return 0;
        }
        int d = terms_.begin()->first.at(index);
        for (const auto& [e, c] : terms_) {
            d = std::min(d, e.at(index));
        }
        return d;
    }

    /// Sum of all coefficients.
    BigInt coefficient_sum() const
    {
        BigInt s = 0;
        for (const auto& [e, c] : terms_) {
            s += c;
        }
        return s;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        for (const auto& [e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o)
    {
        for (const auto& [e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }

    Polynomial& operator*=(const BigInt& s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) {
            c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a)
    {
        for (auto& [e, c] : a.terms_) {
            c = -c;
        }
        return a;
    }
    friend Polynomial operator*(Polynomial a, const BigInt& s) { return a *= s; }
    friend Polynomial operator*(const BigInt& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        Polynomial r;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e;
                for (std::size_t k = 0; k < Vars; ++k) {
                    e[k] = ea[k] + eb[k];
                }
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

    /// Single term with coefficient +1 or -1, i.e. invertible in the Laurent ring.
    bool is_unit_monomial() const
    {
        return terms_.size() == 1 && (terms_.begin()->second == 1 || terms_.begin()->second == -1);
    }

private:
    Terms terms_;
};

using UnivariatePolynomial = Polynomial<1>;
using BivariatePolynomial = Polynomial<2>;

/// p^k for k >= 0; negative k only for unit monomials.
template <std::size_t Vars>
Polynomial<Vars> pow(const Polynomial<Vars>& p, int k)
{
    if (k < 0) {
        if (!p.is_unit_monomial()) {
            throw std::domain_error("negative power of a non-monomial polynomial");
        }
        const auto& [e, c] = *p.terms().begin();
        typename Polynomial<Vars>::Exponents inv;
        for (std::size_t i = 0; i < Vars; ++i) {
            inv[i] = -e[i];
        }
        return pow(Polynomial<Vars>::monomial(c, inv), -k);
    }
    Polynomial<Vars> result = Polynomial<Vars>::constant(1);
    Polynomial<Vars> base = p;
    while (k > 0) {
        if (k & 1) {
            result *= base;
        }
        k >>= 1;
        if (k > 0) {
            base *= base;
        }
    }
    return result;
}

/// Replaces variable i by images[i].
template <std::size_t Vars, std::size_t Out>
Polynomial<Out> substitute(const Polynomial<Vars>& p, const std::array<Polynomial<Out>, Vars>& images)
{
    Polynomial<Out> result;
    for (const auto& [e, c] : p.terms()) {
        Polynomial<Out> term = Polynomial<Out>::constant(c);
        for (std::size_t i = 0; i < Vars; ++i) {
            if (e[i] != 0) {
                term *= pow(images[i], e[i]);
            }
        }
        result += term;
    }
    return result;
}

/// Exact evaluation; throws std::domain_error for 0 raised to a negative power.
template <std::size_t Vars>
Rational evaluate(const Polynomial<Vars>& p, const std::array<Rational, Vars>& point)
{
    Rational total = 0;
    for (const auto& [e, c] : p.terms()) {
        Rational term = Rational(c);
        for (std::size_t i = 0; i < Vars; ++i) {
            const int k = e[i];
            if (k < 0 && point[i] == 0) {
                throw std::domain_error("zero raised to a negative power");
            }
            Rational factor = 1;
            for (int j = 0; j < (k < 0 ? -k : k); ++j) {
                factor *= point[i];
            }
            term *= (k < 0 ? Rational(1) / factor : factor);
        }
        total += term;
    }
    return total;
}

/// Evaluation at integers; the result must be integral (throws otherwise).
template <std::size_t Vars>
BigInt evaluate_integer(const Polynomial<Vars>& p, const std::array<BigInt, Vars>& point)
{
    std::array<Rational, Vars> q;
    for (std::size_t i = 0; i < Vars; ++i) {
        q[i] = Rational(point[i]);
    }
    const Rational r = evaluate(p, q);
    if (boost::multiprecision::denominator(r) != 1) {
        throw std::domain_error("evaluation is not an integer");
    }
    return boost::multiprecision::numerator(r);
}

inline BivariatePolynomial swap_variables(const BivariatePolynomial& p)
{
    BivariatePolynomial r;
    for (const auto& [e, c] : p.terms()) {
        r.add_term({e[1], e[0]}, c);
    }
    return r;
}

/// R(u, v) -> R(u + du, v + dv). Raw substitution utility (e.g. du = dv = -1).
inline BivariatePolynomial shift_variables(const BivariatePolynomial& p, const BigInt& du, const BigInt& dv)
{
    const BivariatePolynomial u = BivariatePolynomial::variable(0) + BivariatePolynomial::constant(du);
    const BivariatePolynomial v = BivariatePolynomial::variable(1) + BivariatePolynomial::constant(dv);
    return substitute<2, 2>(p, {u, v});
}

template <std::size_t Vars>
using VariableNames = std::array<std::string_view, Vars>;

inline constexpr VariableNames<2> kWhitneyVariables{"u", "v"};

/// Canonical ASCII text, e.g. "u^2 + u*v + 4*u + v + 3"; the zero polynomial is "0".
template <std::size_t Vars>
std::string format(const Polynomial<Vars>& p, const VariableNames<Vars>& names)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        const bool negative = c < 0;
        const BigInt magnitude = negative ? BigInt(-c) : c;
        if (first) {
            if (negative) {
                out += '-';
            }
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;

        std::string mono;
        for (std::size_t i = 0; i < Vars; ++i) {
            if (e[i] == 0) {
                continue;
            }
            if (!mono.empty()) {
                mono += '*';
            }
            mono += names[i];
            if (e[i] != 1) {
                mono += '^';
                mono += std::to_string(e[i]);
            }
        }
        if (mono.empty()) {
            out += magnitude.str();
        } else if (magnitude == 1) {
            out += mono;
        } else {
            out += magnitude.str();
            out += '*';
            out += mono;
        }
    }
    return out;
}

inline std::string format(const BivariatePolynomial& p) { return format(p, kWhitneyVariables); }

inline std::string format(const UnivariatePolynomial& p, std::string_view name)
{
    return format(p, VariableNames<1>{name});
}

/// Parses sums of terms like "3*u^2*v^-1"; accepts any term order and whitespace.
template <std::size_t Vars>
Polynomial<Vars> parse_polynomial(std::string_view text, const VariableNames<Vars>& names)
{
    std::size_t pos = 0;
    auto fail = [&](const std::string& what) -> Polynomial<Vars> {
        throw std::invalid_argument("polynomial parse error at column " + std::to_string(pos + 1) + ": " + what);
    };
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    };
    auto read_int = [&]() -> std::string {
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        return std::string(text.substr(start, pos - start));
    };

    Polynomial<Vars> result;
    skip();
    if (pos == text.size()) {
        return fail("empty input");
    }
    bool first = true;
    while (true) {
        skip();
        if (pos == text.size()) {
            break;
        }
        int sign = 1;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
            skip();
        } else if (!first) {
            return fail("expected '+' or '-'");
        }
        first = false;

        BigInt coef = sign;
        typename Polynomial<Vars>::Exponents e{};
        bool need_factor = true;
        while (need_factor) {
            skip();
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                coef *= BigInt(read_int());
            } else {
                std::size_t which = Vars;
                for (std::size_t i = 0; i < Vars; ++i) {
                    if (text.substr(pos, names[i].size()) == names[i]) {
                        which = i;
                        break;
                    }
                }
                if (which == Vars) {
                    return fail("expected a number or variable");
                }
                pos += names[which].size();
                skip();
                int k = 1;
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    skip();
                    int exp_sign = 1;
                    if (pos < text.size() && text[pos] == '-') {
                        exp_sign = -1;
                        ++pos;
                    }
                    const std::string digits = read_int();
                    if (digits.empty()) {
                        return fail("expected exponent");
                    }
                    k = exp_sign * std::stoi(digits);
                }
                e[which] += k;
            }
            skip();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
            } else {
                need_factor = false;
            }
        }
        result.add_term(e, coef);
    }
    return result;
}

} // namespace hypermap
