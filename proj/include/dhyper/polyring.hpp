#pragma once

// A = F_q[T]: dense polynomials, Rabin irreducibility, squarefreeness,
// enumeration of places (monic irreducibles) and the quadratic residue
// symbol at a place.

#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dhyper/error.hpp"
#include "dhyper/gf.hpp"

namespace dhyper::poly {

using boost::multiprecision::cpp_int;
using gf::Element;
using gf::FieldPtr;

/// Degree of the zero polynomial.  Compare explicitly; never do arithmetic
/// with it.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

class Poly
{
  public:
    explicit Poly(FieldPtr field) : field_(std::move(field))
    {
        if (!field_)
            throw ValidationError("polynomial over a null field");
    }

    /// Coefficients low degree first; trailing zeros are trimmed.
    Poly(FieldPtr field, std::vector<Element> coeffs) : Poly(std::move(field))
    {
        for (auto c : coeffs)
            field_->check(c);
        coeffs_ = std::move(coeffs);
        trim();
    }

    static Poly constant(FieldPtr field, Element c) { return Poly(std::move(field), {c}); }

    static Poly monomial(FieldPtr field, Element c, int k)
    {
        std::vector<Element> v(static_cast<std::size_t>(k) + 1, field->zero());
        v.back() = c;
        return Poly(std::move(field), std::move(v));
    }

    /// The variable T.
    static Poly variable(FieldPtr field)
    {
        auto one = field->one();
        return monomial(std::move(field), one, 1);
    }

    gf::Field const & field() const { return *field_; }
    FieldPtr const & field_ptr() const { return field_; }
    std::span<Element const> coefficients() const { return coeffs_; }

    int degree() const { return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    /// Zero or a nonzero constant.
    bool is_constant() const { return coeffs_.size() <= 1; }

    Element coefficient(int k) const
    {
        if (k < 0 || k >= static_cast<int>(coeffs_.size()))
            return field_->zero();
        return coeffs_[static_cast<std::size_t>(k)];
    }

    Element leading() const { return coeffs_.empty() ? field_->zero() : coeffs_.back(); }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == field_->one(); }

    Poly scaled(Element c) const
    {
        std::vector<Element> out(coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            out[i] = field_->mul(coeffs_[i], c);
        return Poly(field_, std::move(out));
    }

    friend Poly operator+(Poly const & a, Poly const & b)
    {
        a.require_same(b);
        auto const & F = *a.field_;
        std::vector<Element> out(std::max(a.coeffs_.size(), b.coeffs_.size()), F.zero());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = F.add(a.coefficient(static_cast<int>(i)), b.coefficient(static_cast<int>(i)));
        return Poly(a.field_, std::move(out));
    }

    friend Poly operator-(Poly const & a)
    {
        std::vector<Element> out(a.coeffs_.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = a.field_->neg(a.coeffs_[i]);
        return Poly(a.field_, std::move(out));
    }

    friend Poly operator-(Poly const & a, Poly const & b) { return a + (-b); }

    friend Poly operator*(Poly const & a, Poly const & b)
    {
        a.require_same(b);
        if (a.is_zero() || b.is_zero())
            return Poly(a.field_);
        auto const & F = *a.field_;
        std::vector<Element> out(a.coeffs_.size() + b.coeffs_.size() - 1, F.zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].index == 0)
                continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                out[i + j] = F.add(out[i + j], F.mul(a.coeffs_[i], b.coeffs_[j]));
        }
        return Poly(a.field_, std::move(out));
    }

    friend bool operator==(Poly const & a, Poly const & b)
    {
        return a.coeffs_ == b.coeffs_ && a.field_->same_as(*b.field_);
    }

  private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back().index == 0)
            coeffs_.pop_back();
    }

    void require_same(Poly const & other) const
    {
        if (!field_->same_as(*other.field_))
            throw ValidationError("polynomials over different fields");
    }

    FieldPtr field_;
    std::vector<Element> coeffs_;
};

struct DivMod
{
    Poly quotient;
    Poly remainder;
};

inline DivMod divmod(Poly const & a, Poly const & b)
{
    if (b.is_zero())
        throw ValidationError("division by the zero polynomial");
    auto const & F = a.field();
    if (a.degree() < b.degree())
        return {Poly(a.field_ptr()), a};
    std::vector<Element> rem(a.coefficients().begin(), a.coefficients().end());
    std::vector<Element> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, F.zero());
    auto bc = b.coefficients();
    Element lead_inv = F.inv(b.leading());
    int db = b.degree();
    for (int k = a.degree(); k >= db; --k) {
        Element c = rem[static_cast<std::size_t>(k)];
        if (c.index == 0)
            continue;
        Element factor = F.mul(c, lead_inv);
        quo[static_cast<std::size_t>(k - db)] = factor;
        for (int i = 0; i <= db; ++i) {
            auto & r = rem[static_cast<std::size_t>(k - db + i)];
            r = F.sub(r, F.mul(factor, bc[static_cast<std::size_t>(i)]));
        }
    }
    return {Poly(a.field_ptr(), std::move(quo)), Poly(a.field_ptr(), std::move(rem))};
}

inline Poly operator%(Poly const & a, Poly const & b) { return divmod(a, b).remainder; }
inline Poly operator/(Poly const & a, Poly const & b) { return divmod(a, b).quotient; }

inline Poly monic(Poly const & a)
{
    if (a.is_zero())
        return a;
    return a.scaled(a.field().inv(a.leading()));
}

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline Poly derivative(Poly const & f)
{
    auto const & F = f.field();
    if (f.degree() < 1)
        return Poly(f.field_ptr());
    std::vector<Element> out(static_cast<std::size_t>(f.degree()));
    for (int k = 1; k <= f.degree(); ++k)
        out[static_cast<std::size_t>(k - 1)] = F.mul(F.from_integer(k), f.coefficient(k));
    return Poly(f.field_ptr(), std::move(out));
}

/// f(c) for c in the coefficient field.
inline Element eval(Poly const & f, Element c)
{
    auto const & F = f.field();
    Element acc = F.zero();
    auto cs = f.coefficients();
    for (auto it = cs.rbegin(); it != cs.rend(); ++it)
        acc = F.add(F.mul(acc, c), *it);
    return acc;
}

/// f(t) for t in a field `ext` that contains f's coefficient field as
/// constants (any tower built over it).
inline Element eval_in(Poly const & f, gf::Field const & ext, Element t)
{
    if (!ext.contains_as_constants(f.field()))
        throw ValidationError("evaluation field does not contain the coefficient field");
    Element acc = ext.zero();
    auto cs = f.coefficients();
    for (auto it = cs.rbegin(); it != cs.rend(); ++it)
        acc = ext.add(ext.mul(acc, t), *it);
    return acc;
}

inline Poly mulmod(Poly const & a, Poly const & b, Poly const & m) { return (a * b) % m; }

inline Poly powmod(Poly base, cpp_int n, Poly const & m)
{
    Poly result = Poly::constant(m.field_ptr(), m.field().one()) % m;
    base = base % m;
    while (n > 0) {
        if (bit_test(n, 0))
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        n >>= 1;
    }
    return result;
}

/// Rabin's test: f of degree d is irreducible iff T^{q^d} = T mod f and
/// gcd(T^{q^{d/l}} - T, f) = 1 for every prime l | d.
inline bool is_irreducible(Poly const & f)
{
    int d = f.degree();
    if (d < 1)
        throw ValidationError("irreducibility test on a constant polynomial");
    if (d == 1)
        return true;
    auto const & field = f.field_ptr();
    std::uint64_t q = field->size();
    Poly T = Poly::variable(field);
    Poly fm = monic(f);

    // frob[k] = T^{q^k} mod f
    std::vector<Poly> frob;
    frob.reserve(static_cast<std::size_t>(d) + 1);
    frob.push_back(T % fm);
    for (int k = 1; k <= d; ++k)
        frob.push_back(powmod(frob.back(), cpp_int(q), fm));
    if (!(frob[static_cast<std::size_t>(d)] == T % fm))
        return false;
    for (auto l : gf::prime_divisors(static_cast<std::uint64_t>(d))) {
        Poly g = gcd(frob[static_cast<std::size_t>(d / static_cast<int>(l))] - T, fm);
        if (g.degree() != 0)
            return false;
    }
    return true;
}

/// gcd(a, a') is constant.  Odd characteristic, a nonzero.
inline bool is_squarefree(Poly const & a)
{
    if (a.is_zero())
        throw ValidationError("squarefreeness of the zero polynomial");
    if (!a.field().odd_characteristic())
        throw ValidationError("squarefreeness test requires odd characteristic");
    if (a.degree() == 0)
        return true;
    return gcd(a, derivative(a)).degree() == 0;
}

/// Enumeration order: degree, then coefficients compared from the top
/// down (constant term least significant).
inline std::strong_ordering compare(Poly const & a, Poly const & b)
{
    if (a.is_zero() || b.is_zero())
        return b.is_zero() <=> a.is_zero();
    if (auto c = a.degree() <=> b.degree(); c != 0)
        return c;
    for (int k = a.degree(); k >= 0; --k)
        if (auto c = a.coefficient(k) <=> b.coefficient(k); c != 0)
            return c;
    return std::strong_ordering::equal;
}

/// The monic polynomial of degree d whose lower coefficients are the
/// base-q digits of index.
inline Poly monic_from_index(FieldPtr const & field, int d, std::uint64_t index)
{
    std::uint64_t q = field->size();
    std::vector<Element> c(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k < d; ++k) {
        c[static_cast<std::size_t>(k)] = {static_cast<std::uint32_t>(index % q)};
        index /= q;
    }
    c.back() = field->one();
    return Poly(field, std::move(c));
}

/// q^d, or nothing if it exceeds the enumeration limit.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t q, int d)
{
    std::uint64_t r = 1;
    for (int i = 0; i < d; ++i) {
        if (r > kEnumerationLimit / q)
            return std::nullopt;
        r *= q;
    }
    return r;
}

inline std::uint64_t require_enumerable(std::uint64_t q, int d)
{
    auto n = bounded_power(q, d);
    if (!n)
        throw ResourceError(std::to_string(q) + "^" + std::to_string(d) + " exceeds the enumeration limit " +
                            std::to_string(kEnumerationLimit));
    return *n;
}

/// A finite place of F_q(T), i.e. a monic irreducible generator.
class Place
{
  public:
    explicit Place(Poly generator) : generator_(std::move(generator))
    {
        if (generator_.degree() < 1 || !generator_.is_monic())
            throw ValidationError("place generator must be monic of positive degree");
        if (!is_irreducible(generator_))
            throw ValidationError("place generator is reducible");
    }

    Poly const & generator() const { return generator_; }
    int degree() const { return generator_.degree(); }
    gf::Field const & field() const { return generator_.field(); }

    /// q_x = q^{deg x}.
    cpp_int residue_size() const
    {
        cpp_int r = 1;
        for (int i = 0; i < degree(); ++i)
            r *= generator_.field().size();
        return r;
    }

    friend bool operator==(Place const & a, Place const & b) { return a.generator_ == b.generator_; }
    friend std::strong_ordering operator<=>(Place const & a, Place const & b)
    {
        return compare(a.generator_, b.generator_);
    }

  private:
    struct Unchecked
    {
    };
    Place(Unchecked, Poly generator) : generator_(std::move(generator)) {}
    friend std::vector<Place> monic_irreducibles(int, FieldPtr const &);

    Poly generator_;
};

/// All monic irreducibles of degree d, in enumeration order.
inline std::vector<Place> monic_irreducibles(int d, FieldPtr const & field)
{
    if (d < 1)
        throw ValidationError("place degree must be positive");
    std::uint64_t count = require_enumerable(field->size(), d);
    std::vector<Place> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        Poly f = monic_from_index(field, d, i);
        if (is_irreducible(f))
            out.push_back(Place(Place::Unchecked{}, std::move(f)));
    }
    return out;
}

/// Quadratic character of (a mod f_x) in F_q[T]/(f_x): 0, +1 or -1.
/// No squarefreeness requirement on a.
inline int residue_character(Poly const & a, Place const & x)
{
    auto const & F = a.field();
    if (!F.odd_characteristic())
        throw ValidationError("residue symbol requires odd characteristic");
    if (!F.same_as(x.field()))
        throw ValidationError("residue symbol: polynomial and place over different fields");
    Poly r = a % x.generator();
    if (r.is_zero())
        return 0;
    Poly s = powmod(r, (x.residue_size() - 1) / 2, x.generator());
    if (s.degree() != 0)
        throw InconsistencyError("residue power is not a constant: place is not prime");
    if (s.leading() == F.one())
        return 1;
    if (s.leading() == F.neg(F.one()))
        return -1;
    throw InconsistencyError("residue power is not +-1: place is not prime");
}

/// Artin-Legendre symbol (F(sqrt a)/x) for squarefree a.
inline int residue_symbol(Poly const & a, Place const & x)
{
    if (!a.field().odd_characteristic())
        throw ValidationError("residue symbol requires odd characteristic");
    if (a.is_zero() || !is_squarefree(a))
        throw ValidationError("residue symbol needs a squarefree generator");
    return residue_character(a, x);
}

// ---------------------------------------------------------------------------
// Text syntax.  Sums of products of integers, T, the field generator u (for
// extension fields) and parenthesized subexpressions, with ^ exponents and
// optional *.  Integers are reduced mod p.

inline std::string format(Poly const & f)
{
    if (f.is_zero())
        return "0";
    auto const & F = f.field();
    std::string out;
    for (int k = f.degree(); k >= 0; --k) {
        Element c = f.coefficient(k);
        if (c.index == 0)
            continue;
        std::string cs = F.format(c);
        if (!out.empty())
            out += '+';
        if (k == 0) {
            out += cs;
            continue;
        }
        if (c != F.one())
            out += (cs.find('+') != std::string::npos) ? "(" + cs + ")" : cs;
        out += 'T';
        if (k > 1)
            out += "^" + std::to_string(k);
    }
    return out;
}

namespace detail {

class Parser
{
  public:
    Parser(FieldPtr field, std::string_view text) : field_(std::move(field)), text_(text) {}

    Poly parse()
    {
        Poly p = expr();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected character");
        return p;
    }

  private:
    [[noreturn]] void fail(std::string const & what) const
    {
        throw ValidationError("cannot parse polynomial \"" + std::string(text_) + "\" at position " +
                              std::to_string(pos_) + ": " + what);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek()
    {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_factor(char c) const
    {
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'T' || c == 'u' || c == '(';
    }

    Poly expr()
    {
        Poly acc(field_);
        bool first = true;
        for (;;) {
            char c = peek();
            bool negate = false;
            if (c == '+' || c == '-') {
                negate = c == '-';
                ++pos_;
            } else if (!first) {
                break;
            }
            Poly t = term();
            acc = negate ? acc - t : acc + t;
            first = false;
        }
        return acc;
    }

    Poly term()
    {
        Poly acc = factor();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * factor();
            } else if (starts_factor(c)) {
                acc = acc * factor();
            } else {
                break;
            }
        }
        return acc;
    }

    Poly factor()
    {
        Poly base = atom();
        if (peek() == '^') {
            ++pos_;
            skip_space();
            std::size_t start = pos_;
            std::uint64_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                n = n * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
                if (n > 100000)
                    fail("exponent too large");
                ++pos_;
            }
            if (pos_ == start)
                fail("expected exponent");
            Poly r = Poly::constant(field_, field_->one());
            for (std::uint64_t i = 0; i < n; ++i)
                r = r * base;
            return r;
        }
        return base;
    }

    Poly atom()
    {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint64_t r = 0, p = field_->characteristic();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                r = (r * 10 + static_cast<std::uint64_t>(text_[pos_] - '0')) % p;
                ++pos_;
            }
            return Poly::constant(field_, field_->from_integer(static_cast<std::int64_t>(r)));
        }
        if (c == 'T') {
            ++pos_;
            return Poly::variable(field_);
        }
        if (c == 'u') {
            if (field_->is_prime_field())
                fail("'u' used over a prime field");
            ++pos_;
            return Poly::constant(field_, field_->generator());
        }
        if (c == '(') {
            ++pos_;
            Poly inner = expr();
            if (peek() != ')')
                fail("expected ')'");
            ++pos_;
            return inner;
        }
        fail(c == '\0' ? "unexpected end of input" : "unexpected character");
    }

    FieldPtr field_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Poly parse(FieldPtr const & field, std::string_view text)
{
    return detail::Parser(field, text).parse();
}

} // namespace dhyper::poly
