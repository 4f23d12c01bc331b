#pragma once

// Finite fields F_q, q = p^e, and towers F_q[v]/(g) over them.
//
// Every element is a 32-bit index: the base-p digits of its coordinate
// vector in the tower's monomial basis, constant coordinate least
// significant.  Two consequences used throughout the library:
//   - the enumeration order of elements is the index order, and
//   - an element of a base field keeps its index inside any tower built on
//     top of it (constants embed as constant polynomials).
//
// Prime fields compute directly mod p.  Proper extensions are limited to
// kEnumerationLimit elements and multiply through discrete log tables built
// from a primitive element at construction time.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dhyper/error.hpp"

namespace dhyper::gf {

struct Element
{
    std::uint32_t index = 0;

    friend constexpr bool operator==(Element, Element) = default;
    friend constexpr auto operator<=>(Element, Element) = default;
};

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Distinct prime divisors of n, ascending.
inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field
{
    struct Private
    {
    };

  public:
    /// Z/p.  p must be a prime below 2^32.
    static FieldPtr prime(std::uint64_t p)
    {
        if (!is_prime(p))
            throw ValidationError("p = " + std::to_string(p) + " is not prime");
        if (p > 0xFFFFFFFFull)
            throw ResourceError("characteristic too large");
        return std::make_shared<const Field>(Private{}, p);
    }

    /// base[X]/(modulus) with modulus monic, low degree first, of degree >= 2.
    /// Throws ValidationError if the quotient ring is not a field.
    static FieldPtr extension(FieldPtr base, std::vector<Element> modulus)
    {
        if (!base)
            throw ValidationError("extension of a null field");
        if (modulus.size() < 3 || modulus.back() != base->one())
            throw ValidationError("extension modulus must be monic of degree >= 2");
        for (auto c : modulus)
            base->check(c);
        return std::make_shared<const Field>(Private{}, std::move(base), std::move(modulus));
    }

    Field(Private, std::uint64_t p)
        : p_(static_cast<std::uint32_t>(p)), degree_(1), size_(p)
    {
    }

    Field(Private, FieldPtr base, std::vector<Element> modulus)
        : p_(base->p_),
          base_(std::move(base)),
          modulus_(std::move(modulus))
    {
        relative_degree_ = static_cast<unsigned>(modulus_.size() - 1);
        degree_ = base_->degree_ * relative_degree_;
        depth_ = base_->depth_ + 1;
        long double approx = 1;
        for (unsigned i = 0; i < relative_degree_; ++i)
            approx *= static_cast<long double>(base_->size_);
        if (approx > static_cast<long double>(kEnumerationLimit))
            throw ResourceError("field of size " + base_->size_string() + "^" +
                                std::to_string(relative_degree_) + " exceeds the enumeration limit " +
                                std::to_string(kEnumerationLimit));
        size_ = 1;
        for (unsigned i = 0; i < relative_degree_; ++i)
            size_ *= base_->size_;
        build_tables();
    }

    std::uint32_t characteristic() const { return p_; }
    /// Degree over the prime field.
    unsigned degree() const { return degree_; }
    /// Degree over the immediate base field (1 for a prime field).
    unsigned relative_degree() const { return relative_degree_; }
    std::uint64_t size() const { return size_; }
    bool odd_characteristic() const { return p_ != 2; }
    bool is_prime_field() const { return base_ == nullptr; }
    unsigned depth() const { return depth_; }
    FieldPtr const & base() const { return base_; }
    std::vector<Element> const & modulus() const { return modulus_; }

    Element zero() const { return {0}; }
    Element one() const { return {1}; }

    /// Image of an integer under Z -> F_p -> this field.
    Element from_integer(std::int64_t n) const
    {
        std::int64_t r = n % static_cast<std::int64_t>(p_);
        if (r < 0)
            r += p_;
        return {static_cast<std::uint32_t>(r)};
    }

    Element element(std::uint64_t index) const
    {
        if (index >= size_)
            throw ValidationError("element index out of range");
        return {static_cast<std::uint32_t>(index)};
    }

    /// The class of the adjoined variable.
    Element generator() const
    {
        if (is_prime_field())
            throw ValidationError("a prime field has no adjoined generator");
        return {static_cast<std::uint32_t>(base_->size_)};
    }

    void check(Element a) const
    {
        if (a.index >= size_)
            throw ValidationError("element does not belong to this field");
    }

    Element add(Element a, Element b) const
    {
        if (is_prime_field()) {
            std::uint64_t s = std::uint64_t{a.index} + b.index;
            return {static_cast<std::uint32_t>(s >= p_ ? s - p_ : s)};
        }
        std::uint32_t x = a.index, y = b.index, r = 0, scale = 1;
        for (unsigned i = 0; i < degree_; ++i) {
            std::uint32_t d = x % p_ + y % p_;
            if (d >= p_)
                d -= p_;
            r += d * scale;
            scale *= p_;
            x /= p_;
            y /= p_;
        }
        return {r};
    }

    Element neg(Element a) const
    {
        if (is_prime_field())
            return {a.index == 0 ? 0 : p_ - a.index};
        std::uint32_t x = a.index, r = 0, scale = 1;
        for (unsigned i = 0; i < degree_; ++i) {
            std::uint32_t d = x % p_;
            r += (d == 0 ? 0 : p_ - d) * scale;
            scale *= p_;
            x /= p_;
        }
        return {r};
    }

    Element sub(Element a, Element b) const { return add(a, neg(b)); }

    Element mul(Element a, Element b) const
    {
        if (is_prime_field())
            return {static_cast<std::uint32_t>(std::uint64_t{a.index} * b.index % p_)};
        if (a.index == 0 || b.index == 0)
            return zero();
        std::uint64_t order = size_ - 1;
        return {exp_[(std::uint64_t{log_[a.index]} + log_[b.index]) % order]};
    }

    Element inv(Element a) const
    {
        if (a.index == 0)
            throw ValidationError("inversion of zero");
        if (is_prime_field())
            return pow(a, p_ - 2);
        std::uint64_t order = size_ - 1;
        return {exp_[(order - log_[a.index]) % order]};
    }

    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    Element pow(Element a, std::uint64_t n) const
    {
        Element result = one();
        while (n) {
            if (n & 1)
                result = mul(result, a);
            a = mul(a, a);
            n >>= 1;
        }
        return result;
    }

    /// Euler's criterion.  Odd characteristic only.
    bool is_square(Element a) const
    {
        require_odd("quadratic character");
        if (a.index == 0)
            return true;
        return pow(a, (size_ - 1) / 2) == one();
    }

    /// First non-square in enumeration order.
    Element canonical_nonsquare() const
    {
        require_odd("non-square selection");
        for (std::uint64_t i = 1; i < size_; ++i)
            if (!is_square({static_cast<std::uint32_t>(i)}))
                return {static_cast<std::uint32_t>(i)};
        throw InconsistencyError("no non-square found in an odd-characteristic field");
    }

    std::vector<Element> elements() const
    {
        if (size_ > kEnumerationLimit)
            throw ResourceError("cannot enumerate a field of size " + size_string());
        std::vector<Element> out(size_);
        for (std::uint64_t i = 0; i < size_; ++i)
            out[i] = {static_cast<std::uint32_t>(i)};
        return out;
    }

    /// Coordinates over the immediate base field, constant term first.
    std::vector<Element> coordinates(Element a) const
    {
        if (is_prime_field())
            return {a};
        std::vector<Element> out(relative_degree_);
        std::uint64_t x = a.index;
        for (auto & c : out) {
            c = {static_cast<std::uint32_t>(x % base_->size_)};
            x /= base_->size_;
        }
        return out;
    }

    Element from_coordinates(std::vector<Element> const & coords) const
    {
        if (is_prime_field())
            return coords.empty() ? zero() : coords.front();
        std::uint64_t index = 0, scale = 1;
        for (unsigned i = 0; i < relative_degree_; ++i) {
            if (i < coords.size())
                index += coords[i].index * scale;
            scale *= base_->size_;
        }
        return {static_cast<std::uint32_t>(index)};
    }

    /// True if `sub` is this field or one of the fields this tower is built
    /// over, so its elements are constants here.
    bool contains_as_constants(Field const & sub) const
    {
        for (Field const * f = this; f; f = f->base_.get())
            if (f->same_as(sub))
                return true;
        return false;
    }

    bool same_as(Field const & other) const
    {
        if (this == &other)
            return true;
        if (p_ != other.p_ || degree_ != other.degree_ || depth_ != other.depth_ ||
            modulus_ != other.modulus_)
            return false;
        if (!base_)
            return !other.base_;
        return other.base_ && base_->same_as(*other.base_);
    }

    /// Name of the adjoined variable at this level: u, v, w, ...
    std::string symbol() const
    {
        static constexpr char names[] = "uvwxyz";
        return depth_ == 0 ? std::string{} : std::string(1, names[(depth_ - 1) % 6]);
    }

    /// Text form: decimal for prime fields, otherwise a polynomial in
    /// symbol() with base-field coefficients ("u+2", "(u+1)v^2+v").
    std::string format(Element a) const
    {
        if (is_prime_field())
            return std::to_string(a.index);
        auto coords = coordinates(a);
        std::string out;
        for (int k = static_cast<int>(relative_degree_) - 1; k >= 0; --k) {
            Element c = coords[k];
            if (c.index == 0)
                continue;
            std::string cs = base_->format(c);
            if (!out.empty())
                out += '+';
            if (k == 0) {
                out += cs;
                continue;
            }
            if (c != base_->one())
                out += (cs.find('+') != std::string::npos) ? "(" + cs + ")" : cs;
            out += symbol();
            if (k > 1)
                out += "^" + std::to_string(k);
        }
        return out.empty() ? "0" : out;
    }

    /// The modulus as text in symbol(), e.g. "u^2+1"; empty for a prime field.
    std::string modulus_text() const
    {
        if (is_prime_field())
            return {};
        std::string out;
        for (int k = static_cast<int>(relative_degree_); k >= 0; --k) {
            Element c = modulus_[static_cast<std::size_t>(k)];
            if (c.index == 0)
                continue;
            std::string cs = base_->format(c);
            if (!out.empty())
                out += '+';
            if (k == 0) {
                out += cs;
                continue;
            }
            if (c != base_->one())
                out += (cs.find('+') != std::string::npos) ? "(" + cs + ")" : cs;
            out += symbol();
            if (k > 1)
                out += "^" + std::to_string(k);
        }
        return out;
    }

    /// e.g. "F_3", "F_9 = F_3[u]/(u^2+1)".
    std::string describe() const
    {
        if (is_prime_field())
            return describe_name();
        return describe_name() + " = " + base_->describe_name() + "[" + symbol() + "]/(" + modulus_text() + ")";
    }

    std::string describe_name() const { return "F_" + std::to_string(size_); }

  private:
    void require_odd(char const * what) const
    {
        if (!odd_characteristic())
            throw ValidationError(std::string(what) + " requires odd characteristic");
    }

    std::string size_string() const { return std::to_string(size_); }

    // Schoolbook product in base[X] reduced by the modulus.  Only used to
    // build the log tables.
    Element mul_structural(Element a, Element b) const
    {
        auto const & B = *base_;
        unsigned m = relative_degree_;
        auto x = coordinates(a), y = coordinates(b);
        std::vector<Element> prod(2 * m - 1, B.zero());
        for (unsigned i = 0; i < m; ++i) {
            if (x[i].index == 0)
                continue;
            for (unsigned j = 0; j < m; ++j)
                prod[i + j] = B.add(prod[i + j], B.mul(x[i], y[j]));
        }
        for (unsigned k = 2 * m - 2; k >= m; --k) {
            Element c = prod[k];
            if (c.index == 0)
                continue;
            for (unsigned i = 0; i < m; ++i)
                prod[k - m + i] = B.sub(prod[k - m + i], B.mul(c, modulus_[i]));
            prod[k] = B.zero();
        }
        prod.resize(m);
        return from_coordinates(prod);
    }

    Element pow_structural(Element a, std::uint64_t n) const
    {
        Element result = one();
        while (n) {
            if (n & 1)
                result = mul_structural(result, a);
            a = mul_structural(a, a);
            n >>= 1;
        }
        return result;
    }

    void build_tables()
    {
        std::uint64_t order = size_ - 1;
        auto primes = prime_divisors(order);
        Element primitive{0};
        for (std::uint64_t i = 1; i < size_ && primitive.index == 0; ++i) {
            Element g{static_cast<std::uint32_t>(i)};
            if (pow_structural(g, order) != one())
                continue;
            bool full = std::all_of(primes.begin(), primes.end(),
                                    [&](std::uint64_t l) { return pow_structural(g, order / l) != one(); });
            if (full)
                primitive = g;
        }
        if (primitive.index == 0)
            throw ValidationError("extension modulus is reducible: quotient ring is not a field");
        exp_.resize(order);
        log_.assign(size_, 0);
        Element x = one();
        for (std::uint64_t k = 0; k < order; ++k) {
            exp_[k] = x.index;
            log_[x.index] = static_cast<std::uint32_t>(k);
            x = mul_structural(x, primitive);
        }
    }

    std::uint32_t p_ = 0;
    unsigned degree_ = 1;
    unsigned relative_degree_ = 1;
    unsigned depth_ = 0;
    std::uint64_t size_ = 0;
    FieldPtr base_;
    std::vector<Element> modulus_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

} // namespace dhyper::gf
