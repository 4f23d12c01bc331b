#pragma once

// Hyperelliptic models z^2 = f over F_{q^m}: exhaustive point counts,
// L-polynomials via Newton's identities, Jacobian orders, and class numbers
// of the orders A[sqrt a] in imaginary quadratic extensions of F_q(T).

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dhyper/error.hpp"
#include "dhyper/fields.hpp"
#include "dhyper/gf.hpp"
#include "dhyper/polyring.hpp"

namespace dhyper::curves {

using poly::Poly;

/// Behaviour of the place at infinity in F(sqrt a)/F.
enum class Infinity
{
    ramified,
    inert,
    split,
};

inline char const * to_string(Infinity t)
{
    switch (t) {
    case Infinity::ramified:
        return "ramified";
    case Infinity::inert:
        return "inert";
    case Infinity::split:
        return "split";
    }
    return "?";
}

/// Genus of z^2 = a: floor((deg a - 1) / 2).
inline int curve_genus(Poly const & a)
{
    if (a.degree() < 1)
        throw ValidationError("curve genus needs a nonconstant polynomial");
    return (a.degree() - 1) / 2;
}

namespace detail {

inline void require_curve_input(Poly const & f)
{
    if (!f.field().odd_characteristic())
        throw ValidationError("hyperelliptic models require odd characteristic");
    if (f.degree() < 1)
        throw ValidationError("curve equation must be nonconstant");
    if (!poly::is_squarefree(f))
        throw ValidationError("curve equation " + poly::format(f) + " is not squarefree");
}

} // namespace detail

/// Ramification type of infinity in F(sqrt a): ramified for odd degree,
/// inert for even degree with non-square leading coefficient, else split.
inline Infinity infinity_type(Poly const & a)
{
    detail::require_curve_input(a);
    if (a.degree() % 2 == 1)
        return Infinity::ramified;
    return a.field().is_square(a.leading()) ? Infinity::split : Infinity::inert;
}

/// F(sqrt a) is imaginary: infinity does not split.
inline bool is_imaginary(Poly const & a) { return infinity_type(a) != Infinity::split; }

struct QuadOrderData
{
    Poly generator;
    bool imaginary;
    int curve_genus;
    Infinity infinity;
};

inline QuadOrderData quad_order(Poly const & a)
{
    Infinity t = infinity_type(a);
    return {a, t != Infinity::split, curve_genus(a), t};
}

/// Points on the smooth projective model of z^2 = f over `ext`, which must
/// contain f's coefficient field as constants.  Infinity contributes 1 for
/// odd degree, and 2 or 0 for even degree as lc(f) is or is not a square
/// in `ext`.
inline std::uint64_t point_count_over(Poly const & f, gf::Field const & ext)
{
    detail::require_curve_input(f);
    if (!ext.contains_as_constants(f.field()))
        throw ValidationError("counting field does not contain the coefficient field");
    if (ext.size() > kEnumerationLimit)
        throw ResourceError("counting field exceeds the enumeration limit");
    auto cs = f.coefficients();
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < ext.size(); ++i) {
        gf::Element t{static_cast<std::uint32_t>(i)};
        gf::Element v = ext.zero();
        for (auto it = cs.rbegin(); it != cs.rend(); ++it)
            v = ext.add(ext.mul(v, t), *it);
        if (v.index == 0)
            count += 1;
        else if (ext.is_square(v))
            count += 2;
    }
    if (f.degree() % 2 == 1)
        count += 1;
    else if (ext.is_square(f.leading()))
        count += 2;

    // Weil bound |N - (Q + 1)| <= 2 g sqrt(Q).
    std::int64_t g = curve_genus(f);
    std::int64_t trace = static_cast<std::int64_t>(count) - static_cast<std::int64_t>(ext.size()) - 1;
    if (static_cast<long double>(trace) * trace >
        4.0L * g * g * static_cast<long double>(ext.size()))
        throw InconsistencyError("point count " + std::to_string(count) + " of z^2 = " + poly::format(f) +
                                 " violates the Weil bound");
    return count;
}

/// N_m = #C(F_{q^m}) for C the smooth model of z^2 = f.
inline std::uint64_t point_count(Poly const & f, unsigned m)
{
    detail::require_curve_input(f);
    if (m < 1)
        throw ValidationError("extension degree must be at least 1");
    auto ext = gf::extension_field(f.field_ptr(), m);
    return point_count_over(f, *ext);
}

/// Coefficients c_0..c_{2g} of P(S) = prod (1 - alpha_j S), from N_1..N_g.
inline std::vector<std::int64_t> l_polynomial(Poly const & f)
{
    detail::require_curve_input(f);
    int g = curve_genus(f);
    if (g == 0)
        return {1};
    auto q = static_cast<std::int64_t>(f.field().size());
    poly::require_enumerable(static_cast<std::uint64_t>(q), g);

    std::vector<std::int64_t> qpow(static_cast<std::size_t>(g) + 1, 1);
    for (int i = 1; i <= g; ++i)
        qpow[static_cast<std::size_t>(i)] = qpow[static_cast<std::size_t>(i - 1)] * q;

    // s[m] = sum alpha_j^m = q^m + 1 - N_m
    std::vector<std::int64_t> s(static_cast<std::size_t>(g) + 1, 0);
    for (int m = 1; m <= g; ++m)
        s[static_cast<std::size_t>(m)] = qpow[static_cast<std::size_t>(m)] + 1 -
                                         static_cast<std::int64_t>(point_count(f, static_cast<unsigned>(m)));

    std::vector<std::int64_t> c(2 * static_cast<std::size_t>(g) + 1, 0);
    c[0] = 1;
    for (int m = 1; m <= g; ++m) {
        std::int64_t acc = s[static_cast<std::size_t>(m)];
        for (int i = 1; i < m; ++i)
            acc += c[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(m - i)];
        if (acc % m != 0)
            throw InconsistencyError("non-integral L-polynomial coefficient for z^2 = " + poly::format(f));
        c[static_cast<std::size_t>(m)] = -acc / m;
    }
    for (int i = 0; i < g; ++i)
        c[static_cast<std::size_t>(2 * g - i)] = qpow[static_cast<std::size_t>(g - i)] * c[static_cast<std::size_t>(i)];
    return c;
}

/// N_1..N_count predicted by an L-polynomial over F_q (Newton's identities
/// run forward).
inline std::vector<std::int64_t> counts_from_l_polynomial(std::vector<std::int64_t> const & P, std::int64_t q,
                                                          int count)
{
    auto coeff = [&](int k) { return k < static_cast<int>(P.size()) ? P[static_cast<std::size_t>(k)] : 0; };
    std::vector<std::int64_t> s(static_cast<std::size_t>(count) + 1, 0), out;
    std::int64_t qm = 1;
    for (int m = 1; m <= count; ++m) {
        std::int64_t acc = m * coeff(m);
        for (int i = 1; i < m; ++i)
            acc += coeff(i) * s[static_cast<std::size_t>(m - i)];
        s[static_cast<std::size_t>(m)] = -acc;
        qm *= q;
        out.push_back(qm + 1 - s[static_cast<std::size_t>(m)]);
    }
    return out;
}

/// #J(F_q) = P(1); 1 in genus 0.
inline std::int64_t jacobian_order(Poly const & f)
{
    std::int64_t sum = 0;
    for (auto c : l_polynomial(f))
        sum += c;
    if (sum <= 0)
        throw InconsistencyError("non-positive Jacobian order for z^2 = " + poly::format(f));
    return sum;
}

/// Write-once memo of class numbers keyed by (p, e, canonical text of a).
/// Safe for concurrent use.  Only fields built by make_field (prime fields
/// and their direct extensions) are cached.
class ClassNumberCache
{
  public:
    struct Record
    {
        std::uint32_t p;
        unsigned e;
        std::string generator;
        std::int64_t class_number;
    };

    std::optional<std::int64_t> find(Poly const & a) const
    {
        auto key = key_of(a);
        if (!key)
            return std::nullopt;
        std::shared_lock lock(mutex_);
        auto it = map_.find(*key);
        if (it == map_.end())
            return std::nullopt;
        return it->second;
    }

    void insert(Poly const & a, std::int64_t h)
    {
        if (auto key = key_of(a))
            insert_key(*key, h);
    }

    void insert(Record const & r) { insert_key({r.p, r.e, r.generator}, r.class_number); }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return map_.size();
    }

    std::vector<Record> records() const
    {
        std::shared_lock lock(mutex_);
        std::vector<Record> out;
        for (auto const & [k, h] : map_)
            out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), h});
        return out;
    }

    /// Line format: "p e a h", whitespace separated; blank lines ignored.
    void load(std::istream & in)
    {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            std::istringstream ls(line);
            Record r{};
            std::string extra;
            if (!(ls >> r.p >> r.e >> r.generator >> r.class_number) || (ls >> extra) || r.class_number <= 0)
                throw ValidationError("malformed cache record on line " + std::to_string(lineno));
            insert(r);
        }
    }

    void save(std::ostream & out) const
    {
        for (auto const & r : records())
            out << r.p << ' ' << r.e << ' ' << r.generator << ' ' << r.class_number << '\n';
    }

  private:
    using Key = std::tuple<std::uint32_t, unsigned, std::string>;

    static std::optional<Key> key_of(Poly const & a)
    {
        auto const & F = a.field();
        if (F.depth() > 1)
            return std::nullopt;
        return Key{F.characteristic(), F.degree(), poly::format(a)};
    }

    void insert_key(Key const & key, std::int64_t h)
    {
        std::unique_lock lock(mutex_);
        auto [it, inserted] = map_.emplace(key, h);
        if (!inserted && it->second != h)
            throw InconsistencyError("conflicting class numbers for " + std::get<2>(key));
    }

    mutable std::shared_mutex mutex_;
    std::map<Key, std::int64_t> map_;
};

/// h(A[sqrt a]) = #J for odd deg a, 2 #J for even deg a.  F(sqrt a) must be
/// imaginary; the real case is refused.
inline std::int64_t class_number(Poly const & a, ClassNumberCache * cache = nullptr)
{
    if (!is_imaginary(a))
        throw ValidationError("class number requested for the real extension F(sqrt(" + poly::format(a) + "))");
    if (cache)
        if (auto h = cache->find(a))
            return *h;
    std::int64_t j = jacobian_order(a);
    std::int64_t h = a.degree() % 2 == 1 ? j : 2 * j;
    if (cache)
        cache->insert(a, h);
    return h;
}

} // namespace dhyper::curves
