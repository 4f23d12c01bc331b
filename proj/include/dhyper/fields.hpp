#pragma once

// Deterministic construction of F_{p^e} and of extensions F_q[v]/(g): the
// modulus is always the smallest monic irreducible of the requested degree
// in enumeration order.

#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "dhyper/gf.hpp"
#include "dhyper/polyring.hpp"

namespace dhyper::gf {

/// Smallest monic irreducible of degree d over `field`, low degree first.
inline std::vector<Element> smallest_irreducible(FieldPtr const & field, int d)
{
    std::uint64_t count = poly::require_enumerable(field->size(), d);
    for (std::uint64_t i = 0; i < count; ++i) {
        poly::Poly f = poly::monic_from_index(field, d, i);
        if (poly::is_irreducible(f))
            return {f.coefficients().begin(), f.coefficients().end()};
    }
    throw InconsistencyError("no irreducible polynomial of degree " + std::to_string(d));
}

namespace detail {

inline std::string field_key(Field const & f)
{
    std::string key = std::to_string(f.characteristic());
    for (Field const * level = &f; level && !level->is_prime_field(); level = level->base().get()) {
        key += '|';
        for (auto c : level->modulus())
            key += std::to_string(c.index) + ',';
    }
    return key;
}

// Small fields are memoized; a Field is immutable so sharing is safe.
inline constexpr std::uint64_t kMemoLimit = 1u << 20;

inline std::mutex & memo_mutex()
{
    static std::mutex m;
    return m;
}

inline std::map<std::string, FieldPtr> & memo()
{
    static std::map<std::string, FieldPtr> m;
    return m;
}

} // namespace detail

/// F_{p^e} = F_p[u]/(smallest monic irreducible of degree e).
inline FieldPtr make_field(std::uint64_t p, unsigned e)
{
    if (!is_prime(p))
        throw ValidationError("p = " + std::to_string(p) + " is not prime");
    if (e < 1)
        throw ValidationError("extension degree must be at least 1");
    auto prime = Field::prime(p);
    if (e == 1)
        return prime;
    poly::require_enumerable(p, static_cast<int>(e));
    return Field::extension(prime, smallest_irreducible(prime, static_cast<int>(e)));
}

/// F_q[v]/(g) with g the smallest monic irreducible of degree m over F_q.
/// Elements of `base` are the constants of the result.
inline FieldPtr extension_field(FieldPtr const & base, unsigned m)
{
    if (m < 1)
        throw ValidationError("extension degree must be at least 1");
    if (m == 1)
        return base;
    std::uint64_t size = poly::require_enumerable(base->size(), static_cast<int>(m));
    std::string key = detail::field_key(*base) + "^" + std::to_string(m);
    if (size <= detail::kMemoLimit) {
        std::lock_guard lock(detail::memo_mutex());
        if (auto it = detail::memo().find(key); it != detail::memo().end())
            return it->second;
    }
    auto field = Field::extension(base, smallest_irreducible(base, static_cast<int>(m)));
    if (size <= detail::kMemoLimit) {
        std::lock_guard lock(detail::memo_mutex());
        detail::memo().emplace(key, field);
    }
    return field;
}

/// Parses an element in the text syntax of Field::format ("2", "u+2").
inline Element parse_element(FieldPtr const & field, std::string_view text)
{
    poly::Poly p = poly::parse(field, text);
    if (p.degree() > 0)
        throw ValidationError("\"" + std::string(text) + "\" is not a field element");
    return p.coefficient(0);
}

} // namespace dhyper::gf
