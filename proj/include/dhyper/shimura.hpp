#pragma once

// Numerical invariants of the modular curve X^R attached to the quaternion
// algebra over F_q(T) ramified exactly at a finite set R of finite places:
// genus, the supersingular point lower bound, fixed-point counts of the
// Atkin-Lehner involutions (through Eichler's optimal embedding count), and
// the hyperellipticity decision procedure built on them.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dhyper/curves.hpp"
#include "dhyper/error.hpp"
#include "dhyper/gf.hpp"
#include "dhyper/polyring.hpp"

namespace dhyper::shimura {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using poly::Place;
using poly::Poly;

/// 0 if some degree is even, 1 otherwise.
inline int wp(std::span<int const> degrees)
{
    if (degrees.empty())
        throw ValidationError("parity indicator of an empty set of places");
    return std::any_of(degrees.begin(), degrees.end(), [](int d) { return d % 2 == 0; }) ? 0 : 1;
}

/// Ramification set R: an even number (>= 2) of distinct finite places over
/// one field, kept sorted in place order.
class RamSet
{
  public:
    explicit RamSet(std::vector<Place> places) : places_(std::move(places))
    {
        if (places_.size() < 2 || places_.size() % 2 != 0)
            throw ValidationError("ramification set must have even cardinality >= 2, got " +
                                  std::to_string(places_.size()));
        if (places_.size() > 20)
            throw ResourceError("ramification sets larger than 20 places are not supported");
        for (auto const & x : places_)
            if (!x.field().same_as(places_.front().field()))
                throw ValidationError("places of a ramification set must share one field");
        std::sort(places_.begin(), places_.end());
        if (std::adjacent_find(places_.begin(), places_.end()) != places_.end())
            throw ValidationError("ramification set contains a duplicate place");
    }

    std::span<Place const> places() const { return places_; }
    std::size_t size() const { return places_.size(); }
    Place const & operator[](std::size_t i) const { return places_[i]; }
    gf::Field const & field() const { return places_.front().field(); }
    gf::FieldPtr const & field_ptr() const { return places_.front().generator().field_ptr(); }

    std::vector<int> degrees() const
    {
        std::vector<int> out;
        for (auto const & x : places_)
            out.push_back(x.degree());
        return out;
    }

    bool contains(Place const & x) const { return std::binary_search(places_.begin(), places_.end(), x); }

    /// Monic generator of the discriminant: the product of all f_x.
    Poly discriminant() const
    {
        Poly r = Poly::constant(field_ptr(), field().one());
        for (auto const & x : places_)
            r = r * x.generator();
        return r;
    }

    friend bool operator==(RamSet const &, RamSet const &) = default;

  private:
    std::vector<Place> places_;
};

/// A non-identity element of W = (Z/2)^{#R}: the Atkin-Lehner involution
/// w_a for the divisor a of the discriminant given by a nonempty subset of
/// R (bit i set <=> place i divides a).
class InvolutionKey
{
  public:
    InvolutionKey(std::uint32_t mask, RamSet const & R) : mask_(mask)
    {
        if (mask == 0)
            throw ValidationError("involution key must be a nonempty subset");
        if (mask >= (std::uint32_t{1} << R.size()))
            throw ValidationError("involution key refers to places outside R");
    }

    static InvolutionKey full(RamSet const & R) { return {(std::uint32_t{1} << R.size()) - 1, R}; }

    std::uint32_t mask() const { return mask_; }
    bool contains(std::size_t i) const { return (mask_ >> i) & 1u; }
    int popcount() const { return std::popcount(mask_); }

    /// Monic generator of the divisor: product of the selected f_x.
    Poly generator(RamSet const & R) const
    {
        Poly r = Poly::constant(R.field_ptr(), R.field().one());
        for (std::size_t i = 0; i < R.size(); ++i)
            if (contains(i))
                r = r * R[i].generator();
        return r;
    }

    /// w_a w_b = w_{ab/gcd(a,b)^2}; nullopt is the identity.
    friend std::optional<InvolutionKey> compose(InvolutionKey a, InvolutionKey b)
    {
        std::uint32_t m = a.mask_ ^ b.mask_;
        if (m == 0)
            return std::nullopt;
        InvolutionKey k = a;
        k.mask_ = m;
        return k;
    }

    /// "x", "y", "xy" when #R = 2; otherwise "x1x3" style.
    std::string label(std::size_t n) const
    {
        std::string out;
        for (std::size_t i = 0; i < n; ++i) {
            if (!contains(i))
                continue;
            if (n == 2)
                out += i == 0 ? "x" : "y";
            else
                out += "x" + std::to_string(i + 1);
        }
        return out;
    }

    friend bool operator==(InvolutionKey, InvolutionKey) = default;
    friend auto operator<=>(InvolutionKey, InvolutionKey) = default;

  private:
    std::uint32_t mask_;
};

namespace detail {

inline cpp_int power(std::uint64_t q, int d)
{
    cpp_int r = 1;
    for (int i = 0; i < d; ++i)
        r *= q;
    return r;
}

inline std::int64_t to_int64(cpp_int const & v, char const * what)
{
    if (v > cpp_int(std::numeric_limits<std::int64_t>::max()) || v < 0)
        throw ResourceError(std::string(what) + " out of 64-bit range");
    return static_cast<std::int64_t>(v);
}

/// Number of monic irreducibles of degree d over F_q: (1/d) sum mu(k) q^{d/k}.
inline cpp_int place_count(std::uint64_t q, int d)
{
    cpp_int sum = 0;
    for (int k = 1; k <= d; ++k) {
        if (d % k != 0)
            continue;
        int n = k, mu = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p != 0)
                continue;
            n /= p;
            if (n % p == 0) {
                mu = 0;
                break;
            }
            mu = -mu;
        }
        if (mu != 0 && n > 1)
            mu = -mu;
        sum += mu * power(q, d / k);
    }
    return sum / d;
}

} // namespace detail

/// Genus of X^R from q and the degrees of the places of R:
///   1 + prod(q_x - 1)/(q^2 - 1) - q/(q + 1) * 2^{#R-1} * wp(R),
/// evaluated exactly.  Multisets needing more places of some degree than
/// F_q(T) has are rejected; a non-integral or negative value is a hard error.
inline std::int64_t genus_from_degrees(std::uint64_t q, std::span<int const> degrees)
{
    if (degrees.size() < 2 || degrees.size() % 2 != 0)
        throw ValidationError("ramification set must have even cardinality >= 2");
    cpp_int prod = 1;
    for (int d : degrees) {
        if (d < 1)
            throw ValidationError("place degree must be positive");
        prod *= detail::power(q, d) - 1;
        auto used = std::count(degrees.begin(), degrees.end(), d);
        if (detail::place_count(q, d) < used)
            throw ValidationError("no ramification set over F_" + std::to_string(q) + " has " + std::to_string(used) +
                                  " places of degree " + std::to_string(d));
    }
    cpp_int qq(q);
    cpp_rational g = cpp_rational(1) + cpp_rational(prod, qq * qq - 1) -
                     cpp_rational(qq * (cpp_int(1) << (degrees.size() - 1)) * wp(degrees), qq + 1);
    if (denominator(g) != 1 || numerator(g) < 0)
        throw InconsistencyError("genus formula produced a non-integral or negative value");
    return detail::to_int64(numerator(g), "genus");
}

inline std::int64_t genus_XR(RamSet const & R)
{
    auto degs = R.degrees();
    return genus_from_degrees(R.field().size(), degs);
}

/// Lower bound for #X^R_o(F_o^(2)) at a place o outside R:
///   prod_{R u o}(q_x - 1)/(q^2 - 1) + q/(q + 1) * 2^{#R} * wp(R u o).
inline cpp_rational ss_lower_bound(RamSet const & R, Place const & o)
{
    if (R.contains(o))
        throw ValidationError("auxiliary place must lie outside R");
    auto degs = R.degrees();
    degs.push_back(o.degree());
    cpp_int q(R.field().size());
    cpp_int prod = 1;
    for (int d : degs)
        prod *= detail::power(R.field().size(), d) - 1;
    return cpp_rational(prod, q * q - 1) + cpp_rational(q * (cpp_int(1) << R.size()) * wp(degs), q + 1);
}

/// The place of minimal degree outside R, ties broken by place order.
inline Place minimal_auxiliary_place(RamSet const & R)
{
    auto const & field = R.field_ptr();
    for (int d = 1;; ++d) {
        std::uint64_t count = poly::require_enumerable(field->size(), d);
        for (std::uint64_t i = 0; i < count; ++i) {
            Poly f = poly::monic_from_index(field, d, i);
            if (!poly::is_irreducible(f))
                continue;
            Place o(std::move(f));
            if (!R.contains(o))
                return o;
        }
    }
}

struct FinitenessCheck
{
    bool holds;
    Place o;
    cpp_int lhs; ///< prod_{x in R u o} (q_x - 1)
    cpp_int rhs; ///< 2 (q_o^2 + 1)(q^2 - 1)
};

/// Necessary condition for hyperellipticity at a given auxiliary place o.
inline FinitenessCheck finiteness_bound(RamSet const & R, Place const & o)
{
    if (R.contains(o))
        throw ValidationError("auxiliary place must lie outside R");
    std::uint64_t q = R.field().size();
    cpp_int lhs = o.residue_size() - 1;
    for (auto const & x : R.places())
        lhs *= x.residue_size() - 1;
    cpp_int qo = o.residue_size();
    cpp_int rhs = 2 * (qo * qo + 1) * (cpp_int(q) * q - 1);
    return {lhs <= rhs, o, lhs, rhs};
}

/// The bound at the minimal-degree auxiliary place.  False proves X^R is
/// not hyperelliptic.
inline FinitenessCheck finiteness_bound(RamSet const & R) { return finiteness_bound(R, minimal_auxiliary_place(R)); }

inline bool finiteness_bound_holds(RamSet const & R) { return finiteness_bound(R).holds; }

/// Degree multiset {low, high} of a two-place ramification set.
struct DegreePair
{
    int low;
    int high;

    friend bool operator==(DegreePair, DegreePair) = default;
    friend auto operator<=>(DegreePair, DegreePair) = default;
};

/// Degree pairs {dx <= dy} with
///   (q^dx - 1)(q^dy - 1) + 4 q wp <= 2 (q^2 + 1)(q + 1).
/// Larger R are excluded in odd characteristic because a hyperelliptic
/// curve has no (Z/2)^4 among its automorphisms, and W ~ (Z/2)^{#R}.
inline std::vector<DegreePair> candidate_degree_multisets(gf::Field const & field)
{
    if (!field.odd_characteristic())
        throw ValidationError("candidate pruning requires odd characteristic");
    std::uint64_t q = field.size();
    cpp_int Q(q);
    cpp_int bound = 2 * (Q * Q + 1) * (Q + 1);
    std::vector<DegreePair> out;
    for (int dx = 1; (detail::power(q, dx) - 1) * (detail::power(q, dx) - 1) <= bound; ++dx) {
        for (int dy = dx;; ++dy) {
            int degs[] = {dx, dy};
            cpp_int lhs = (detail::power(q, dx) - 1) * (detail::power(q, dy) - 1) + 4 * Q * wp(degs);
            if (lhs > bound)
                break;
            out.push_back({dx, dy});
        }
    }
    return out;
}

/// Aut(X^R) = W whenever R contains a place of even degree.
inline bool aut_equals_W(RamSet const & R)
{
    auto degs = R.degrees();
    return wp(degs) == 0;
}

struct ClassifyOptions
{
    /// Non-square used to form kappa * f; defaults to the field's canonical
    /// non-square.
    std::optional<gf::Element> kappa;
    curves::ClassNumberCache * cache = nullptr;
    /// Worker threads for classify_all (1 = sequential).
    unsigned threads = 1;
};

inline gf::Element resolve_kappa(gf::Field const & field, ClassifyOptions const & opts)
{
    if (!field.odd_characteristic())
        throw ValidationError("odd characteristic required");
    if (!opts.kappa)
        return field.canonical_nonsquare();
    field.check(*opts.kappa);
    if (opts.kappa->index == 0 || field.is_square(*opts.kappa))
        throw ValidationError("kappa = " + field.format(*opts.kappa) + " is not a non-square");
    return *opts.kappa;
}

/// Eichler: Theta(A[sqrt a], Lambda) = h(A[sqrt a]) * prod_{x in R} (1 - (L/x)).
inline std::int64_t embedding_count(Poly const & a, RamSet const & R, curves::ClassNumberCache * cache = nullptr)
{
    if (!curves::is_imaginary(a))
        throw ValidationError("embedding count needs an imaginary extension");
    std::int64_t factor = 1;
    for (auto const & x : R.places()) {
        int s = poly::residue_symbol(a, x);
        if (s == 1)
            return 0;
        factor *= 1 - s;
    }
    return curves::class_number(a, cache) * factor;
}

/// #Fix(w_a) with f the monic generator of a:
///   Theta(kappa f) for even deg f, Theta(kappa f) + Theta(f) for odd deg f.
inline std::int64_t fixed_point_count(RamSet const & R, InvolutionKey const & key, ClassifyOptions const & opts = {})
{
    gf::Element kappa = resolve_kappa(R.field(), opts);
    Poly f = key.generator(R);
    std::int64_t count = embedding_count(f.scaled(kappa), R, opts.cache);
    if (f.degree() % 2 == 1)
        count += embedding_count(f, R, opts.cache);
    return count;
}

enum class Verdict
{
    hyperelliptic,
    not_hyperelliptic,
    undetermined,
};

enum class Reason
{
    none,
    genus_below_2,
    canonical_found,
    aut_is_W_no_candidate,
    even_genus_parity_contradiction,
};

inline char const * to_string(Verdict v)
{
    switch (v) {
    case Verdict::hyperelliptic:
        return "Hyperelliptic";
    case Verdict::not_hyperelliptic:
        return "NotHyperelliptic";
    case Verdict::undetermined:
        return "Undetermined";
    }
    return "?";
}

inline char const * to_string(Reason r)
{
    switch (r) {
    case Reason::none:
        return "none";
    case Reason::genus_below_2:
        return "genus_below_2";
    case Reason::canonical_found:
        return "canonical_found";
    case Reason::aut_is_W_no_candidate:
        return "aut_is_W_no_candidate";
    case Reason::even_genus_parity_contradiction:
        return "even_genus_parity_contradiction";
    }
    return "?";
}

struct FixedPointEntry
{
    InvolutionKey key;
    std::int64_t count;
};

struct ClassificationReport
{
    RamSet ramification;
    gf::Element kappa;
    std::int64_t genus;
    /// One entry per nonempty subset of R, ordered by mask.
    std::vector<FixedPointEntry> fixed_points;
    bool aut_equals_w;
    Verdict verdict;
    Reason reason;
    std::optional<InvolutionKey> canonical;
    /// Minimal-degree place outside R and the supersingular bound there.
    Place auxiliary;
    cpp_rational ss_bound;

    gf::Field const & field() const { return ramification.field(); }

    std::int64_t fix(std::uint32_t mask) const
    {
        for (auto const & e : fixed_points)
            if (e.key.mask() == mask)
                return e.count;
        throw ValidationError("no such involution key");
    }
};

/// Decision procedure; rules in order:
///  1. genus < 2                                   -> not hyperelliptic
///  2. compute #Fix(w) for every w in W - {1}
///  3. some w has 2g + 2 fixed points              -> hyperelliptic, w canonical
///  4. Aut(X^R) = W                                -> not hyperelliptic
///  5. g even and some w has #Fix != 2             -> not hyperelliptic
///     (in even genus every non-canonical involution has exactly 2)
///  6. otherwise                                   -> undetermined
inline ClassificationReport classify(RamSet const & R, ClassifyOptions const & opts = {})
{
    gf::Element kappa = resolve_kappa(R.field(), opts);
    ClassifyOptions local = opts;
    local.kappa = kappa;

    std::int64_t g = genus_XR(R);
    std::vector<FixedPointEntry> table;
    std::uint32_t keys = (std::uint32_t{1} << R.size()) - 1;
    for (std::uint32_t m = 1; m <= keys; ++m) {
        InvolutionKey k(m, R);
        table.push_back({k, fixed_point_count(R, k, local)});
    }
    bool autW = aut_equals_W(R);
    Place o = minimal_auxiliary_place(R);
    ClassificationReport report{R, kappa, g, table, autW, Verdict::undetermined, Reason::none, std::nullopt, o,
                                ss_lower_bound(R, o)};

    if (g < 2) {
        report.verdict = Verdict::not_hyperelliptic;
        report.reason = Reason::genus_below_2;
        return report;
    }
    for (auto const & e : table) {
        if (e.count != 2 * g + 2)
            continue;
        if (report.canonical)
            throw InconsistencyError("two involutions with 2g+2 fixed points: w_" + report.canonical->label(R.size()) +
                                     " and w_" + e.key.label(R.size()));
        report.canonical = e.key;
    }
    if (report.canonical) {
        report.verdict = Verdict::hyperelliptic;
        report.reason = Reason::canonical_found;
    } else if (autW) {
        report.verdict = Verdict::not_hyperelliptic;
        report.reason = Reason::aut_is_W_no_candidate;
    } else if (g % 2 == 0 &&
               std::any_of(table.begin(), table.end(), [](FixedPointEntry const & e) { return e.count != 2; })) {
        report.verdict = Verdict::not_hyperelliptic;
        report.reason = Reason::even_genus_parity_contradiction;
    }
    return report;
}

/// Places of every degree 1..max_degree, in place order.
inline std::vector<std::vector<Place>> places_by_degree(gf::FieldPtr const & field, int max_degree)
{
    std::vector<std::vector<Place>> out(static_cast<std::size_t>(max_degree) + 1);
    for (int d = 1; d <= max_degree; ++d)
        out[static_cast<std::size_t>(d)] = poly::monic_irreducibles(d, field);
    return out;
}

/// All two-place ramification sets with the given degree pair, in order.
inline std::vector<RamSet> ramification_sets(std::vector<std::vector<Place>> const & places, DegreePair dp)
{
    auto const & xs = places.at(static_cast<std::size_t>(dp.low));
    auto const & ys = places.at(static_cast<std::size_t>(dp.high));
    std::vector<RamSet> out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = dp.low == dp.high ? i + 1 : 0; j < ys.size(); ++j)
            out.emplace_back(std::vector<Place>{xs[i], ys[j]});
    return out;
}

namespace detail {

template <class In, class Out, class Fn>
std::vector<Out> parallel_map(std::vector<In> const & items, unsigned threads, Fn fn)
{
    std::vector<std::optional<Out>> slots(items.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < items.size();) {
            try {
                slots[i].emplace(fn(items[i]));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    std::vector<Out> out;
    out.reserve(items.size());
    for (auto & s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace detail

/// classify over a batch, possibly on several threads; output order
/// matches input order.
inline std::vector<ClassificationReport> classify_many(std::vector<RamSet> const & instances,
                                                       ClassifyOptions const & opts = {})
{
    return detail::parallel_map<RamSet, ClassificationReport>(instances, opts.threads,
                                                              [&](RamSet const & R) { return classify(R, opts); });
}

/// Classifies every two-place R whose degree pair passes the candidate
/// filter and has both degrees <= max_degree.  Output is ordered by degree
/// pair, then by place order, independently of `threads`.
inline std::vector<ClassificationReport> classify_all(gf::FieldPtr const & field, int max_degree,
                                                      ClassifyOptions const & opts = {})
{
    if (!field->odd_characteristic())
        throw ValidationError("classification requires odd characteristic");
    if (max_degree < 1)
        throw ValidationError("max degree must be positive");
    std::vector<DegreePair> pairs;
    for (auto dp : candidate_degree_multisets(*field))
        if (dp.high <= max_degree)
            pairs.push_back(dp);
    int top = 0;
    for (auto dp : pairs)
        top = std::max(top, dp.high);
    auto places = places_by_degree(field, top);
    std::vector<RamSet> instances;
    for (auto dp : pairs)
        for (auto & R : ramification_sets(places, dp))
            instances.push_back(std::move(R));
    return classify_many(instances, opts);
}

struct FinitenessSweep
{
    /// Degree pairs realized by at least one passing R, ascending.
    std::vector<DegreePair> passing_multisets;
    /// Every passing R with its check, in (degree pair, place) order.
    std::vector<std::pair<RamSet, FinitenessCheck>> passing;
    std::uint64_t examined = 0;
};

/// Runs finiteness_bound over every two-place R with degrees <= max_degree.
/// Works in any characteristic.
inline FinitenessSweep finiteness_sweep(gf::FieldPtr const & field, int max_degree)
{
    if (max_degree < 1)
        throw ValidationError("max degree must be positive");
    auto places = places_by_degree(field, max_degree);
    std::vector<Place> all;
    for (auto const & v : places)
        all.insert(all.end(), v.begin(), v.end());
    long double pairs = static_cast<long double>(all.size()) * static_cast<long double>(all.size()) / 2;
    if (pairs > 5e7L)
        throw ResourceError("finiteness sweep over " + std::to_string(static_cast<std::uint64_t>(pairs)) +
                            " place pairs exceeds the search limit");

    FinitenessSweep sweep;
    for (int dx = 1; dx <= max_degree; ++dx) {
        for (int dy = dx; dy <= max_degree; ++dy) {
            bool any = false;
            for (auto & R : ramification_sets(places, {dx, dy})) {
                ++sweep.examined;
                // The minimal auxiliary place is the first place outside R;
                // R has two places, so it is among the first three.
                auto o = std::find_if(all.begin(), all.end(), [&](Place const & p) { return !R.contains(p); });
                FinitenessCheck check = o != all.end() ? finiteness_bound(R, *o) : finiteness_bound(R);
                if (check.holds) {
                    any = true;
                    sweep.passing.emplace_back(std::move(R), std::move(check));
                }
            }
            if (any)
                sweep.passing_multisets.push_back({dx, dy});
        }
    }
    return sweep;
}

} // namespace dhyper::shimura
