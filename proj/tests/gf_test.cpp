#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace dhyper;
using gf::Element;

namespace {

gf::FieldPtr F(std::uint64_t p, unsigned e = 1) { return gf::make_field(p, e); }

// First monic quadratic over F_3 (constant term least significant) with no
// root, found by direct evaluation.
std::vector<int> first_irreducible_quadratic_f3()
{
    for (int idx = 0; idx < 9; ++idx) {
        int c0 = idx % 3, c1 = idx / 3;
        bool root = false;
        for (int t = 0; t < 3; ++t)
            if ((t * t + c1 * t + c0) % 3 == 0)
                root = true;
        if (!root)
            return {c0, c1, 1};
    }
    return {};
}

} // namespace

TEST(Field, PrimeFieldBasics)
{
    auto f3 = F(3);
    EXPECT_EQ(f3->size(), 3u);
    EXPECT_EQ(f3->characteristic(), 3u);
    EXPECT_TRUE(f3->is_prime_field());
    EXPECT_TRUE(f3->odd_characteristic());
    EXPECT_FALSE(F(2)->odd_characteristic());
    EXPECT_EQ(f3->inv({2}), Element{2});
}

TEST(Field, RejectsBadParameters)
{
    EXPECT_THROW(F(4), ValidationError);
    EXPECT_THROW(F(1), ValidationError);
    EXPECT_THROW(F(3, 0), ValidationError);
    EXPECT_THROW(F(3)->inv({0}), ValidationError);
    EXPECT_THROW(F(3)->check({3}), ValidationError);
}

TEST(Field, F9ModulusIsFirstIrreducibleQuadratic)
{
    auto f9 = F(3, 2);
    EXPECT_EQ(f9->size(), 9u);
    auto expected = first_irreducible_quadratic_f3();
    auto m = f9->modulus();
    ASSERT_EQ(m.size(), expected.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        EXPECT_EQ(m[i].index, static_cast<std::uint32_t>(expected[i]));
    EXPECT_EQ(f9->describe(), "F_9 = F_3[u]/(u^2+1)");
}

TEST(Field, PowerOfGeneratorInF9)
{
    // u^2 = -1, so u^4 = 1.
    auto f9 = F(3, 2);
    Element u = f9->element(3);
    EXPECT_EQ(f9->format(u), "u");
    EXPECT_EQ(f9->mul(u, u), f9->from_integer(-1));
    EXPECT_EQ(f9->pow(u, 4), f9->one());
}

TEST(Field, PowMatchesRepeatedMultiplication)
{
    for (auto field : {F(3), F(5), F(7), F(3, 2), F(5, 2), F(2, 3), F(3, 3)}) {
        for (auto a : field->elements()) {
            Element acc = field->one();
            for (std::uint64_t n = 0; n < 2 * field->size() + 3; ++n) {
                ASSERT_EQ(field->pow(a, n), acc) << field->describe() << " " << a.index << "^" << n;
                acc = field->mul(acc, a);
            }
        }
    }
}

TEST(Field, AxiomsExhaustive)
{
    for (auto field : {F(3, 2), F(2, 3), F(5, 2)}) {
        auto els = field->elements();
        for (auto a : els) {
            EXPECT_EQ(field->add(a, field->zero()), a);
            EXPECT_EQ(field->add(a, field->neg(a)), field->zero());
            if (a.index != 0)
                EXPECT_EQ(field->mul(a, field->inv(a)), field->one());
            for (auto b : els) {
                EXPECT_EQ(field->add(a, b), field->add(b, a));
                EXPECT_EQ(field->mul(a, b), field->mul(b, a));
                for (auto c : {els[1], els.back()})
                    EXPECT_EQ(field->mul(a, field->add(b, c)), field->add(field->mul(a, b), field->mul(a, c)));
            }
        }
    }
}

TEST(Field, FrobeniusIsAdditive)
{
    for (auto field : {F(3, 2), F(5, 2), F(3, 3), F(2, 4)}) {
        std::uint64_t p = field->characteristic();
        for (auto a : field->elements())
            for (auto b : field->elements())
                ASSERT_EQ(field->pow(field->add(a, b), p), field->add(field->pow(a, p), field->pow(b, p)));
    }
}

TEST(Field, SquaresMatchExhaustiveSquaring)
{
    for (auto field : {F(3), F(5), F(7), F(3, 2), F(5, 2), F(3, 3)}) {
        auto roots = oracle::square_root_counts(*field);
        for (auto a : field->elements())
            EXPECT_EQ(field->is_square(a), roots[a.index] > 0) << field->describe() << " " << field->format(a);
    }
    EXPECT_FALSE(F(3)->is_square({2}));
    EXPECT_TRUE(F(3)->is_square({0}));
    EXPECT_THROW(F(2)->is_square({1}), ValidationError);
}

TEST(Field, SquareClassesPartition)
{
    for (auto field : {F(3), F(5), F(7), F(3, 2), F(5, 2)}) {
        std::uint64_t sq = 0, nsq = 0;
        for (auto a : field->elements()) {
            if (a.index == 0)
                continue;
            (field->is_square(a) ? sq : nsq) += 1;
        }
        EXPECT_EQ(sq, (field->size() - 1) / 2);
        EXPECT_EQ(nsq, (field->size() - 1) / 2);
    }
}

TEST(Field, BaseFieldIsSquareInQuadraticExtension)
{
    auto f9 = F(3, 2);
    auto roots = oracle::square_root_counts(*f9);
    for (std::uint32_t i = 0; i < 3; ++i) {
        EXPECT_GT(roots[i], 0);
        EXPECT_TRUE(f9->is_square({i}));
    }
}

TEST(Field, CanonicalNonsquare)
{
    EXPECT_EQ(F(3)->canonical_nonsquare(), Element{2});
    EXPECT_EQ(F(5)->canonical_nonsquare(), Element{2});
    EXPECT_EQ(F(7)->canonical_nonsquare(), Element{3});
    // F_9: first element whose fourth power, by repeated multiplication, is not 1.
    auto f9 = F(3, 2);
    Element expected{0};
    for (auto a : f9->elements()) {
        if (a.index == 0)
            continue;
        Element x = f9->mul(f9->mul(a, a), f9->mul(a, a));
        if (x != f9->one()) {
            expected = a;
            break;
        }
    }
    EXPECT_EQ(f9->canonical_nonsquare(), expected);
    EXPECT_EQ(f9->format(expected), "u+1");
}

TEST(Field, ElementsEnumerate)
{
    auto els = F(3)->elements();
    ASSERT_EQ(els.size(), 3u);
    EXPECT_EQ(els[2], Element{2});
    for (auto field : {F(3, 2), F(5, 2)}) {
        auto all = field->elements();
        std::set<std::uint32_t> seen;
        for (auto a : all)
            seen.insert(a.index);
        EXPECT_EQ(all.size(), field->size());
        EXPECT_EQ(seen.size(), field->size());
    }
}

TEST(Field, TowerKeepsBaseIndices)
{
    auto f3 = F(3);
    auto f27 = gf::extension_field(f3, 3);
    EXPECT_TRUE(f27->contains_as_constants(*f3));
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t b = 0; b < 3; ++b)
            EXPECT_EQ(f27->mul({a}, {b}), f3->mul({a}, {b}));
    auto f9 = F(3, 2);
    auto f81 = gf::extension_field(f9, 2);
    EXPECT_EQ(f81->size(), 81u);
    EXPECT_EQ(f81->depth(), 2u);
    EXPECT_TRUE(f81->contains_as_constants(*f9));
    for (auto a : f9->elements())
        for (auto b : f9->elements())
            EXPECT_EQ(f81->mul(a, b), f9->mul(a, b));
}

TEST(Field, CoordinatesRoundTrip)
{
    auto f25 = F(5, 2);
    for (auto a : f25->elements())
        EXPECT_EQ(f25->from_coordinates(f25->coordinates(a)), a);
}

TEST(Field, ReducibleModulusRejected)
{
    // T^2 - 1 over F_3.
    EXPECT_THROW(gf::Field::extension(F(3), {Element{2}, Element{0}, Element{1}}), ValidationError);
}

TEST(Field, ParseElement)
{
    auto f9 = F(3, 2);
    EXPECT_EQ(gf::parse_element(f9, "u+1"), f9->canonical_nonsquare());
    EXPECT_EQ(gf::parse_element(f9, "-1"), f9->from_integer(2));
    EXPECT_THROW(gf::parse_element(f9, "T"), ValidationError);
}
