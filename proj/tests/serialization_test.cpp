#include <gtest/gtest.h>

#include "sidonlab/serialization.hpp"

using namespace sidonlab;

namespace {

void expect_lossless(const SidonSet& set) {
    const json j = to_json(set);
    const SidonSet back = sidon_set_from_json(j);
    EXPECT_TRUE(back.group()->same_structure(*set.group()));
    EXPECT_EQ(back.elements().indices(), set.elements().indices());
    EXPECT_EQ(back.size(), set.size());
    EXPECT_EQ(back.delta(), set.delta());
    // a second trip must serialize byte-identically
    EXPECT_EQ(to_json(back).dump(), j.dump());
}

} // namespace

TEST(Serialization, RationalAndPolynomialRoundTrip) {
    const Rational r(-21, 14);
    const json jr = to_json(r);
    EXPECT_EQ(jr.at("num").get<std::int64_t>(), -3);
    EXPECT_EQ(jr.at("den").get<std::int64_t>(), 2);
    EXPECT_EQ(rational_from_json(jr), r);

    const Polynomial p(7, {3, 0, 5});
    EXPECT_EQ(polynomial_from_json(to_json(p)), p);
}

TEST(Serialization, FieldDescriptorRoundTrip) {
    auto f7 = Field::create(7);
    EXPECT_TRUE(field_from_json(to_json(f7))->same_structure(*f7));

    auto f8 = Field::create(2, 3);
    auto back = field_from_json(to_json(f8));
    EXPECT_TRUE(back->same_structure(*f8));
    EXPECT_EQ(back->modulus()->coeffs(), f8->modulus()->coeffs());
}

TEST(Serialization, GroupDescriptorRoundTrip) {
    auto g = AmbientGroup::create({CyclicDescriptor{6}, FieldDescriptor{Field::create(7)},
                                   FieldDescriptor{Field::create(3, 2)}});
    EXPECT_TRUE(group_from_json(to_json(g))->same_structure(*g));
}

TEST(Serialization, SidonSetsRoundTripLosslessly) {
    auto f7 = Field::create(7);
    expect_lossless(construct_parabolic(f7, Polynomial::x(7), Polynomial(7, {0, 0, 1})));
    expect_lossless(construct_welch(f7, f7->generator()));
    expect_lossless(construct_golomb(f7, f7->generator(), f7->generator(),
                                     f7->element(2), GolombSign::Minus));

    auto f9 = Field::create(3, 2);
    expect_lossless(construct_welch(f9, f9->generator()));

    auto g = AmbientGroup::create({CyclicDescriptor{12}});
    expect_lossless(SidonSet::explicit_set(
        g, {g->element({0}), g->element({1}), g->element({4}), g->element({9})}));
}

TEST(Serialization, ConstructionTagsSurvive) {
    auto f7 = Field::create(7);
    auto golomb = construct_golomb(f7, f7->element(3), f7->element(5), f7->element(2),
                                   GolombSign::Minus);
    auto back = sidon_set_from_json(to_json(golomb));
    const auto* tag = std::get_if<GolombConstruction>(&back.construction());
    ASSERT_NE(tag, nullptr);
    EXPECT_EQ(tag->g1_code, 3u);
    EXPECT_EQ(tag->g2_code, 5u);
    EXPECT_EQ(tag->lambda_code, 2u);
    EXPECT_EQ(tag->sign, GolombSign::Minus);
    ASSERT_NE(back.base_field(), nullptr);
    EXPECT_EQ(back.base_field()->q(), 7u);
}

TEST(Serialization, ReportsCarryExactNumbers) {
    auto f5 = Field::create(5);
    auto a = construct_parabolic(f5, Polynomial::x(5), Polynomial(5, {0, 0, 1}));
    auto whole = ElementSet::whole_group(a.group());
    const json j = to_json(theta_report(a, whole, whole));
    EXPECT_EQ(j.at("count").get<std::uint64_t>(), 125u);
    EXPECT_EQ(j.at("main_term").at("num").get<std::int64_t>(), 125);
    EXPECT_EQ(j.at("main_term").at("den").get<std::int64_t>(), 1);
    EXPECT_TRUE(j.at("within_bound").get<bool>());

    const json jd = to_json(discrepancy(a, ElementSet(a.group(), {0, 7})));
    EXPECT_TRUE(jd.contains("discrepancy"));
    EXPECT_TRUE(jd.at("discrepancy").contains("num"));
    EXPECT_TRUE(jd.at("discrepancy").contains("den"));
}

TEST(Serialization, VerdictWitness) {
    auto g = AmbientGroup::create({CyclicDescriptor{7}});
    auto bad = SidonSet::explicit_set(
        g, {g->element({0}), g->element({1}), g->element({2})});
    const json j = to_json(verify_sidon(bad));
    EXPECT_FALSE(j.at("is_sidon").get<bool>());
    ASSERT_TRUE(j.contains("witness"));
    EXPECT_EQ(j.at("witness").size(), 4u);

    const json ok = to_json(verify_sidon(SidonSet::explicit_set(g, {})));
    EXPECT_TRUE(ok.at("is_sidon").get<bool>());
    EXPECT_FALSE(ok.contains("witness"));
}
