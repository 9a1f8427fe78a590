#include <gtest/gtest.h>

#include <wreath/sofic.hpp>
#include <wreath/wreath_product.hpp>

using namespace wreath;

namespace {

Permutation P(std::vector<point_type> image) { return Permutation(std::move(image)); }

}  // namespace

TEST(RegularRep, SmallCases) {
  auto s = regular_rep(CyclicGroup(2));
  EXPECT_EQ(s.at(1), P({1, 0}));
  EXPECT_TRUE(s.at(0).is_identity());
  EXPECT_EQ(regular_rep(CyclicGroup(3)).at(1), P({1, 2, 0}));
}

TEST(RegularRep, ExactAndFreeForEveryFiniteGroup) {
  auto check = [](auto const& group) {
    auto s = regular_rep(group);
    auto r = is_sofic_approx(s, group.elements(), Rational(1, 1000));
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(r.worst_defect, 0);
    if (group.elements().size() > 1) {
      EXPECT_EQ(*r.free_margin, 1);
    }
  };
  check(CyclicGroup(1));
  check(CyclicGroup(7));
  check(SymmetricGroup(3));
  check(TableGroup({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}));
}

TEST(IsMultiplicative, ZeroDefectButNotFree) {
  // sigma(1) = id on Z/2: a homomorphism, but not free.
  SoficApprox<CyclicGroup> s(CyclicGroup(2), 2,
                             {{0, Permutation::identity(2)}, {1, Permutation::identity(2)}});
  auto m = is_multiplicative(s, {0, 1}, Rational(1, 2));
  EXPECT_EQ(m.worst_defect, 0);
  EXPECT_TRUE(m.multiplicative);
  auto f = is_free(s, {0, 1}, Rational(1, 2));
  EXPECT_EQ(*f.free_margin, 0);
  EXPECT_FALSE(f.free);
  EXPECT_EQ(*f.free_witness, 1);
  EXPECT_FALSE(is_sofic_approx(s, {0, 1}, Rational(1, 2)).pass());
}

TEST(IsMultiplicative, PerturbedZ5HandValue) {
  // sigma(1) = [1,2,3,4,0] with outputs 0 and 1 swapped: [2,1,3,4,0].
  auto base = regular_rep(CyclicGroup(5));
  auto rule = base.rule();
  rule.at(1) = P({2, 1, 3, 4, 0});
  SoficApprox<CyclicGroup> s(CyclicGroup(5), 5, rule);
  auto r = is_multiplicative(s, {1, 2}, Rational(1, 2));
  // sigma(1)^2 = [3,1,4,0,2] vs sigma(2) = [2,3,4,0,1]: differ at 0,1,4.
  EXPECT_EQ(r.worst_defect, Rational(3, 5));
  EXPECT_EQ(r.defect_witness, (std::pair<std::int64_t, std::int64_t>{1, 1}));
  EXPECT_FALSE(r.multiplicative);
  EXPECT_EQ(hamming(compose(s.at(1), s.at(2)), s.at(3)), Rational(2, 5));
  EXPECT_EQ(hamming(compose(s.at(2), s.at(1)), s.at(3)), Rational(2, 5));
  EXPECT_EQ(hamming(compose(s.at(2), s.at(2)), s.at(4)), 0);
}

TEST(IsMultiplicative, StrictInequality) {
  auto base = regular_rep(CyclicGroup(5));
  auto rule = base.rule();
  rule.at(1) = P({2, 1, 3, 4, 0});
  SoficApprox<CyclicGroup> s(CyclicGroup(5), 5, rule);
  EXPECT_FALSE(is_multiplicative(s, {1, 2}, Rational(3, 5)).multiplicative);
  EXPECT_TRUE(is_multiplicative(s, {1, 2}, Rational(3, 5) + Rational(1, 1000)).multiplicative);
}

TEST(IsMultiplicative, WindowViolationIsAnError) {
  auto s = cyclic_quotient(8, {-1, 0, 1});
  EXPECT_THROW(is_multiplicative(s, {1}, Rational(1, 2)), WindowError);
  EXPECT_THROW(is_free(s, {5}, Rational(1, 2)), WindowError);
}

TEST(IsFree, VacuousOnIdentityOnly) {
  auto s = regular_rep(CyclicGroup(3));
  auto r = is_free(s, {0}, Rational(1, 100));
  EXPECT_TRUE(r.free);
  EXPECT_FALSE(r.free_margin.has_value());
}

TEST(IsFree, RegularZ3MarginOne) {
  auto r = is_free(regular_rep(CyclicGroup(3)), {1, 2}, Rational(1, 1000000));
  EXPECT_EQ(*r.free_margin, 1);
  EXPECT_TRUE(r.free);
}

TEST(CyclicQuotient, ShiftsAndCertificates) {
  EXPECT_EQ(cyclic_quotient(4, {3}).at(3), P({3, 0, 1, 2}));
  std::vector<std::int64_t> window;
  for (std::int64_t k = -14; k <= 14; ++k) window.push_back(k);
  auto s = cyclic_quotient(8, window);
  // F inside {-N+1..N-1} minus nonzero multiples of N, closed enough for F*F.
  std::vector<std::int64_t> F{-3, -1, 0, 2, 7};
  auto r = is_sofic_approx(s, F, Rational(1, 1000000));
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(*r.free_margin, 1);
  // 8 is a multiple of N: sigma(8) = id.
  EXPECT_FALSE(is_free(s, {8}, Rational(1, 2)).free);
}

TEST(QuotientByImages, ReportMatchesRecomputation) {
  FreeGroup f2(2);
  std::vector<FreeWord> gens{f2.generator(1), f2.generator(2), f2.reduce({-1}), f2.reduce({-2})};
  auto ball2 = words_up_to(f2, gens, 2);
  auto ball4 = words_up_to(f2, gens, 4);
  std::vector<FreeWord> F(ball2.begin(), ball2.end());
  std::vector<FreeWord> window(ball4.begin(), ball4.end());
  auto s = quotient_by_images(f2, {random_permutation(64, 1), random_permutation(64, 2)}, window);
  auto r = is_sofic_approx(s, F, Rational(1, 4));
  // Exact homomorphism on the window: defect 0.
  EXPECT_EQ(r.worst_defect, 0);
  Rational margin = 1;
  for (auto const& g : F) {
    if (g != f2.identity()) margin = std::min(margin, distance_to_identity(s.at(g)));
  }
  EXPECT_EQ(*r.free_margin, margin);
  EXPECT_EQ(r.free, margin > Rational(3, 4));
  EXPECT_EQ(distance_to_identity(s.at(*r.free_witness)), margin);
  EXPECT_TRUE(r.identity_ok);
}

TEST(EvaluateWord, InversesAndProducts) {
  FreeGroup f2(2);
  auto a = random_permutation(9, 3);
  auto b = random_permutation(9, 4);
  EXPECT_EQ(evaluate_word(f2.reduce({1, -2, 1}), {a, b}), compose(compose(a, b.inverse()), a));
  EXPECT_TRUE(evaluate_word(f2.identity(), {a, b}).is_identity());
}

TEST(QuotientByImages, Validation) {
  FreeGroup f2(2);
  EXPECT_THROW(quotient_by_images(f2, {random_permutation(4, 1)}, {f2.identity()}), FormatError);
  EXPECT_THROW(quotient_by_images(f2, {random_permutation(4, 1), random_permutation(5, 1)},
                                  {f2.identity()}),
               CarrierMismatch);
}

TEST(Perturb, ZeroRateAndBoundedChange) {
  auto s = regular_rep(CyclicGroup(5));
  EXPECT_EQ(perturb(s, 0.0, 9), s);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = perturb(regular_rep(CyclicGroup(7)), 0.5, rng.next());
    EXPECT_TRUE(p.at(0).is_identity());
    for (auto const& [x, perm] : p.rule()) {
      auto d = hamming(perm, regular_rep(CyclicGroup(7)).at(x));
      EXPECT_TRUE(d == 0 || d == Rational(2, 7));
    }
  }
  auto full = perturb(regular_rep(CyclicGroup(5)), 1.0, 1);
  for (std::int64_t x = 1; x < 5; ++x) {
    EXPECT_EQ(hamming(full.at(x), s.at(x)), Rational(2, 5));
  }
  EXPECT_EQ(perturb(s, 0.4, 77), perturb(s, 0.4, 77));
  EXPECT_THROW(perturb(s, 1.5, 1), FormatError);
}

TEST(SoficApprox, DegreeMismatchRejected) {
  EXPECT_THROW(SoficApprox<CyclicGroup>(CyclicGroup(2), 3,
                                        {{0, Permutation::identity(3)}, {1, Permutation::identity(2)}}),
               CarrierMismatch);
  EXPECT_THROW(regular_rep(CyclicGroup(3)).at(7), WindowError);
}

TEST(SoficApprox, JsonRoundTrip) {
  auto s = perturb(regular_rep(SymmetricGroup(3)), 0.5, 4);
  auto j = to_json(s);
  EXPECT_EQ(sofic_from_json(SymmetricGroup(3), nlohmann::json::parse(j.dump())), s);
  EXPECT_THROW(sofic_from_json(SymmetricGroup(4), j), FormatError);
  auto bad = j;
  bad["window"].erase(0);
  EXPECT_THROW(sofic_from_json(SymmetricGroup(3), bad), FormatError);
}

TEST(DefectReport, JsonShape) {
  auto r = is_sofic_approx(regular_rep(CyclicGroup(3)), {0, 1, 2}, Rational(1, 2));
  auto j = report_to_json(CyclicGroup(3), r);
  EXPECT_EQ(j.at("multiplicative").at("defect").dump(), R"({"den":1,"num":0})");
  EXPECT_EQ(j.at("free").at("margin").dump(), R"({"den":1,"num":1})");
  EXPECT_TRUE(j.at("pass").get<bool>());
}
