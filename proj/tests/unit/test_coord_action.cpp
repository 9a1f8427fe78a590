#include <gtest/gtest.h>

#include <chrono>

#include <wreath/coord_action.hpp>

#include "../support/random_actions.hpp"

using namespace wreath;
using wreath::testing::nearby_action;
using wreath::testing::random_action;

namespace {

Permutation P(std::vector<point_type> image) { return Permutation(std::move(image)); }

// Mixed-radix decoding, written independently of expand_explicit.
std::pair<std::vector<std::size_t>, std::size_t> decode(std::size_t point, std::size_t a,
                                                        std::size_t b) {
  std::size_t block = 1;
  for (std::size_t c = 0; c < b; ++c) block *= a;
  std::vector<std::size_t> digits(b);
  auto rest = point % block;
  for (std::size_t c = 0; c < b; ++c) {
    digits[c] = rest % a;
    rest /= a;
  }
  return {digits, point / block};
}

}  // namespace

TEST(CoordMap, CanonicalSparsity) {
  auto m = CoordMap(3, {{2, P({1, 2, 0})}, {0, Permutation::identity(3)}});
  ASSERT_EQ(m.entries().size(), 1u);
  EXPECT_EQ(m.entries()[0].first, 2u);
  EXPECT_EQ(m.find(0), nullptr);
  EXPECT_THROW(CoordMap(3, {{1, P({1, 2, 0})}, {1, P({2, 0, 1})}}), FormatError);
  EXPECT_TRUE(compose(m, inverse(m)).is_identity());
}

TEST(CoordAction, ComposeWithIdentityAndInverse) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto w = random_action(3, 4, rng);
    auto id = CoordAction::identity(3, 4);
    EXPECT_EQ(compose(w, id), w);
    EXPECT_EQ(compose(id, w), w);
    EXPECT_TRUE(compose(w, inverse(w)).is_identity());
    EXPECT_TRUE(compose(inverse(w), w).is_identity());
  }
}

TEST(CoordAction, SizeMismatch) {
  EXPECT_THROW(compose(CoordAction::identity(2, 3), CoordAction::identity(3, 3)), CarrierMismatch);
  EXPECT_THROW(ca_hamming(CoordAction::identity(2, 3), CoordAction::identity(2, 4)), CarrierMismatch);
}

TEST(CaHamming, SimpleValues) {
  Rng rng(2);
  auto w = random_action(2, 3, rng);
  EXPECT_EQ(ca_hamming(w, w), 0);
  auto shift = CoordAction::shift(5, P({1, 2, 0}));
  EXPECT_EQ(ca_hamming(shift, CoordAction::identity(5, 3)), 1);
  // One coordinate flipped in one of two blocks: half of that block moves.
  std::vector<CoordMap> tau{CoordMap::single(2, 1, P({1, 0})), CoordMap::identity(2)};
  CoordAction flip(2, Permutation::identity(2), tau);
  EXPECT_EQ(ca_hamming(flip, CoordAction::identity(2, 2)), Rational(1, 2));
  EXPECT_EQ(ca_fixed_fraction(flip), Rational(1, 2));
}

TEST(ExpandExplicit, HandTables) {
  EXPECT_EQ(expand_explicit(CoordAction::identity(2, 2)), Permutation::identity(8));
  EXPECT_EQ(expand_explicit(CoordAction::shift(1, P({1, 0}))), P({1, 0}));
  CoordAction swap(2, Permutation::identity(1), {CoordMap::single(2, 0, P({1, 0}))});
  EXPECT_EQ(expand_explicit(swap), P({1, 0}));
  // |A| = 2, |B| = 2, beta = swap, tau[0] flips coordinate 1.
  // Points b*4 + a0 + 2 a1. From block 0, (a0, a1) -> (a0, 1 - a1) in block 1.
  CoordAction w(2, P({1, 0}), {CoordMap::single(2, 1, P({1, 0})), CoordMap::identity(2)});
  EXPECT_EQ(expand_explicit(w), P({6, 7, 4, 5, 0, 1, 2, 3}));
}

TEST(ExpandExplicit, CapExceeded) {
  try {
    expand_explicit(CoordAction::identity(64, 64));
    FAIL() << "expected ExpansionTooLarge";
  } catch (ExpansionTooLarge const& e) {
    EXPECT_STREQ(e.what(), "carrier too large for expansion");
  }
  EXPECT_THROW(expand_explicit(CoordAction::identity(2, 5), 100), ExpansionTooLarge);
  EXPECT_NO_THROW(expand_explicit(CoordAction::identity(2, 5), 160));
}

TEST(ExpandExplicit, MatchesPointwiseSemantics) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto const a = 1 + rng.below(3);
    auto const b = 1 + rng.below(3);
    auto w = random_action(a, b, rng);
    auto e = expand_explicit(w);
    for (std::size_t pt = 0; pt < e.degree(); ++pt) {
      auto [digits, blk] = decode(pt, a, b);
      auto [img_digits, img_blk] = decode(e(static_cast<point_type>(pt)), a, b);
      EXPECT_EQ(img_blk, w.beta()(static_cast<point_type>(blk)));
      for (std::size_t c = 0; c < b; ++c) {
        auto const* p = w.tau(static_cast<point_type>(blk)).find(static_cast<point_type>(c));
        EXPECT_EQ(img_digits[c], p ? (*p)(static_cast<point_type>(digits[c])) : digits[c]);
      }
    }
  }
}

TEST(OracleEquivalence, HammingComposeFixedFraction) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    auto const a = 1 + rng.below(4);
    auto const b = 1 + rng.below(4);
    auto w = random_action(a, b, rng);
    auto v = rng.below(2) ? nearby_action(w, rng) : random_action(a, b, rng);
    auto ew = expand_explicit(w);
    auto ev = expand_explicit(v);
    EXPECT_EQ(ca_hamming(w, v), hamming(ew, ev));
    EXPECT_EQ(expand_explicit(compose(w, v)), compose(ew, ev));
    EXPECT_EQ(expand_explicit(inverse(w)), ew.inverse());
    EXPECT_EQ(ca_fixed_fraction(w), Rational(ew.fixed_points(), static_cast<long long>(ew.degree())));
    EXPECT_EQ(ca_fixed_fraction(w), 1 - ca_hamming(w, CoordAction::identity(a, b)));
  }
}

TEST(CaHamming, MetricAndBiInvariance) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto const a = 2 + rng.below(3);
    auto const b = 2 + rng.below(4);
    auto s = random_action(a, b, rng, 0.3);
    auto t = nearby_action(s, rng);
    auto u = nearby_action(t, rng);
    auto x = random_action(a, b, rng, 0.3);
    EXPECT_EQ(ca_hamming(s, t), ca_hamming(t, s));
    EXPECT_EQ(ca_hamming(s, t) == 0, s == t);
    EXPECT_LE(ca_hamming(s, u), ca_hamming(s, t) + ca_hamming(t, u));
    EXPECT_EQ(ca_hamming(compose(x, s), compose(x, t)), ca_hamming(s, t));
    EXPECT_EQ(ca_hamming(compose(s, x), compose(t, x)), ca_hamming(s, t));
  }
}

TEST(CoordAction, DisjointCoordinatesCommute) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    auto const a = 2 + rng.below(3);
    auto const b = 2 + rng.below(5);
    std::vector<CoordMap> t1, t2;
    for (std::size_t blk = 0; blk < b; ++blk) {
      std::vector<CoordMap::entry_type> e1, e2;
      for (std::size_t c = 0; c < b; ++c) {
        auto p = random_permutation(a, rng.next());
        (rng.below(2) ? e1 : e2).emplace_back(static_cast<point_type>(c), p);
      }
      t1.emplace_back(a, std::move(e1));
      t2.emplace_back(a, std::move(e2));
    }
    CoordAction w1(a, Permutation::identity(b), t1);
    CoordAction w2(a, Permutation::identity(b), t2);
    EXPECT_EQ(compose(w1, w2), compose(w2, w1));
  }
}

TEST(CaHamming, LargeCarrierUnderOneSecond) {
  constexpr std::size_t a = 50;
  constexpr std::size_t b = 1000;
  Rng rng(7);
  auto build = [&](std::uint64_t seed) {
    Rng local(seed);
    std::vector<CoordMap> tau;
    for (std::size_t blk = 0; blk < b; ++blk) {
      std::vector<CoordMap::entry_type> entries;
      for (int k = 0; k < 5; ++k) {
        entries.emplace_back(static_cast<point_type>((blk + 7 * k) % b), random_permutation(a, local.next()));
      }
      tau.emplace_back(a, std::move(entries));
    }
    return CoordAction(a, random_permutation(b, local.next()), std::move(tau));
  };
  auto w = build(1);
  auto v = build(2);
  auto start = std::chrono::steady_clock::now();
  auto product = compose(w, v);
  auto d = ca_hamming(product, compose(v, w));
  auto f = ca_fixed_fraction(product);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(d, 0);
  EXPECT_LE(f, 1);
  EXPECT_EQ(ca_hamming(product, product), 0);
  EXPECT_LT(elapsed, 1.0);
  EXPECT_FALSE(product.carrier_size().has_value());
}

TEST(CoordAction, JsonRoundTrip) {
  Rng rng(8);
  auto w = random_action(3, 4, rng);
  auto j = to_json(w);
  EXPECT_EQ(coord_action_from_json(nlohmann::json::parse(j.dump())), w);
  CoordAction small(2, P({1, 0}), {CoordMap::single(2, 1, P({1, 0})), CoordMap::identity(2)});
  EXPECT_EQ(to_json(small).dump(), R"({"a_size":2,"b_size":2,"beta":[1,0],"tau":[[0,[[1,[1,0]]]]]})");
}
