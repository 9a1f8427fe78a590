#include <gtest/gtest.h>

#include <wreath/wreath_product.hpp>

using namespace wreath;

namespace {

using Lamplighter = WreathProduct<CyclicGroup, IntegerGroup>;

template <Group G>
void expect_group_axioms(G const& group, std::vector<element_t<G>> const& xs) {
  for (auto const& x : xs) {
    EXPECT_EQ(group.mul(x, group.identity()), x);
    EXPECT_EQ(group.mul(group.identity(), x), x);
    EXPECT_EQ(group.mul(x, group.inv(x)), group.identity());
    for (auto const& y : xs) {
      for (auto const& z : xs) {
        EXPECT_EQ(group.mul(group.mul(x, y), z), group.mul(x, group.mul(y, z)));
      }
    }
  }
}

template <class W>
element_t<W> random_element(W const& w, Rng& rng, int spread) {
  std::vector<std::pair<std::int64_t, std::int64_t>> entries;
  auto const k = rng.below(4);
  for (std::uint64_t i = 0; i < k; ++i) {
    entries.emplace_back(static_cast<std::int64_t>(rng.below(2 * spread + 1)) - spread,
                         static_cast<std::int64_t>(rng.below(6)));
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](auto const& a, auto const& b) { return a.first == b.first; }),
                entries.end());
  return w.make(w.canonical(entries), static_cast<std::int64_t>(rng.below(2 * spread + 1)) - spread);
}

}  // namespace

TEST(Cyclic, Arithmetic) {
  CyclicGroup z1(1);
  EXPECT_EQ(z1.elements().size(), 1u);
  CyclicGroup z6(6);
  EXPECT_EQ(z6.mul(2, 3), 5);
  EXPECT_EQ(z6.mul(3, 3), 0);
  EXPECT_EQ(z6.inv(2), 4);
  EXPECT_THROW(CyclicGroup(0), FormatError);
  EXPECT_THROW(z6.element_from_json(6), FormatError);
  expect_group_axioms(z6, z6.elements());
}

TEST(Integers, Arithmetic) {
  IntegerGroup z;
  EXPECT_EQ(z.mul(-4, 7), 3);
  EXPECT_EQ(z.inv(5), -5);
  expect_group_axioms(z, {-3, 0, 2, 9});
}

TEST(Symmetric, EnumerationAndAxioms) {
  SymmetricGroup s3(3);
  auto elems = s3.elements();
  ASSERT_EQ(elems.size(), 6u);
  EXPECT_TRUE(std::is_sorted(elems.begin(), elems.end()));
  EXPECT_EQ(elems.front(), s3.identity());
  expect_group_axioms(s3, elems);
  // Not abelian.
  EXPECT_NE(s3.mul(elems[1], elems[2]), s3.mul(elems[2], elems[1]));
}

TEST(Free, ReductionAndOrdering) {
  FreeGroup f2(2);
  auto a = f2.generator(1);
  auto b = f2.generator(2);
  EXPECT_EQ(f2.reduce({1, -1, 2}), b);
  EXPECT_EQ(f2.mul(f2.mul(a, f2.inv(a)), b), b);
  EXPECT_EQ(f2.format(f2.reduce({1, 2, -1})), "abA");
  EXPECT_LT(b, f2.reduce({1, 1}));  // shorter first
  EXPECT_LT(a, b);
  EXPECT_THROW(f2.element_from_json(nlohmann::json::parse("[1,-1]")), FormatError);
  EXPECT_THROW(f2.reduce({3}), FormatError);
  expect_group_axioms(f2, {f2.identity(), a, b, f2.reduce({1, -2}), f2.reduce({2, 2, -1})});
}

TEST(Table, ValidatesCayleyTable) {
  TableGroup klein({{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}});
  EXPECT_EQ(klein.order(), 4u);
  expect_group_axioms(klein, klein.elements());
  try {
    TableGroup({{0, 1}, {0, 1}});
    FAIL() << "expected an invalid table";
  } catch (FormatError const& e) {
    EXPECT_NE(std::string(e.what()).find("invalid Cayley table"), std::string::npos);
  }
  EXPECT_THROW(TableGroup({{0, 1, 2}, {1, 0, 2}, {2, 1, 0}}), FormatError);
  // A Latin square with identity that is not associative (order-5 loop).
  EXPECT_THROW(TableGroup({{0, 1, 2, 3, 4},
                           {1, 0, 3, 4, 2},
                           {2, 4, 0, 1, 3},
                           {3, 2, 4, 0, 1},
                           {4, 3, 1, 2, 0}}),
               FormatError);
}

TEST(Alpha, ShiftsSupport) {
  Lamplighter L(CyclicGroup(2), IntegerGroup{});
  auto f = L.delta(0, 1);
  EXPECT_EQ(L.alpha(0, f), f);
  EXPECT_EQ(L.alpha(1, f), L.delta(1, 1));

  WreathProduct<CyclicGroup, CyclicGroup> W(CyclicGroup(5), CyclicGroup(3));
  auto g = W.canonical({{0, 1}, {1, 2}});  // {0 -> a, 1 -> b}
  EXPECT_EQ(W.alpha(2, g), W.canonical({{2, 1}, {0, 2}}));
}

TEST(Alpha, ActionByAutomorphisms) {
  Lamplighter L(CyclicGroup(6), IntegerGroup{});
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto u = random_element(L, rng, 4);
    auto v = random_element(L, rng, 4);
    auto h = u.right;
    auto h2 = v.right;
    EXPECT_EQ(L.alpha(h, L.map_mul(u.left, v.left)),
              L.map_mul(L.alpha(h, u.left), L.alpha(h, v.left)));
    EXPECT_EQ(L.alpha(h + h2, u.left), L.alpha(h, L.alpha(h2, u.left)));
    auto moved = L.alpha(h, u.left).support();
    auto expected = u.left.support();
    for (auto& x : expected) x += h;
    EXPECT_EQ(moved, expected);
    // supp(fg) within supp(f) u supp(g)
    for (auto const& x : L.map_mul(u.left, v.left).support()) {
      EXPECT_TRUE(u.left.find(x) || v.left.find(x));
    }
  }
}

TEST(WreathMul, HandExample) {
  Lamplighter L(CyclicGroup(2), IntegerGroup{});
  auto u = L.make(L.delta(0, 1), 1);
  auto v = L.make(L.delta(0, 1), -1);
  EXPECT_EQ(L.mul(u, v), L.make(L.canonical({{0, 1}, {1, 1}}), 0));
  EXPECT_EQ(L.mul(u, L.identity()), u);
}

TEST(WreathMul, GroupLawsOnRandomElements) {
  Lamplighter L(CyclicGroup(6), IntegerGroup{});
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    auto u = random_element(L, rng, 3);
    auto v = random_element(L, rng, 3);
    auto w = random_element(L, rng, 3);
    EXPECT_EQ(L.mul(L.mul(u, v), w), L.mul(u, L.mul(v, w)));
    EXPECT_EQ(L.mul(u, L.inv(u)), L.identity());
    EXPECT_EQ(L.mul(L.inv(u), u), L.identity());
    EXPECT_EQ(L.projections(L.mul(u, v)).second, u.right + v.right);
  }
}

TEST(Projections, TopIsHomomorphismBaseIsNot) {
  Lamplighter L(CyclicGroup(2), IntegerGroup{});
  EXPECT_EQ(L.projections(L.identity()).first, L.identity().left);
  EXPECT_EQ(L.projections(L.identity()).second, 0);
  auto u = L.make({}, 1);
  auto v = L.make(L.delta(0, 1), 0);
  // pi_G(uv) = delta_1 but pi_G(u) pi_G(v) = delta_0.
  EXPECT_EQ(L.projections(L.mul(u, v)).first, L.delta(1, 1));
  EXPECT_NE(L.projections(L.mul(u, v)).first,
            L.map_mul(L.projections(u).first, L.projections(v).first));
}

TEST(WreathProduct, CanonicalForm) {
  Lamplighter L(CyclicGroup(3), IntegerGroup{});
  auto f = L.canonical({{2, 1}, {0, 0}, {-1, 2}});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.entries[0].first, -1);
  EXPECT_EQ(f.entries[1].first, 2);
  EXPECT_THROW(L.canonical({{1, 1}, {1, 2}}), FormatError);
  EXPECT_THROW(L.canonical({{1, 0}, {0, 0}, {1, 2}}), FormatError);
}

TEST(WreathProduct, FiniteEnumeration) {
  WreathProduct<CyclicGroup, CyclicGroup> W(CyclicGroup(2), CyclicGroup(3));
  auto elems = W.elements();
  EXPECT_EQ(elems.size(), 24u);
  EXPECT_TRUE(std::is_sorted(elems.begin(), elems.end()));
  EXPECT_EQ(std::adjacent_find(elems.begin(), elems.end()), elems.end());
  expect_group_axioms(W, elems);
}

TEST(WreathProduct, JsonRoundTrip) {
  WreathProduct<FreeGroup, CyclicGroup> W(FreeGroup(2), CyclicGroup(3));
  auto u = W.make(W.canonical({{1, W.base().reduce({1, -2})}, {2, W.base().generator(2)}}), 2);
  auto j = W.element_to_json(u);
  EXPECT_EQ(j.dump(), R"({"left":[[1,[1,-2]],[2,[2]]],"right":2})");
  EXPECT_EQ(W.element_from_json(nlohmann::json::parse(j.dump())), u);
  EXPECT_EQ(W.format(u), "({1:aB, 2:b}, 2)");
  EXPECT_THROW(W.element_from_json(nlohmann::json::parse(R"({"left":[[1,[1]],[1,[2]]],"right":0})")),
               FormatError);
}

TEST(WordsUpTo, BallSizes) {
  IntegerGroup z;
  EXPECT_EQ(words_up_to(z, {1, -1}, 3).size(), 7u);
  FreeGroup f2(2);
  std::vector<FreeWord> gens{f2.generator(1), f2.generator(2), f2.reduce({-1}), f2.reduce({-2})};
  EXPECT_EQ(words_up_to(f2, gens, 2).size(), 1u + 4u + 12u);
}
