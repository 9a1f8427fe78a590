#ifndef WREATH_WREATH_PRODUCT_HPP
#define WREATH_WREATH_PRODUCT_HPP

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "groups.hpp"

namespace wreath {

/// A finitely supported map H -> G, i.e. an element of the restricted direct
/// sum of copies of G indexed by H. Canonical form: entries sorted by the
/// H ordering key, no repeated index, no identity value. Canonicalization
/// needs the groups, so it is done by WreathProduct.
template <class GE, class HE>
struct FinSuppMap {
  std::vector<std::pair<HE, GE>> entries;

  bool empty() const noexcept { return entries.empty(); }
  std::size_t size() const noexcept { return entries.size(); }

  std::vector<HE> support() const {
    std::vector<HE> out;
    out.reserve(entries.size());
    for (auto const& [x, g] : entries) {
      out.push_back(x);
    }
    return out;
  }

  /// Value at x, or nullopt when x is outside the support.
  std::optional<GE> find(HE const& x) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), x,
                               [](auto const& e, HE const& key) { return e.first < key; });
    if (it != entries.end() && it->first == x) {
      return it->second;
    }
    return std::nullopt;
  }

  friend bool operator==(FinSuppMap const&, FinSuppMap const&) = default;
  friend auto operator<=>(FinSuppMap const&, FinSuppMap const&) = default;
};

/// (f, h) with f in the direct sum and h in H.
template <class GE, class HE>
struct WreathElement {
  FinSuppMap<GE, HE> left;
  HE right;

  friend bool operator==(WreathElement const&, WreathElement const&) = default;
  friend auto operator<=>(WreathElement const&, WreathElement const&) = default;
};

/// The restricted wreath product G wr H with the shift action
/// alpha_h((g_x)_x) = (g_{h^-1 x})_x and law (f, h)(f', h') = (f alpha_h(f'), hh').
template <Group G, Group H>
class WreathProduct {
 public:
  using base_element = element_t<G>;
  using index_element = element_t<H>;
  using map_type = FinSuppMap<base_element, index_element>;
  using element_type = WreathElement<base_element, index_element>;

  WreathProduct(G base, H top) : base_(std::move(base)), top_(std::move(top)) {}

  G const& base() const noexcept { return base_; }
  H const& top() const noexcept { return top_; }

  // -- the direct sum ------------------------------------------------------

  /// Sorts, rejects repeated indices, and drops identity values.
  map_type canonical(std::vector<std::pair<index_element, base_element>> entries) const {
    std::sort(entries.begin(), entries.end(),
              [](auto const& a, auto const& b) { return a.first < b.first; });
    map_type out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto& e = entries[i];
      if (i > 0 && entries[i - 1].first == e.first) {
        throw FormatError("repeated index " + top_.format(e.first) + " in finitely supported map");
      }
      if (!is_identity(base_, e.second)) {
        out.entries.push_back(e);
      }
    }
    return out;
  }

  /// The map taking x to g and everything else to 1.
  map_type delta(index_element const& x, base_element const& g) const {
    return canonical({{x, g}});
  }

  base_element value(map_type const& f, index_element const& x) const {
    auto v = f.find(x);
    return v ? *v : base_.identity();
  }

  /// Pointwise product.
  map_type map_mul(map_type const& f, map_type const& g) const {
    map_type out;
    auto i = f.entries.begin();
    auto j = g.entries.begin();
    while (i != f.entries.end() || j != g.entries.end()) {
      if (j == g.entries.end() || (i != f.entries.end() && i->first < j->first)) {
        out.entries.push_back(*i++);
      } else if (i == f.entries.end() || j->first < i->first) {
        out.entries.push_back(*j++);
      } else {
        auto v = base_.mul(i->second, j->second);
        if (!is_identity(base_, v)) {
          out.entries.emplace_back(i->first, std::move(v));
        }
        ++i;
        ++j;
      }
    }
    return out;
  }

  map_type map_inv(map_type const& f) const {
    map_type out;
    out.entries.reserve(f.entries.size());
    for (auto const& [x, g] : f.entries) {
      out.entries.emplace_back(x, base_.inv(g));
    }
    return out;
  }

  /// alpha_h(f)(x) = f(h^-1 x); the support moves to h * supp(f).
  map_type alpha(index_element const& h, map_type const& f) const {
    std::vector<std::pair<index_element, base_element>> moved;
    moved.reserve(f.entries.size());
    for (auto const& [x, g] : f.entries) {
      moved.emplace_back(top_.mul(h, x), g);
    }
    std::sort(moved.begin(), moved.end(),
              [](auto const& a, auto const& b) { return a.first < b.first; });
    return map_type{std::move(moved)};
  }

  // -- the wreath product as a group --------------------------------------

  element_type identity() const { return {map_type{}, top_.identity()}; }

  element_type make(map_type f, index_element h) const { return {std::move(f), std::move(h)}; }

  element_type mul(element_type const& u, element_type const& v) const {
    return {map_mul(u.left, alpha(u.right, v.left)), top_.mul(u.right, v.right)};
  }

  element_type inv(element_type const& u) const {
    auto h_inv = top_.inv(u.right);
    return {alpha(h_inv, map_inv(u.left)), std::move(h_inv)};
  }

  /// (pi_G(u), pi_H(u)).
  std::pair<map_type, index_element> projections(element_type const& u) const {
    return {u.left, u.right};
  }

  std::vector<element_type> elements() const
    requires FiniteGroup<G> && FiniteGroup<H>
  {
    auto const gs = base_.elements();
    auto const hs = top_.elements();
    std::vector<element_type> out;
    std::vector<std::size_t> digits(hs.size(), 0);
    while (true) {
      std::vector<std::pair<index_element, base_element>> entries;
      for (std::size_t i = 0; i < hs.size(); ++i) {
        entries.emplace_back(hs[i], gs[digits[i]]);
      }
      auto f = canonical(std::move(entries));
      for (auto const& h : hs) {
        out.push_back({f, h});
      }
      std::size_t pos = 0;
      while (pos < digits.size() && ++digits[pos] == gs.size()) {
        digits[pos++] = 0;
      }
      if (pos == digits.size()) {
        break;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  nlohmann::json map_to_json(map_type const& f) const {
    auto out = nlohmann::json::array();
    for (auto const& [x, g] : f.entries) {
      out.push_back({top_.element_to_json(x), base_.element_to_json(g)});
    }
    return out;
  }

  map_type map_from_json(nlohmann::json const& j) const {
    if (!j.is_array()) {
      throw FormatError("finitely supported map must be an array of [h, g] pairs");
    }
    std::vector<std::pair<index_element, base_element>> entries;
    for (auto const& e : j) {
      if (!e.is_array() || e.size() != 2) {
        throw FormatError("finitely supported map entry must be [h, g]");
      }
      entries.emplace_back(top_.element_from_json(e[0]), base_.element_from_json(e[1]));
    }
    return canonical(std::move(entries));
  }

  /// {"left": [[h-key, g-key], ...], "right": h-key}
  nlohmann::json element_to_json(element_type const& u) const {
    return {{"left", map_to_json(u.left)}, {"right", top_.element_to_json(u.right)}};
  }

  element_type element_from_json(nlohmann::json const& j) const {
    if (!j.is_object() || !j.contains("left") || !j.contains("right")) {
      throw FormatError("wreath element must be {\"left\", \"right\"}");
    }
    return {map_from_json(j.at("left")), top_.element_from_json(j.at("right"))};
  }

  std::string format_map(map_type const& f) const {
    std::string out = "{";
    for (std::size_t i = 0; i < f.entries.size(); ++i) {
      out += (i ? ", " : "") + top_.format(f.entries[i].first) + ":" +
             base_.format(f.entries[i].second);
    }
    return out + "}";
  }

  std::string format(element_type const& u) const {
    return "(" + format_map(u.left) + ", " + top_.format(u.right) + ")";
  }

  nlohmann::json descriptor() const {
    return {{"kind", "wreath"}, {"base", base_.descriptor()}, {"top", top_.descriptor()}};
  }

  std::string name() const { return base_.name() + " wr " + top_.name(); }

  friend bool operator==(WreathProduct const&, WreathProduct const&) = default;

 private:
  G base_;
  H top_;
};

/// All products of at most `length` elements of `generators` (the identity
/// included), as a sorted set.
template <Group G>
std::set<element_t<G>> words_up_to(G const& group, std::vector<element_t<G>> const& generators,
                                   std::size_t length) {
  std::set<element_t<G>> out{group.identity()};
  std::set<element_t<G>> frontier = out;
  for (std::size_t step = 0; step < length; ++step) {
    std::set<element_t<G>> next;
    for (auto const& w : frontier) {
      for (auto const& s : generators) {
        auto p = group.mul(w, s);
        if (!out.contains(p)) {
          next.insert(p);
        }
      }
    }
    out.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace wreath

#endif  // WREATH_WREATH_PRODUCT_HPP
