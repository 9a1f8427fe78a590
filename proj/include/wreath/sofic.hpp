#ifndef WREATH_SOFIC_HPP
#define WREATH_SOFIC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "groups.hpp"
#include "permutation.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace wreath {

/// A map sigma from a finite window of a group into Sym(n), stored pointwise.
/// Evaluation outside the window is a WindowError; nothing is extended
/// implicitly. sigma(1) = id is not enforced on construction, it is one of
/// the conditions is_sofic_approx checks.
template <Group G>
class SoficApprox {
 public:
  using element_type = element_t<G>;
  using rule_type = std::map<element_type, Permutation>;

  SoficApprox(G group, std::size_t carrier_size, rule_type rule)
      : group_(std::move(group)), carrier_size_(carrier_size), rule_(std::move(rule)) {
    if (carrier_size_ == 0) {
      throw FormatError("carrier size must be >= 1");
    }
    for (auto const& [x, p] : rule_) {
      if (p.degree() != carrier_size_) {
        throw CarrierMismatch("carrier mismatch: rule value at " + group_.format(x) +
                              " has degree " + std::to_string(p.degree()) + ", expected " +
                              std::to_string(carrier_size_));
      }
    }
  }

  G const& group() const noexcept { return group_; }
  std::size_t carrier_size() const noexcept { return carrier_size_; }
  rule_type const& rule() const noexcept { return rule_; }

  bool contains(element_type const& x) const { return rule_.contains(x); }

  Permutation const& at(element_type const& x) const {
    auto it = rule_.find(x);
    if (it == rule_.end()) {
      throw WindowError("window violation: " + group_.format(x) + " is outside the window of " +
                        group_.name() + " approximation");
    }
    return it->second;
  }

  Permutation const& operator()(element_type const& x) const { return at(x); }

  std::vector<element_type> window() const {
    std::vector<element_type> out;
    out.reserve(rule_.size());
    for (auto const& [x, p] : rule_) {
      out.push_back(x);
    }
    return out;
  }

  friend bool operator==(SoficApprox const&, SoficApprox const&) = default;

 private:
  G group_;
  std::size_t carrier_size_;
  rule_type rule_;
};

// -- defect reports ---------------------------------------------------------

/// Exact evidence for the (F, eps) conditions. The multiplicative defect is
/// max_{g,h in F} d(sigma(g)sigma(h), sigma(gh)) and must be < eps; the
/// freeness margin is min_{g in F \ {1}} d(sigma(g), id) and must be > 1 - eps.
/// An empty F \ {1} leaves the margin unset and passes.
template <class E>
struct DefectReport {
  Rational eps;
  Rational worst_defect{0};
  std::optional<std::pair<E, E>> defect_witness;
  std::optional<Rational> free_margin;
  std::optional<E> free_witness;
  bool identity_ok = true;
  bool multiplicative = true;
  bool free = true;

  bool pass() const { return identity_ok && multiplicative && free; }
};

namespace detail {

template <class T>
std::vector<T> dedupe(std::vector<T> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace detail

/// Multiplicativity over F for any rule whose values support compose() and
/// hamming(). Used for both input approximations and the assembled wreath
/// rule.
template <Group G, class Eval>
void measure_multiplicative(G const& group, std::vector<element_t<G>> const& F,
                            Eval&& eval, DefectReport<element_t<G>>& report) {
  auto const set = detail::dedupe(F);
  report.worst_defect = 0;
  report.defect_witness.reset();
  for (auto const& g : set) {
    for (auto const& h : set) {
      auto const d = hamming(compose(eval(g), eval(h)), eval(group.mul(g, h)));
      if (!report.defect_witness || d > report.worst_defect) {
        report.worst_defect = d;
        report.defect_witness = std::pair{g, h};
      }
    }
  }
  report.multiplicative = report.worst_defect < report.eps;
}

template <Group G, class Eval>
void measure_free(G const& group, std::vector<element_t<G>> const& F, Eval&& eval,
                  DefectReport<element_t<G>>& report) {
  report.free_margin.reset();
  report.free_witness.reset();
  for (auto const& g : detail::dedupe(F)) {
    if (is_identity(group, g)) {
      continue;
    }
    auto const d = distance_to_identity(eval(g));
    if (!report.free_margin || d < *report.free_margin) {
      report.free_margin = d;
      report.free_witness = g;
    }
  }
  report.free = !report.free_margin || *report.free_margin > 1 - report.eps;
}

template <Group G>
DefectReport<element_t<G>> is_multiplicative(SoficApprox<G> const& s,
                                             std::vector<element_t<G>> const& F,
                                             Rational const& eps) {
  DefectReport<element_t<G>> report;
  report.eps = eps;
  measure_multiplicative(s.group(), F, [&](auto const& x) -> Permutation const& { return s.at(x); },
                         report);
  return report;
}

template <Group G>
DefectReport<element_t<G>> is_free(SoficApprox<G> const& s, std::vector<element_t<G>> const& F,
                                   Rational const& eps) {
  DefectReport<element_t<G>> report;
  report.eps = eps;
  measure_free(s.group(), F, [&](auto const& x) -> Permutation const& { return s.at(x); }, report);
  return report;
}

template <Group G>
DefectReport<element_t<G>> is_sofic_approx(SoficApprox<G> const& s,
                                           std::vector<element_t<G>> const& F,
                                           Rational const& eps) {
  DefectReport<element_t<G>> report;
  report.eps = eps;
  auto eval = [&](auto const& x) -> Permutation const& { return s.at(x); };
  measure_multiplicative(s.group(), F, eval, report);
  measure_free(s.group(), F, eval, report);
  report.identity_ok = s.at(s.group().identity()).is_identity();
  return report;
}

template <Group G>
nlohmann::json report_to_json(G const& group, DefectReport<element_t<G>> const& r) {
  nlohmann::json out;
  out["eps"] = rational_to_json(r.eps);
  out["multiplicative"] = {
      {"defect", rational_to_json(r.worst_defect)},
      {"witness", r.defect_witness ? nlohmann::json::array({group.element_to_json(r.defect_witness->first),
                                                            group.element_to_json(r.defect_witness->second)})
                                   : nlohmann::json()},
      {"pass", r.multiplicative}};
  out["free"] = {
      {"margin", r.free_margin ? rational_to_json(*r.free_margin) : nlohmann::json()},
      {"witness", r.free_witness ? group.element_to_json(*r.free_witness) : nlohmann::json()},
      {"pass", r.free}};
  out["identity_ok"] = r.identity_ok;
  out["pass"] = r.pass();
  return out;
}

template <Group G>
std::string describe_failure(G const& group, DefectReport<element_t<G>> const& r) {
  std::string out;
  if (!r.identity_ok) {
    out += "sigma(1) is not the identity; ";
  }
  if (!r.multiplicative) {
    out += "multiplicative defect " + to_string(r.worst_defect) + " >= " + to_string(r.eps) +
           " at (" + group.format(r.defect_witness->first) + ", " +
           group.format(r.defect_witness->second) + "); ";
  }
  if (!r.free) {
    out += "freeness margin " + to_string(*r.free_margin) + " <= 1 - " + to_string(r.eps) +
           " at " + group.format(*r.free_witness) + "; ";
  }
  if (!out.empty()) {
    out.resize(out.size() - 2);
  }
  return out;
}

// -- generators -------------------------------------------------------------

/// Tabulates `fn` on the given window.
template <Group G, class Fn>
SoficApprox<G> tabulate(G group, std::size_t carrier_size, std::vector<element_t<G>> const& window,
                        Fn&& fn) {
  typename SoficApprox<G>::rule_type rule;
  for (auto const& x : window) {
    rule.emplace(x, fn(x));
  }
  return SoficApprox<G>(std::move(group), carrier_size, std::move(rule));
}

/// Left-regular representation on the enumerated group: sigma(g)(i) is the
/// index of g * e_i.
template <FiniteGroup G>
SoficApprox<G> regular_rep(G const& group) {
  auto const elements = group.elements();
  std::map<element_t<G>, point_type> index;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    index.emplace(elements[i], static_cast<point_type>(i));
  }
  return tabulate(group, elements.size(), elements, [&](element_t<G> const& g) {
    std::vector<point_type> image(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
      image[i] = index.at(group.mul(g, elements[i]));
    }
    return Permutation(std::move(image));
  });
}

/// Shift by k on Z/N.
inline Permutation cyclic_shift(std::size_t modulus, std::int64_t k) {
  auto const n = static_cast<std::int64_t>(modulus);
  auto const shift = ((k % n) + n) % n;
  std::vector<point_type> image(modulus);
  for (std::int64_t i = 0; i < n; ++i) {
    image[static_cast<std::size_t>(i)] = static_cast<point_type>((i + shift) % n);
  }
  return Permutation(std::move(image));
}

/// Z -> Sym(Z/N), k -> shift by k, on the given window.
inline SoficApprox<IntegerGroup> cyclic_quotient(std::size_t modulus,
                                                 std::vector<std::int64_t> const& window) {
  if (modulus < 1) {
    throw FormatError("cyclic_quotient needs N >= 1");
  }
  return tabulate(IntegerGroup{}, modulus, window,
                  [&](std::int64_t k) { return cyclic_shift(modulus, k); });
}

/// Evaluates reduced words in the assigned generator images: letter +i maps
/// to images[i-1], letter -i to its inverse.
inline Permutation evaluate_word(FreeWord const& w, std::vector<Permutation> const& images) {
  auto out = Permutation::identity(images.front().degree());
  for (int letter : w.letters) {
    auto const& p = images.at(static_cast<std::size_t>(std::abs(letter) - 1));
    out = compose(out, letter > 0 ? p : p.inverse());
  }
  return out;
}

inline SoficApprox<FreeGroup> quotient_by_images(FreeGroup const& group,
                                                 std::vector<Permutation> const& images,
                                                 std::vector<FreeWord> const& window) {
  if (images.size() != static_cast<std::size_t>(group.rank())) {
    throw FormatError("quotient_by_images needs one image per free generator");
  }
  for (auto const& p : images) {
    require_same_degree(p, images.front());
  }
  return tabulate(group, images.front().degree(), window,
                  [&](FreeWord const& w) { return evaluate_word(w, images); });
}

/// Post-composes sigma(g) with a random transposition for each non-identity
/// g in the window, independently with probability `rate`. sigma(1) is left
/// alone.
template <Group G>
SoficApprox<G> perturb(SoficApprox<G> const& s, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw FormatError("perturbation rate must lie in [0, 1]");
  }
  auto rule = s.rule();
  auto const n = s.carrier_size();
  if (n < 2 || rate == 0.0) {
    return s;
  }
  Rng rng(seed);
  for (auto& [x, p] : rule) {
    if (is_identity(s.group(), x)) {
      continue;
    }
    if (rng.unit() < rate) {
      auto const i = static_cast<point_type>(rng.below(n));
      auto const j = static_cast<point_type>((i + 1 + rng.below(n - 1)) % n);
      p = compose(Permutation::transposition(n, i, j), p);
    }
  }
  return SoficApprox<G>(s.group(), n, std::move(rule));
}

// -- serialization ----------------------------------------------------------

template <Group G>
nlohmann::json to_json(SoficApprox<G> const& s) {
  auto window = nlohmann::json::array();
  auto rule = nlohmann::json::array();
  for (auto const& [x, p] : s.rule()) {
    window.push_back(s.group().element_to_json(x));
    rule.push_back({s.group().element_to_json(x), to_json(p)});
  }
  return {{"group", s.group().descriptor()},
          {"carrier_size", s.carrier_size()},
          {"window", window},
          {"rule", rule}};
}

template <Group G>
SoficApprox<G> sofic_from_json(G const& group, nlohmann::json const& j) {
  for (auto key : {"group", "carrier_size", "window", "rule"}) {
    if (!j.contains(key)) {
      throw FormatError(std::string("approximation is missing '") + key + "'");
    }
  }
  if (j.at("group") != group.descriptor()) {
    throw FormatError("approximation group " + j.at("group").dump() + " does not match " +
                      group.descriptor().dump());
  }
  typename SoficApprox<G>::rule_type rule;
  for (auto const& entry : j.at("rule")) {
    if (!entry.is_array() || entry.size() != 2) {
      throw FormatError("rule entries must be [key, permutation]");
    }
    auto x = group.element_from_json(entry[0]);
    if (!rule.emplace(x, permutation_from_json(entry[1])).second) {
      throw FormatError("rule repeats element " + group.format(x));
    }
  }
  std::set<element_t<G>> window;
  for (auto const& key : j.at("window")) {
    window.insert(group.element_from_json(key));
  }
  if (window.size() != rule.size() ||
      !std::equal(window.begin(), window.end(), rule.begin(),
                  [](auto const& w, auto const& r) { return w == r.first; })) {
    throw FormatError("approximation window does not match the rule's domain");
  }
  return SoficApprox<G>(group, j.at("carrier_size").get<std::size_t>(), std::move(rule));
}

}  // namespace wreath

#endif  // WREATH_SOFIC_HPP
