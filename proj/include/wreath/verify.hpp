#ifndef WREATH_VERIFY_HPP
#define WREATH_VERIFY_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "construct.hpp"
#include "coord_action.hpp"
#include "error.hpp"
#include "groups.hpp"
#include "rational.hpp"
#include "sofic.hpp"
#include "wreath_product.hpp"

namespace wreath {

/// A measured quantity with the element(s) that realize it.
struct Measurement {
  Rational value{0};
  nlohmann::json witness;
  std::string witness_text;
};

inline nlohmann::json to_json(Measurement const& m) {
  return {{"value", rational_to_json(m.value)}, {"witness", m.witness}, {"witness_text", m.witness_text}};
}

/// Memoizes a rule on wreath elements.
template <class Key, class Rule>
class CachedRule {
 public:
  using value_type = std::decay_t<std::invoke_result_t<Rule const&, Key const&>>;

  explicit CachedRule(Rule const& rule) : rule_(rule) {}

  value_type const& operator()(Key const& u) const {
    auto it = cache_.find(u);
    if (it == cache_.end()) {
      it = cache_.emplace(u, rule_(u)).first;
    }
    return it->second;
  }

 private:
  Rule const& rule_;
  mutable std::map<Key, value_type> cache_;
};

// -- almost-homomorphism test ----------------------------------------

/// The four hypotheses, each compared strictly against eps/6, and the
/// (F0, eps)-multiplicativity conclusion:
///   [0] restriction to the direct sum is (E1, eps/6)-multiplicative
///   [1] restriction to H is (E2, eps/6)-multiplicative
///   [2] max_{g in E1, h in E2} d(sigma(g,h), sigma(g,1) sigma(1,h))
///   [3] max_{g in E1, h in E2} d(sigma(1,h) sigma(g,1), sigma(alpha_h(g),1) sigma(1,h))
struct AlmostHomReport {
  Rational eps;
  std::array<Measurement, 4> bullets;
  Measurement conclusion;

  Rational bullet_bound() const { return eps / 6; }
  bool bullet_pass(std::size_t i) const { return bullets.at(i).value < bullet_bound(); }
  bool hypotheses_hold() const {
    for (std::size_t i = 0; i < bullets.size(); ++i) {
      if (!bullet_pass(i)) {
        return false;
      }
    }
    return true;
  }
  bool conclusion_holds() const { return conclusion.value < eps; }
};

namespace detail {

inline void raise(Measurement& m, Rational const& d, nlohmann::json witness, std::string text) {
  if (m.witness.is_null() || d > m.value) {
    m.value = d;
    m.witness = std::move(witness);
    m.witness_text = std::move(text);
  }
}

}  // namespace detail

/// Evaluates the hypotheses and, independently, the conclusion for any rule
/// on G wr H whose values support compose() and hamming() (Permutation or
/// CoordAction).
template <Group G, Group H, class Rule>
AlmostHomReport check_almost_homom(
    WreathProduct<G, H> const& W, Rule const& rule,
    std::vector<typename WreathProduct<G, H>::map_type> const& E1,
    std::vector<element_t<H>> const& E2,
    std::vector<element_t<WreathProduct<G, H>>> const& F0, Rational const& eps) {
  using element_type = element_t<WreathProduct<G, H>>;
  CachedRule<element_type, Rule> sigma(rule);
  auto const& top = W.top();
  auto const one_h = top.identity();
  auto lift_g = [&](auto const& g) { return W.make(g, one_h); };
  auto lift_h = [&](auto const& h) { return W.make({}, h); };
  auto pair_json = [](nlohmann::json a, nlohmann::json b) {
    return nlohmann::json::array({std::move(a), std::move(b)});
  };

  AlmostHomReport report;
  report.eps = eps;
  for (auto const& g : E1) {
    for (auto const& g2 : E1) {
      auto d = hamming(compose(sigma(lift_g(g)), sigma(lift_g(g2))), sigma(lift_g(W.map_mul(g, g2))));
      detail::raise(report.bullets[0], d, pair_json(W.map_to_json(g), W.map_to_json(g2)),
                    W.format_map(g) + " * " + W.format_map(g2));
    }
  }
  for (auto const& h : E2) {
    for (auto const& h2 : E2) {
      auto d = hamming(compose(sigma(lift_h(h)), sigma(lift_h(h2))), sigma(lift_h(top.mul(h, h2))));
      detail::raise(report.bullets[1], d, pair_json(top.element_to_json(h), top.element_to_json(h2)),
                    top.format(h) + " * " + top.format(h2));
    }
  }
  for (auto const& g : E1) {
    for (auto const& h : E2) {
      auto witness = pair_json(W.map_to_json(g), top.element_to_json(h));
      auto text = "g = " + W.format_map(g) + ", h = " + top.format(h);
      auto d3 = hamming(sigma(W.make(g, h)), compose(sigma(lift_g(g)), sigma(lift_h(h))));
      detail::raise(report.bullets[2], d3, witness, text);
      auto d4 = hamming(compose(sigma(lift_h(h)), sigma(lift_g(g))),
                        compose(sigma(lift_g(W.alpha(h, g))), sigma(lift_h(h))));
      detail::raise(report.bullets[3], d4, witness, text);
    }
  }
  for (auto const& u : F0) {
    for (auto const& v : F0) {
      auto d = hamming(compose(sigma(u), sigma(v)), sigma(W.mul(u, v)));
      detail::raise(report.conclusion, d, pair_json(W.element_to_json(u), W.element_to_json(v)),
                    W.format(u) + " * " + W.format(v));
    }
  }
  return report;
}

inline nlohmann::json to_json(AlmostHomReport const& r) {
  auto bullets = nlohmann::json::array();
  for (std::size_t i = 0; i < r.bullets.size(); ++i) {
    auto b = to_json(r.bullets[i]);
    b["bound"] = rational_to_json(r.bullet_bound());
    b["pass"] = r.bullet_pass(i);
    bullets.push_back(std::move(b));
  }
  auto conclusion = to_json(r.conclusion);
  conclusion["bound"] = rational_to_json(r.eps);
  conclusion["pass"] = r.conclusion_holds();
  return {{"eps", rational_to_json(r.eps)},
          {"bullets", bullets},
          {"hypotheses_hold", r.hypotheses_hold()},
          {"conclusion", conclusion}};
}

// -- size of the good block -----------------------------------------

struct B0Report {
  std::size_t b_size = 0;
  std::size_t b01 = 0;
  std::size_t b02 = 0;
  std::size_t b0 = 0;
  Rational kappa;
  Rational eps_prime;
  /// (1 - kappa) |B|
  Rational bound;
  bool holds = false;
};

/// Requires eps' < kappa / (4|E|^2) and sigma_B (E_B, eps')-sofic with
/// E_B = E^-1 E (E inverse-closed and containing 1). Either failing is an
/// error, not a report.
template <Group H>
B0Report check_B0_bound(SoficApprox<H> const& sigma_B, std::vector<element_t<H>> const& E,
                        Rational const& kappa, Rational const& eps_prime) {
  if (E.empty() || kappa <= 0 || eps_prime <= 0 ||
      !(eps_prime < kappa / (4 * E.size() * E.size()))) {
    throw FormatError("check_B0_bound needs 0 < eps' < kappa / (4|E|^2)");
  }
  auto const& top = sigma_B.group();
  std::set<element_t<H>> e_b;
  for (auto const& x : E) {
    for (auto const& y : E) {
      e_b.insert(top.mul(top.inv(x), y));
    }
    e_b.insert(x);
    e_b.insert(top.inv(x));
  }
  auto const cert = is_sofic_approx(sigma_B, std::vector<element_t<H>>(e_b.begin(), e_b.end()), eps_prime);
  if (!cert.pass()) {
    throw CertificateError("certificate missing: sigma_B is not (E_B, eps')-sofic: " +
                           describe_failure(top, cert));
  }
  auto const block = compute_B0(sigma_B, E);
  B0Report r;
  r.b_size = block.b_size;
  r.b01 = block.B01.size();
  r.b02 = block.B02.size();
  r.b0 = block.B0.size();
  r.kappa = kappa;
  r.eps_prime = eps_prime;
  r.bound = (1 - kappa) * block.b_size;
  r.holds = Rational(r.b0) >= r.bound;
  return r;
}

inline nlohmann::json to_json(B0Report const& r) {
  return {{"B_size", r.b_size},  {"B01_size", r.b01}, {"B02_size", r.b02},
          {"B0_size", r.b0},     {"kappa", rational_to_json(r.kappa)},
          {"eps_prime", rational_to_json(r.eps_prime)},
          {"bound", rational_to_json(r.bound)}, {"holds", r.holds}};
}

// -- step reports -------------------------------------------------------------

/// Step 1 compares each measured almost-homomorphism hypothesis for sigma_hat with the
/// structural bound read off the good block and with the budget:
///   [0] measured <= (|B|-|B0|)/|B| + (|B0|/|B|) max sum_x d_A  < kappa + |E| eps'
///   [1] measured == sigma_B's defect on E2                     < eps'
///   [2] measured == 0
///   [3] measured <= max_h (|B| - |B0 n sigma_B(h)^-1 B0|)/|B|  <= 2 kappa
/// Step 2 records, for each (g, 1) in F with g != 1, the fixed fraction of
/// sigma_hat(g, 1) against (|B|-|B0|)/|B| + (|B0|/|B|) fix(sigma_A(g_x0))/|A|
/// and kappa + eps'; and for (g, h) in F with h != 1 the comparison
/// d(sigma_hat(g,h), id) >= d(sigma_B(h), id).
struct StepLine {
  std::string label;
  Rational measured;
  Rational structural;
  Rational budget;
  bool measured_within_structural = false;
  bool structural_within_budget = false;
  nlohmann::json witness;
  std::string witness_text;
};

struct Step2Line {
  nlohmann::json element;
  std::string element_text;
  nlohmann::json x0;
  Rational fixed_fraction;
  Rational structural;
  Rational budget;
  bool pass = false;
};

struct FreenessComparison {
  nlohmann::json element;
  std::string element_text;
  Rational distance;
  Rational sigma_B_distance;
  bool pass = false;
};

struct StepReports {
  AlmostHomReport almost_hom;
  std::array<StepLine, 4> step1;
  bool bullet3_exact = false;
  bool bullet2_matches_sigma_B = false;
  std::vector<Step2Line> step2;
  std::vector<FreenessComparison> shifts;
};

template <Group G, Group H>
StepReports step_reports(WreathApprox<G, H> const& w, Rational const& eps) {
  auto const& W = w.group();
  auto const& top = W.top();
  auto const& ws = w.windows();
  auto const& budget = w.budget();
  auto const& block = w.block();
  auto const b_size = Rational(block.b_size);
  auto const b0 = Rational(block.B0.size());
  auto const off_block = (b_size - b0) / b_size;
  auto const e_size = Rational(ws.E.size());

  StepReports out;
  out.almost_hom = check_almost_homom(W, w, ws.E1, ws.E2, ws.F0, eps);

  // [0] pointwise multiplicativity of sigma_A along each block.
  Rational worst_sum = 0;
  for (auto const& g : ws.E1) {
    for (auto const& g2 : ws.E1) {
      Rational sum = 0;
      std::set<element_t<H>> support;
      for (auto const& x : g.support()) support.insert(x);
      for (auto const& x : g2.support()) support.insert(x);
      for (auto const& x : support) {
        auto const a = W.value(g, x);
        auto const a2 = W.value(g2, x);
        sum += hamming(compose(w.sigma_A().at(a), w.sigma_A().at(a2)), w.sigma_A().at(W.base().mul(a, a2)));
      }
      worst_sum = std::max(worst_sum, sum);
    }
  }
  auto& s0 = out.step1[0];
  s0.label = "direct sum (E1, eps/6)-multiplicative";
  s0.measured = out.almost_hom.bullets[0].value;
  s0.structural = (b0 / b_size) * worst_sum;
  s0.budget = budget.kappa + e_size * budget.eps_prime;
  s0.witness = out.almost_hom.bullets[0].witness;
  s0.witness_text = out.almost_hom.bullets[0].witness_text;

  // [1] equals sigma_B's own defect on E2.
  Rational sigma_b_defect = 0;
  for (auto const& h : ws.E2) {
    for (auto const& h2 : ws.E2) {
      sigma_b_defect = std::max(sigma_b_defect, hamming(compose(w.sigma_B().at(h), w.sigma_B().at(h2)),
                                                         w.sigma_B().at(top.mul(h, h2))));
    }
  }
  auto& s1 = out.step1[1];
  s1.label = "H (E2, eps/6)-multiplicative";
  s1.measured = out.almost_hom.bullets[1].value;
  s1.structural = sigma_b_defect;
  s1.budget = budget.eps_prime;
  s1.witness = out.almost_hom.bullets[1].witness;
  s1.witness_text = out.almost_hom.bullets[1].witness_text;
  out.bullet2_matches_sigma_B = s1.measured == sigma_b_defect;

  auto& s2 = out.step1[2];
  s2.label = "sigma(g,h) = sigma(g,1) sigma(1,h)";
  s2.measured = out.almost_hom.bullets[2].value;
  s2.structural = 0;
  s2.budget = 0;
  s2.witness = out.almost_hom.bullets[2].witness;
  s2.witness_text = out.almost_hom.bullets[2].witness_text;
  out.bullet3_exact = s2.measured == 0;

  // [3] only blocks leaving B0 under sigma_B(h) can disagree.
  std::vector<bool> in_b0(block.b_size, false);
  for (auto b : block.B0) in_b0[b] = true;
  Rational worst_escape = 0;
  for (auto const& h : ws.E2) {
    auto const& p = w.sigma_B().at(h);
    std::size_t stay = 0;
    for (auto b : block.B0) {
      stay += in_b0[p(b)];
    }
    worst_escape = std::max(worst_escape, (b_size - stay) / b_size);
  }
  auto& s3 = out.step1[3];
  s3.label = "sigma(1,h) sigma(g,1) ~ sigma(alpha_h(g),1) sigma(1,h)";
  s3.measured = out.almost_hom.bullets[3].value;
  s3.structural = worst_escape;
  s3.budget = 2 * budget.kappa;
  s3.witness = out.almost_hom.bullets[3].witness;
  s3.witness_text = out.almost_hom.bullets[3].witness_text;

  for (std::size_t i = 0; i < 4; ++i) {
    auto& s = out.step1[i];
    if (i == 0) {
      // measured counts only blocks in B0; the off-block term is the
      // kappa slack of the budget.
      s.measured_within_structural = s.measured <= s.structural;
      s.structural_within_budget = off_block + s.structural < s.budget;
    } else if (i == 1) {
      s.measured_within_structural = s.measured == s.structural;
      s.structural_within_budget = s.structural < s.budget;
    } else if (i == 2) {
      s.measured_within_structural = s.measured == 0;
      s.structural_within_budget = true;
    } else {
      s.measured_within_structural = s.measured <= s.structural;
      s.structural_within_budget = s.structural <= s.budget;
    }
  }

  auto const one_h = top.identity();
  for (auto const& u : ws.F) {
    if (u.right == one_h) {
      if (u.left.empty()) {
        continue;
      }
      auto const& [x0, g_x0] = u.left.entries.front();
      auto const& a = w.sigma_A().at(g_x0);
      Step2Line line;
      line.element = W.element_to_json(u);
      line.element_text = W.format(u);
      line.x0 = top.element_to_json(x0);
      line.fixed_fraction = ca_fixed_fraction(w(u));
      line.structural = off_block + (b0 / b_size) * Rational(a.fixed_points(), a.degree());
      line.budget = budget.kappa + budget.eps_prime;
      line.pass = line.fixed_fraction <= line.structural && line.structural <= line.budget;
      out.step2.push_back(std::move(line));
    } else {
      FreenessComparison cmp;
      cmp.element = W.element_to_json(u);
      cmp.element_text = W.format(u);
      cmp.distance = distance_to_identity(w(u));
      cmp.sigma_B_distance = distance_to_identity(w.sigma_B().at(u.right));
      cmp.pass = cmp.distance >= cmp.sigma_B_distance;
      out.shifts.push_back(std::move(cmp));
    }
  }
  return out;
}

inline nlohmann::json to_json(StepReports const& r) {
  auto step1 = nlohmann::json::array();
  for (auto const& s : r.step1) {
    step1.push_back({{"label", s.label},
                     {"measured", rational_to_json(s.measured)},
                     {"structural", rational_to_json(s.structural)},
                     {"budget", rational_to_json(s.budget)},
                     {"measured_within_structural", s.measured_within_structural},
                     {"structural_within_budget", s.structural_within_budget},
                     {"witness", s.witness},
                     {"witness_text", s.witness_text}});
  }
  auto step2 = nlohmann::json::array();
  for (auto const& s : r.step2) {
    step2.push_back({{"element", s.element},
                     {"element_text", s.element_text},
                     {"x0", s.x0},
                     {"fixed_fraction", rational_to_json(s.fixed_fraction)},
                     {"structural", rational_to_json(s.structural)},
                     {"budget", rational_to_json(s.budget)},
                     {"pass", s.pass}});
  }
  auto shifts = nlohmann::json::array();
  for (auto const& s : r.shifts) {
    shifts.push_back({{"element", s.element},
                      {"element_text", s.element_text},
                      {"distance", rational_to_json(s.distance)},
                      {"sigma_B_distance", rational_to_json(s.sigma_B_distance)},
                      {"pass", s.pass}});
  }
  return {{"almost_hom", to_json(r.almost_hom)},
          {"step1", step1},
          {"bullet3_exact", r.bullet3_exact},
          {"bullet2_matches_sigma_B", r.bullet2_matches_sigma_B},
          {"step2", step2},
          {"shift_freeness", shifts}};
}

// -- the certificate ----------------------------------------------------------

struct PairDefect {
  nlohmann::json first;
  nlohmann::json second;
  std::string text;
  Rational defect;
};

struct FreeMargin {
  nlohmann::json element;
  std::string text;
  Rational margin;
};

/// (F, eps)-soficity of sigma_hat with every pairwise defect and every
/// freeness margin, exact.
struct Certificate {
  Rational eps;
  nlohmann::json window;
  bool identity_ok = false;
  std::vector<PairDefect> mult_defects;
  std::vector<FreeMargin> free_margins;
  StepReports steps;
  std::vector<std::string> violations;
  std::uint64_t seed = 0;

  bool pass() const { return violations.empty(); }
};

template <Group G, Group H>
Certificate verify_construction(WreathApprox<G, H> const& w, Rational const& eps,
                                std::uint64_t seed = 0) {
  auto const& W = w.group();
  auto const& F = w.windows().F;
  using element_type = element_t<WreathProduct<G, H>>;
  CachedRule<element_type, WreathApprox<G, H>> sigma(w);

  Certificate c;
  c.eps = eps;
  c.seed = seed;
  c.window = nlohmann::json::array();
  for (auto const& u : F) {
    c.window.push_back(W.element_to_json(u));
  }
  c.identity_ok = sigma(W.identity()).is_identity();
  if (!c.identity_ok) {
    c.violations.push_back("sigma_hat(1, 1) is not the identity");
  }
  for (auto const& u : F) {
    for (auto const& v : F) {
      auto d = hamming(compose(sigma(u), sigma(v)), sigma(W.mul(u, v)));
      auto text = W.format(u) + " * " + W.format(v);
      if (!(d < eps)) {
        c.violations.push_back("multiplicative defect " + to_string(d) + " >= eps at " + text);
      }
      c.mult_defects.push_back({W.element_to_json(u), W.element_to_json(v), std::move(text), d});
    }
  }
  for (auto const& u : F) {
    if (u == W.identity()) {
      continue;
    }
    auto m = distance_to_identity(sigma(u));
    if (!(m > 1 - eps)) {
      c.violations.push_back("freeness margin " + to_string(m) + " <= 1 - eps at " + W.format(u));
    }
    c.free_margins.push_back({W.element_to_json(u), W.format(u), m});
  }
  c.steps = step_reports(w, eps);
  return c;
}

inline nlohmann::json to_json(Certificate const& c) {
  auto mult = nlohmann::json::array();
  for (auto const& p : c.mult_defects) {
    mult.push_back({{"first", p.first}, {"second", p.second}, {"text", p.text},
                    {"defect", rational_to_json(p.defect)}});
  }
  auto free = nlohmann::json::array();
  for (auto const& m : c.free_margins) {
    free.push_back({{"element", m.element}, {"text", m.text}, {"margin", rational_to_json(m.margin)}});
  }
  return {{"format", 1},
          {"kind", "sofic-certificate"},
          {"window", c.window},
          {"eps", rational_to_json(c.eps)},
          {"identity_ok", c.identity_ok},
          {"mult_defects", mult},
          {"free_margins", free},
          {"steps", to_json(c.steps)},
          {"violations", c.violations},
          {"pass", c.pass()},
          {"seed", c.seed}};
}

// -- brute-force cross-check ------------------------------------------------

/// Recomputes every distance in the certificate on the explicit carrier and
/// returns the disagreements (empty on success). Throws ExpansionTooLarge when
/// the carrier exceeds `cap`.
template <Group G, Group H>
std::vector<std::string> oracle_crosscheck(WreathApprox<G, H> const& w, Certificate const& c,
                                           std::uint64_t cap = default_expansion_cap) {
  auto const& W = w.group();
  auto const& F = w.windows().F;
  using element_type = element_t<WreathProduct<G, H>>;
  auto explicit_rule = [&](element_type const& u) { return expand_explicit(w(u), cap); };
  // Probe the carrier size before evaluating anything else.
  (void)expand_explicit(CoordAction::identity(w.a_size(), w.b_size()), cap);
  CachedRule<element_type, decltype(explicit_rule)> sigma(explicit_rule);

  std::vector<std::string> mismatches;
  std::size_t k = 0;
  for (auto const& u : F) {
    for (auto const& v : F) {
      auto d = hamming(compose(sigma(u), sigma(v)), sigma(W.mul(u, v)));
      if (k >= c.mult_defects.size() || d != c.mult_defects[k].defect) {
        mismatches.push_back("defect at " + W.format(u) + " * " + W.format(v) + ": explicit " +
                             to_string(d));
      }
      ++k;
    }
  }
  k = 0;
  for (auto const& u : F) {
    if (u == W.identity()) {
      continue;
    }
    auto m = distance_to_identity(sigma(u));
    if (k >= c.free_margins.size() || m != c.free_margins[k].margin) {
      mismatches.push_back("margin at " + W.format(u) + ": explicit " + to_string(m));
    }
    ++k;
  }
  if (sigma(W.identity()).is_identity() != c.identity_ok) {
    mismatches.push_back("identity check disagrees with explicit expansion");
  }
  return mismatches;
}

}  // namespace wreath

#endif  // WREATH_VERIFY_HPP
