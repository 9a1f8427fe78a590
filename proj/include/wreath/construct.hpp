#ifndef WREATH_CONSTRUCT_HPP
#define WREATH_CONSTRUCT_HPP

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coord_action.hpp"
#include "error.hpp"
#include "groups.hpp"
#include "rational.hpp"
#include "sofic.hpp"
#include "wreath_product.hpp"

namespace wreath {

// -- window sets --------------------------------------------------------------

/// The finite sets the wreath construction is driven by. All vectors are
/// sorted by the element ordering key and duplicate-free.
///
///   F0  = F u {1} u F^-1
///   E1  = { alpha_h(g) : h in pi_H(F0) u {1}, g in pi_G(F0) }
///   E2  = pi_H(F0)
///   E   = S u S^-1  with  S = E2 u U_{g in E1, h in E2} h supp(g)
///   E_A = { g_x : g in E1, x in supp(g) } u {1_G}
///   E_B = E^-1 E
///
/// E is closed under inverses: component g_x is placed at coordinate
/// sigma_B(x^-1) b, so the good block must separate E^-1 as well as E.
template <Group G, Group H>
struct WindowSets {
  using wreath_type = WreathProduct<G, H>;
  using element_type = element_t<wreath_type>;
  using map_type = typename wreath_type::map_type;

  std::vector<element_type> F;
  std::vector<element_type> F0;
  std::vector<map_type> E1;
  std::vector<element_t<H>> E2;
  std::vector<element_t<H>> E;
  std::vector<element_t<G>> E_A;
  std::vector<element_t<H>> E_B;

  bool in_E(element_t<H> const& x) const { return std::binary_search(E.begin(), E.end(), x); }

  friend bool operator==(WindowSets const&, WindowSets const&) = default;
};

namespace detail {

template <class T>
std::vector<T> sorted(std::set<T> const& s) {
  return {s.begin(), s.end()};
}

template <class T>
bool includes(std::vector<T> const& big, std::vector<T> const& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace detail

/// Asserts the containments the construction relies on; throws Error naming
/// the first one that fails.
template <Group G, Group H>
void check_window_invariants(WreathProduct<G, H> const& W, WindowSets<G, H> const& ws) {
  auto const& top = W.top();
  if (!ws.in_E(top.identity())) {
    throw Error("window invariant: 1_H is not in E");
  }
  if (!detail::includes(ws.E, ws.E2)) {
    throw Error("window invariant: E does not contain E2");
  }
  for (auto const& g : ws.E1) {
    for (auto const& h : ws.E2) {
      for (auto const& x : g.support()) {
        if (!ws.in_E(top.mul(h, x))) {
          throw Error("window invariant: E does not contain h supp(g) for h = " +
                      top.format(h) + ", g = " + W.format_map(g));
        }
      }
    }
    for (auto const& [x, gx] : g.entries) {
      if (!std::binary_search(ws.E_A.begin(), ws.E_A.end(), gx)) {
        throw Error("window invariant: E_A misses component " + W.base().format(gx));
      }
    }
  }
  std::set<element_t<H>> needed(ws.E.begin(), ws.E.end());
  for (auto const& x : ws.E) {
    needed.insert(top.inv(x));
    for (auto const& y : ws.E) {
      needed.insert(top.mul(top.inv(x), y));
    }
  }
  if (!detail::includes(ws.E_B, detail::sorted(needed))) {
    throw Error("window invariant: E_B does not contain E u E^-1 u E^-1 E");
  }
}

template <Group G, Group H>
WindowSets<G, H> derive_windows(WreathProduct<G, H> const& W,
                                std::vector<element_t<WreathProduct<G, H>>> const& F) {
  using map_type = typename WreathProduct<G, H>::map_type;
  auto const& base = W.base();
  auto const& top = W.top();

  std::set<element_t<WreathProduct<G, H>>> f0{W.identity()};
  for (auto const& u : F) {
    f0.insert(u);
    f0.insert(W.inv(u));
  }
  std::set<element_t<H>> pi_h;
  std::set<map_type> pi_g;
  for (auto const& u : f0) {
    auto [g, h] = W.projections(u);
    pi_g.insert(std::move(g));
    pi_h.insert(std::move(h));
  }

  std::set<map_type> e1;
  auto shifts = pi_h;
  shifts.insert(top.identity());
  for (auto const& h : shifts) {
    for (auto const& g : pi_g) {
      e1.insert(W.alpha(h, g));
    }
  }

  std::set<element_t<H>> e = pi_h;
  for (auto const& g : e1) {
    for (auto const& h : pi_h) {
      for (auto const& x : g.support()) {
        e.insert(top.mul(h, x));
      }
    }
  }
  for (auto const& x : std::vector<element_t<H>>(e.begin(), e.end())) {
    e.insert(top.inv(x));
  }

  std::set<element_t<G>> e_a{base.identity()};
  for (auto const& g : e1) {
    for (auto const& [x, gx] : g.entries) {
      e_a.insert(gx);
    }
  }

  std::set<element_t<H>> e_b;
  for (auto const& x : e) {
    for (auto const& y : e) {
      e_b.insert(top.mul(top.inv(x), y));
    }
  }

  WindowSets<G, H> ws;
  ws.F = detail::dedupe(F);
  ws.F0 = detail::sorted(f0);
  ws.E1 = detail::sorted(e1);
  ws.E2 = detail::sorted(pi_h);
  ws.E = detail::sorted(e);
  ws.E_A = detail::sorted(e_a);
  ws.E_B = detail::sorted(e_b);
  check_window_invariants(W, ws);
  return ws;
}

/// X u X X: the domain an (X, eps) certificate evaluates.
template <Group G>
std::vector<element_t<G>> certificate_domain(G const& group, std::vector<element_t<G>> const& X) {
  std::set<element_t<G>> out(X.begin(), X.end());
  for (auto const& x : X) {
    for (auto const& y : X) {
      out.insert(group.mul(x, y));
    }
  }
  return {out.begin(), out.end()};
}

template <Group G, Group H>
nlohmann::json to_json(WreathProduct<G, H> const& W, WindowSets<G, H> const& ws) {
  auto list = [](auto const& xs, auto&& fn) {
    auto out = nlohmann::json::array();
    for (auto const& x : xs) {
      out.push_back(fn(x));
    }
    return out;
  };
  auto wreath_key = [&](auto const& u) { return W.element_to_json(u); };
  auto top_key = [&](auto const& h) { return W.top().element_to_json(h); };
  return {{"F", list(ws.F, wreath_key)},
          {"F0", list(ws.F0, wreath_key)},
          {"E1", list(ws.E1, [&](auto const& g) { return W.map_to_json(g); })},
          {"E2", list(ws.E2, top_key)},
          {"E", list(ws.E, top_key)},
          {"E_A", list(ws.E_A, [&](auto const& g) { return W.base().element_to_json(g); })},
          {"E_B", list(ws.E_B, top_key)}};
}

// -- tolerances -------------------------------------------------------------

/// eps' and kappa chosen strictly inside the open bounds
/// eps' < eps / (48 |E|^2), kappa < eps / 12, eps' < kappa / (4 |E|^2).
struct Budget {
  Rational eps;
  Rational kappa;
  Rational eps_prime;
  std::size_t e_size = 1;

  Rational eps_prime_bound() const { return eps / (48 * e_size * e_size); }
  Rational kappa_bound() const { return eps / 12; }
  Rational block_bound() const { return kappa / (4 * e_size * e_size); }

  bool valid() const {
    return eps > 0 && kappa > 0 && eps_prime > 0 && eps_prime < eps_prime_bound() &&
           kappa < kappa_bound() && eps_prime < block_bound();
  }

  friend bool operator==(Budget const&, Budget const&) = default;
};

/// kappa = eps/13, eps' = eps/(96 |E|^2).
inline Budget make_budget(Rational const& eps, std::size_t e_size) {
  if (eps <= 0) {
    throw FormatError("eps must be positive, got " + to_string(eps));
  }
  if (e_size < 1) {
    throw FormatError("|E| must be at least 1");
  }
  Budget b{eps, eps / 13, eps / (96 * e_size * e_size), e_size};
  if (!b.valid()) {
    throw Error("budget invariants violated");
  }
  return b;
}

inline nlohmann::json to_json(Budget const& b) {
  return {{"eps", rational_to_json(b.eps)},
          {"kappa", rational_to_json(b.kappa)},
          {"eps_prime", rational_to_json(b.eps_prime)},
          {"E_size", b.e_size},
          {"eps_prime_bound", rational_to_json(b.eps_prime_bound())},
          {"block_bound", rational_to_json(b.block_bound())}};
}

// -- the good block -----------------------------------------------------------

/// B01: points where sigma_B(h)b are pairwise distinct over h in E.
/// B02: points where sigma_B(h1 h2)b = sigma_B(h1)sigma_B(h2)b for all
/// h1, h2 in E. B0 = B01 n B02.
struct GoodBlock {
  std::size_t b_size = 0;
  std::vector<point_type> B01;
  std::vector<point_type> B02;
  std::vector<point_type> B0;

  bool contains(point_type b) const { return std::binary_search(B0.begin(), B0.end(), b); }

  friend bool operator==(GoodBlock const&, GoodBlock const&) = default;
};

template <Group H>
GoodBlock compute_B0(SoficApprox<H> const& sigma_B, std::vector<element_t<H>> const& E) {
  auto const& top = sigma_B.group();
  std::vector<Permutation const*> single;
  for (auto const& h : E) {
    single.push_back(&sigma_B.at(h));
  }
  std::vector<Permutation const*> product;
  for (auto const& h1 : E) {
    for (auto const& h2 : E) {
      product.push_back(&sigma_B.at(top.mul(h1, h2)));
    }
  }
  GoodBlock block;
  block.b_size = sigma_B.carrier_size();
  std::vector<point_type> images(E.size());
  for (std::size_t b = 0; b < block.b_size; ++b) {
    auto const pb = static_cast<point_type>(b);
    for (std::size_t i = 0; i < E.size(); ++i) {
      images[i] = (*single[i])(pb);
    }
    auto sorted = images;
    std::sort(sorted.begin(), sorted.end());
    bool const separated = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    bool multiplicative = true;
    for (std::size_t i = 0; i < E.size() && multiplicative; ++i) {
      for (std::size_t j = 0; j < E.size() && multiplicative; ++j) {
        multiplicative = (*product[i * E.size() + j])(pb) == (*single[i])(images[j]);
      }
    }
    if (separated) {
      block.B01.push_back(pb);
    }
    if (multiplicative) {
      block.B02.push_back(pb);
    }
    if (separated && multiplicative) {
      block.B0.push_back(pb);
    }
  }
  return block;
}

inline nlohmann::json to_json(GoodBlock const& g) {
  return {{"b_size", g.b_size}, {"B01", g.B01}, {"B02", g.B02}, {"B0", g.B0}};
}

// -- the assembled approximation ----------------------------------------------

/// sigma_hat(g, h) = sigma_hat_A(g) sigma_hat_B(h) on the carrier A^B x B,
/// determined by sigma_A, sigma_B, E and B0.
template <Group G, Group H>
class WreathApprox {
 public:
  using wreath_type = WreathProduct<G, H>;
  using element_type = element_t<wreath_type>;
  using map_type = typename wreath_type::map_type;

  WreathApprox(wreath_type W, SoficApprox<G> sigma_A, SoficApprox<H> sigma_B,
               WindowSets<G, H> windows, GoodBlock block, Budget budget)
      : W_(std::move(W)),
        sigma_A_(std::move(sigma_A)),
        sigma_B_(std::move(sigma_B)),
        windows_(std::move(windows)),
        block_(std::move(block)),
        budget_(std::move(budget)) {}

  wreath_type const& group() const noexcept { return W_; }
  SoficApprox<G> const& sigma_A() const noexcept { return sigma_A_; }
  SoficApprox<H> const& sigma_B() const noexcept { return sigma_B_; }
  WindowSets<G, H> const& windows() const noexcept { return windows_; }
  GoodBlock const& block() const noexcept { return block_; }
  Budget const& budget() const noexcept { return budget_; }
  std::size_t a_size() const noexcept { return sigma_A_.carrier_size(); }
  std::size_t b_size() const noexcept { return sigma_B_.carrier_size(); }

  /// sigma_{A,b0}^{(h)}(g): sigma_A(g) on coordinate sigma_B(h) b0, identity
  /// elsewhere.
  CoordMap single(element_t<G> const& g, element_t<H> const& h, point_type b0) const {
    return CoordMap::single(a_size(), sigma_B_.at(h)(b0), sigma_A_.at(g));
  }

  /// The coordinate carrying component g_x in block b: sigma_B(x^-1) b.
  point_type coordinate(element_t<H> const& x, point_type b) const {
    return sigma_B_.at(W_.top().inv(x))(b);
  }

  /// sigma_{A,b}(g) for b in B0 and supp(g) in E: the product over x in supp(g),
  /// in E order, of sigma_{A,b}^{(x^-1)}(g_x). Factors touch distinct
  /// coordinates because b is in B01.
  CoordMap block_map(map_type const& g, point_type b) const {
    if (!block_.contains(b)) {
      throw WindowError("block " + std::to_string(b) + " is not in B0");
    }
    auto out = CoordMap::identity(a_size());
    for (auto const& [x, gx] : g.entries) {
      if (!windows_.in_E(x)) {
        throw WindowError("support of " + W_.format_map(g) + " escapes E at " +
                          W_.top().format(x));
      }
      out = compose(out, single(gx, W_.top().inv(x), b));
    }
    return out;
  }

  bool supported_in_E(map_type const& g) const {
    return std::all_of(g.entries.begin(), g.entries.end(),
                       [&](auto const& e) { return windows_.in_E(e.first); });
  }

  /// (a, b) -> (sigma_{A,b}(g) a, b) for b in B0, (a, b) off B0; the identity
  /// when supp(g) is not inside E.
  CoordAction hat_A(map_type const& g) const {
    if (g.empty() || !supported_in_E(g)) {
      return CoordAction::identity(a_size(), b_size());
    }
    std::vector<CoordMap> tau(b_size(), CoordMap::identity(a_size()));
    for (auto b : block_.B0) {
      tau[b] = block_map(g, b);
    }
    return CoordAction(a_size(), Permutation::identity(b_size()), std::move(tau));
  }

  /// (a, b) -> (a, sigma_B(h) b).
  CoordAction hat_B(element_t<H> const& h) const {
    return CoordAction::shift(a_size(), sigma_B_.at(h));
  }

  CoordAction operator()(element_type const& u) const {
    return compose(hat_A(u.left), hat_B(u.right));
  }

 private:
  wreath_type W_;
  SoficApprox<G> sigma_A_;
  SoficApprox<H> sigma_B_;
  WindowSets<G, H> windows_;
  GoodBlock block_;
  Budget budget_;
};

/// Derives windows, budget and B0 from the inputs without certifying them.
template <Group G, Group H>
WreathApprox<G, H> assemble(WreathProduct<G, H> const& W, SoficApprox<G> sigma_A,
                            SoficApprox<H> sigma_B,
                            std::vector<element_t<WreathProduct<G, H>>> const& F,
                            Rational const& eps) {
  if (!(sigma_A.group() == W.base()) || !(sigma_B.group() == W.top())) {
    throw FormatError("approximations do not match the wreath product's groups");
  }
  auto windows = derive_windows(W, F);
  auto budget = make_budget(eps, windows.E.size());
  auto block = compute_B0(sigma_B, windows.E);
  return WreathApprox<G, H>(W, std::move(sigma_A), std::move(sigma_B), std::move(windows),
                            std::move(block), std::move(budget));
}

/// Certificates the construction requires of its inputs:
/// sigma_A is (E_A, eps')-sofic and sigma_B is (E_B, eps')-sofic.
template <Group G, Group H>
struct InputCertificates {
  DefectReport<element_t<G>> sigma_A;
  DefectReport<element_t<H>> sigma_B;

  bool pass() const { return sigma_A.pass() && sigma_B.pass(); }
};

template <Group G, Group H>
InputCertificates<G, H> certify_inputs(WreathApprox<G, H> const& w) {
  auto const& eps_prime = w.budget().eps_prime;
  return {is_sofic_approx(w.sigma_A(), w.windows().E_A, eps_prime),
          is_sofic_approx(w.sigma_B(), w.windows().E_B, eps_prime)};
}

/// Assembles sigma_hat and enforces the input certificates. A failed
/// certificate is a CertificateError naming the witness; an input whose
/// window is too small is a WindowError.
template <Group G, Group H>
WreathApprox<G, H> build(WreathProduct<G, H> const& W, SoficApprox<G> sigma_A,
                         SoficApprox<H> sigma_B,
                         std::vector<element_t<WreathProduct<G, H>>> const& F,
                         Rational const& eps) {
  auto w = assemble(W, std::move(sigma_A), std::move(sigma_B), F, eps);
  auto const certs = certify_inputs(w);
  if (!certs.sigma_A.pass()) {
    throw CertificateError("sigma_A is not (E_A, eps')-sofic with eps' = " +
                           to_string(w.budget().eps_prime) + ": " +
                           describe_failure(W.base(), certs.sigma_A));
  }
  if (!certs.sigma_B.pass()) {
    throw CertificateError("sigma_B is not (E_B, eps')-sofic with eps' = " +
                           to_string(w.budget().eps_prime) + ": " +
                           describe_failure(W.top(), certs.sigma_B));
  }
  return w;
}

}  // namespace wreath

#endif  // WREATH_CONSTRUCT_HPP
