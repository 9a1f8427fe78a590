#ifndef WREATH_COORD_ACTION_HPP
#define WREATH_COORD_ACTION_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "permutation.hpp"
#include "rational.hpp"

namespace wreath {

/// A permutation of A^B that transforms each coordinate independently:
/// (a_c)_c -> (p_c(a_c))_c. Stored sparsely, sorted by coordinate, with
/// identity entries dropped.
class CoordMap {
 public:
  using entry_type = std::pair<point_type, Permutation>;

  CoordMap() = default;

  /// Entries may be unsorted and may contain identities; repeated
  /// coordinates are rejected.
  CoordMap(std::size_t a_size, std::vector<entry_type> entries) : a_size_(a_size) {
    std::sort(entries.begin(), entries.end(),
              [](auto const& x, auto const& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i > 0 && entries[i - 1].first == entries[i].first) {
        throw FormatError("repeated coordinate " + std::to_string(entries[i].first));
      }
      if (entries[i].second.degree() != a_size) {
        throw CarrierMismatch();
      }
      if (!entries[i].second.is_identity()) {
        entries_.push_back(entries[i]);
      }
    }
  }

  static CoordMap identity(std::size_t a_size) { return CoordMap(a_size, {}); }

  /// The map acting by p on coordinate c only.
  static CoordMap single(std::size_t a_size, point_type c, Permutation p) {
    return CoordMap(a_size, {{c, std::move(p)}});
  }

  std::size_t a_size() const noexcept { return a_size_; }
  std::vector<entry_type> const& entries() const noexcept { return entries_; }
  bool is_identity() const noexcept { return entries_.empty(); }

  Permutation const* find(point_type c) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                               [](auto const& e, point_type key) { return e.first < key; });
    return it != entries_.end() && it->first == c ? &it->second : nullptr;
  }

  friend bool operator==(CoordMap const&, CoordMap const&) = default;

 private:
  std::size_t a_size_ = 1;
  std::vector<entry_type> entries_;
};

/// second after first, coordinate by coordinate.
inline CoordMap compose(CoordMap const& second, CoordMap const& first) {
  if (second.a_size() != first.a_size()) {
    throw CarrierMismatch();
  }
  std::vector<CoordMap::entry_type> out;
  auto i = second.entries().begin();
  auto j = first.entries().begin();
  auto const i_end = second.entries().end();
  auto const j_end = first.entries().end();
  while (i != i_end || j != j_end) {
    if (j == j_end || (i != i_end && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == i_end || j->first < i->first) {
      out.push_back(*j++);
    } else {
      out.emplace_back(i->first, compose(i->second, j->second));
      ++i;
      ++j;
    }
  }
  return CoordMap(second.a_size(), std::move(out));
}

inline CoordMap inverse(CoordMap const& m) {
  std::vector<CoordMap::entry_type> out;
  out.reserve(m.entries().size());
  for (auto const& [c, p] : m.entries()) {
    out.emplace_back(c, p.inverse());
  }
  return CoordMap(m.a_size(), std::move(out));
}

/// A permutation of the carrier A^B x B of the form
///   (a, b) -> (tau[b](a), beta(b)),
/// where each tau[b] is a CoordMap. The class is closed under composition and
/// inversion and holds every value of the wreath construction.
///
/// Points are encoded (only by expand_explicit) as the mixed-radix integer
///   b * |A|^|B| + sum_c a_c * |A|^c,   c = 0, ..., |B|-1.
class CoordAction {
 public:
  CoordAction() = default;

  CoordAction(std::size_t a_size, Permutation beta, std::vector<CoordMap> tau)
      : a_size_(a_size), beta_(std::move(beta)), tau_(std::move(tau)) {
    if (a_size_ == 0 || beta_.degree() == 0) {
      throw FormatError("coordinate action needs |A| >= 1 and |B| >= 1");
    }
    if (tau_.size() != beta_.degree()) {
      throw CarrierMismatch("carrier mismatch: tau has " + std::to_string(tau_.size()) +
                            " blocks, beta has degree " + std::to_string(beta_.degree()));
    }
    for (auto const& m : tau_) {
      if (m.a_size() != a_size_) {
        throw CarrierMismatch();
      }
      if (!m.entries().empty() && m.entries().back().first >= beta_.degree()) {
        throw FormatError("coordinate " + std::to_string(m.entries().back().first) +
                          " outside B");
      }
    }
  }

  static CoordAction identity(std::size_t a_size, std::size_t b_size) {
    return CoordAction(a_size, Permutation::identity(b_size),
                       std::vector<CoordMap>(b_size, CoordMap::identity(a_size)));
  }

  /// (a, b) -> (a, beta(b)).
  static CoordAction shift(std::size_t a_size, Permutation beta) {
    auto const b_size = beta.degree();
    return CoordAction(a_size, std::move(beta),
                       std::vector<CoordMap>(b_size, CoordMap::identity(a_size)));
  }

  std::size_t a_size() const noexcept { return a_size_; }
  std::size_t b_size() const noexcept { return beta_.degree(); }
  Permutation const& beta() const noexcept { return beta_; }
  std::vector<CoordMap> const& tau() const noexcept { return tau_; }
  CoordMap const& tau(point_type b) const { return tau_.at(b); }

  bool is_identity() const {
    return beta_.is_identity() &&
           std::all_of(tau_.begin(), tau_.end(), [](auto const& m) { return m.is_identity(); });
  }

  /// |A|^|B| * |B|, or nullopt if it does not fit in 64 bits.
  std::optional<std::uint64_t> carrier_size() const {
    std::uint64_t size = b_size();
    for (std::size_t c = 0; c < b_size(); ++c) {
      if (a_size_ > 1 && size > std::numeric_limits<std::uint64_t>::max() / a_size_) {
        return std::nullopt;
      }
      size *= a_size_;
    }
    return size;
  }

  friend bool operator==(CoordAction const&, CoordAction const&) = default;

 private:
  std::size_t a_size_ = 1;
  Permutation beta_;
  std::vector<CoordMap> tau_;
};

inline void require_same_shape(CoordAction const& w, CoordAction const& v) {
  if (w.a_size() != v.a_size() || w.b_size() != v.b_size()) {
    throw CarrierMismatch("carrier mismatch: (|A|, |B|) = (" + std::to_string(w.a_size()) + ", " +
                          std::to_string(w.b_size()) + ") vs (" + std::to_string(v.a_size()) +
                          ", " + std::to_string(v.b_size()) + ")");
  }
}

/// w2 after w1: beta = beta2 beta1, tau[b] = tau2[beta1(b)] tau1[b].
inline CoordAction compose(CoordAction const& w2, CoordAction const& w1) {
  require_same_shape(w2, w1);
  std::vector<CoordMap> tau;
  tau.reserve(w1.b_size());
  for (std::size_t b = 0; b < w1.b_size(); ++b) {
    auto const pb = static_cast<point_type>(b);
    tau.push_back(compose(w2.tau(w1.beta()(pb)), w1.tau(pb)));
  }
  return CoordAction(w1.a_size(), compose(w2.beta(), w1.beta()), std::move(tau));
}

inline CoordAction inverse(CoordAction const& w) {
  std::vector<CoordMap> tau(w.b_size());
  for (std::size_t b = 0; b < w.b_size(); ++b) {
    auto const pb = static_cast<point_type>(b);
    tau[w.beta()(pb)] = inverse(w.tau(pb));
  }
  return CoordAction(w.a_size(), w.beta().inverse(), std::move(tau));
}

namespace detail {

// Agreement count of p and q on A, with nullptr standing for the identity.
inline std::size_t coordinate_agreement(Permutation const* p, Permutation const* q,
                                        std::size_t a_size) {
  if (p && q) {
    return agreement_count(*p, *q);
  }
  if (p || q) {
    return (p ? p : q)->fixed_points();
  }
  return a_size;
}

}  // namespace detail

/// Fraction of carrier points where w and v agree:
///   (1/|B|) sum_{b : beta_w(b) = beta_v(b)} prod_c agree(tau_w[b][c], tau_v[b][c]) / |A|.
/// Each block term is an integer over |A|^k; terms are lifted to a common
/// denominator |A|^K |B| and reduced once.
inline Rational ca_agreement(CoordAction const& w, CoordAction const& v) {
  require_same_shape(w, v);
  auto const a = w.a_size();
  std::vector<std::pair<BigInt, std::size_t>> terms;
  std::size_t max_k = 0;
  for (std::size_t b = 0; b < w.b_size(); ++b) {
    auto const pb = static_cast<point_type>(b);
    if (w.beta()(pb) != v.beta()(pb)) {
      continue;
    }
    auto const& ew = w.tau(pb).entries();
    auto const& ev = v.tau(pb).entries();
    BigInt num = 1;
    std::size_t k = 0;
    bool zero = false;
    auto i = ew.begin();
    auto j = ev.begin();
    while (!zero && (i != ew.end() || j != ev.end())) {
      Permutation const* p = nullptr;
      Permutation const* q = nullptr;
      if (j == ev.end() || (i != ew.end() && i->first < j->first)) {
        p = &(i++)->second;
      } else if (i == ew.end() || j->first < i->first) {
        q = &(j++)->second;
      } else {
        p = &(i++)->second;
        q = &(j++)->second;
      }
      auto const agree = detail::coordinate_agreement(p, q, a);
      if (agree == 0) {
        zero = true;
      } else if (agree != a) {
        num *= agree;
        ++k;
      }
    }
    if (!zero) {
      max_k = std::max(max_k, k);
      terms.emplace_back(std::move(num), k);
    }
  }
  std::vector<BigInt> powers{BigInt(1)};
  for (std::size_t e = 1; e <= max_k; ++e) {
    powers.push_back(powers.back() * a);
  }
  BigInt total = 0;
  for (auto const& [num, k] : terms) {
    total += num * powers[max_k - k];
  }
  return Rational(total, powers[max_k] * w.b_size());
}

/// Normalized Hamming distance on the carrier A^B x B, evaluated without
/// materializing it.
inline Rational ca_hamming(CoordAction const& w, CoordAction const& v) {
  return 1 - ca_agreement(w, v);
}

/// Fraction of carrier points fixed by w.
inline Rational ca_fixed_fraction(CoordAction const& w) {
  return ca_agreement(w, CoordAction::identity(w.a_size(), w.b_size()));
}

inline Rational hamming(CoordAction const& w, CoordAction const& v) { return ca_hamming(w, v); }

inline Rational distance_to_identity(CoordAction const& w) { return 1 - ca_fixed_fraction(w); }

inline constexpr std::uint64_t default_expansion_cap = 1'000'000;

/// The explicit permutation of the carrier, in the mixed-radix encoding
/// documented on CoordAction.
inline Permutation expand_explicit(CoordAction const& w,
                                   std::uint64_t cap = default_expansion_cap) {
  auto const size = w.carrier_size();
  if (!size || *size > cap) {
    throw ExpansionTooLarge();
  }
  auto const a = static_cast<std::uint64_t>(w.a_size());
  auto const block = *size / w.b_size();
  std::vector<std::uint64_t> place(w.b_size(), 1);
  for (std::size_t c = 1; c < place.size(); ++c) {
    place[c] = place[c - 1] * a;
  }
  std::vector<point_type> image(*size);
  for (std::size_t b = 0; b < w.b_size(); ++b) {
    auto const pb = static_cast<point_type>(b);
    auto const& entries = w.tau(pb).entries();
    auto const target = static_cast<std::uint64_t>(w.beta()(pb)) * block;
    for (std::uint64_t rest = 0; rest < block; ++rest) {
      std::uint64_t moved = rest;
      for (auto const& [c, p] : entries) {
        auto const digit = (rest / place[c]) % a;
        moved = moved - digit * place[c] + static_cast<std::uint64_t>(p(static_cast<point_type>(digit))) * place[c];
      }
      image[b * block + rest] = static_cast<point_type>(target + moved);
    }
  }
  return Permutation(std::move(image));
}

inline nlohmann::json to_json(CoordAction const& w) {
  auto tau = nlohmann::json::array();
  for (std::size_t b = 0; b < w.b_size(); ++b) {
    auto const& entries = w.tau(static_cast<point_type>(b)).entries();
    if (entries.empty()) {
      continue;
    }
    auto row = nlohmann::json::array();
    for (auto const& [c, p] : entries) {
      row.push_back({c, std::vector<point_type>(p.image().begin(), p.image().end())});
    }
    tau.push_back({b, row});
  }
  return {{"a_size", w.a_size()},
          {"b_size", w.b_size()},
          {"beta", std::vector<point_type>(w.beta().image().begin(), w.beta().image().end())},
          {"tau", tau}};
}

inline CoordAction coord_action_from_json(nlohmann::json const& j) {
  for (auto key : {"a_size", "b_size", "beta", "tau"}) {
    if (!j.contains(key)) {
      throw FormatError(std::string("coordinate action is missing '") + key + "'");
    }
  }
  auto const a = j.at("a_size").get<std::size_t>();
  auto const b_size = j.at("b_size").get<std::size_t>();
  Permutation beta(j.at("beta").get<std::vector<point_type>>());
  if (beta.degree() != b_size) {
    throw FormatError("beta degree does not match b_size");
  }
  std::vector<CoordMap> tau(b_size, CoordMap::identity(a));
  std::vector<bool> seen(b_size, false);
  for (auto const& row : j.at("tau")) {
    auto const b = row.at(0).get<std::size_t>();
    if (b >= b_size || seen[b]) {
      throw FormatError("tau block index invalid or repeated");
    }
    seen[b] = true;
    std::vector<CoordMap::entry_type> entries;
    for (auto const& e : row.at(1)) {
      entries.emplace_back(e.at(0).get<point_type>(),
                           Permutation(e.at(1).get<std::vector<point_type>>()));
    }
    tau[b] = CoordMap(a, std::move(entries));
  }
  return CoordAction(a, std::move(beta), std::move(tau));
}

}  // namespace wreath

#endif  // WREATH_COORD_ACTION_HPP
