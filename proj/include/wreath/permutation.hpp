#ifndef WREATH_PERMUTATION_HPP
#define WREATH_PERMUTATION_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "random.hpp"
#include "rational.hpp"

namespace wreath {

using point_type = std::uint32_t;

/// A bijection of {0, ..., n-1}.
///
/// Composition convention, used by every module of the library: the product
/// `compose(s, t)` applies the right factor first, `compose(s, t)(i) ==
/// s(t(i))`. This matches writing products of approximations as
/// sigma(g) sigma(h), "sigma(g) after sigma(h)".
class Permutation {
 public:
  Permutation() = default;

  /// Validates that `image` is a bijection of {0, ..., image.size()-1}.
  explicit Permutation(std::vector<point_type> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (auto p : image_) {
      if (p >= image_.size() || seen[p]) {
        throw FormatError("image is not a bijection of {0, ..., " +
                          std::to_string(image_.size()) + " - 1}");
      }
      seen[p] = true;
    }
  }

  static Permutation identity(std::size_t degree) {
    Permutation p;
    p.image_.resize(degree);
    std::iota(p.image_.begin(), p.image_.end(), point_type{0});
    return p;
  }

  /// The transposition exchanging i and j (identity when i == j).
  static Permutation transposition(std::size_t degree, point_type i, point_type j) {
    auto p = identity(degree);
    std::swap(p.image_.at(i), p.image_.at(j));
    return p;
  }

  std::size_t degree() const noexcept { return image_.size(); }

  point_type operator()(point_type i) const { return image_[i]; }

  std::span<point_type const> image() const noexcept { return image_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (image_[i] != i) {
        return false;
      }
    }
    return true;
  }

  std::size_t fixed_points() const noexcept {
    std::size_t count = 0;
    for (std::size_t i = 0; i < image_.size(); ++i) {
      count += image_[i] == i;
    }
    return count;
  }

  Permutation inverse() const {
    Permutation p;
    p.image_.resize(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) {
      p.image_[image_[i]] = static_cast<point_type>(i);
    }
    return p;
  }

  friend bool operator==(Permutation const&, Permutation const&) = default;
  // Lexicographic on the image; only meaningful between equal degrees.
  friend auto operator<=>(Permutation const&, Permutation const&) = default;

 private:
  std::vector<point_type> image_;
};

inline void require_same_degree(Permutation const& s, Permutation const& t) {
  if (s.degree() != t.degree()) {
    throw CarrierMismatch("carrier mismatch: degree " + std::to_string(s.degree()) +
                          " vs " + std::to_string(t.degree()));
  }
}

/// s after t.
inline Permutation compose(Permutation const& s, Permutation const& t) {
  require_same_degree(s, t);
  std::vector<point_type> image(s.degree());
  for (std::size_t i = 0; i < image.size(); ++i) {
    image[i] = s(t(static_cast<point_type>(i)));
  }
  return Permutation(std::move(image));
}

inline Permutation inverse(Permutation const& s) { return s.inverse(); }

/// Number of points where s and t agree.
inline std::size_t agreement_count(Permutation const& s, Permutation const& t) {
  require_same_degree(s, t);
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.degree(); ++i) {
    count += s(static_cast<point_type>(i)) == t(static_cast<point_type>(i));
  }
  return count;
}

/// Normalized Hamming distance |{i : s(i) != t(i)}| / n.
inline Rational hamming(Permutation const& s, Permutation const& t) {
  auto const same = agreement_count(s, t);
  return Rational(BigInt(s.degree() - same), BigInt(s.degree()));
}

inline Rational agreement_fraction(Permutation const& s, Permutation const& t) {
  auto const same = agreement_count(s, t);
  return Rational(BigInt(same), BigInt(s.degree()));
}

inline Rational distance_to_identity(Permutation const& s) {
  return Rational(BigInt(s.degree() - s.fixed_points()), BigInt(s.degree()));
}

/// Fisher-Yates shuffle of the identity, driven by Rng(seed).
inline Permutation random_permutation(std::size_t degree, std::uint64_t seed) {
  if (degree == 0) {
    throw FormatError("random_permutation needs degree >= 1");
  }
  Rng rng(seed);
  std::vector<point_type> image(degree);
  std::iota(image.begin(), image.end(), point_type{0});
  for (std::size_t i = degree - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(image[i], image[j]);
  }
  return Permutation(std::move(image));
}

inline nlohmann::json to_json(Permutation const& p) {
  return {{"degree", p.degree()},
          {"image", std::vector<point_type>(p.image().begin(), p.image().end())}};
}

inline Permutation permutation_from_json(nlohmann::json const& j) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("image")) {
    throw FormatError("permutation must be {\"degree\", \"image\"}");
  }
  auto const degree = j.at("degree").get<std::size_t>();
  auto image = j.at("image").get<std::vector<point_type>>();
  if (degree == 0 || image.size() != degree) {
    throw FormatError("permutation degree does not match image length");
  }
  return Permutation(std::move(image));
}

}  // namespace wreath

#endif  // WREATH_PERMUTATION_HPP
