#ifndef WREATH_GROUPS_HPP
#define WREATH_GROUPS_HPP

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "permutation.hpp"

namespace wreath {

/// A group whose elements are values with a canonical form. Element equality
/// is structural and `operator<` on elements is the ordering key: it is
/// deterministic and injective, and for finite groups it agrees with the
/// enumeration order of elements().
template <class G>
concept Group = std::equality_comparable<G> &&
    requires(G const& g, typename G::element_type const& x, nlohmann::json const& j) {
      typename G::element_type;
      requires std::totally_ordered<typename G::element_type>;
      { g.identity() } -> std::same_as<typename G::element_type>;
      { g.mul(x, x) } -> std::same_as<typename G::element_type>;
      { g.inv(x) } -> std::same_as<typename G::element_type>;
      { g.element_to_json(x) } -> std::same_as<nlohmann::json>;
      { g.element_from_json(j) } -> std::same_as<typename G::element_type>;
      { g.format(x) } -> std::same_as<std::string>;
      { g.descriptor() } -> std::same_as<nlohmann::json>;
      { g.name() } -> std::same_as<std::string>;
    };

template <class G>
concept FiniteGroup = Group<G> && requires(G const& g) {
  { g.elements() } -> std::same_as<std::vector<typename G::element_type>>;
};

template <Group G>
using element_t = typename G::element_type;

template <Group G>
bool is_identity(G const& group, element_t<G> const& x) {
  return x == group.identity();
}

// ---------------------------------------------------------------------------

/// Z/n, elements 0..n-1 under addition.
class CyclicGroup {
 public:
  using element_type = std::int64_t;

  explicit CyclicGroup(std::int64_t order) : order_(order) {
    if (order < 1) {
      throw FormatError("cyclic group order must be >= 1");
    }
  }

  std::int64_t order() const noexcept { return order_; }

  element_type identity() const { return 0; }
  element_type mul(element_type x, element_type y) const { return (x + y) % order_; }
  element_type inv(element_type x) const { return (order_ - x) % order_; }

  std::vector<element_type> elements() const {
    std::vector<element_type> out(static_cast<std::size_t>(order_));
    std::iota(out.begin(), out.end(), element_type{0});
    return out;
  }

  nlohmann::json element_to_json(element_type x) const { return x; }
  element_type element_from_json(nlohmann::json const& j) const {
    if (!j.is_number_integer()) {
      throw FormatError("Z/" + std::to_string(order_) + " element must be an integer");
    }
    auto x = j.get<std::int64_t>();
    if (x < 0 || x >= order_) {
      throw FormatError("element " + std::to_string(x) + " outside Z/" +
                        std::to_string(order_));
    }
    return x;
  }

  std::string format(element_type x) const { return std::to_string(x); }
  nlohmann::json descriptor() const { return {{"kind", "cyclic"}, {"n", order_}}; }
  std::string name() const { return "Z/" + std::to_string(order_); }

  friend bool operator==(CyclicGroup const&, CyclicGroup const&) = default;

 private:
  std::int64_t order_;
};

/// The integers under addition.
class IntegerGroup {
 public:
  using element_type = std::int64_t;

  element_type identity() const { return 0; }
  element_type mul(element_type x, element_type y) const { return x + y; }
  element_type inv(element_type x) const { return -x; }

  nlohmann::json element_to_json(element_type x) const { return x; }
  element_type element_from_json(nlohmann::json const& j) const {
    if (!j.is_number_integer()) {
      throw FormatError("Z element must be an integer");
    }
    return j.get<std::int64_t>();
  }

  std::string format(element_type x) const { return std::to_string(x); }
  nlohmann::json descriptor() const { return {{"kind", "integers"}}; }
  std::string name() const { return "Z"; }

  friend bool operator==(IntegerGroup const&, IntegerGroup const&) = default;
};

/// Sym(k) acting on {0..k-1}; elements are permutations, multiplied with the
/// library-wide convention (right factor first).
class SymmetricGroup {
 public:
  using element_type = Permutation;

  explicit SymmetricGroup(std::size_t points) : points_(points) {
    if (points < 1) {
      throw FormatError("symmetric group needs k >= 1");
    }
  }

  std::size_t points() const noexcept { return points_; }

  element_type identity() const { return Permutation::identity(points_); }
  element_type mul(element_type const& x, element_type const& y) const {
    return compose(x, y);
  }
  element_type inv(element_type const& x) const { return x.inverse(); }

  /// All k! permutations in lexicographic order of their images.
  std::vector<element_type> elements() const {
    std::vector<point_type> image(points_);
    std::iota(image.begin(), image.end(), point_type{0});
    std::vector<element_type> out;
    do {
      out.emplace_back(image);
    } while (std::next_permutation(image.begin(), image.end()));
    return out;
  }

  nlohmann::json element_to_json(element_type const& x) const {
    return std::vector<point_type>(x.image().begin(), x.image().end());
  }
  element_type element_from_json(nlohmann::json const& j) const {
    if (!j.is_array() || j.size() != points_) {
      throw FormatError("Sym(" + std::to_string(points_) + ") element must be an image of length " +
                        std::to_string(points_));
    }
    return Permutation(j.get<std::vector<point_type>>());
  }

  std::string format(element_type const& x) const { return element_to_json(x).dump(); }
  nlohmann::json descriptor() const { return {{"kind", "symmetric"}, {"k", points_}}; }
  std::string name() const { return "Sym(" + std::to_string(points_) + ")"; }

  friend bool operator==(SymmetricGroup const&, SymmetricGroup const&) = default;

 private:
  std::size_t points_;
};

/// Reduced word in a free group. Letter +i is generator i, -i its inverse
/// (i >= 1). Ordered by length, then lexicographically.
struct FreeWord {
  std::vector<int> letters;

  friend bool operator==(FreeWord const&, FreeWord const&) = default;
  friend std::strong_ordering operator<=>(FreeWord const& a, FreeWord const& b) {
    if (auto c = a.letters.size() <=> b.letters.size(); c != 0) {
      return c;
    }
    return a.letters <=> b.letters;
  }
};

class FreeGroup {
 public:
  using element_type = FreeWord;

  explicit FreeGroup(int rank) : rank_(rank) {
    if (rank < 1) {
      throw FormatError("free group rank must be >= 1");
    }
  }

  int rank() const noexcept { return rank_; }

  element_type identity() const { return {}; }

  element_type generator(int i) const {
    if (i < 1 || i > rank_) {
      throw FormatError("free generator index out of range");
    }
    return {{i}};
  }

  element_type mul(element_type const& x, element_type const& y) const {
    FreeWord out = x;
    for (int letter : y.letters) {
      if (!out.letters.empty() && out.letters.back() == -letter) {
        out.letters.pop_back();
      } else {
        out.letters.push_back(letter);
      }
    }
    return out;
  }

  element_type inv(element_type const& x) const {
    FreeWord out;
    out.letters.reserve(x.letters.size());
    for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) {
      out.letters.push_back(-*it);
    }
    return out;
  }

  /// Freely reduces an arbitrary word.
  element_type reduce(std::vector<int> const& word) const {
    FreeWord out;
    for (int letter : word) {
      check_letter(letter);
      if (!out.letters.empty() && out.letters.back() == -letter) {
        out.letters.pop_back();
      } else {
        out.letters.push_back(letter);
      }
    }
    return out;
  }

  nlohmann::json element_to_json(element_type const& x) const { return x.letters; }
  element_type element_from_json(nlohmann::json const& j) const {
    if (!j.is_array()) {
      throw FormatError("free group element must be an array of letters");
    }
    auto word = j.get<std::vector<int>>();
    auto reduced = reduce(word);
    if (reduced.letters != word) {
      throw FormatError("free group element is not freely reduced: " + j.dump());
    }
    return reduced;
  }

  std::string format(element_type const& x) const {
    if (x.letters.empty()) {
      return "1";
    }
    std::string out;
    for (int letter : x.letters) {
      char base = letter > 0 ? 'a' : 'A';
      out.push_back(static_cast<char>(base + std::abs(letter) - 1));
    }
    return out;
  }

  nlohmann::json descriptor() const { return {{"kind", "free"}, {"rank", rank_}}; }
  std::string name() const { return "F" + std::to_string(rank_); }

  friend bool operator==(FreeGroup const&, FreeGroup const&) = default;

 private:
  void check_letter(int letter) const {
    if (letter == 0 || std::abs(letter) > rank_) {
      throw FormatError("letter " + std::to_string(letter) + " outside free group of rank " +
                        std::to_string(rank_));
    }
  }

  int rank_;
};

/// A finite group given by its Cayley table: table[x][y] = x*y over the
/// elements 0..n-1.
class TableGroup {
 public:
  using element_type = std::int64_t;

  explicit TableGroup(std::vector<std::vector<std::int64_t>> table)
      : table_(std::move(table)) {
    auto const n = table_.size();
    if (n == 0) {
      throw FormatError("invalid Cayley table: empty");
    }
    for (auto const& row : table_) {
      if (row.size() != n) {
        throw FormatError("invalid Cayley table: not square");
      }
      check_bijective(row, "row");
    }
    for (std::size_t y = 0; y < n; ++y) {
      std::vector<std::int64_t> column(n);
      for (std::size_t x = 0; x < n; ++x) {
        column[x] = table_[x][y];
      }
      check_bijective(column, "column");
    }
    identity_ = -1;
    for (std::size_t e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) {
        ok = table_[e][x] == static_cast<std::int64_t>(x) &&
             table_[x][e] == static_cast<std::int64_t>(x);
      }
      if (ok) {
        identity_ = static_cast<std::int64_t>(e);
      }
    }
    if (identity_ < 0) {
      throw FormatError("invalid Cayley table: no identity element");
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t z = 0; z < n; ++z) {
          if (table_[table_[x][y]][z] != table_[x][table_[y][z]]) {
            throw FormatError("invalid Cayley table: not associative");
          }
        }
      }
    }
    inverse_.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (table_[x][y] == identity_) {
          inverse_[x] = static_cast<std::int64_t>(y);
        }
      }
    }
  }

  std::size_t order() const noexcept { return table_.size(); }
  std::vector<std::vector<std::int64_t>> const& table() const noexcept { return table_; }

  element_type identity() const { return identity_; }
  element_type mul(element_type x, element_type y) const {
    return table_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  }
  element_type inv(element_type x) const { return inverse_[static_cast<std::size_t>(x)]; }

  std::vector<element_type> elements() const {
    std::vector<element_type> out(table_.size());
    std::iota(out.begin(), out.end(), element_type{0});
    return out;
  }

  nlohmann::json element_to_json(element_type x) const { return x; }
  element_type element_from_json(nlohmann::json const& j) const {
    if (!j.is_number_integer()) {
      throw FormatError("table group element must be an integer");
    }
    auto x = j.get<std::int64_t>();
    if (x < 0 || x >= static_cast<std::int64_t>(table_.size())) {
      throw FormatError("element " + std::to_string(x) + " outside table group");
    }
    return x;
  }

  std::string format(element_type x) const { return "t" + std::to_string(x); }
  nlohmann::json descriptor() const { return {{"kind", "table"}, {"table", table_}}; }
  std::string name() const { return "Table(" + std::to_string(table_.size()) + ")"; }

  friend bool operator==(TableGroup const& a, TableGroup const& b) { return a.table_ == b.table_; }

 private:
  void check_bijective(std::vector<std::int64_t> const& line, char const* what) const {
    std::vector<bool> seen(line.size(), false);
    for (auto v : line) {
      if (v < 0 || v >= static_cast<std::int64_t>(line.size()) ||
          seen[static_cast<std::size_t>(v)]) {
        throw FormatError(std::string("invalid Cayley table: non-bijective ") + what);
      }
      seen[static_cast<std::size_t>(v)] = true;
    }
  }

  std::vector<std::vector<std::int64_t>> table_;
  std::vector<std::int64_t> inverse_;
  std::int64_t identity_ = 0;
};

}  // namespace wreath

#endif  // WREATH_GROUPS_HPP
