#ifndef WREATH_ARTIFACT_HPP
#define WREATH_ARTIFACT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "construct.hpp"
#include "error.hpp"
#include "groups.hpp"
#include "rational.hpp"
#include "sofic.hpp"
#include "verify.hpp"

namespace wreath {

/// Any group a descriptor can name (wreath products are not nested).
using AnyGroup = std::variant<CyclicGroup, IntegerGroup, SymmetricGroup, FreeGroup, TableGroup>;

inline AnyGroup group_from_descriptor(nlohmann::json const& d) {
  if (!d.is_object() || !d.contains("kind") || !d.at("kind").is_string()) {
    throw FormatError("group descriptor must be an object with a string 'kind'");
  }
  auto const kind = d.at("kind").get<std::string>();
  auto need = [&](char const* key) -> nlohmann::json const& {
    if (!d.contains(key)) {
      throw FormatError("group descriptor '" + kind + "' is missing '" + key + "'");
    }
    return d.at(key);
  };
  try {
    if (kind == "cyclic") {
      return CyclicGroup(need("n").get<std::int64_t>());
    }
    if (kind == "integers") {
      return IntegerGroup{};
    }
    if (kind == "symmetric") {
      return SymmetricGroup(need("k").get<std::size_t>());
    }
    if (kind == "free") {
      return FreeGroup(need("rank").get<int>());
    }
    if (kind == "table") {
      return TableGroup(need("table").get<std::vector<std::vector<std::int64_t>>>());
    }
  } catch (nlohmann::json::exception const& e) {
    throw FormatError("group descriptor '" + kind + "': " + e.what());
  }
  throw FormatError("unknown group kind '" + kind + "'");
}

// -- WreathApprox artifacts -----------------------------------------------------

/// Provenance fields stored next to the construction.
struct ArtifactInfo {
  std::uint64_t seed = 0;
  std::uint64_t expansion_cap = default_expansion_cap;
};

/// {"format": 1, "kind": "wreath-approx", "groups", "eps", "F", "sigma_A",
///  "sigma_B", "windows", "block", "budget", "seed", "expansion_cap"}.
/// The rule itself is not stored.
template <Group G, Group H>
nlohmann::json to_json(WreathApprox<G, H> const& w, ArtifactInfo const& info = {}) {
  auto const& W = w.group();
  auto F = nlohmann::json::array();
  for (auto const& u : w.windows().F) {
    F.push_back(W.element_to_json(u));
  }
  return {{"format", 1},
          {"kind", "wreath-approx"},
          {"groups", {{"G", W.base().descriptor()}, {"H", W.top().descriptor()}}},
          {"eps", rational_to_json(w.budget().eps)},
          {"F", F},
          {"sigma_A", to_json(w.sigma_A())},
          {"sigma_B", to_json(w.sigma_B())},
          {"windows", to_json(W, w.windows())},
          {"block", to_json(w.block())},
          {"budget", to_json(w.budget())},
          {"seed", info.seed},
          {"expansion_cap", info.expansion_cap}};
}

inline void require_format(nlohmann::json const& j, char const* kind) {
  if (!j.is_object()) {
    throw FormatError(std::string("expected a JSON object of kind '") + kind + "'");
  }
  if (!j.contains("format") || j.at("format") != 1) {
    throw FormatError("unsupported or missing 'format' (expected 1)");
  }
  if (!j.contains("kind") || j.at("kind") != kind) {
    throw FormatError(std::string("expected kind '") + kind + "'");
  }
}

template <Group G, Group H>
std::vector<element_t<WreathProduct<G, H>>> wreath_elements_from_json(WreathProduct<G, H> const& W,
                                                                     nlohmann::json const& j) {
  if (!j.is_array()) {
    throw FormatError("F must be an array of wreath elements");
  }
  std::vector<element_t<WreathProduct<G, H>>> out;
  for (auto const& e : j) {
    out.push_back(W.element_from_json(e));
  }
  return out;
}

/// Rebuilds the approximation from the stored inputs and checks the stored
/// windows, block and budget against the re-derived ones.
template <Group G, Group H>
std::pair<WreathApprox<G, H>, ArtifactInfo> wreath_approx_from_json(G const& base, H const& top,
                                                                     nlohmann::json const& j) {
  require_format(j, "wreath-approx");
  for (auto key : {"groups", "eps", "F", "sigma_A", "sigma_B", "windows", "block", "budget"}) {
    if (!j.contains(key)) {
      throw FormatError(std::string("artifact is missing '") + key + "'");
    }
  }
  WreathProduct<G, H> W(base, top);
  auto w = assemble(W, sofic_from_json(base, j.at("sigma_A")), sofic_from_json(top, j.at("sigma_B")),
                    wreath_elements_from_json(W, j.at("F")), rational_from_json(j.at("eps")));
  if (to_json(W, w.windows()) != j.at("windows")) {
    throw FormatError("stored windows do not match the windows derived from F");
  }
  if (to_json(w.block()) != j.at("block")) {
    throw FormatError("stored good block does not match sigma_B");
  }
  if (to_json(w.budget()) != j.at("budget")) {
    throw FormatError("stored budget does not match eps and |E|");
  }
  ArtifactInfo info;
  info.seed = j.value("seed", std::uint64_t{0});
  info.expansion_cap = j.value("expansion_cap", default_expansion_cap);
  return {std::move(w), info};
}

}  // namespace wreath

#endif  // WREATH_ARTIFACT_HPP
