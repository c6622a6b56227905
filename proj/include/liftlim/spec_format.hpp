#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "liftlim/tower.hpp"

namespace liftlim {

struct NamedHom {
  std::string source;
  std::string target;
  GroupHom hom;
};

/// A parsed tower specification. Cross-references are resolved; coherence is not checked.
struct SpecDocument {
  std::map<std::string, GroupRef> groups;
  std::map<std::string, NamedHom> homs;
  std::optional<Tower> tower;
  std::optional<BaseModel> base;
  std::optional<TowerMap> map;  // [map] section: stage maps into a --target tower
  std::optional<std::size_t> horizon;
};

/// Sections `[group N]`, `[hom f: A -> B]`, `[tower]`, `[base]`, `[map]`; `#` starts a comment.
/// `budget` overrides the tower's `budget =` line.
SpecDocument parse_spec(std::string_view text, std::optional<std::size_t> budget = std::nullopt);
SpecDocument load_spec(const std::string& path, std::optional<std::size_t> budget = std::nullopt);

}  // namespace liftlim
