#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "liftlim/cli.hpp"
#include "liftlim/tower.hpp"

namespace liftlim::detail {

using Json = nlohmann::ordered_json;

struct Report {
  std::string command;
  std::string verdict;
  Certainty certainty;
  std::size_t horizon = 0;
  std::vector<std::string> witnesses;
  Json stages = Json::array();
  std::string provenance;
};

/// Small integers as JSON numbers, anything larger as a decimal string.
Json integer_json(const Integer& n);
Json optional_integer_json(const std::optional<Integer>& n);

std::string render(const Report& r, ReportFormat format);

}  // namespace liftlim::detail
