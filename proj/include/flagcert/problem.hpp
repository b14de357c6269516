#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "flagcert/enumerate.hpp"
#include "flagcert/rational.hpp"

namespace flagcert {

/// Problem file: {"r", "forbid", "forbid_induced", "order", "target_bound",
/// "construction"}. Only r and order are required.
struct ProblemFile {
  ProblemSpec spec;
  std::optional<Rational> target_bound;
  std::optional<std::string> construction;
};

/// ParseError on malformed JSON or notation, DomainError on an invalid spec.
ProblemFile parse_problem(std::string_view text);
ProblemFile read_problem(const std::string& path);

}  // namespace flagcert
