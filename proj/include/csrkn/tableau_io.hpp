#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "csrkn/tableau.hpp"

namespace csrkn {

/// Malformed tableau document; the message names the offending field or the
/// line/column of a syntax error.
class TableauFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tableau read from disk. The coefficients are taken as given; claimed_order
/// and the symplectic flag are re-derived from them, while the values the file
/// asserted are kept separately for comparison.
struct LoadedTableau {
  RknTableau tableau;
  std::optional<int> declared_order;
  bool declared_symplectic = false;
};

/// {"spec_version", "s", "c", "b", "b_bar", "a_bar", "claimed_order", "symplectic"},
/// coefficients as 17-significant-digit decimal strings.
nlohmann::json to_json(const RknTableau& t);

LoadedTableau tableau_from_json(const nlohmann::json& j);
LoadedTableau parse_tableau(std::string_view text);

/// Butcher layout: c | a_bar, then b_bar, then b.
std::string to_text(const RknTableau& t);

}  // namespace csrkn
