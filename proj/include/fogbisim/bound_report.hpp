#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fogbisim/constants.hpp"

namespace fogbisim {

/// Ordered key/value lines. Values are expressions with the grammar's
/// constants substituted; nothing Ackermannian is evaluated.
struct BoundReport {
  std::vector<std::pair<std::string, std::string>> lines;
  const std::string& at(const std::string& key) const;
};

BoundReport bound_report(const GrammarConstants& k);
/// Falls back to purely symbolic lines when the constants cannot be
/// materialised.
BoundReport bound_report(const Grammar& g);

}  // namespace fogbisim
