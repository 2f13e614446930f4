#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpx/ego_model.hpp"

namespace fixtures {

/// Ego whose alters take ranks 1..n in order; std::nullopt marks unavailable.
inline fpx::EgoRecord ego(const std::string& id, fpx::Count k, const std::vector<std::optional<fpx::Count>>& degrees) {
  fpx::EgoRecord e{id, k, {}};
  for (std::size_t i = 0; i < degrees.size(); ++i)
    e.alters.push_back({id + "_" + std::to_string(i + 1), static_cast<int>(i + 1),
                        static_cast<fpx::Count>(100 - i), degrees[i]});
  return e;
}

/// Star with n leaves seen egocentrically: the centre (k = n) lists every
/// leaf (k = 1); each leaf lists the centre.
inline fpx::EgoDataset star(int n) {
  fpx::EgoDataset d;
  std::vector<std::optional<fpx::Count>> leaves(static_cast<std::size_t>(n), fpx::Count{1});
  d.egos.push_back(ego("c", n, leaves));
  for (int i = 0; i < n; ++i) d.egos.push_back(ego("l" + std::to_string(i), 1, {fpx::Count{n}}));
  return d;
}

}  // namespace fixtures
