// Random classifiers for tests.
#pragma once

#include "fmp/error.hpp"
#include "fmp/generate.hpp"

#include <random>

namespace models {

/// Random OBDD over m features with between m and (spread + 1) m decision
/// nodes; the count shrinks until a reduced diagram of that size exists.
inline fmp::Obdd random_model(std::mt19937_64 &rng, int m, int spread = 2) {
  int nodes = m + static_cast<int>(rng() % (static_cast<unsigned>(spread * m) + 1));
  const std::uint64_t seed = rng();
  for (;; --nodes) {
    try {
      return fmp::random_obdd(m, nodes, seed);
    } catch (const fmp::Error &e) {
      if (e.code() != fmp::ErrorCode::Limit || nodes <= 1)
        throw;
    }
  }
}

} // namespace models
