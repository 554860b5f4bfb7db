#pragma once

#include <random>
#include <vector>

#include "osclax/algebra.hpp"

namespace osclax::testing {

inline ContextPtr plain_context(int modes, std::vector<std::string> vars = {"z", "x"}) {
  std::vector<ModeLabel> labels;
  for (int k = 1; k <= modes; ++k) labels.push_back({0, 'a', static_cast<std::int16_t>(k), 0});
  return AlgebraContext::make(Ring::make(std::move(vars)), ModeSpace::make(std::move(labels)));
}

// Random element with at most `terms` terms, each of oscillator degree <= max_degree
// and small rational coefficients, optionally times ring variables.
inline AlgebraElement random_element(const ContextPtr& ctx, std::mt19937& rng, int terms, int max_degree,
                                     bool with_vars = true) {
  std::uniform_int_distribution<int> coef(-3, 3), den(1, 3), pick(0, 3);
  AlgebraElement e(ctx);
  int n_modes = ctx->modes->size();
  for (int t = 0; t < terms; ++t) {
    int budget = std::uniform_int_distribution<int>(0, max_degree)(rng);
    std::vector<std::pair<int, int>> pq(static_cast<std::size_t>(n_modes), {0, 0});
    for (int b = 0; b < budget; ++b) {
      int m = std::uniform_int_distribution<int>(0, n_modes - 1)(rng);
      if (std::uniform_int_distribution<int>(0, 1)(rng)) {
        pq[static_cast<std::size_t>(m)].first++;
      } else {
        pq[static_cast<std::size_t>(m)].second++;
      }
    }
    OscMonomial mono;
    for (int m = 0; m < n_modes; ++m) mono.push(m, pq[static_cast<std::size_t>(m)].first, pq[static_cast<std::size_t>(m)].second);
    MultiPoly c(ctx->ring, Rational(coef(rng), den(rng)));
    if (with_vars && ctx->ring->size() > 0) {
      int k = pick(rng);
      for (int i = 0; i < k; ++i) c *= MultiPoly::var(ctx->ring, std::uniform_int_distribution<int>(0, ctx->ring->size() - 1)(rng));
    }
    e.add_term(mono, c);
  }
  return e;
}

}  // namespace osclax::testing
