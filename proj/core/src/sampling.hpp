#pragma once

#include <cstdint>
#include <vector>

#include "mlmcfv/estimator.hpp"
#include "mlmcfv/parallel.hpp"

namespace mlmcfv::detail {

/// Evaluates `contribution(i, out)` for i in [0, count) in parallel batches,
/// each writing one output-grid vector, and folds them into `acc` in index
/// order. `contribution` returns the cell updates it spent.
template <class Contribution>
std::uint64_t accumulate_term(std::size_t count, const EstimatorContext& ctx,
                              MomentAccumulator& acc,
                              Contribution&& contribution) {
  const std::size_t cells = ctx.output_grid->cells();
  const std::size_t batch = std::max<std::size_t>(1, ctx.exec.batch_size);
  const unsigned threads = resolve_threads(ctx.exec.threads);
  std::vector<std::vector<double>> slots(std::min(batch, count),
                                         std::vector<double>(cells));
  std::vector<std::uint64_t> work(slots.size());
  std::uint64_t total = 0;
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t n = std::min(batch, count - start);
    parallel_for(n, threads, [&](std::size_t b) {
      std::fill(slots[b].begin(), slots[b].end(), 0.0);
      work[b] = contribution(start + b, slots[b]);
    });
    for (std::size_t b = 0; b < n; ++b) {
      acc.add(slots[b]);
      total += work[b];
    }
  }
  return total;
}

}  // namespace mlmcfv::detail
