#pragma once

#include <cstdint>

#include "mlmcfv/estimator.hpp"

namespace mlmcfv {

/// Seed and replica shared by every draw of one estimator run.
struct KeyBase {
  std::uint64_t master_seed = 0;
  std::uint32_t replica = 0;
};

/// Single-level Monte Carlo mean over M solves at width dx. Sample i uses key
/// (master_seed, level 0, i, replica). Results do not depend on the thread
/// count: solves run in parallel batches and are reduced in index order.
EstimatorResult mc_estimate(const RandomDataModel& model, double dx,
                            std::size_t samples, const SolverConfig& cfg,
                            const KeyBase& keys, const EstimatorContext& ctx);

}  // namespace mlmcfv
