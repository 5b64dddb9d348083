#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlmcfv/errors.hpp"
#include "mlmcfv/grid.hpp"
#include "mlmcfv/random_data.hpp"
#include "mlmcfv/solver.hpp"

namespace mlmcfv {

/// Cellwise running first and second moments. Values are shifted by the
/// first sample and summed with Neumaier compensation, so a constant input
/// stream gives a mean equal to that input and a variance of exactly zero.
class MomentAccumulator {
 public:
  MomentAccumulator() = default;
  explicit MomentAccumulator(std::size_t cells);

  void add(std::span<const double> sample);

  std::size_t count() const noexcept { return count_; }
  std::size_t cells() const noexcept { return shift_.size(); }

  std::vector<double> mean() const;
  /// (1/M) sum (x - mean)^2.
  std::vector<double> biased_variance() const;
  /// 1/(M-1) sum (x - mean)^2; zero for M < 2.
  std::vector<double> sample_variance() const;

 private:
  std::size_t count_ = 0;
  std::vector<double> shift_;
  std::vector<double> sum_, sum_c_;
  std::vector<double> sq_, sq_c_;
};

struct ExecutionPolicy {
  unsigned threads = 0;          // 0: hardware concurrency
  std::size_t batch_size = 256;  // samples held in memory per reduction batch
};

/// Shared settings for the sampling estimators.
struct EstimatorContext {
  GridPtr output_grid;  // statistics live here
  Alignment alignment = Alignment::snap_uniform;
  ExecutionPolicy exec;
};

/// Default output grid: 2^10 uniform cells on the domain.
GridPtr default_output_grid(Interval domain, std::size_t cells = 1024);

struct EstimatorResult {
  GridFunction mean;
  GridFunction variance;                   // sum over levels, biased form
  std::vector<MomentAccumulator> levels;   // one per estimator term
  std::vector<std::size_t> samples_per_level;
  std::uint64_t cell_updates = 0;
  double runtime_s = 0.0;

  GridFunction std_dev() const;
};

/// A solver failure tagged with the sample that triggered it.
class SampleError : public NumericalError {
 public:
  SampleError(const SampleKey& key, const std::string& what);
  const SampleKey& key() const noexcept { return key_; }

 private:
  SampleKey key_;
};

/// Builds the aligned mesh for a sample, projects u0 and solves to t_end.
Solution solve_sample(const Sample& sample, Interval domain, double dx,
                      const SolverConfig& cfg, Alignment alignment);

/// Combines per-term accumulators into mean and V_L.
void finalize_result(EstimatorResult& result, const GridPtr& output_grid);

/// Header "x,mean,std", one row per output cell.
void write_estimator_csv(std::ostream& os, const EstimatorResult& result);

}  // namespace mlmcfv
