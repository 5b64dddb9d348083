#include "mlmcfv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mlmcfv/mlmc.hpp"

namespace mlmcfv {

namespace {

inline void neumaier_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x))
    comp += (sum - t) + x;
  else
    comp += (x - t) + sum;
  sum = t;
}

}  // namespace

MomentAccumulator::MomentAccumulator(std::size_t cells)
    : shift_(cells, 0.0),
      sum_(cells, 0.0),
      sum_c_(cells, 0.0),
      sq_(cells, 0.0),
      sq_c_(cells, 0.0) {}

void MomentAccumulator::add(std::span<const double> sample) {
  if (sample.size() != shift_.size())
    throw ConfigError("sample size does not match accumulator");
  if (count_ == 0) std::copy(sample.begin(), sample.end(), shift_.begin());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    const double d = sample[j] - shift_[j];
    neumaier_add(sum_[j], sum_c_[j], d);
    neumaier_add(sq_[j], sq_c_[j], d * d);
  }
  ++count_;
}

std::vector<double> MomentAccumulator::mean() const {
  std::vector<double> m(shift_.size(), 0.0);
  if (count_ == 0) return m;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t j = 0; j < m.size(); ++j)
    m[j] = shift_[j] + (sum_[j] + sum_c_[j]) * inv;
  return m;
}

std::vector<double> MomentAccumulator::biased_variance() const {
  std::vector<double> v(shift_.size(), 0.0);
  if (count_ == 0) return v;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double m = (sum_[j] + sum_c_[j]) * inv;
    v[j] = std::max(0.0, (sq_[j] + sq_c_[j]) * inv - m * m);
  }
  return v;
}

std::vector<double> MomentAccumulator::sample_variance() const {
  std::vector<double> v = biased_variance();
  if (count_ < 2) return std::vector<double>(v.size(), 0.0);
  const double scale =
      static_cast<double>(count_) / static_cast<double>(count_ - 1);
  for (double& x : v) x *= scale;
  return v;
}

GridPtr default_output_grid(Interval domain, std::size_t cells) {
  return AlignedGrid::uniform(domain, cells);
}

GridFunction EstimatorResult::std_dev() const {
  GridFunction s = variance;
  for (double& x : s.values()) x = std::sqrt(x);
  return s;
}

namespace {

std::string describe_key(const SampleKey& key, const std::string& what) {
  std::ostringstream os;
  os << "sample (seed=" << key.master_seed << ", level=" << key.level
     << ", index=" << key.sample_index << ", replica=" << key.replica
     << "): " << what;
  return os.str();
}

}  // namespace

SampleError::SampleError(const SampleKey& key, const std::string& what)
    : NumericalError(describe_key(key, what)), key_(key) {}

Solution solve_sample(const Sample& sample, Interval domain, double dx,
                      const SolverConfig& cfg, Alignment alignment) {
  AlignedMesh mesh = build_aligned_grid(domain, sample.coeff, dx, alignment);
  GridFunction u0 = project_initial_datum(sample.u0, mesh.grid);
  return solve(u0, mesh.coeff, cfg);
}

GridFunction variance_estimate(const std::vector<MomentAccumulator>& levels,
                               const GridPtr& output_grid) {
  std::vector<double> v(output_grid->cells(), 0.0);
  for (const auto& acc : levels) {
    const auto lv = acc.biased_variance();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += lv[j];
  }
  return GridFunction(output_grid, std::move(v));
}

void finalize_result(EstimatorResult& result, const GridPtr& output_grid) {
  std::vector<double> mean(output_grid->cells(), 0.0);
  result.samples_per_level.clear();
  for (const auto& acc : result.levels) {
    const auto m = acc.mean();
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += m[j];
    result.samples_per_level.push_back(acc.count());
  }
  result.mean = GridFunction(output_grid, std::move(mean));
  result.variance = variance_estimate(result.levels, output_grid);
}

void write_estimator_csv(std::ostream& os, const EstimatorResult& result) {
  os << "x,mean,std\n";
  const auto sd = result.std_dev();
  const auto& g = result.mean.grid();
  for (std::size_t j = 0; j < result.mean.size(); ++j)
    os << format_double(g.center(j)) << ',' << format_double(result.mean[j])
       << ',' << format_double(sd[j]) << '\n';
}

}  // namespace mlmcfv
