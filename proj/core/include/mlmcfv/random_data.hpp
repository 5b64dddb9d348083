#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mlmcfv/flux.hpp"
#include "mlmcfv/grid.hpp"

namespace mlmcfv {

/// Identifies one random draw. Streams are derived by hashing all four
/// fields, so draws do not depend on execution order.
struct SampleKey {
  std::uint64_t master_seed = 0;
  std::uint32_t level = 0;
  std::uint64_t sample_index = 0;
  std::uint32_t replica = 0;
};

using RandomStream = std::mt19937_64;

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

RandomStream derive_stream(const SampleKey& key);

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(RandomStream& rng);

struct UniformParameter {
  double lo = 0.0;
  double hi = 0.0;

  bool degenerate() const noexcept { return hi == lo; }
  double at(double t01) const noexcept { return lo + (hi - lo) * t01; }
};

enum class ModelKind { interface_position, layer_permeability, custom };

std::string to_string(ModelKind k);

/// One realisation of the random data.
struct Sample {
  InitialDatum u0;
  Coefficient coeff;
  std::vector<double> parameters;  // interface positions, then layer values
};

/// Layered random coefficient: interface i sits at U[interfaces[i]], layer i
/// has value U[layers[i]]; the initial datum is deterministic.
class RandomDataModel {
 public:
  RandomDataModel(ModelKind kind, Interval domain, InitialDatum u0,
                  std::vector<UniformParameter> interfaces,
                  std::vector<UniformParameter> layers);

  /// u0 = 0.8 on (-0.9,-0.2), 0.4 elsewhere, on [-1,1].
  static InitialDatum experiment_datum();

  /// Random interface xi ~ U[-0.3,0.3]; k = 1 left of xi, 2 right.
  static RandomDataModel interface_position(double half_width = 0.3);

  /// Fixed interface at 0; k = 1 + U[-0.3,0.3] left, 2 + U[-0.3,0.3] right.
  static RandomDataModel layer_permeability(double half_width = 0.3);

  /// Zero-width distributions: every draw is the same sample.
  static RandomDataModel deterministic(Interval domain, InitialDatum u0,
                                       Coefficient coeff);

  ModelKind kind() const noexcept { return kind_; }
  Interval domain() const noexcept { return domain_; }
  const InitialDatum& initial_datum() const noexcept { return u0_; }
  std::span<const UniformParameter> interfaces() const noexcept {
    return interfaces_;
  }
  std::span<const UniformParameter> layers() const noexcept { return layers_; }

  std::size_t parameter_count() const noexcept {
    return interfaces_.size() + layers_.size();
  }
  /// Indices (into the flattened parameter list) of non-degenerate params.
  std::vector<std::size_t> stochastic_parameters() const;
  std::size_t stochastic_dimension() const {
    return stochastic_parameters().size();
  }
  UniformParameter parameter(std::size_t i) const;

  /// Range of coefficient values the model can produce.
  Interval coefficient_range() const;

  /// Builds the sample for explicit parameter values (flattened order).
  Sample realize(std::span<const double> parameters) const;

  std::string describe() const;

 private:
  ModelKind kind_;
  Interval domain_;
  InitialDatum u0_;
  std::vector<UniformParameter> interfaces_;
  std::vector<UniformParameter> layers_;
};

/// Deterministic in `key`: one uniform per parameter, in flattened order.
Sample draw_sample(const RandomDataModel& model, const SampleKey& key);

}  // namespace mlmcfv
