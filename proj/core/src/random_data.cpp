#include "mlmcfv/random_data.hpp"

#include <algorithm>
#include <sstream>

#include "mlmcfv/errors.hpp"

namespace mlmcfv {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream derive_stream(const SampleKey& key) {
  std::uint64_t h = mix64(key.master_seed ^ 0x6d6c6d63666b6579ULL);
  h = mix64(h ^ key.level);
  h = mix64(h ^ key.sample_index);
  h = mix64(h ^ key.replica);
  // Four words through seed_seq fill the Mersenne Twister state evenly.
  std::seed_seq seq{static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(key.sample_index),
                    static_cast<std::uint32_t>(key.level ^ (key.replica << 16))};
  return RandomStream(seq);
}

double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::interface_position:
      return "interface_position";
    case ModelKind::layer_permeability:
      return "layer_permeability";
    case ModelKind::custom:
      return "custom";
  }
  return "custom";
}

RandomDataModel::RandomDataModel(ModelKind kind, Interval domain,
                                 InitialDatum u0,
                                 std::vector<UniformParameter> interfaces,
                                 std::vector<UniformParameter> layers)
    : kind_(kind),
      domain_(domain),
      u0_(std::move(u0)),
      interfaces_(std::move(interfaces)),
      layers_(std::move(layers)) {
  if (!(domain_.hi > domain_.lo)) throw ConfigError("model domain is empty");
  if (layers_.size() != interfaces_.size() + 1)
    throw ConfigError("random model needs one more layer than interfaces");
  for (std::size_t i = 0; i < interfaces_.size(); ++i) {
    const auto& p = interfaces_[i];
    if (p.hi < p.lo || !(p.lo > domain_.lo) || !(p.hi < domain_.hi))
      throw ConfigError("interface distribution must lie inside the domain");
    if (i > 0 && !(p.lo > interfaces_[i - 1].hi))
      throw ConfigError("interface distributions must not overlap");
  }
  for (const auto& p : layers_)
    if (p.hi < p.lo) throw ConfigError("layer distribution has hi < lo");
}

InitialDatum RandomDataModel::experiment_datum() {
  return InitialDatum::piecewise_constant({-0.9, -0.2}, {0.4, 0.8, 0.4});
}

RandomDataModel RandomDataModel::interface_position(double half_width) {
  return RandomDataModel(ModelKind::interface_position, {-1.0, 1.0},
                         experiment_datum(), {{-half_width, half_width}},
                         {{1.0, 1.0}, {2.0, 2.0}});
}

RandomDataModel RandomDataModel::layer_permeability(double half_width) {
  return RandomDataModel(ModelKind::layer_permeability, {-1.0, 1.0},
                         experiment_datum(), {{0.0, 0.0}},
                         {{1.0 - half_width, 1.0 + half_width},
                          {2.0 - half_width, 2.0 + half_width}});
}

RandomDataModel RandomDataModel::deterministic(Interval domain, InitialDatum u0,
                                               Coefficient coeff) {
  coeff.validate(domain);
  std::vector<UniformParameter> ifs;
  std::vector<UniformParameter> layers;
  for (double x : coeff.xi) ifs.push_back({x, x});
  for (double v : coeff.values) layers.push_back({v, v});
  return RandomDataModel(ModelKind::custom, domain, std::move(u0),
                         std::move(ifs), std::move(layers));
}

std::vector<std::size_t> RandomDataModel::stochastic_parameters() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < parameter_count(); ++i)
    if (!parameter(i).degenerate()) idx.push_back(i);
  return idx;
}

UniformParameter RandomDataModel::parameter(std::size_t i) const {
  return i < interfaces_.size() ? interfaces_[i]
                                : layers_[i - interfaces_.size()];
}

Interval RandomDataModel::coefficient_range() const {
  Interval r{layers_.front().lo, layers_.front().hi};
  for (const auto& p : layers_) {
    r.lo = std::min(r.lo, p.lo);
    r.hi = std::max(r.hi, p.hi);
  }
  return r;
}

Sample RandomDataModel::realize(std::span<const double> parameters) const {
  if (parameters.size() != parameter_count())
    throw ConfigError("wrong number of parameters for this random model");
  Sample s{u0_, {}, {parameters.begin(), parameters.end()}};
  s.coeff.xi.assign(parameters.begin(),
                    parameters.begin() + static_cast<long>(interfaces_.size()));
  s.coeff.values.assign(
      parameters.begin() + static_cast<long>(interfaces_.size()),
      parameters.end());
  return s;
}

std::string RandomDataModel::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << " domain=[" << format_double(domain_.lo) << ","
     << format_double(domain_.hi) << "] u0=" << u0_.describe() << " xi=";
  for (const auto& p : interfaces_)
    os << "U[" << format_double(p.lo) << "," << format_double(p.hi) << "]";
  os << " k=";
  for (const auto& p : layers_)
    os << "U[" << format_double(p.lo) << "," << format_double(p.hi) << "]";
  return os.str();
}

Sample draw_sample(const RandomDataModel& model, const SampleKey& key) {
  RandomStream rng = derive_stream(key);
  std::vector<double> params(model.parameter_count());
  for (std::size_t i = 0; i < params.size(); ++i)
    params[i] = model.parameter(i).at(uniform01(rng));
  return model.realize(params);
}

}  // namespace mlmcfv
