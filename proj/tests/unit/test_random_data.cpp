#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mlmcfv/random_data.hpp"

namespace mlmcfv {
namespace {

TEST(DeriveStream, SameKeySamePrefix) {
  const SampleKey key{42, 3, 17, 5};
  auto a = derive_stream(key), b = derive_stream(key);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(DeriveStream, EveryFieldMatters) {
  const SampleKey base{42, 3, 17, 5};
  std::set<std::uint64_t> firsts;
  for (SampleKey k : {base, SampleKey{43, 3, 17, 5}, SampleKey{42, 4, 17, 5},
                      SampleKey{42, 3, 18, 5}, SampleKey{42, 3, 17, 6}})
    firsts.insert(derive_stream(k)());
  EXPECT_EQ(firsts.size(), 5u);
}

TEST(DeriveStream, NoCollisionsOverSmallKeyGrid) {
  std::set<std::uint64_t> seen;
  for (std::uint32_t l = 0; l < 8; ++l)
    for (std::uint64_t i = 0; i < 500; ++i)
      for (std::uint32_t r = 0; r < 4; ++r)
        seen.insert(derive_stream({1, l, i, r})());
  EXPECT_EQ(seen.size(), 8u * 500u * 4u);
}

TEST(DeriveStream, LevelStreamsUncorrelated) {
  const int n = 10000;
  auto a = derive_stream({1, 0, 0, 0}), b = derive_stream({1, 1, 0, 0});
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = uniform01(a), y = uniform01(b);
    sa += x; sb += y; saa += x * x; sbb += y * y; sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double va = saa / n - (sa / n) * (sa / n);
  const double vb = sbb / n - (sb / n) * (sb / n);
  EXPECT_LT(std::abs(cov / std::sqrt(va * vb)), 0.03);
}

TEST(Uniform01, HalfOpenUnitInterval) {
  auto rng = derive_stream({5, 0, 0, 0});
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(InterfaceModel, SampleShape) {
  const auto model = RandomDataModel::interface_position();
  EXPECT_EQ(model.stochastic_dimension(), 1u);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto s = draw_sample(model, {1, 0, i, 0});
    ASSERT_EQ(s.coeff.xi.size(), 1u);
    EXPECT_GE(s.coeff.xi[0], -0.3);
    EXPECT_LE(s.coeff.xi[0], 0.3);
    EXPECT_EQ(s.coeff.values, (std::vector<double>{1.0, 2.0}));
  }
}

TEST(InterfaceModel, MeanWithinCltBound) {
  const auto model = RandomDataModel::interface_position();
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += draw_sample(model, {8, 0, static_cast<std::uint64_t>(i), 0})
               .coeff.xi[0];
  const double sigma = 0.6 / std::sqrt(12.0);
  EXPECT_LE(std::abs(sum / n), 3.0 * sigma / std::sqrt(double(n)));
}

TEST(LayerModel, SampleShape) {
  const auto model = RandomDataModel::layer_permeability();
  EXPECT_EQ(model.stochastic_dimension(), 2u);
  const Interval kr = model.coefficient_range();
  EXPECT_DOUBLE_EQ(kr.lo, 0.7);
  EXPECT_DOUBLE_EQ(kr.hi, 2.3);
  double s1 = 0, s2 = 0, s12 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto s = draw_sample(model, {1, 0, static_cast<std::uint64_t>(i), 2});
    ASSERT_EQ(s.coeff.xi, std::vector<double>{0.0});
    const double a = s.coeff.values[0] - 1.0, b = s.coeff.values[1] - 2.0;
    ASSERT_LE(std::abs(a), 0.3);
    ASSERT_LE(std::abs(b), 0.3);
    s1 += a; s2 += b; s12 += a * b;
  }
  // Independent components: covariance near zero relative to var = 0.03.
  EXPECT_LT(std::abs(s12 / n - (s1 / n) * (s2 / n)), 0.03 * 0.05);
}

TEST(DegenerateModel, AlwaysSameSample) {
  const RandomDataModel model(ModelKind::custom, {-1, 1},
                              RandomDataModel::experiment_datum(), {{0.0, 0.0}},
                              {{1.0, 1.0}, {2.0, 2.0}});
  EXPECT_EQ(model.stochastic_dimension(), 0u);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto s = draw_sample(model, {i, 1, i, 3});
    EXPECT_EQ(s.coeff.xi[0], 0.0);
    EXPECT_EQ(s.coeff.values, (std::vector<double>{1.0, 2.0}));
  }
}

TEST(RandomDataModel, RealizeUsesFlattenedOrder) {
  const auto model = RandomDataModel::layer_permeability();
  const std::vector<double> p{0.0, 1.25, 1.9};
  const auto s = model.realize(p);
  EXPECT_EQ(s.coeff.xi[0], 0.0);
  EXPECT_EQ(s.coeff.values[0], 1.25);
  EXPECT_EQ(s.coeff.values[1], 1.9);
  EXPECT_EQ(s.parameters, p);
}

TEST(RandomDataModel, DrawIsOrderIndependent) {
  const auto model = RandomDataModel::interface_position();
  const auto later = draw_sample(model, {3, 2, 999, 1});
  for (std::uint64_t i = 0; i < 50; ++i) draw_sample(model, {3, 2, i, 1});
  EXPECT_EQ(draw_sample(model, {3, 2, 999, 1}).coeff.xi, later.coeff.xi);
}

}  // namespace
}  // namespace mlmcfv
