#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "mlmcfv/errors.hpp"
#include "mlmcfv/flux.hpp"

namespace mlmcfv {
namespace {

std::shared_ptr<const FluxFunction> bl() {
  return std::make_shared<BuckleyLeverettFlux>();
}

// Closed form written out independently of the library.
double bl_oracle(double k, double u) {
  const double lo = u * u, lw = (1 - u) * (1 - u);
  return lo / (lo + lw) * (1 - k * lw);
}

TEST(BuckleyLeverett, PinnedValues) {
  BuckleyLeverettFlux f;
  EXPECT_EQ(f.eval(1.0, 0.0), 0.0);
  EXPECT_EQ(f.eval(1.7, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(f.eval(2.0, 0.5), 0.25);
}

TEST(BuckleyLeverett, EndpointsExactForEveryK) {
  BuckleyLeverettFlux f;
  for (double k = 0.5; k <= 3.0; k += 0.01) {
    EXPECT_EQ(f.eval(k, 0.0), 0.0) << k;
    EXPECT_EQ(f.eval(k, 1.0), 1.0) << k;
  }
}

TEST(BuckleyLeverett, MatchesClosedForm) {
  BuckleyLeverettFlux f;
  for (double k : {0.7, 1.0, 1.3, 2.0, 2.3})
    for (double u = 0.0; u <= 1.0; u += 1.0 / 64)
      EXPECT_NEAR(f.eval(k, u), bl_oracle(k, u), 1e-15);
}

TEST(BuckleyLeverett, DerivativeMatchesCentralDifference) {
  BuckleyLeverettFlux f;
  const double h = 1e-6;
  for (double k : {0.7, 1.0, 2.0, 2.3})
    for (double u = 0.05; u < 0.96; u += 0.05) {
      const double fd = (bl_oracle(k, u + h) - bl_oracle(k, u - h)) / (2 * h);
      EXPECT_NEAR(f.derivative(k, u), fd, 1e-7) << k << ' ' << u;
    }
}

TEST(BuckleyLeverett, EvalManyMatchesEval) {
  BuckleyLeverettFlux f;
  std::vector<double> u, out(101);
  for (int i = 0; i <= 100; ++i) u.push_back(i / 100.0);
  f.eval_many(1.4, u, out);
  for (std::size_t i = 0; i < u.size(); ++i)
    EXPECT_EQ(out[i], f.eval(1.4, u[i]));
}

TEST(MonotoneBracket, ExperimentRangeIsMonotone) {
  const auto b = validate_monotone_bracket(BuckleyLeverettFlux{}, {0.7, 2.3},
                                           {0.35, 0.9});
  EXPECT_GT(b.alpha, 0.0);
  EXPECT_GE(b.lip, b.alpha);
}

TEST(MonotoneBracket, BoundsAgreeWithDenseOracle) {
  // Finer than the library's 512 x 512 grid, using finite differences.
  double lo = 1e300, hi = -1e300;
  const double h = 1e-7;
  for (int i = 0; i <= 400; ++i) {
    const double k = 0.7 + 1.6 * i / 400.0;
    for (int j = 0; j <= 2000; ++j) {
      const double u = 0.35 + 0.55 * j / 2000.0;
      const double d = (bl_oracle(k, u + h) - bl_oracle(k, u - h)) / (2 * h);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  const auto b = validate_monotone_bracket(BuckleyLeverettFlux{}, {0.7, 2.3},
                                           {0.35, 0.9});
  EXPECT_NEAR(b.alpha, lo, 1e-3 * hi);
  EXPECT_NEAR(b.lip, hi, 1e-3 * hi);
}

TEST(MonotoneBracket, NegativeSlopeNearZeroIsRejected) {
  // Direct evaluation shows the decrease the check must catch.
  EXPECT_GT(bl_oracle(2.3, 0.1), bl_oracle(2.3, 0.2));
  EXPECT_THROW(validate_monotone_bracket(BuckleyLeverettFlux{}, {2.0, 2.3},
                                         {0.0, 0.2}),
               MonotonicityViolation);
  EXPECT_THROW(FluxModel(bl(), {2.0, 2.3}, {0.0, 0.2}), MonotonicityViolation);
}

TEST(MonotoneBracket, LinearFluxHasUnitBounds) {
  const auto b = validate_monotone_bracket(LinearFlux{}, {0.5, 2.0}, {0.0, 1.0});
  EXPECT_EQ(b.alpha, 1.0);
  EXPECT_EQ(b.lip, 1.0);
}

TEST(Invert, DocumentedExamples) {
  const FluxModel m(bl(), {0.7, 2.3}, {0.35, 0.9});
  EXPECT_NEAR(invert_flux(m, 1.5, eval_flux(m, 1.5, 0.6)), 0.6, 1e-10);
  EXPECT_NEAR(invert_flux(m, 2.0, 0.25), 0.5, 1e-10);
  const auto full = FluxModel::unchecked(bl(), {0.9, 2.3}, {0.35, 1.0});
  EXPECT_NEAR(invert_flux(full, 0.9, 1.0), 1.0, 1e-6);
  EXPECT_LE(std::abs(full.eval(0.9, invert_flux(full, 0.9, 1.0)) - 1.0),
            full.tol_f());
}

TEST(Invert, ResidualWithinTolerance) {
  const FluxModel m(bl(), {0.7, 2.3}, {0.35, 0.9});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ku(0.7, 2.3), uu(0.0, 1.0);
  for (int n = 0; n < 2000; ++n) {
    const double k = ku(rng);
    const double plo = m.eval(k, 0.35), phi = m.eval(k, 0.9);
    const double p = plo + (phi - plo) * uu(rng);
    const double u = m.invert(k, p);
    EXPECT_TRUE(m.bracket().contains(u));
    EXPECT_LE(std::abs(m.eval(k, u) - p), m.tol_f());
  }
}

TEST(Invert, RoundTripProperty) {
  const FluxModel m(bl(), {0.7, 2.3}, {0.35, 0.9});
  const double tol_u = 2 * m.tol_f() / m.alpha();
  for (double k : {0.7, 1.0, 1.5, 2.0, 2.3})
    for (int j = 0; j <= 500; ++j) {
      const double u = 0.35 + 0.55 * j / 500.0;
      EXPECT_NEAR(m.invert(k, m.eval(k, u)), u, tol_u) << k << ' ' << u;
    }
}

TEST(Invert, MonotoneInFluxValue) {
  const FluxModel m(bl(), {0.7, 2.3}, {0.35, 0.9});
  for (double k : {0.8, 1.2, 2.1}) {
    const double plo = m.eval(k, 0.35), phi = m.eval(k, 0.9);
    double prev = -1.0;
    for (int j = 0; j <= 1000; ++j) {
      const double u = m.invert(k, plo + (phi - plo) * j / 1000.0);
      EXPECT_GE(u, prev);
      prev = u;
    }
  }
}

TEST(Invert, OutsideImageThrows) {
  const FluxModel m(bl(), {0.7, 2.3}, {0.35, 0.9});
  EXPECT_THROW(m.invert(1.0, m.eval(1.0, 0.9) + 1e-6), OutOfMonotoneRange);
  EXPECT_THROW(m.invert(1.0, m.eval(1.0, 0.35) - 1e-6), OutOfMonotoneRange);
}

TEST(MakeFlux, KnownNames) {
  EXPECT_EQ(make_flux("buckley_leverett")->name(), "buckley_leverett");
  EXPECT_EQ(make_flux("linear")->eval(3.0, 0.5), 0.5);
  EXPECT_EQ(make_flux("linear_scaled")->eval(3.0, 0.5), 1.5);
  EXPECT_THROW(make_flux("burgers"), ConfigError);
}

}  // namespace
}  // namespace mlmcfv
