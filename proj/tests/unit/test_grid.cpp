#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mlmcfv/errors.hpp"
#include "mlmcfv/grid.hpp"
#include "mlmcfv/random_data.hpp"

namespace mlmcfv {
namespace {

const Interval kDomain{-1.0, 1.0};

GridPtr grid_from_edges(std::vector<double> edges) {
  return std::make_shared<const AlignedGrid>(kDomain, std::move(edges),
                                             std::vector<std::size_t>{});
}

GridFunction random_function(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nd(1, 12);
  std::uniform_real_distribution<double> ud(0.0, 1.0), vd(-2.0, 2.0);
  const int n = nd(rng);
  std::vector<double> cuts;
  for (int i = 0; i < n - 1; ++i) cuts.push_back(-1.0 + 2.0 * ud(rng));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> edges{-1.0};
  for (double c : cuts)
    if (c > edges.back() + 1e-9 && c < 1.0 - 1e-9) edges.push_back(c);
  edges.push_back(1.0);
  std::vector<double> vals(edges.size() - 1);
  for (auto& v : vals) v = vd(rng);
  return GridFunction(grid_from_edges(edges), vals);
}

TEST(Coefficient, ValidateRejectsBadInput) {
  EXPECT_NO_THROW((Coefficient{{0.0}, {1.0, 2.0}}.validate(kDomain)));
  EXPECT_THROW((Coefficient{{0.0}, {1.0}}.validate(kDomain)), ConfigError);
  EXPECT_THROW((Coefficient{{0.2, 0.1}, {1, 2, 3}}.validate(kDomain)),
               ConfigError);
  EXPECT_THROW((Coefficient{{1.0}, {1, 2}}.validate(kDomain)), ConfigError);
}

TEST(Coefficient, AtPicksSubdomain) {
  const Coefficient c{{-0.5, 0.5}, {1, 2, 3}};
  EXPECT_EQ(c.at(-0.9), 1);
  EXPECT_EQ(c.at(-0.5), 2);
  EXPECT_EQ(c.at(0.2), 2);
  EXPECT_EQ(c.at(0.9), 3);
}

TEST(BuildAlignedGrid, InterfaceAlreadyOnEdge) {
  const auto mesh = build_aligned_grid(kDomain, {{0.0}, {1, 2}}, 0.0625);
  EXPECT_EQ(mesh.grid->cells(), 32u);
  EXPECT_TRUE(mesh.grid->is_uniform());
  EXPECT_EQ(mesh.coeff.xi[0], 0.0);
  EXPECT_EQ(mesh.grid->interface_cells()[0], 16u);
}

TEST(BuildAlignedGrid, SnapsToNearestEdge) {
  const auto mesh = build_aligned_grid(kDomain, {{0.23}, {1, 2}}, 0.25);
  EXPECT_EQ(mesh.grid->cells(), 8u);
  EXPECT_EQ(mesh.coeff.xi[0], 0.25);
  EXPECT_EQ(mesh.grid->interface_cells()[0], 5u);
  EXPECT_EQ(mesh.grid->edges()[5], 0.25);
}

TEST(BuildAlignedGrid, MergedInterfacesAreDegenerate) {
  EXPECT_THROW(build_aligned_grid(kDomain, {{-0.01, 0.01}, {1, 2, 3}}, 0.25),
               DegenerateSubdomain);
}

TEST(BuildAlignedGrid, SnapDisplacementAtMostHalfCell) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xd(-0.3, 0.3);
  for (int e = 3; e <= 10; ++e) {
    const double dx = std::ldexp(1.0, -e);
    for (int n = 0; n < 50; ++n) {
      const double xi = xd(rng);
      const auto mesh = build_aligned_grid(kDomain, {{xi}, {1, 2}}, dx);
      EXPECT_LE(std::abs(mesh.coeff.xi[0] - xi), 0.5 * dx + 1e-15);
      EXPECT_EQ(mesh.grid->edges()[mesh.grid->interface_cells()[0]],
                mesh.coeff.xi[0]);
    }
  }
}

TEST(BuildAlignedGrid, SubdomainModeKeepsInterfaces) {
  const Coefficient c{{-0.137, 0.41}, {1, 2, 3}};
  const auto mesh =
      build_aligned_grid(kDomain, c, 0.05, Alignment::subdomain_uniform);
  ASSERT_EQ(mesh.coeff.xi.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(mesh.coeff.xi[i], c.xi[i]);
    EXPECT_EQ(mesh.grid->edges()[mesh.grid->interface_cells()[i]], c.xi[i]);
  }
  EXPECT_LE(mesh.grid->dx_max(), 0.05 + 1e-15);
  EXPECT_GT(mesh.grid->dx_min(), 0.0);
}

TEST(Alignment, ParseRoundTrip) {
  for (auto a : {Alignment::snap_uniform, Alignment::subdomain_uniform})
    EXPECT_EQ(parse_alignment(to_string(a)), a);
  EXPECT_THROW(parse_alignment("nearest"), ConfigError);
}

TEST(ProjectInitialDatum, Constant) {
  const auto g = AlignedGrid::uniform(kDomain, 16);
  const auto f = project_initial_datum(InitialDatum::constant(0.4), g);
  for (double v : f.values()) EXPECT_EQ(v, 0.4);
}

TEST(ProjectInitialDatum, ExperimentDatumOnAlignedGrid) {
  const auto g = AlignedGrid::uniform(kDomain, 20);  // dx = 0.1
  const auto f = project_initial_datum(RandomDataModel::experiment_datum(), g);
  for (std::size_t j = 0; j < g->cells(); ++j) {
    const double x = g->center(j);
    EXPECT_NEAR(f[j], (x > -0.9 && x < -0.2) ? 0.8 : 0.4, 1e-15) << j;
  }
}

TEST(ProjectInitialDatum, StraddlingCellAveragesHalfAndHalf) {
  // Cell [-0.95, -0.85] is split evenly by the jump at -0.9.
  const auto g = grid_from_edges({-1.0, -0.95, -0.85, 1.0});
  const auto f = project_initial_datum(RandomDataModel::experiment_datum(), g);
  EXPECT_NEAR(f[1], 0.6, 1e-15);
  EXPECT_NEAR(f[0], 0.4, 1e-15);
}

TEST(ProjectInitialDatum, SmoothFunctionUsesMidpointRule) {
  const auto g = AlignedGrid::uniform(kDomain, 4);
  const auto u0 = InitialDatum::from_function([](double x) { return x; });
  const auto f = project_initial_datum(u0, g, 8);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(f[j], g->center(j), 1e-15);
}

TEST(ProjectToGrid, IdenticalGridIsIdentity) {
  const auto g = AlignedGrid::uniform(kDomain, 7);
  GridFunction f(g, {1, 2, 3, 4, 5, 6, 7});
  const auto h = project_to_grid(f, g);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(h[j], f[j]);
}

TEST(ProjectToGrid, TwoCellsOntoOne) {
  GridFunction f(AlignedGrid::uniform(kDomain, 2), {0.0, 1.0});
  const auto h = project_to_grid(f, AlignedGrid::uniform(kDomain, 1));
  EXPECT_DOUBLE_EQ(h[0], 0.5);
}

TEST(ProjectToGrid, RefineThenCoarsenIsIdentity) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 50; ++n) {
    const auto f = random_function(rng);
    const auto fine = AlignedGrid::uniform(kDomain, 4096);
    // Merge f's edges with a fine grid so it is a refinement of f's grid.
    std::vector<double> edges(fine->edges().begin(), fine->edges().end());
    edges.insert(edges.end(), f.grid().edges().begin(), f.grid().edges().end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const auto up = project_to_grid(f, grid_from_edges(edges));
    const auto back = project_to_grid(up, f.grid_ptr());
    for (std::size_t j = 0; j < f.size(); ++j)
      EXPECT_NEAR(back[j], f[j], 1e-12);
  }
}

TEST(ProjectToGrid, ConservesIntegral) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 200; ++n) {
    const auto f = random_function(rng);
    const auto target = random_function(rng).grid_ptr();
    const auto h = project_to_grid(f, target);
    const double scale = std::max(1.0, std::abs(f.integral()));
    EXPECT_NEAR(h.integral(), f.integral(), 1e-12 * scale);
  }
}

TEST(ProjectAdd, Accumulates) {
  GridFunction f(AlignedGrid::uniform(kDomain, 2), {0.0, 1.0});
  std::vector<double> out{1.0};
  project_add(f, *AlignedGrid::uniform(kDomain, 1), -2.0, out);
  EXPECT_DOUBLE_EQ(out[0], 0.0);
}

TEST(L1Distance, Examples) {
  const auto g1 = AlignedGrid::uniform(kDomain, 1);
  const auto g2 = AlignedGrid::uniform(kDomain, 2);
  GridFunction one(g1, 1.0), zero(g1, 0.0);
  EXPECT_EQ(l1_distance(one, one), 0.0);
  EXPECT_DOUBLE_EQ(l1_distance(one, zero), 2.0);
  GridFunction indicator(g2, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(l1_distance(indicator, zero), 1.0);
}

TEST(L1Distance, MetricProperties) {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 300; ++n) {
    const auto f = random_function(rng), g = random_function(rng),
               h = random_function(rng);
    const double fg = l1_distance(f, g), gf = l1_distance(g, f);
    EXPECT_NEAR(fg, gf, 1e-14);
    EXPECT_GE(fg, 0.0);
    EXPECT_LE(fg, l1_distance(f, h) + l1_distance(h, g) + 1e-12);
    EXPECT_NEAR(l1_distance(f, f), 0.0, 1e-15);
  }
}

TEST(L1Distance, MatchesDenseSampling) {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 20; ++n) {
    const auto f = random_function(rng), g = random_function(rng);
    // Midpoint rule on a grid much finer than any feature; error is bounded
    // by the number of breakpoints times the sample width times the jump.
    const int N = 200000;
    double s = 0.0;
    auto value = [](const GridFunction& u, double x) {
      const auto e = u.grid().edges();
      const auto it = std::upper_bound(e.begin(), e.end(), x);
      return u[std::min<std::size_t>(it - e.begin() - 1, u.size() - 1)];
    };
    for (int i = 0; i < N; ++i) {
      const double x = -1.0 + 2.0 * (i + 0.5) / N;
      s += std::abs(value(f, x) - value(g, x));
    }
    s *= 2.0 / N;
    EXPECT_NEAR(l1_distance(f, g), s, 25 * 4.0 * 2.0 / N);
  }
}

TEST(TotalVariation, Examples) {
  const auto g = AlignedGrid::uniform(kDomain, 20);
  EXPECT_EQ(total_variation(GridFunction(g, 0.3), true), 0.0);
  const auto u0 = project_initial_datum(RandomDataModel::experiment_datum(), g);
  EXPECT_NEAR(total_variation(u0, true), 0.8, 1e-15);
  GridFunction step(AlignedGrid::uniform(kDomain, 2), {0.0, 1.0});
  EXPECT_EQ(total_variation(step, true), 2.0);
  EXPECT_EQ(total_variation(step, false), 1.0);
}

TEST(Csv, SeventeenDigitRoundTrip) {
  GridFunction f(AlignedGrid::uniform(kDomain, 3), {0.1, 1.0 / 3.0, -2e-300});
  std::ostringstream os;
  write_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x,value");
  for (std::size_t j = 0; j < 3; ++j) {
    std::getline(is, line);
    const auto comma = line.find(',');
    EXPECT_EQ(std::stod(line.substr(0, comma)), f.grid().center(j));
    EXPECT_EQ(std::stod(line.substr(comma + 1)), f[j]);
  }
}

}  // namespace
}  // namespace mlmcfv
