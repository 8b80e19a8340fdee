#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "bgc/search.hpp"

using namespace bgc;

namespace {

/// (||x1 + t x2||^p + ||x1 - t x2||^p) * scale, declared convex.
Objective power_sum(const NormedSpace& x, double t, double p, double scale = 1.0) {
  return {[&x, t, p, scale](std::span<const double> a, std::span<const double> b) {
            return scale * (std::pow(norm_of(x, 1.0, a, t, b), p) + std::pow(norm_of(x, 1.0, a, -t, b), p));
          },
          true, "power_sum"};
}

Objective constant(double c) {
  return {[c](std::span<const double>, std::span<const double>) { return c; }, true, "constant"};
}

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* v) { setenv("BG_THREADS", v, 1); }
  ~ThreadsEnv() { unsetenv("BG_THREADS"); }
};

}  // namespace

TEST(SupPairs2D, Examples) {
  const NormedSpace e = l2();
  const Estimate a = sup_pairs_2d(e, power_sum(e, 1.0, 2.0, 0.5), Region::Sphere, 256, 20);
  EXPECT_NEAR(a.value, 2.0, 1e-6);
  const NormedSpace o = l1();
  const Estimate b = sup_pairs_2d(o, power_sum(o, 1.0, 2.0, 0.5), Region::Sphere, 256, 20);
  EXPECT_NEAR(b.value, 4.0, 1e-6);
  const Estimate c = sup_pairs_2d(o, constant(1.0), Region::Sphere, 8, 0);
  EXPECT_EQ(c.value, 1.0);
  EXPECT_EQ(c.strategy, Engine::Grid2D);
  EXPECT_FALSE(c.exact);
}

TEST(SupPairs2D, ValueIsAttainedAtWitness) {
  for (const auto& x : {l1(), l2(), lq(3.0), linf(), regular_hexagon()}) {
    const Objective f = power_sum(x, 0.4, 3.0);
    const Estimate e = sup_pairs_2d(x, f, Region::Sphere, 64, 10);
    EXPECT_NEAR(f.eval(e.first.coords(), e.second.coords()), e.value, 1e-12 * e.value);
    EXPECT_NEAR(norm(x, e.first), 1.0, 1e-12);
    EXPECT_NEAR(norm(x, e.second), 1.0, 1e-12);
  }
}

TEST(SupPairs2D, NeverExceedsExactValue) {
  for (const auto& x : {l1(), linf(), regular_hexagon()}) {
    for (double t : {0.1, 0.5, 0.9}) {
      const Objective f = power_sum(x, t, 2.0);
      const double exact = sup_vertex_pairs(x, f).value;
      const Estimate g = sup_pairs_2d(x, f, Region::Sphere, 100, 30);
      EXPECT_LE(g.value, exact * (1 + 1e-12));
      EXPECT_NEAR(g.value, exact, 1e-6);
    }
  }
}

TEST(SupPairs2D, BallRegion) {
  const NormedSpace x = l2();
  const Objective f{[&x](std::span<const double> a, std::span<const double> b) { return x.norm(a) + x.norm(b); },
                    false, "sum"};
  const Estimate e = sup_pairs_2d(x, f, Region::Ball, 64, 10);
  EXPECT_NEAR(e.value, 2.0, 1e-12);
  const Objective g{[&x](std::span<const double> a, std::span<const double> b) { return -x.norm(a) - x.norm(b); },
                    false, "neg"};
  EXPECT_EQ(sup_pairs_2d(x, g, Region::Ball, 64, 10).value, 0.0);
}

TEST(SupPairs2D, GuardedPointsAreSkipped) {
  const NormedSpace x = l2();
  const Objective f{[](std::span<const double> a, std::span<const double>) {
                      return a[0] > 0.9 ? std::numeric_limits<double>::quiet_NaN() : a[0];
                    },
                    false, "guarded"};
  const Estimate e = sup_pairs_2d(x, f, Region::Sphere, 64, 10);
  EXPECT_LE(e.value, 0.9);
  EXPECT_GT(e.value, 0.85);
  const Objective none{[](std::span<const double>, std::span<const double>) {
                         return std::numeric_limits<double>::quiet_NaN();
                       },
                       false, "none"};
  EXPECT_THROW(sup_pairs_2d(x, none, Region::Sphere, 8, 0), std::runtime_error);
}

TEST(SupPairs2D, Errors) {
  EXPECT_THROW(sup_pairs_2d(l2(3), constant(1), Region::Sphere, 64, 1), std::invalid_argument);
  EXPECT_THROW(sup_pairs_2d(l2(), constant(1), Region::Sphere, 7, 1), std::invalid_argument);
  EXPECT_THROW(sup_pairs_2d(l2(), constant(1), Region::Sphere, 8, -1), std::invalid_argument);
}

TEST(SupPairsND, Examples) {
  const NormedSpace e = l2(3);
  EXPECT_NEAR(sup_pairs_nd(e, power_sum(e, 1.0, 2.0, 0.5), Region::Sphere, 32, 200, 7).value, 2.0, 1e-4);
  const NormedSpace o = l1(3);
  const Estimate b = sup_pairs_nd(o, power_sum(o, 1.0, 2.0, 0.5), Region::Sphere, 64, 300, 7);
  EXPECT_GE(b.value, 4.0 - 1e-4);
  EXPECT_LE(b.value, sup_vertex_pairs(o, power_sum(o, 1.0, 2.0, 0.5)).value + 1e-12);
  const Estimate c = sup_pairs_nd(o, constant(2.5), Region::Sphere, 1, 1, 0);
  EXPECT_EQ(c.value, 2.5);
  EXPECT_EQ(c.strategy, Engine::MultiStart);
}

TEST(SupPairsND, DeterministicAndThreadIndependent) {
  const NormedSpace x = lq(3.0, 3);
  const Objective f = power_sum(x, 0.7, 3.0);
  const Estimate a = sup_pairs_nd(x, f, Region::Sphere, 16, 100, 42);
  const Estimate b = sup_pairs_nd(x, f, Region::Sphere, 16, 100, 42);
  Estimate c;
  {
    ThreadsEnv env("3");
    c = sup_pairs_nd(x, f, Region::Sphere, 16, 100, 42);
  }
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, c.second);
  EXPECT_EQ(a.value, c.value);
  EXPECT_EQ(a.evaluations, c.evaluations);
}

TEST(SupPairsND, MoreStartsNeverHurt) {
  const NormedSpace x = lq(1.5, 3);
  const Objective f = power_sum(x, 0.5, 2.0);
  const double few = sup_pairs_nd(x, f, Region::Sphere, 4, 100, 9).value;
  const double many = sup_pairs_nd(x, f, Region::Sphere, 8, 100, 9).value;
  EXPECT_GE(many, few);
}

TEST(SupPairsND, BallStaysInBall) {
  const NormedSpace x = l2(3);
  const Objective f{[&x](std::span<const double> a, std::span<const double> b) { return x.norm(a) - x.norm(b); },
                    false, "diff"};
  const Estimate e = sup_pairs_nd(x, f, Region::Ball, 8, 200, 1);
  EXPECT_LE(norm(x, e.first), 1.0 + 1e-15);
  EXPECT_NEAR(e.value, 1.0, 1e-6);
}

TEST(SupPairsND, Errors) {
  EXPECT_THROW(sup_pairs_nd(l2(), constant(1), Region::Sphere, 0, 1, 0), std::invalid_argument);
  EXPECT_THROW(sup_pairs_nd(l2(), constant(1), Region::Sphere, 1, 0, 0), std::invalid_argument);
}

// Hand enumeration of the 16 ordered vertex pairs of the diamond and the square.
TEST(SupVertexPairs, AgainstHandEnumeration) {
  const std::vector<std::array<double, 2>> diamond{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const std::vector<std::array<double, 2>> square{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  auto l1n = [](double a, double b) { return std::abs(a) + std::abs(b); };
  auto lin = [](double a, double b) { return std::max(std::abs(a), std::abs(b)); };
  auto oracle = [](const auto& verts, auto nrm) {
    double best = -1;
    for (const auto& a : verts) {
      for (const auto& b : verts) {
        const double v = std::pow(nrm(a[0] + b[0], a[1] + b[1]), 2) + std::pow(nrm(a[0] - b[0], a[1] - b[1]), 2);
        best = std::max(best, v);
      }
    }
    return best;
  };
  const NormedSpace o = l1();
  const Estimate a = sup_vertex_pairs(o, power_sum(o, 1.0, 2.0));
  EXPECT_EQ(a.value, 8.0);
  EXPECT_EQ(a.value, oracle(diamond, l1n));
  EXPECT_TRUE(a.exact);
  EXPECT_EQ(a.strategy, Engine::VertexExact);
  EXPECT_EQ(a.evaluations, 16);
  EXPECT_EQ(power_sum(o, 1.0, 2.0).eval(std::array<double, 2>{1, 0}, std::array<double, 2>{0, 1}), 8.0);
  const NormedSpace i = linf();
  const Estimate b = sup_vertex_pairs(i, power_sum(i, 1.0, 2.0));
  EXPECT_EQ(b.value, 8.0);
  EXPECT_EQ(b.value, oracle(square, lin));
  EXPECT_EQ(power_sum(i, 1.0, 2.0).eval(std::array<double, 2>{1, 1}, std::array<double, 2>{1, -1}), 8.0);
  for (double p : {1.0, 2.5, 4.0}) EXPECT_EQ(sup_vertex_pairs(o, power_sum(o, 0.0, p)).value, 2.0);
}

TEST(SupVertexPairs, TieBreakIsLexicographicallySmallest) {
  const NormedSpace o = l1();
  const Estimate a = sup_vertex_pairs(o, power_sum(o, 1.0, 2.0));
  EXPECT_EQ(a.first, (Vector{-1, 0}));
  EXPECT_EQ(a.second, (Vector{0, -1}));
}

TEST(SupVertexPairs, Errors) {
  const Objective nonconvex{[](std::span<const double>, std::span<const double>) { return 0.0; }, false, "nc"};
  EXPECT_THROW(sup_vertex_pairs(l1(), nonconvex), std::invalid_argument);
  EXPECT_THROW(sup_vertex_pairs(l2(), constant(1)), std::invalid_argument);
}

TEST(TSweep, Examples) {
  const SweepResult a = t_sweep([](double t) { return t; }, 0.0, 1.0, 11, 0);
  EXPECT_EQ(a.t_star, 1.0);
  EXPECT_EQ(a.value, 1.0);
  const SweepResult b = t_sweep([](double t) { return (1 + t) * (1 + t) / (1 + t * t); }, 0.0, 1.0, 101, 30);
  EXPECT_NEAR(b.t_star, 1.0, 1e-6);
  EXPECT_NEAR(b.value, 2.0, 1e-6);
  const SweepResult c = t_sweep([](double) { return 3.5; }, 0.2, 0.8, 5, 10);
  EXPECT_EQ(c.t_star, 0.2);
  EXPECT_EQ(c.value, 3.5);
}

TEST(TSweep, RefinesInteriorMaximum) {
  const SweepResult r = t_sweep([](double t) { return -(t - 0.3141) * (t - 0.3141); }, 0.0, 1.0, 11, 60);
  EXPECT_NEAR(r.t_star, 0.3141, 1e-6);
  EXPECT_LE(r.value, 0.0);
}

TEST(TSweep, Errors) {
  EXPECT_THROW(t_sweep([](double t) { return t; }, 1.0, 0.0, 11, 0), std::invalid_argument);
  EXPECT_THROW(t_sweep([](double t) { return t; }, 0.0, 1.0, 2, 0), std::invalid_argument);
  EXPECT_THROW(t_sweep([](double t) { return 1.0 / (t - 0.5); }, 0.0, 1.0, 3, 0), std::domain_error);
  EXPECT_THROW(t_sweep([](double) { return std::nan(""); }, 0.0, 1.0, 3, 0), std::domain_error);
}

TEST(Strategy, ParseAndPrint) {
  EXPECT_EQ(Strategy::parse("exact").kind, StrategyKind::Exact);
  EXPECT_EQ(Strategy::parse("auto").kind, StrategyKind::Auto);
  const Strategy g = Strategy::parse("grid2d:res=512,refine=10");
  EXPECT_EQ(g.kind, StrategyKind::Grid2D);
  EXPECT_EQ(g.resolution, 512);
  EXPECT_EQ(g.refine, 10);
  const Strategy m = Strategy::parse("multistart:starts=128,steps=400,seed=7");
  EXPECT_EQ(m.starts, 128);
  EXPECT_EQ(m.steps, 400);
  EXPECT_EQ(m.seed, 7U);
  for (const char* s : {"exact", "auto", "grid2d:res=1024,refine=40", "multistart:starts=128,steps=400,seed=7"}) {
    EXPECT_EQ(Strategy::parse(s).to_string(), s);
  }
}

TEST(Strategy, ParseErrorsNameTheToken) {
  auto message = [](const char* text) {
    try {
      (void)Strategy::parse(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("simplex").find("simplex"), std::string::npos);
  EXPECT_NE(message("grid2d:res=abc").find("abc"), std::string::npos);
  EXPECT_NE(message("grid2d:starts=4").find("starts"), std::string::npos);
  EXPECT_NE(message("multistart:foo=1").find("foo"), std::string::npos);
  EXPECT_NE(message("grid2d:res=1.5").find("res"), std::string::npos);
  EXPECT_NE(message("grid2d:res").find("res"), std::string::npos);
}

TEST(Maximize, AutoPicksEngine) {
  EXPECT_EQ(maximize(l1(), power_sum(l1(), 0.5, 2.0), Region::Sphere, Strategy{}).strategy, Engine::VertexExact);
  const Objective nc{[](std::span<const double> a, std::span<const double>) { return a[0]; }, false, "nc"};
  EXPECT_EQ(maximize(l1(), nc, Region::Sphere, Strategy::grid2d(64, 5)).strategy, Engine::Grid2D);
  Strategy s;
  s.resolution = 64;
  EXPECT_EQ(maximize(l1(), nc, Region::Sphere, s).strategy, Engine::Grid2D);
  s.starts = 4;
  s.steps = 20;
  EXPECT_EQ(maximize(l2(3), nc, Region::Sphere, s).strategy, Engine::MultiStart);
  EXPECT_EQ(maximize(l1(3), power_sum(l1(3), 0.5, 2.0), Region::Sphere, s).strategy, Engine::VertexExact);
}

TEST(Minimize, FlipsSignAndSense) {
  const NormedSpace x = l1();
  const Objective f{[&x](std::span<const double> a, std::span<const double> b) { return norm_of(x, 1.0, a, 1.0, b); },
                    true, "sum"};
  const Estimate e = minimize(x, f, Region::Sphere, Strategy::grid2d(64, 10));
  EXPECT_NEAR(e.value, 0.0, 1e-12);
  EXPECT_EQ(e.sense, Sense::Inf);
  EXPECT_THROW(minimize(x, f, Region::Sphere, Strategy::exact()), std::invalid_argument);
}
