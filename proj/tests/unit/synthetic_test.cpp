#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "first/error.hpp"
#include "first/normal.hpp"
#include "first/synthetic.hpp"

using namespace first;

namespace {

double ks_uniform(std::vector<double> v) {
  std::ranges::sort(v);
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - v[i], v[i] - static_cast<double>(i) / n});
  }
  return d;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> latent_column(const Eigen::MatrixXd& x, Eigen::Index j) {
  std::vector<double> out;
  for (Eigen::Index r = 0; r < x.rows(); ++r) out.push_back(normal_quantile(x(r, j)));
  return out;
}

double ishigami_pi(std::span<const double> x) {
  return std::sin(x[0]) + 7.0 * std::pow(std::sin(x[1]), 2) + 0.1 * std::pow(x[2], 4) * std::sin(x[0]);
}

}  // namespace

TEST(Normal, AgreesWithBoost) {
  const boost::math::normal_distribution<double> nd;
  double worst_cdf = 0.0, worst_q = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    worst_cdf = std::max(worst_cdf, std::abs(normal_cdf(x) - boost::math::cdf(nd, x)));
  }
  for (double p = 1e-12; p < 1.0; p += 0.0005) {
    worst_q = std::max(worst_q, std::abs(normal_quantile(p) - boost::math::quantile(nd, p)));
  }
  for (double p : {1e-300, 1e-100, 1e-20, 1e-9, 0.5, 1.0 - 1e-9}) {
    worst_q = std::max(worst_q, std::abs(normal_quantile(p) - boost::math::quantile(nd, p)) /
                                    std::max(1.0, std::abs(boost::math::quantile(nd, p))));
  }
  EXPECT_LE(worst_cdf, 1e-12);
  EXPECT_LE(worst_q, 1e-12);
  EXPECT_EQ(normal_quantile(0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(normal_quantile(1.0), std::numeric_limits<double>::infinity());
}

TEST(Copula, AutoregressiveStructure) {
  const auto spec = CopulaSpec::autoregressive(4, 0.5);
  EXPECT_DOUBLE_EQ(spec.correlation()(0, 3), 0.125);
  EXPECT_DOUBLE_EQ(spec.correlation()(2, 2), 1.0);
  EXPECT_THROW(CopulaSpec::autoregressive(3, 1.0), InputError);
  EXPECT_THROW(CopulaSpec::autoregressive(3, -0.1), InputError);
}

TEST(Copula, IndependentCaseIsUncorrelated) {
  const auto x = sample_inputs(CopulaSpec::autoregressive(4, 0.0), 10'000, 1);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = i + 1; j < 4; ++j) {
      EXPECT_LT(std::abs(pearson(latent_column(x, i), latent_column(x, j))), 0.05);
    }
  }
}

TEST(Copula, AdjacentCorrelationAndUniformMarginals) {
  const auto x = sample_inputs(CopulaSpec::autoregressive(5, 0.9), 10'000, 2);
  for (Eigen::Index i = 0; i + 1 < 5; ++i) {
    EXPECT_NEAR(pearson(latent_column(x, i), latent_column(x, i + 1)), 0.9, 0.02);
  }
  for (Eigen::Index j = 0; j < 5; ++j) {
    std::vector<double> col(x.col(j).data(), x.col(j).data() + x.rows());
    EXPECT_LT(ks_uniform(col), 0.02);
  }
}

TEST(Copula, SeedDeterminism) {
  const auto spec = CopulaSpec::autoregressive(3, 0.3);
  EXPECT_EQ(sample_inputs(spec, 100, 5), sample_inputs(spec, 100, 5));
  EXPECT_NE(sample_inputs(spec, 100, 5), sample_inputs(spec, 100, 6));
}

TEST(ConditionalSample, IndependentCaseIsMarginal) {
  const std::vector<double> fixed{0.1, 0.2, 0.9};
  EXPECT_LT(ks_uniform(conditional_sample(CopulaSpec::autoregressive(3, 0.0), fixed, 1, 10'000, 3)),
            0.03);
}

TEST(ConditionalSample, ClosedFormGaussian) {
  const std::vector<double> fixed{0.0, 0.5};
  const auto draws = conditional_sample(CopulaSpec::autoregressive(2, 0.9), fixed, 0, 20'000, 4);
  double mean = 0.0, sq = 0.0;
  for (double u : draws) {
    const double z = normal_quantile(u);
    mean += z;
    sq += z * z;
  }
  mean /= static_cast<double>(draws.size());
  const double var = sq / static_cast<double>(draws.size()) - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 0.19, 0.01);
}

TEST(ConditionalSample, BoundaryInputsStayFinite) {
  const std::vector<double> fixed{0.0, 1.0, 0.3};
  for (double v : conditional_sample(CopulaSpec::autoregressive(3, 0.6), fixed, 2, 100, 5)) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Benchmarks, PointEvaluations) {
  const auto ish = benchmark_function(BenchmarkId::ishigami);
  const std::vector<double> mid(6, 0.5);
  EXPECT_NEAR(ish(mid), 0.0, 1e-12);
  const auto fr = benchmark_function(BenchmarkId::friedman);
  EXPECT_DOUBLE_EQ(fr(std::vector<double>(10, 0.0)), -5.0);
  std::vector<double> x(10, 0.3);
  x[7] = 0.5;
  x[8] = 0.0;
  x[9] = 0.0;
  EXPECT_NEAR(fr(x), 10.0 * std::sin(std::numbers::pi * 0.09) - 10.0, 1e-12);
  EXPECT_THROW(fr(std::vector<double>(9, 0.0)), InputError);
  EXPECT_EQ(fr.active, (std::vector<std::size_t>{0, 6, 7, 8, 9}));
}

TEST(Benchmarks, HeavyTailedIsFiniteOnCube) {
  const auto f = benchmark_function(BenchmarkId::heavy_tailed);
  EXPECT_EQ(f.active, (std::vector<std::size_t>{0, 1, 2, 5}));
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> corner(0, 1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> x(8);
    for (auto& v : x) v = t % 2 ? corner(rng) : u(rng);
    EXPECT_TRUE(std::isfinite(f(x)));
  }
}

TEST(Benchmarks, NameParsing) {
  EXPECT_EQ(parse_benchmark("heavy-tailed"), BenchmarkId::heavy_tailed);
  EXPECT_EQ(parse_benchmark("friedman"), BenchmarkId::friedman);
  EXPECT_FALSE(parse_benchmark("sobol_g").has_value());
  EXPECT_EQ(to_string(BenchmarkId::ishigami), "ishigami");
}

TEST(Generate, NoiselessResponseIsDeterministic) {
  const auto spec = CopulaSpec::autoregressive(6, 0.2);
  const auto f = benchmark_function(BenchmarkId::ishigami);
  const Dataset d = generate_regression(spec, f, 0.0, 1000, 7);
  EXPECT_EQ(d.rows(), 1000u);
  EXPECT_EQ(d.factor_names().front(), "x1");
  for (std::size_t r = 0; r < d.rows(); ++r) {
    std::vector<double> x;
    for (std::size_t j = 0; j < 6; ++j) x.push_back(d.factor(j).values[r]);
    EXPECT_EQ(d.response()[r], f(x));
  }
}

TEST(Generate, IshigamiVarianceAddsNoise) {
  // Var of the rescaled Ishigami function with a=7, b=0.1 on uniform inputs.
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double var_f = 0.5 + 49.0 / 8.0 + 0.1 * pi4 / 5.0 + 0.01 * pi4 * pi4 / 18.0;
  const auto f = benchmark_function(BenchmarkId::ishigami);
  const Dataset d = generate_regression(CopulaSpec::autoregressive(3, 0.0), f, 1.0, 200'000, 8);
  const auto y = d.response();
  double m = 0, s = 0;
  for (double v : y) m += v;
  m /= static_cast<double>(y.size());
  for (double v : y) s += (v - m) * (v - m);
  EXPECT_NEAR(s / static_cast<double>(y.size() - 1), var_f + 1.0, 0.1);
}

TEST(Generate, BinaryRates) {
  const auto spec = CopulaSpec::autoregressive(2, 0.0);
  const Dataset zero = generate_binary(spec, [](std::span<const double>) { return 0.0; }, 10'000, 9);
  double rate = 0;
  for (double v : zero.response()) rate += v;
  EXPECT_NEAR(rate / 10'000.0, 0.5, 0.02);
  EXPECT_TRUE(zero.binary_response());
  const Dataset high = generate_binary(spec, [](std::span<const double>) { return 10.0; }, 1000, 9);
  for (double v : high.response()) EXPECT_EQ(v, 1.0);
}

TEST(DoubleMc, LinearGaussianRelativeToAllInputs) {
  Eigen::Matrix3d c = Eigen::Matrix3d::Identity();
  c(1, 2) = c(2, 1) = 0.9;
  const auto spec = CopulaSpec::from_correlation(c, Marginal::standard_normal);
  const Model f = [](std::span<const double> x) { return x[0] + x[1]; };
  DoubleMcOptions opt;
  opt.seed = 10;
  EXPECT_NEAR(double_mc_total_sobol(spec, f, 0, opt).index, 0.5, 0.01);
  EXPECT_NEAR(double_mc_total_sobol(spec, f, 1, opt).index, 0.095, 0.01);
  EXPECT_NEAR(double_mc_total_sobol(spec, f, 2, opt).index, 0.0, 1e-12);
}

TEST(DoubleMc, InertFriedmanInputs) {
  const auto spec = CopulaSpec::autoregressive(10, 0.0);
  const auto f = benchmark_function(BenchmarkId::friedman);
  DoubleMcOptions opt;
  opt.seed = 11;
  for (std::size_t i = 1; i <= 5; ++i) EXPECT_LT(double_mc_total_sobol(spec, f, i, opt).index, 0.005);
}

TEST(DoubleMc, MatchesAnalyticIshigami) {
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double v1 = 0.5 * std::pow(1.0 + 0.1 * pi4 / 5.0, 2);
  const double v2 = 49.0 / 8.0;
  const double v13 = 0.01 * pi4 * pi4 * (1.0 / 18.0 - 1.0 / 50.0);
  const double var = v1 + v2 + v13;
  const auto spec = CopulaSpec::autoregressive(3, 0.0);
  const Model f = [](std::span<const double> u) {
    const double x[3] = {2 * std::numbers::pi * u[0] - std::numbers::pi,
                         2 * std::numbers::pi * u[1] - std::numbers::pi,
                         2 * std::numbers::pi * u[2] - std::numbers::pi};
    return ishigami_pi(x);
  };
  DoubleMcOptions opt;
  opt.seed = 12;
  EXPECT_NEAR(double_mc_total_sobol(spec, f, 0, opt).index, (v1 + v13) / var, 0.01);
  EXPECT_NEAR(double_mc_total_sobol(spec, f, 1, opt).index, v2 / var, 0.01);
  EXPECT_NEAR(double_mc_total_sobol(spec, f, 2, opt).index, v13 / var, 0.01);
}

TEST(DoubleMc, StableAcrossSeeds) {
  for (auto id : {BenchmarkId::ishigami, BenchmarkId::heavy_tailed, BenchmarkId::friedman}) {
    const auto f = benchmark_function(id);
    const auto spec = CopulaSpec::autoregressive(f.min_dim, 0.0);
    std::vector<double> v;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      DoubleMcOptions opt;
      opt.seed = 100 + seed;
      v.push_back(double_mc_total_sobol(spec, f, f.active.front(), opt).index);
    }
    double m = 0, s = 0;
    for (double x : v) m += x;
    m /= 10.0;
    for (double x : v) s += (x - m) * (x - m);
    EXPECT_LT(std::sqrt(s / 9.0), 0.01) << to_string(id);
  }
}

TEST(DoubleMc, GroundtruthRestrictedToModelVariables) {
  const auto f = benchmark_function(BenchmarkId::friedman);
  DoubleMcOptions opt;
  opt.n_outer = 20'000;
  const auto g = groundtruth_importance(f, 12, 0.9, opt);
  ASSERT_EQ(g.size(), 12u);
  for (std::size_t i : {1u, 2u, 3u, 4u, 5u, 10u, 11u}) EXPECT_EQ(g[i], 0.0);
  for (std::size_t i : f.active) EXPECT_GT(g[i], 0.0);
}
