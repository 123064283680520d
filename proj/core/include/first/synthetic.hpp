#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "first/dataset.hpp"

namespace first {

enum class Marginal { uniform01, standard_normal };

/// Gaussian copula: Z ~ N(0, Sigma) with unit diagonal, X_i = G^{-1}(Phi(Z_i)).
class CopulaSpec {
 public:
  /// Sigma_ij = rho^|i-j|, rho in [0, 1).
  static CopulaSpec autoregressive(std::size_t dim, double rho,
                                   Marginal marginal = Marginal::uniform01);
  /// Any symmetric positive definite correlation matrix with unit diagonal.
  static CopulaSpec from_correlation(Eigen::MatrixXd correlation,
                                     Marginal marginal = Marginal::uniform01);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(sigma_.rows()); }
  [[nodiscard]] Marginal marginal() const noexcept { return marginal_; }
  [[nodiscard]] const Eigen::MatrixXd& correlation() const noexcept { return sigma_; }
  [[nodiscard]] const Eigen::MatrixXd& cholesky() const noexcept { return lower_; }
  [[nodiscard]] const Eigen::MatrixXd& precision() const noexcept { return precision_; }

  /// Copula of the sub-vector X_dims (Sigma restricted to dims).
  [[nodiscard]] CopulaSpec restrict_to(std::span<const std::size_t> dims) const;

  /// G^{-1}(Phi(z)).
  [[nodiscard]] double to_marginal(double z) const noexcept;
  /// Phi^{-1}(G(x)); uniform inputs are clipped to [1e-12, 1 - 1e-12].
  [[nodiscard]] double to_latent(double x) const noexcept;

 private:
  CopulaSpec(Eigen::MatrixXd sigma, Marginal marginal);

  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd lower_;
  Eigen::MatrixXd precision_;
  Marginal marginal_;
};

/// n x p matrix of i.i.d. copula draws.
Eigen::MatrixXd sample_inputs(const CopulaSpec& spec, std::size_t n, std::uint64_t seed);

/// Draws of X_i given X_{-i} = fixed_{-i} (fixed[i] is ignored). Uniform
/// coordinates on or outside the open unit interval are clipped.
std::vector<double> conditional_sample(const CopulaSpec& spec, std::span<const double> fixed,
                                       std::size_t i, std::size_t count, std::uint64_t seed);

enum class BenchmarkId { ishigami, heavy_tailed, friedman };

std::string to_string(BenchmarkId id);
std::optional<BenchmarkId> parse_benchmark(std::string_view name);

/// Synthetic test function on [0, 1]^p.
struct BenchmarkFunction {
  BenchmarkId id = BenchmarkId::ishigami;
  std::size_t min_dim = 3;
  std::vector<std::size_t> active;  // 0-based indices of the true model variables

  /// Throws InputError if x has fewer than min_dim coordinates.
  double operator()(std::span<const double> x) const;
};

BenchmarkFunction benchmark_function(BenchmarkId id);

using Model = std::function<double(std::span<const double>)>;

/// Y = f(X) + noise_sd * N(0, 1). Factors are named x1..xp, the response y.
Dataset generate_regression(const CopulaSpec& spec, const Model& f, double noise_sd,
                            std::size_t n, std::uint64_t seed);

/// Y = Bernoulli(Phi(f(X))).
Dataset generate_binary(const CopulaSpec& spec, const Model& f, std::size_t n,
                        std::uint64_t seed);

struct DoubleMcOptions {
  std::size_t n_outer = 100'000;
  std::size_t n_inner = 2;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
};

struct DoubleMcResult {
  double index = 0.0;     // effect / variance
  double effect = 0.0;    // E[Var(f | X_{-i})]
  double variance = 0.0;  // Var[f(X)]
};

/// Double-loop Monte Carlo total Sobol' index of input i: the inner loop
/// draws n_inner values of X_i from X_i | X_{-i} for each of n_outer outer
/// draws. The denominator is the sample variance of f over the outer draws.
DoubleMcResult double_mc_total_sobol(const CopulaSpec& spec, const Model& f, std::size_t i,
                                     const DoubleMcOptions& options);

/// Ground-truth importance of every coordinate of a benchmark function on
/// the autoregressive copula, measured relative to the true model variables
/// only. Inert coordinates get 0.
std::vector<double> groundtruth_importance(const BenchmarkFunction& f, std::size_t p, double rho,
                                           const DoubleMcOptions& options);

}  // namespace first
