#include "first/synthetic.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "first/error.hpp"
#include "first/normal.hpp"
#include "first/parallel.hpp"

namespace first {

namespace {

constexpr double kClip = 1e-12;
constexpr std::size_t kChunk = 4096;

}  // namespace

CopulaSpec::CopulaSpec(Eigen::MatrixXd sigma, Marginal marginal)
    : sigma_(std::move(sigma)), marginal_(marginal) {
  const auto p = sigma_.rows();
  if (p == 0 || sigma_.cols() != p) throw InputError("correlation matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < p; ++i) {
    if (sigma_(i, i) != 1.0) throw InputError("correlation matrix must have a unit diagonal");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (sigma_(i, j) != sigma_(j, i)) throw InputError("correlation matrix must be symmetric");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success) throw InputError("correlation matrix is not positive definite");
  lower_ = llt.matrixL();
  precision_ = llt.solve(Eigen::MatrixXd::Identity(p, p));
}

CopulaSpec CopulaSpec::autoregressive(std::size_t dim, double rho, Marginal marginal) {
  if (dim == 0) throw InputError("copula dimension must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) throw InputError("rho must lie in [0, 1)");
  const auto p = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd sigma(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      sigma(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
    }
  }
  return CopulaSpec(std::move(sigma), marginal);
}

CopulaSpec CopulaSpec::from_correlation(Eigen::MatrixXd correlation, Marginal marginal) {
  return CopulaSpec(std::move(correlation), marginal);
}

CopulaSpec CopulaSpec::restrict_to(std::span<const std::size_t> dims) const {
  const auto k = static_cast<Eigen::Index>(dims.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const auto i = static_cast<Eigen::Index>(dims[static_cast<std::size_t>(a)]);
      const auto j = static_cast<Eigen::Index>(dims[static_cast<std::size_t>(b)]);
      if (i >= sigma_.rows() || j >= sigma_.rows()) throw InputError("dimension out of range");
      sub(a, b) = sigma_(i, j);
    }
  }
  return CopulaSpec(std::move(sub), marginal_);
}

double CopulaSpec::to_marginal(double z) const noexcept {
  return marginal_ == Marginal::uniform01 ? normal_cdf(z) : z;
}

double CopulaSpec::to_latent(double x) const noexcept {
  if (marginal_ == Marginal::standard_normal) return x;
  return normal_quantile(std::clamp(x, kClip, 1.0 - kClip));
}

Eigen::MatrixXd sample_inputs(const CopulaSpec& spec, std::size_t n, std::uint64_t seed) {
  const auto p = static_cast<Eigen::Index>(spec.dim());
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
  std::mt19937_64 rng(mix_seed(seed, 0));
  std::normal_distribution<double> normal;
  Eigen::VectorXd g(p);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index j = 0; j < p; ++j) g(j) = normal(rng);
    const Eigen::VectorXd z = spec.cholesky() * g;
    for (Eigen::Index j = 0; j < p; ++j) x(r, j) = spec.to_marginal(z(j));
  }
  return x;
}

namespace {

// Z_i | Z_{-i} = z is Gaussian with mean -sum_{j != i} Q_ij z_j / Q_ii and
// variance 1 / Q_ii, Q being the precision matrix.
struct LatentConditional {
  double mean = 0.0;
  double sd = 1.0;
};

LatentConditional latent_conditional(const CopulaSpec& spec, const double* z, std::size_t i) {
  const auto& q = spec.precision();
  const auto ii = static_cast<Eigen::Index>(i);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (j != ii) acc += q(ii, j) * z[j];
  }
  return {-acc / q(ii, ii), 1.0 / std::sqrt(q(ii, ii))};
}

}  // namespace

std::vector<double> conditional_sample(const CopulaSpec& spec, std::span<const double> fixed,
                                       std::size_t i, std::size_t count, std::uint64_t seed) {
  if (fixed.size() != spec.dim()) throw InputError("fixed point has the wrong dimension");
  if (i >= spec.dim()) throw InputError("conditioned dimension out of range");
  std::vector<double> z(fixed.size());
  for (std::size_t j = 0; j < fixed.size(); ++j) z[j] = j == i ? 0.0 : spec.to_latent(fixed[j]);
  const auto cond = latent_conditional(spec, z.data(), i);
  std::mt19937_64 rng(mix_seed(seed, 0));
  std::normal_distribution<double> normal;
  std::vector<double> out(count);
  for (auto& v : out) v = spec.to_marginal(cond.mean + cond.sd * normal(rng));
  return out;
}

std::string to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::ishigami:
      return "ishigami";
    case BenchmarkId::heavy_tailed:
      return "heavy_tailed";
    case BenchmarkId::friedman:
      return "friedman";
  }
  return "unknown";
}

std::optional<BenchmarkId> parse_benchmark(std::string_view name) {
  if (name == "ishigami") return BenchmarkId::ishigami;
  if (name == "heavy_tailed" || name == "heavy-tailed") return BenchmarkId::heavy_tailed;
  if (name == "friedman") return BenchmarkId::friedman;
  return std::nullopt;
}

double BenchmarkFunction::operator()(std::span<const double> x) const {
  if (x.size() < min_dim) {
    throw InputError(to_string(id) + " needs at least " + std::to_string(min_dim) +
                     " inputs, got " + std::to_string(x.size()));
  }
  constexpr double pi = std::numbers::pi;
  switch (id) {
    case BenchmarkId::ishigami: {
      const double a = 2.0 * pi * x[0] - pi;
      const double b = 2.0 * pi * x[1] - pi;
      const double c = 2.0 * pi * x[2] - pi;
      const double sb = std::sin(b);
      return std::sin(a) + 7.0 * sb * sb + 0.1 * std::pow(c, 4) * std::sin(a);
    }
    case BenchmarkId::heavy_tailed: {
      // The log argument vanishes only at x1 = x2 = 0; clamp it there.
      const double arg = std::max(x[0] * x[0] + std::pow(x[1], 4),
                                  std::numeric_limits<double>::min());
      return 2.0 * std::log(arg) / (std::cos(x[0]) + std::sin(x[2])) +
             x[1] * x[1] * std::exp(x[2]) / std::sqrt(1.1 - x[5]);
    }
    case BenchmarkId::friedman: {
      const double d = x[7] - 0.5;
      return 10.0 * std::sin(pi * x[0] * x[6]) + 20.0 * d * d + 10.0 * x[8] + 5.0 * x[9] -
             20.0 * x[8] * x[9] - 10.0;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

BenchmarkFunction benchmark_function(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::ishigami:
      return {id, 3, {0, 1, 2}};
    case BenchmarkId::heavy_tailed:
      return {id, 6, {0, 1, 2, 5}};
    case BenchmarkId::friedman:
      return {id, 10, {0, 6, 7, 8, 9}};
  }
  throw InputError("unknown benchmark function");
}

namespace {

std::vector<Column> to_columns(const Eigen::MatrixXd& x) {
  std::vector<Column> cols;
  cols.reserve(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    std::vector<double> v(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index r = 0; r < x.rows(); ++r) v[static_cast<std::size_t>(r)] = x(r, j);
    cols.push_back(Column::continuous("x" + std::to_string(j + 1), std::move(v)));
  }
  return cols;
}

std::vector<double> evaluate_rows(const Eigen::MatrixXd& x, const Model& f) {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) row[static_cast<std::size_t>(j)] = x(r, j);
    out[static_cast<std::size_t>(r)] = f(row);
  }
  return out;
}

}  // namespace

Dataset generate_regression(const CopulaSpec& spec, const Model& f, double noise_sd,
                            std::size_t n, std::uint64_t seed) {
  if (!(noise_sd >= 0.0)) throw InputError("noise_sd must be non-negative");
  const Eigen::MatrixXd x = sample_inputs(spec, n, seed);
  std::vector<double> y = evaluate_rows(x, f);
  if (noise_sd > 0.0) {
    std::mt19937_64 rng(mix_seed(seed, 1));
    std::normal_distribution<double> normal;
    for (double& v : y) v += noise_sd * normal(rng);
  }
  return Dataset(to_columns(x), std::move(y), "y");
}

Dataset generate_binary(const CopulaSpec& spec, const Model& f, std::size_t n,
                        std::uint64_t seed) {
  const Eigen::MatrixXd x = sample_inputs(spec, n, seed);
  std::vector<double> y = evaluate_rows(x, f);
  std::mt19937_64 rng(mix_seed(seed, 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& v : y) v = unit(rng) < normal_cdf(v) ? 1.0 : 0.0;
  return Dataset(to_columns(x), std::move(y), "y");
}

DoubleMcResult double_mc_total_sobol(const CopulaSpec& spec, const Model& f, std::size_t i,
                                     const DoubleMcOptions& options) {
  const std::size_t p = spec.dim();
  if (i >= p) throw InputError("factor index out of range");
  if (options.n_inner < 2) throw InputError("double Monte Carlo needs n_inner >= 2");
  if (options.n_outer < 2) throw InputError("double Monte Carlo needs n_outer >= 2");

  const std::size_t n_outer = options.n_outer;
  const std::size_t chunks = (n_outer + kChunk - 1) / kChunk;
  std::vector<double> inner_var(n_outer);
  std::vector<double> f_outer(n_outer);
  const auto& lower = spec.cholesky();

  // Each chunk of outer draws owns an RNG stream, so the result does not
  // depend on how chunks are spread over workers.
  parallel_for(chunks, resolve_workers(options.workers), [&](std::size_t chunk) {
    std::mt19937_64 rng(mix_seed(options.seed, chunk));
    std::normal_distribution<double> normal;
    Eigen::VectorXd g(static_cast<Eigen::Index>(p));
    std::vector<double> x(p);
    std::vector<double> fy(options.n_inner);
    const std::size_t end = std::min(n_outer, (chunk + 1) * kChunk);
    for (std::size_t m = chunk * kChunk; m < end; ++m) {
      for (auto& v : g) v = normal(rng);
      const Eigen::VectorXd z = lower * g;
      for (std::size_t j = 0; j < p; ++j) x[j] = spec.to_marginal(z(static_cast<Eigen::Index>(j)));
      f_outer[m] = f(x);

      const auto cond = latent_conditional(spec, z.data(), i);
      double mean = 0.0;
      for (std::size_t s = 0; s < options.n_inner; ++s) {
        x[i] = spec.to_marginal(cond.mean + cond.sd * normal(rng));
        fy[s] = f(x);
        mean += fy[s];
      }
      mean /= static_cast<double>(options.n_inner);
      double ss = 0.0;
      for (double v : fy) ss += (v - mean) * (v - mean);
      inner_var[m] = ss / static_cast<double>(options.n_inner - 1);
    }
  });

  DoubleMcResult out;
  out.effect = std::accumulate(inner_var.begin(), inner_var.end(), 0.0) / static_cast<double>(n_outer);
  const double mean = std::accumulate(f_outer.begin(), f_outer.end(), 0.0) / static_cast<double>(n_outer);
  double ss = 0.0;
  for (double v : f_outer) ss += (v - mean) * (v - mean);
  out.variance = ss / static_cast<double>(n_outer - 1);
  out.index = out.variance > 0.0 ? out.effect / out.variance : 0.0;
  return out;
}

std::vector<double> groundtruth_importance(const BenchmarkFunction& f, std::size_t p, double rho,
                                           const DoubleMcOptions& options) {
  if (p < f.min_dim) {
    throw InputError(to_string(f.id) + " needs p >= " + std::to_string(f.min_dim));
  }
  const CopulaSpec full = CopulaSpec::autoregressive(p, rho);
  const CopulaSpec model = full.restrict_to(f.active);
  // Embed the model variables into a p-vector; inert coordinates are unused.
  const Model restricted = [&](std::span<const double> xa) {
    std::vector<double> x(p, 0.5);
    for (std::size_t a = 0; a < f.active.size(); ++a) x[f.active[a]] = xa[a];
    return f(x);
  };
  std::vector<double> truth(p, 0.0);
  for (std::size_t a = 0; a < f.active.size(); ++a) {
    DoubleMcOptions opt = options;
    opt.seed = mix_seed(options.seed, a);
    truth[f.active[a]] = double_mc_total_sobol(model, restricted, a, opt).index;
  }
  return truth;
}

}  // namespace first
