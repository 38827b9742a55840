// Copyright 2026 The gpilc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gpilc/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "gpilc/errors.hpp"
#include "gpilc/random.hpp"

namespace gpilc {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
// Bounds on log-hyperparameters during the ascent, to keep exp() finite.
constexpr double kLogParamBound = 50.0;

struct CholeskyResult {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

// Cholesky factorization with multiplicative diagonal-jitter escalation.
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& a) {
  CholeskyResult result;
  result.llt.compute(a);
  if (result.llt.info() == Eigen::Success) {
    return result;
  }
  for (double jitter = 1e-12; jitter < 1.5e-6; jitter *= 10.0) {
    Eigen::MatrixXd damped = a;
    damped.diagonal().array() += jitter;
    result.llt.compute(damped);
    if (result.llt.info() == Eigen::Success) {
      result.jitter = jitter;
      return result;
    }
  }
  throw ConditioningError(
      "cholesky_with_jitter: matrix not positive definite after diagonal "
      "jitter levels 1e-12, 1e-11, ..., 1e-6");
}

// Per-dimension squared-difference matrices, precomputed once per regressor
// set and shared by every evidence evaluation on it.
struct EvidenceWorkspace {
  std::vector<Eigen::MatrixXd> distance_sq;  // one T x T matrix per dimension
  Eigen::VectorXd observations;
  int count = 0;
  int dim = 0;

  EvidenceWorkspace(const Eigen::MatrixXd& regressors,
                    Eigen::VectorXd observations_in)
      : observations(std::move(observations_in)),
        count(static_cast<int>(regressors.cols())),
        dim(static_cast<int>(regressors.rows())) {
    distance_sq.reserve(dim);
    for (int i = 0; i < dim; ++i) {
      Eigen::MatrixXd d(count, count);
      for (int s = 0; s < count; ++s) {
        d(s, s) = 0.0;
        for (int t = 0; t < s; ++t) {
          const double diff = regressors(i, s) - regressors(i, t);
          d(s, t) = diff * diff;
          d(t, s) = d(s, t);
        }
      }
      distance_sq.push_back(std::move(d));
    }
  }
};

// Log marginal likelihood (and optionally its log-space gradient) for the
// workspace's data at length scales l and noise variance s2.
EvidenceResult evaluate_evidence(const EvidenceWorkspace& w,
                                 const Eigen::VectorXd& l, double s2,
                                 bool want_gradient) {
  const int t = w.count;
  const int v = w.dim;

  Eigen::MatrixXd scaled = Eigen::MatrixXd::Zero(t, t);
  for (int i = 0; i < v; ++i) {
    scaled.noalias() += (1.0 / (l[i] * l[i])) * w.distance_sq[i];
  }
  Eigen::MatrixXd kernel = (-0.5 * scaled.array()).exp().matrix();
  Eigen::MatrixXd a = kernel;
  a.diagonal().array() += s2;

  CholeskyResult chol = cholesky_with_jitter(a);
  const Eigen::VectorXd alpha = chol.llt.solve(w.observations);

  EvidenceResult result;
  result.value = -0.5 * w.observations.dot(alpha) -
                 chol.llt.matrixLLT().diagonal().array().log().sum() -
                 0.5 * t * std::log(kTwoPi);
  if (!want_gradient) {
    return result;
  }

  Eigen::MatrixXd factor_inv = Eigen::MatrixXd::Identity(t, t);
  chol.llt.matrixL().solveInPlace(factor_inv);
  Eigen::MatrixXd a_inv = Eigen::MatrixXd::Zero(t, t);
  a_inv.selfadjointView<Eigen::Lower>().rankUpdate(factor_inv.transpose());
  a_inv = a_inv.selfadjointView<Eigen::Lower>();

  const double trace_a_inv = a_inv.trace();
  // 1/2 tr((alpha alpha^T - A^-1) dA/dtheta) for each log-parameter.
  Eigen::MatrixXd outer = (alpha * alpha.transpose() - a_inv).cwiseProduct(
      kernel);
  result.gradient.resize(v + 1);
  for (int i = 0; i < v; ++i) {
    result.gradient[i] =
        0.5 / (l[i] * l[i]) * outer.cwiseProduct(w.distance_sq[i]).sum();
  }
  result.gradient[v] = 0.5 * s2 * (alpha.squaredNorm() - trace_a_inv);
  return result;
}

struct AscentContext {
  const EvidenceWorkspace* workspace = nullptr;
  int dim = 0;
  // Cache so that separate f/df calls at the same point reuse one
  // evaluation (the minimizer mostly calls fdf, f during line search).
  Eigen::VectorXd cached_theta;
  EvidenceResult cached;
  bool cache_valid = false;
};

void theta_to_params(const gsl_vector* x, int v, Eigen::VectorXd* l,
                     double* s2) {
  l->resize(v);
  for (int i = 0; i < v; ++i) {
    const double th = std::clamp(gsl_vector_get(x, i), -kLogParamBound,
                                 kLogParamBound);
    (*l)[i] = std::exp(th);
  }
  const double ts = std::clamp(gsl_vector_get(x, v), -kLogParamBound,
                               kLogParamBound);
  *s2 = std::exp(ts);
}

double ascent_f(const gsl_vector* x, void* params) {
  auto* ctx = static_cast<AscentContext*>(params);
  Eigen::VectorXd l;
  double s2 = 0.0;
  theta_to_params(x, ctx->dim, &l, &s2);
  try {
    return -evaluate_evidence(*ctx->workspace, l, s2, false).value;
  } catch (const NumericError&) {
    return GSL_NAN;
  }
}

void ascent_fdf(const gsl_vector* x, void* params, double* f, gsl_vector* g) {
  auto* ctx = static_cast<AscentContext*>(params);
  const int v = ctx->dim;
  Eigen::VectorXd l;
  double s2 = 0.0;
  theta_to_params(x, v, &l, &s2);
  try {
    EvidenceResult r = evaluate_evidence(*ctx->workspace, l, s2, true);
    *f = -r.value;
    for (int i = 0; i <= v; ++i) {
      gsl_vector_set(g, i, -r.gradient[i]);
    }
    ctx->cached_theta.resize(v + 1);
    for (int i = 0; i <= v; ++i) {
      ctx->cached_theta[i] = gsl_vector_get(x, i);
    }
    ctx->cached = std::move(r);
    ctx->cache_valid = true;
  } catch (const NumericError&) {
    *f = GSL_NAN;
    gsl_vector_set_all(g, 0.0);
    ctx->cache_valid = false;
  }
}

void ascent_df(const gsl_vector* x, void* params, gsl_vector* g) {
  auto* ctx = static_cast<AscentContext*>(params);
  const int v = ctx->dim;
  if (ctx->cache_valid) {
    bool same = true;
    for (int i = 0; i <= v && same; ++i) {
      same = gsl_vector_get(x, i) == ctx->cached_theta[i];
    }
    if (same) {
      for (int i = 0; i <= v; ++i) {
        gsl_vector_set(g, i, -ctx->cached.gradient[i]);
      }
      return;
    }
  }
  double f = 0.0;
  ascent_fdf(x, params, &f, g);
}

void disable_gsl_abort() {
  static std::once_flag flag;
  std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

// Quasi-Newton ascent of the evidence from one starting point; returns the
// best point visited. theta holds [log l_1..log l_V, log s2].
Eigen::VectorXd ascend_evidence(const EvidenceWorkspace& workspace,
                                const Eigen::VectorXd& theta0,
                                const OptimizerOptions& options,
                                double* final_value) {
  const int n = static_cast<int>(theta0.size());
  AscentContext ctx;
  ctx.workspace = &workspace;
  ctx.dim = workspace.dim;

  gsl_multimin_function_fdf target;
  target.n = n;
  target.f = &ascent_f;
  target.df = &ascent_df;
  target.fdf = &ascent_fdf;
  target.params = &ctx;

  gsl_vector* x = gsl_vector_alloc(n);
  for (int i = 0; i < n; ++i) {
    gsl_vector_set(x, i, theta0[i]);
  }
  gsl_multimin_fdfminimizer* minimizer = gsl_multimin_fdfminimizer_alloc(
      gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(minimizer, &target, x, options.initial_step,
                                options.line_search_tolerance);

  Eigen::VectorXd best_theta = theta0;
  double best_f = minimizer->f;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const int status = gsl_multimin_fdfminimizer_iterate(minimizer);
    if (status != GSL_SUCCESS) {
      break;  // no further progress possible from this start
    }
    if (std::isfinite(minimizer->f) && minimizer->f < best_f) {
      best_f = minimizer->f;
      for (int i = 0; i < n; ++i) {
        best_theta[i] = gsl_vector_get(minimizer->x, i);
      }
    }
    if (gsl_multimin_test_gradient(minimizer->gradient,
                                   options.gradient_tolerance) !=
        GSL_CONTINUE) {
      break;
    }
  }
  gsl_multimin_fdfminimizer_free(minimizer);
  gsl_vector_free(x);

  *final_value = -best_f;
  return best_theta;
}

// Population (biased) standard deviation.
double population_std(const Eigen::VectorXd& z) {
  if (z.size() == 0) {
    return 0.0;
  }
  const double mean = z.mean();
  return std::sqrt((z.array() - mean).square().mean());
}

}  // namespace

void KernelHyperparameters::validate() const {
  if (length_scales.size() == 0) {
    throw StructuralError("KernelHyperparameters: empty length-scale vector");
  }
  for (Eigen::Index i = 0; i < length_scales.size(); ++i) {
    if (!(length_scales[i] > 0.0) || !std::isfinite(length_scales[i])) {
      throw StructuralError(
          "KernelHyperparameters: length scale " + std::to_string(i) +
          " must be strictly positive and finite");
    }
  }
  if (noise_variance < 0.0 || !std::isfinite(noise_variance)) {
    throw StructuralError(
        "KernelHyperparameters: noise variance must be finite and >= 0");
  }
}

void TrainingSet::validate() const {
  if (regressors.cols() != observations.size()) {
    throw StructuralError(
        "TrainingSet: " + std::to_string(regressors.cols()) +
        " regressors vs " + std::to_string(observations.size()) +
        " observations");
  }
  if (!regressors.allFinite() || !observations.allFinite()) {
    throw NumericError("TrainingSet: non-finite entries");
  }
}

double se_kernel(const Eigen::VectorXd& v, const Eigen::VectorXd& v_prime,
                 const KernelHyperparameters& hyper) {
  if (v.size() != v_prime.size() || v.size() != hyper.length_scales.size()) {
    throw StructuralError("se_kernel: dimension mismatch");
  }
  const double d2 =
      ((v - v_prime).cwiseQuotient(hyper.length_scales)).squaredNorm();
  return std::exp(-0.5 * d2);
}

Eigen::MatrixXd se_kernel_matrix(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const Eigen::VectorXd& length_scales) {
  if (a.rows() != b.rows() || a.rows() != length_scales.size()) {
    throw StructuralError("se_kernel_matrix: dimension mismatch");
  }
  const Eigen::VectorXd inv_l = length_scales.cwiseInverse();
  const Eigen::MatrixXd as = inv_l.asDiagonal() * a;
  const Eigen::MatrixXd bs = inv_l.asDiagonal() * b;
  Eigen::MatrixXd k(a.cols(), b.cols());
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    const Eigen::RowVectorXd d2 =
        (as.colwise() - bs.col(j)).colwise().squaredNorm();
    k.col(j) = (-0.5 * d2.transpose().array()).exp().matrix();
  }
  return k;
}

EvidenceResult log_marginal_likelihood(const KernelHyperparameters& hyper,
                                       const TrainingSet& data) {
  hyper.validate();
  data.validate();
  if (data.count() < 1) {
    throw StructuralError("log_marginal_likelihood: empty training set");
  }
  if (data.input_dim() != hyper.length_scales.size()) {
    throw StructuralError(
        "log_marginal_likelihood: regressor dimension does not match the "
        "length-scale count");
  }
  EvidenceWorkspace workspace(data.regressors, data.observations);
  return evaluate_evidence(workspace, hyper.length_scales,
                           hyper.noise_variance, true);
}

HyperparameterSearch optimize_hyperparameters(const TrainingSet& data,
                                              int num_restarts,
                                              std::uint64_t seed,
                                              const OptimizerOptions& options) {
  data.validate();
  if (data.count() < 2) {
    throw StructuralError(
        "optimize_hyperparameters: needs at least two data points");
  }
  if (num_restarts < 1) {
    throw StructuralError("optimize_hyperparameters: num_restarts must be >= 1");
  }
  disable_gsl_abort();

  const int v = data.input_dim();
  const int t = data.count();

  // The search runs on standardized observations so that evidence values are
  // comparably scaled across state variables; the winning noise variance is
  // mapped back to the observation scale below.
  const double obs_mean = data.observations.mean();
  double obs_std = population_std(data.observations);
  if (!(obs_std > 0.0)) {
    obs_std = 1.0;
  }
  Eigen::VectorXd standardized =
      ((data.observations.array() - obs_mean) / obs_std).matrix();
  EvidenceWorkspace workspace(data.regressors, std::move(standardized));

  Eigen::VectorXd dim_scale(v);
  for (int i = 0; i < v; ++i) {
    Eigen::VectorXd row = data.regressors.row(i).transpose();
    const double s = population_std(row);
    dim_scale[i] = s > 0.0 ? s : 1.0;
  }

  HyperparameterSearch search;
  search.initial_log_evidence.reserve(num_restarts);
  search.final_log_evidence.reserve(num_restarts);

  Eigen::VectorXd best_theta;
  double best_value = -std::numeric_limits<double>::infinity();
  int best_restart = -1;
  bool best_is_final = false;

  for (int restart = 0; restart < num_restarts; ++restart) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(restart)));
    std::uniform_real_distribution<double> log10_offset(-1.0, 1.0);
    Eigen::VectorXd theta0(v + 1);
    for (int i = 0; i < v; ++i) {
      theta0[i] =
          std::log(dim_scale[i]) + log10_offset(rng) * std::log(10.0);
    }
    // Standardized observations have unit variance, so this starts the noise
    // at 1e-4 times the observation variance.
    theta0[v] = std::log(1e-4);

    const Eigen::VectorXd l0 = theta0.head(v).array().exp().matrix();
    double initial_value =
        evaluate_evidence(workspace, l0, std::exp(theta0[v]), false).value;
    search.initial_log_evidence.push_back(initial_value);
    if (initial_value > best_value) {
      best_value = initial_value;
      best_theta = theta0;
      best_restart = restart;
      best_is_final = false;
    }

    double final_value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd theta =
        ascend_evidence(workspace, theta0, options, &final_value);
    search.final_log_evidence.push_back(final_value);
    if (final_value > best_value) {
      best_value = final_value;
      best_theta = theta;
      best_restart = restart;
      best_is_final = true;
    }
  }

  search.best_restart = best_restart;
  search.improved_over_init = best_is_final;
  search.log_evidence = best_value;
  search.hyper.length_scales = best_theta.head(v).array().exp().matrix();
  const double noise_standardized = std::exp(best_theta[v]);
  search.hyper.noise_variance =
      std::max(noise_standardized * obs_std * obs_std, options.noise_floor);
  search.hyper.validate();
  return search;
}

GaussianProcess GaussianProcess::fit(TrainingSet data,
                                     KernelHyperparameters hyper) {
  data.validate();
  hyper.validate();
  if (data.count() < 1) {
    throw StructuralError("GaussianProcess::fit: empty training set");
  }
  if (data.input_dim() != hyper.length_scales.size()) {
    throw StructuralError(
        "GaussianProcess::fit: regressor dimension does not match the "
        "length-scale count");
  }

  GaussianProcess gp;
  if (data.count() >= 2) {
    gp.observation_mean_ = data.observations.mean();
    const double s = population_std(data.observations);
    gp.observation_scale_ = s > 0.0 ? s : 1.0;
  } else {
    // A single observation carries no spread to standardize against; fit
    // it as-is so the posterior mean is z k(v, v1) / (1 + noise) and far
    // from the data the prediction reverts to zero.
    gp.observation_mean_ = 0.0;
    gp.observation_scale_ = 1.0;
  }

  const Eigen::VectorXd standardized =
      ((data.observations.array() - gp.observation_mean_) /
       gp.observation_scale_)
          .matrix();
  const double noise_standardized =
      hyper.noise_variance / (gp.observation_scale_ * gp.observation_scale_);

  Eigen::MatrixXd a = se_kernel_matrix(data.regressors, data.regressors,
                                       hyper.length_scales);
  a.diagonal().array() += noise_standardized;
  CholeskyResult chol = cholesky_with_jitter(a);

  gp.weights_ = chol.llt.solve(standardized);
  gp.factor_ = chol.llt.matrixL();
  gp.applied_jitter_ = chol.jitter;
  gp.data_ = std::move(data);
  gp.hyper_ = std::move(hyper);
  return gp;
}

double GaussianProcess::predict_mean(const Eigen::VectorXd& v) const {
  if (v.size() != data_.input_dim()) {
    throw StructuralError("predict_mean: regressor dimension mismatch");
  }
  const Eigen::VectorXd k_star =
      se_kernel_matrix(data_.regressors, v, hyper_.length_scales).col(0);
  return observation_mean_ + observation_scale_ * k_star.dot(weights_);
}

Eigen::VectorXd GaussianProcess::predict_mean_gradient(
    const Eigen::VectorXd& v) const {
  if (v.size() != data_.input_dim()) {
    throw StructuralError("predict_mean_gradient: regressor dimension "
                          "mismatch");
  }
  const Eigen::VectorXd k_star =
      se_kernel_matrix(data_.regressors, v, hyper_.length_scales).col(0);
  // d mu / dv = scale * sum_t w_t k(v, v_t) (v_t - v) / l^2 elementwise.
  const Eigen::MatrixXd diff = data_.regressors.colwise() - v;
  const Eigen::VectorXd weighted = k_star.cwiseProduct(weights_);
  return observation_scale_ *
         (diff * weighted).cwiseQuotient(
             hyper_.length_scales.cwiseAbs2());
}

}  // namespace gpilc
