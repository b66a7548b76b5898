#pragma once

#include <Eigen/Cholesky>
#include <unsupported/Eigen/SpecialFunctions>

#include <cmath>

#include "splatvi/common.hpp"
#include "splatvi/lie.hpp"

// Normal-Inverse-Wishart posteriors over 3-dimensional Gaussians, their
// conjugate updates from weighted sufficient statistics, and the variational
// expectations they contribute to soft assignments and the evidence bound.

namespace splatvi {

inline double digamma(double x) { return Eigen::numext::digamma(x); }

inline double multivariate_digamma(double a, int d) {
  double s = 0.0;
  for (int i = 1; i <= d; ++i) s += digamma(a + 0.5 * (1 - i));
  return s;
}

inline double multivariate_lgamma(double a, int d) {
  double s = 0.25 * d * (d - 1) * std::log(EIGEN_PI);
  for (int i = 1; i <= d; ++i) s += std::lgamma(a + 0.5 * (1 - i));
  return s;
}

template <typename S>
struct NiwPosteriorT {
  Vec3T<S> mean = Vec3T<S>::Zero();   // m, posterior mean location
  S kappa = S(1);                     // mean pseudo-count, > 0
  Mat3T<S> scale = Mat3T<S>::Identity();  // Psi, symmetric positive definite
  S dof = S(5);                       // nu, > d - 1

  static constexpr int kDim = 3;

  // E[Sigma] under the inverse-Wishart factor, defined for dof > d + 1.
  Mat3T<S> expected_covariance() const { return scale / (dof - S(kDim + 1)); }
};

using NiwPosterior = NiwPosteriorT<double>;

template <typename S>
struct SufficientStatsT {
  S n = S(0);                          // effective count, sum of weights
  Vec3T<S> sum1 = Vec3T<S>::Zero();    // sum of weighted observations
  Mat3T<S> sum2 = Mat3T<S>::Zero();    // sum of weighted outer products

  void add(S w, const Vec3T<S>& x) {
    n += w;
    sum1 += w * x;
    sum2 += w * (x * x.transpose());
  }
  SufficientStatsT& operator+=(const SufficientStatsT& o) {
    n += o.n;
    sum1 += o.sum1;
    sum2 += o.sum2;
    return *this;
  }
};

using SufficientStats = SufficientStatsT<double>;

// Effective counts below this are treated as zero evidence.
inline constexpr double kMinEffectiveCount = 1e-12;

/// Conjugate NIW update from weighted sufficient statistics. Throws
/// NonPsdScale if the updated scale matrix loses positive definiteness.
template <typename S>
inline NiwPosteriorT<S> niw_update(const NiwPosteriorT<S>& prior,
                                   const SufficientStatsT<S>& stats) {
  if (stats.n < S(kMinEffectiveCount)) return prior;
  NiwPosteriorT<S> post;
  const S n = stats.n;
  post.kappa = prior.kappa + n;
  post.dof = prior.dof + n;
  post.mean = (prior.kappa * prior.mean + stats.sum1) / post.kappa;
  const Vec3T<S> xbar = stats.sum1 / n;
  const Vec3T<S> dm = xbar - prior.mean;
  post.scale = prior.scale + stats.sum2 - stats.sum1 * xbar.transpose() +
               (prior.kappa * n / post.kappa) * (dm * dm.transpose());
  post.scale = symmetrized(post.scale);
  Eigen::LLT<Mat3T<S>> llt(post.scale);
  if (llt.info() != Eigen::Success)
    throw NonPsdScale("niw_update: scale matrix lost positive definiteness");
  return post;
}

/// Exact inverse of niw_update: removes a previously applied contribution.
template <typename S>
inline NiwPosteriorT<S> niw_downdate(const NiwPosteriorT<S>& post,
                                     const SufficientStatsT<S>& stats) {
  if (stats.n < S(kMinEffectiveCount)) return post;
  NiwPosteriorT<S> prior;
  const S n = stats.n;
  prior.kappa = post.kappa - n;
  prior.dof = post.dof - n;
  prior.mean = (post.kappa * post.mean - stats.sum1) / prior.kappa;
  const Vec3T<S> xbar = stats.sum1 / n;
  const Vec3T<S> dm = xbar - prior.mean;
  prior.scale = post.scale - stats.sum2 + stats.sum1 * xbar.transpose() -
                (prior.kappa * n / post.kappa) * (dm * dm.transpose());
  prior.scale = symmetrized(prior.scale);
  Eigen::LLT<Mat3T<S>> llt(prior.scale);
  if (llt.info() != Eigen::Success)
    throw NonPsdScale("niw_downdate: scale matrix lost positive definiteness");
  return prior;
}

/// E[log |Sigma^{-1}|] under the inverse-Wishart factor.
inline double expected_logdet_precision(const NiwPosterior& q) {
  Eigen::LLT<Mat3> llt(q.scale);
  const double logdet_psi =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return multivariate_digamma(0.5 * q.dof, 3) + 3.0 * std::log(2.0) - logdet_psi;
}

/// E_q[log N(w | mu, Sigma)] under the NIW posterior q(mu, Sigma).
inline double expected_log_likelihood(const NiwPosterior& q, const Vec3& w) {
  Eigen::LLT<Mat3> llt(q.scale);
  const Vec3 d = w - q.mean;
  const double maha = d.dot(llt.solve(d));
  return 0.5 * expected_logdet_precision(q) - 1.5 * std::log(2.0 * EIGEN_PI) -
         0.5 * (q.dof * maha + 3.0 / q.kappa);
}

/// KL(q || p) between two NIW distributions over (mu, Sigma), d = 3.
inline double niw_kl(const NiwPosterior& q, const NiwPosterior& p) {
  constexpr int d = 3;
  Eigen::LLT<Mat3> llt_q(q.scale);
  const double logdet_q =
      2.0 * llt_q.matrixL().toDenseMatrix().diagonal().array().log().sum();
  Eigen::LLT<Mat3> llt_p(p.scale);
  const double logdet_p =
      2.0 * llt_p.matrixL().toDenseMatrix().diagonal().array().log().sum();

  // Normal factor, conditional on Sigma; uses E_q[Sigma^{-1}] = nu Psi^{-1}.
  const Vec3 dm = q.mean - p.mean;
  const double maha = q.dof * dm.dot(llt_q.solve(dm));
  const double kl_normal = 0.5 * (p.kappa * maha + d * p.kappa / q.kappa - d +
                                  d * std::log(q.kappa / p.kappa));

  // Inverse-Wishart factor via the Wishart of the precision.
  const double tr = llt_q.solve(p.scale).trace();
  const double kl_iw = -0.5 * p.dof * (logdet_p - logdet_q) +
                       0.5 * q.dof * (tr - d) +
                       multivariate_lgamma(0.5 * p.dof, d) -
                       multivariate_lgamma(0.5 * q.dof, d) +
                       0.5 * (q.dof - p.dof) * multivariate_digamma(0.5 * q.dof, d);
  return kl_normal + kl_iw;
}

/// KL(Dir(a) || Dir(b)) for pseudo-count vectors of equal length.
inline double dirichlet_kl(const VecX& a, const VecX& b) {
  const double a0 = a.sum(), b0 = b.sum();
  double kl = std::lgamma(a0) - std::lgamma(b0);
  for (int i = 0; i < a.size(); ++i) {
    kl += std::lgamma(b[i]) - std::lgamma(a[i]) +
          (a[i] - b[i]) * (digamma(a[i]) - digamma(a0));
  }
  return kl;
}

}  // namespace splatvi
