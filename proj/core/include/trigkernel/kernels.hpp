#ifndef TRIGKERNEL_KERNELS_HPP
#define TRIGKERNEL_KERNELS_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <variant>
#include <vector>

#include "trigkernel/errors.hpp"

namespace trigkernel {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using ConstVectorRef = Eigen::Ref<const Eigen::VectorXd>;
using ConstMatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

// ---------------------------------------------------------------------------
// Hyperparameter bundles
// ---------------------------------------------------------------------------

// Squared exponential kernel k(x,y) = s2 * exp(-1/2 sum_d (x_d-y_d)^2 / l_d^2).
struct SEHyper {
  double amplitude_sq = 1.0;
  VectorXd lengthscales;  // one per input dimension

  static SEHyper unit(int dim) { return {1.0, VectorXd::Ones(dim)}; }
  void validate() const;
};

// One component of a spectral mixture: weight pi_a, spectral mean mu_a, and
// the diagonal of the spectral covariance Lambda_a.
struct SMComponent {
  double weight = 1.0;
  VectorXd mean;
  VectorXd scale;  // diagonal of Lambda_a
};

// Throws std::invalid_argument unless weights are positive, dimensions agree,
// and the weights sum to 1 within 1e-12.
void validate_mixture(const std::vector<SMComponent>& comps);

// Two-layer effective kernel hyperparameters: inner SE (sigma1, l1), outer SE
// (sigma2, l2), and the bottleneck width H of the hidden layer.
struct DGPHyper {
  SEHyper inner;
  SEHyper outer;  // lengthscales live on the H-dimensional hidden space
  int bottleneck = 1;

  static DGPHyper unit(int dim, int bottleneck_width) {
    return {SEHyper::unit(dim), SEHyper::unit(bottleneck_width), bottleneck_width};
  }
  void validate() const;
};

// Hidden-function support (hyperdata): the latent GP is conditioned to pass
// through outputs U at inputs Z, with observation noise noise_var.
struct SupportSet {
  MatrixXd inputs;   // M x D, one support point per row
  MatrixXd outputs;  // H x M, one row per bottleneck dimension
  double noise_var = 0.0;

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index latent_dim() const { return outputs.rows(); }
  void validate() const;
};

// ---------------------------------------------------------------------------
// Closed-form kernels
// ---------------------------------------------------------------------------

double se_kernel(const ConstVectorRef& x, const ConstVectorRef& y, const SEHyper& h);

double sm_kernel(const ConstVectorRef& x, const ConstVectorRef& y,
                 const std::vector<SMComponent>& comps, double amplitude_sq);

// sigma2^2 * {1 + 2 (sigma1^2/l2^2) [1 - k_se(x,y; l1, amp 1)]}^(-H/2).
// Reduces to {1 + 2[1 - k_se]}^(-H/2) at unit hyperparameters.
double dgp_se_kernel(const ConstVectorRef& x, const ConstVectorRef& y, const DGPHyper& h);

// k_dgp + k_se * [1 + 2(1 - k_se)]^(-3/2) at unit hyperparameters; the second
// factor equals k_dgp^3 when H = 1.
double ntk_dgp_kernel(const ConstVectorRef& x, const ConstVectorRef& y, int bottleneck);

// Covariance of the two-layer model whose hidden function is conditioned on
// the support set.  Precomputes the support Cholesky once; operator() costs
// O(M^2) per pair.  The inner SE kernel is shared across all H hidden
// dimensions, as is the conditional variance delta^2.
class DGPSupportKernel {
 public:
  DGPSupportKernel(SupportSet support, SEHyper inner, SEHyper outer);

  double operator()(const ConstVectorRef& x, const ConstVectorRef& y) const;

  const SupportSet& support() const { return support_; }
  const SEHyper& inner() const { return inner_; }
  const SEHyper& outer() const { return outer_; }

  // Conditional moments of one hidden dimension pair (used by the mixed-
  // spectrum kernel and by tests): means per hidden dimension at x and y,
  // plus the shared delta^2 = S*(x,x) + S*(y,y) - 2 S*(x,y).
  struct Conditional {
    VectorXd mean_x;  // H entries
    VectorXd mean_y;
    double delta_sq = 0.0;
  };
  Conditional conditional(const ConstVectorRef& x, const ConstVectorRef& y) const;

 private:
  SupportSet support_;
  SEHyper inner_;
  SEHyper outer_;
  Eigen::LLT<MatrixXd> chol_;  // of K_ZZ + noise I (empty when M = 0)
  MatrixXd alpha_;             // (K_ZZ + noise I)^{-1} U^T, M x H
};

double dgp_support_kernel(const ConstVectorRef& x, const ConstVectorRef& y,
                          const SupportSet& support, const SEHyper& inner,
                          const SEHyper& outer);

// Mixed-spectrum deep kernel: scalar hidden dimension (H = 1) conditioned on
// the support, outer features drawn from a scalar Gaussian mixture.
class SMDGPKernel {
 public:
  SMDGPKernel(SupportSet support, std::vector<SMComponent> comps, SEHyper inner);

  double operator()(const ConstVectorRef& x, const ConstVectorRef& y) const;

  const std::vector<SMComponent>& components() const { return comps_; }
  const DGPSupportKernel& conditioner() const { return conditioner_; }

 private:
  DGPSupportKernel conditioner_;  // outer part unused; supplies conditional moments
  std::vector<SMComponent> comps_;
};

double sm_dgp_kernel(const ConstVectorRef& x, const ConstVectorRef& y,
                     const SupportSet& support, const std::vector<SMComponent>& comps,
                     const SEHyper& inner);

// ---------------------------------------------------------------------------
// KernelSpec: tagged union over the closed forms, used by GP regression and
// the CLI.
// ---------------------------------------------------------------------------

struct SEKernelSpec {
  SEHyper hyper;
};
struct SMKernelSpec {
  std::vector<SMComponent> comps;
  double amplitude_sq = 1.0;
};
struct DGPSEKernelSpec {
  DGPHyper hyper;
};
struct DGPSupportKernelSpec {
  SupportSet support;
  SEHyper inner;
  SEHyper outer;
};
struct SMDGPKernelSpec {
  SupportSet support;
  std::vector<SMComponent> comps;
  SEHyper inner;
};
struct NTKDGPKernelSpec {
  int bottleneck = 1;
};

using KernelSpec = std::variant<SEKernelSpec, SMKernelSpec, DGPSEKernelSpec,
                                DGPSupportKernelSpec, SMDGPKernelSpec, NTKDGPKernelSpec>;

// Single-pair evaluation.  Support-conditioned kernels pay their setup cost on
// every call here; use kernel_matrix or a prepared kernel object in loops.
double eval_kernel(const KernelSpec& spec, const ConstVectorRef& x, const ConstVectorRef& y);

const char* kernel_name(const KernelSpec& spec);

// Gram matrix on the rows of X (symmetric), or the cross-covariance between
// rows of X and rows of X2.
MatrixXd kernel_matrix(const KernelSpec& spec, const ConstMatrixRef& X);
MatrixXd kernel_matrix(const KernelSpec& spec, const ConstMatrixRef& X, const ConstMatrixRef& X2);

}  // namespace trigkernel

#endif  // TRIGKERNEL_KERNELS_HPP
