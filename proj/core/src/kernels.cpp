#include "trigkernel/kernels.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace trigkernel {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double sq_distance_scaled(const ConstVectorRef& x, const ConstVectorRef& y,
                          const VectorXd& lengthscales) {
  require(x.size() == y.size(), "se_kernel: x and y have different dimensions");
  require(x.size() == lengthscales.size(),
          "se_kernel: input dimension does not match lengthscales");
  double d2 = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    const double t = (x[d] - y[d]) / lengthscales[d];
    d2 += t * t;
  }
  return d2;
}

}  // namespace

void SEHyper::validate() const {
  require(amplitude_sq > 0.0, "SEHyper: amplitude_sq must be positive");
  require(lengthscales.size() > 0, "SEHyper: lengthscales must be non-empty");
  require((lengthscales.array() > 0.0).all(), "SEHyper: every lengthscale must be positive");
}

void DGPHyper::validate() const {
  inner.validate();
  outer.validate();
  require(bottleneck >= 1, "DGPHyper: bottleneck width must be >= 1");
}

void SupportSet::validate() const {
  require(noise_var >= 0.0, "SupportSet: noise_var must be nonnegative");
  require(outputs.cols() == inputs.rows(),
          "SupportSet: outputs must have one column per support input");
}

void validate_mixture(const std::vector<SMComponent>& comps) {
  require(!comps.empty(), "mixture: needs at least one component");
  const Eigen::Index dim = comps.front().mean.size();
  double total = 0.0;
  for (const auto& c : comps) {
    require(c.weight > 0.0, "mixture: component weights must be positive");
    require(c.mean.size() == dim && c.scale.size() == dim,
            "mixture: component dimensions disagree");
    require((c.scale.array() > 0.0).all(), "mixture: scales must be positive");
    total += c.weight;
  }
  require(std::abs(total - 1.0) <= 1e-12, "mixture: weights must sum to 1");
}

double se_kernel(const ConstVectorRef& x, const ConstVectorRef& y, const SEHyper& h) {
  return h.amplitude_sq * std::exp(-0.5 * sq_distance_scaled(x, y, h.lengthscales));
}

double sm_kernel(const ConstVectorRef& x, const ConstVectorRef& y,
                 const std::vector<SMComponent>& comps, double amplitude_sq) {
  validate_mixture(comps);
  require(x.size() == y.size() && x.size() == comps.front().mean.size(),
          "sm_kernel: dimension mismatch");
  const VectorXd tau = x - y;
  double acc = 0.0;
  for (const auto& c : comps) {
    const double quad = (tau.array().square() * c.scale.array()).sum();
    acc += c.weight * std::cos(c.mean.dot(tau)) * std::exp(-0.5 * quad);
  }
  return amplitude_sq * acc;
}

double dgp_se_kernel(const ConstVectorRef& x, const ConstVectorRef& y, const DGPHyper& h) {
  h.validate();
  const double kse_unit = std::exp(-0.5 * sq_distance_scaled(x, y, h.inner.lengthscales));
  // The outer lengthscale enters through sigma1^2 / l2^2; with anisotropic
  // outer scales each hidden dimension contributes its own factor.
  const double s1 = h.inner.amplitude_sq;
  double value = h.outer.amplitude_sq;
  if (h.outer.lengthscales.size() == 1 || (h.outer.lengthscales.array() ==
                                           h.outer.lengthscales[0]).all()) {
    const double l2sq = h.outer.lengthscales[0] * h.outer.lengthscales[0];
    value *= std::pow(1.0 + 2.0 * (s1 / l2sq) * (1.0 - kse_unit),
                      -0.5 * static_cast<double>(h.bottleneck));
  } else {
    require(h.outer.lengthscales.size() == h.bottleneck,
            "dgp_se_kernel: outer lengthscales must match bottleneck width");
    for (int i = 0; i < h.bottleneck; ++i) {
      const double l2sq = h.outer.lengthscales[i] * h.outer.lengthscales[i];
      value *= std::pow(1.0 + 2.0 * (s1 / l2sq) * (1.0 - kse_unit), -0.5);
    }
  }
  return value;
}

double ntk_dgp_kernel(const ConstVectorRef& x, const ConstVectorRef& y, int bottleneck) {
  require(bottleneck >= 1, "ntk_dgp_kernel: bottleneck must be >= 1");
  const SEHyper unit = SEHyper::unit(static_cast<int>(x.size()));
  const double kse = se_kernel(x, y, unit);
  const double base = 1.0 + 2.0 * (1.0 - kse);
  return std::pow(base, -0.5 * bottleneck) + kse * std::pow(base, -1.5);
}

// ---------------------------------------------------------------------------
// Support-conditioned kernels
// ---------------------------------------------------------------------------

DGPSupportKernel::DGPSupportKernel(SupportSet support, SEHyper inner, SEHyper outer)
    : support_(std::move(support)), inner_(std::move(inner)), outer_(std::move(outer)) {
  support_.validate();
  inner_.validate();
  outer_.validate();
  if (outer_.lengthscales.size() != 1 && outer_.lengthscales.size() != support_.latent_dim())
    throw std::invalid_argument(
        "DGPSupportKernel: outer lengthscales must be scalar or one per hidden dimension");
  const Eigen::Index m = support_.size();
  if (m == 0) return;
  MatrixXd kzz(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      kzz(i, j) = se_kernel(support_.inputs.row(i), support_.inputs.row(j), inner_);
      kzz(j, i) = kzz(i, j);
    }
  kzz.diagonal().array() += support_.noise_var;
  chol_.compute(kzz);
  if (chol_.info() != Eigen::Success) {
    // Noise-free support with duplicate points lands here; nudge the diagonal.
    kzz.diagonal().array() += 1e-12 * kzz.diagonal().mean();
    chol_.compute(kzz);
    if (chol_.info() != Eigen::Success)
      throw NumericalError("DGPSupportKernel: support Gram matrix is not positive definite");
  }
  alpha_ = chol_.solve(support_.outputs.transpose());
}

DGPSupportKernel::Conditional DGPSupportKernel::conditional(const ConstVectorRef& x,
                                                            const ConstVectorRef& y) const {
  const Eigen::Index m = support_.size();
  const Eigen::Index h = support_.latent_dim();
  Conditional out;
  const double kxx = inner_.amplitude_sq;
  const double kyy = inner_.amplitude_sq;
  const double kxy = se_kernel(x, y, inner_);
  if (m == 0) {
    out.mean_x = VectorXd::Zero(h);
    out.mean_y = VectorXd::Zero(h);
    out.delta_sq = kxx + kyy - 2.0 * kxy;
    return out;
  }
  VectorXd kx(m), ky(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    kx[i] = se_kernel(support_.inputs.row(i), x, inner_);
    ky[i] = se_kernel(support_.inputs.row(i), y, inner_);
  }
  out.mean_x = alpha_.transpose() * kx;
  out.mean_y = alpha_.transpose() * ky;
  const VectorXd diff = kx - ky;
  out.delta_sq = (kxx + kyy - 2.0 * kxy) - diff.dot(chol_.solve(diff));
  if (out.delta_sq < 0.0) {
    if (out.delta_sq < -1e-10)
      throw NumericalError("DGPSupportKernel: conditional covariance not PSD (delta^2 = " +
                           std::to_string(out.delta_sq) + ")");
    out.delta_sq = 0.0;
  }
  return out;
}

double DGPSupportKernel::operator()(const ConstVectorRef& x, const ConstVectorRef& y) const {
  const Conditional c = conditional(x, y);
  const Eigen::Index h = support_.latent_dim();
  double value = outer_.amplitude_sq;
  for (Eigen::Index i = 0; i < h; ++i) {
    const double l2sq = outer_.lengthscales[outer_.lengthscales.size() == 1 ? 0 : i];
    const double denom = l2sq * l2sq + c.delta_sq;
    const double dm = c.mean_x[i] - c.mean_y[i];
    value *= std::exp(-0.5 * dm * dm / denom) / std::sqrt(1.0 + c.delta_sq / (l2sq * l2sq));
  }
  return value;
}

double dgp_support_kernel(const ConstVectorRef& x, const ConstVectorRef& y,
                          const SupportSet& support, const SEHyper& inner,
                          const SEHyper& outer) {
  return DGPSupportKernel(support, inner, outer)(x, y);
}

SMDGPKernel::SMDGPKernel(SupportSet support, std::vector<SMComponent> comps, SEHyper inner)
    : conditioner_(std::move(support), std::move(inner),
                   SEHyper::unit(1)),
      comps_(std::move(comps)) {
  if (conditioner_.support().latent_dim() != 1)
    throw std::invalid_argument("SMDGPKernel: requires a one-dimensional hidden layer");
  validate_mixture(comps_);
  for (const auto& c : comps_)
    if (c.mean.size() != 1)
      throw std::invalid_argument("SMDGPKernel: components must be scalar");
}

double SMDGPKernel::operator()(const ConstVectorRef& x, const ConstVectorRef& y) const {
  const auto c = conditioner_.conditional(x, y);
  const double dm = c.mean_x[0] - c.mean_y[0];
  const double d2 = c.delta_sq;
  double acc = 0.0;
  for (const auto& comp : comps_) {
    const double var_a = comp.scale[0];
    const double mu_a = comp.mean[0];
    const double denom = 1.0 + var_a * d2;
    acc += comp.weight / std::sqrt(denom) *
           std::exp(-(var_a * dm * dm + d2 * mu_a * mu_a) / (2.0 * denom)) *
           std::cos(mu_a * dm / denom);
  }
  return acc;
}

double sm_dgp_kernel(const ConstVectorRef& x, const ConstVectorRef& y,
                     const SupportSet& support, const std::vector<SMComponent>& comps,
                     const SEHyper& inner) {
  return SMDGPKernel(support, comps, inner)(x, y);
}

// ---------------------------------------------------------------------------
// KernelSpec plumbing
// ---------------------------------------------------------------------------

namespace {

// Prepared evaluator: support-conditioned kernels factor their support solve
// out of the per-pair loop.
std::function<double(const ConstVectorRef&, const ConstVectorRef&)> prepare(
    const KernelSpec& spec) {
  return std::visit(
      [](const auto& k) -> std::function<double(const ConstVectorRef&, const ConstVectorRef&)> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SEKernelSpec>) {
          return [k](const ConstVectorRef& x, const ConstVectorRef& y) {
            return se_kernel(x, y, k.hyper);
          };
        } else if constexpr (std::is_same_v<T, SMKernelSpec>) {
          return [k](const ConstVectorRef& x, const ConstVectorRef& y) {
            return sm_kernel(x, y, k.comps, k.amplitude_sq);
          };
        } else if constexpr (std::is_same_v<T, DGPSEKernelSpec>) {
          return [k](const ConstVectorRef& x, const ConstVectorRef& y) {
            return dgp_se_kernel(x, y, k.hyper);
          };
        } else if constexpr (std::is_same_v<T, DGPSupportKernelSpec>) {
          auto prepared = std::make_shared<DGPSupportKernel>(k.support, k.inner, k.outer);
          return [prepared](const ConstVectorRef& x, const ConstVectorRef& y) {
            return (*prepared)(x, y);
          };
        } else if constexpr (std::is_same_v<T, SMDGPKernelSpec>) {
          auto prepared = std::make_shared<SMDGPKernel>(k.support, k.comps, k.inner);
          return [prepared](const ConstVectorRef& x, const ConstVectorRef& y) {
            return (*prepared)(x, y);
          };
        } else {
          static_assert(std::is_same_v<T, NTKDGPKernelSpec>);
          return [k](const ConstVectorRef& x, const ConstVectorRef& y) {
            return ntk_dgp_kernel(x, y, k.bottleneck);
          };
        }
      },
      spec);
}

}  // namespace

double eval_kernel(const KernelSpec& spec, const ConstVectorRef& x, const ConstVectorRef& y) {
  return prepare(spec)(x, y);
}

const char* kernel_name(const KernelSpec& spec) {
  struct Namer {
    const char* operator()(const SEKernelSpec&) const { return "se"; }
    const char* operator()(const SMKernelSpec&) const { return "sm"; }
    const char* operator()(const DGPSEKernelSpec&) const { return "dgp_se"; }
    const char* operator()(const DGPSupportKernelSpec&) const { return "dgp_support"; }
    const char* operator()(const SMDGPKernelSpec&) const { return "sm_dgp"; }
    const char* operator()(const NTKDGPKernelSpec&) const { return "ntk_dgp"; }
  };
  return std::visit(Namer{}, spec);
}

MatrixXd kernel_matrix(const KernelSpec& spec, const ConstMatrixRef& X) {
  const auto k = prepare(spec);
  const Eigen::Index n = X.rows();
  MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      gram(i, j) = k(X.row(i), X.row(j));
      gram(j, i) = gram(i, j);
    }
  return gram;
}

MatrixXd kernel_matrix(const KernelSpec& spec, const ConstMatrixRef& X, const ConstMatrixRef& X2) {
  const auto k = prepare(spec);
  MatrixXd cross(X.rows(), X2.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X2.rows(); ++j) cross(i, j) = k(X.row(i), X2.row(j));
  return cross;
}

}  // namespace trigkernel
