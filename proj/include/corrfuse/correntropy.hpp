// Multi-kernel correntropy loss, its induced heavy-tailed density, and the
// log-likelihood machinery used to compare it against least squares.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace corrfuse {

/// Per-channel kernel bandwidths, all strictly positive.
struct KernelBandwidths {
  std::vector<double> sigma;

  explicit KernelBandwidths(std::vector<double> s);
  std::size_t size() const { return sigma.size(); }
};

/// Gaussian kernel exp(-e^2 / (2 sigma^2)), in (0, 1].
double gaussian_kernel(double e, double sigma);

/// Correntropy loss for one residual vector: sum_i sigma_i^2 (1 - G_i(e_i)).
/// Computed through expm1 so the large-bandwidth limit stays accurate.
double mkcl_loss(std::span<const double> e, const KernelBandwidths& bw);

/// Single-channel loss term sigma^2 (1 - G_sigma(e)).
double mkcl_loss_term(double e, double sigma);

/// Least-squares loss 0.5 * sum e_i^2 (the sigma -> inf limit of mkcl_loss).
double ls_loss(std::span<const double> e);

/// Loss derivative e * exp(-e^2 / (2 sigma^2)): redescending, peaks at e = sigma.
double mkcl_influence(double e, double sigma);

/// Density c * exp(-sigma^2 (1 - exp(-e^2 / (2 sigma^2)))) on [-B, B].
/// Heavy-tailed for small sigma, truncated-normal-like as sigma grows.
class InducedPdf {
 public:
  InducedPdf(double sigma, double support_bound, double normalization)
      : sigma_(sigma), bound_(support_bound), c_(normalization) {}

  double operator()(double e) const;
  double log_density(double e) const;  // -inf outside [-B, B]

  double sigma() const { return sigma_; }
  double support_bound() const { return bound_; }
  double normalization() const { return c_; }

 private:
  double sigma_;
  double bound_;
  double c_;
};

/// Normalizes the induced density by adaptive Simpson quadrature
/// (absolute tolerance 1e-10).
InducedPdf induced_pdf_build(double sigma, double support_bound);

/// Mean log-density of the samples under the induced pdf and under the
/// standard normal, in that order.
std::pair<double, double> loglik_compare(std::span<const double> samples,
                                         double sigma, double support_bound);

/// Contaminated noise: (1-p) N(0,1) + p U(-20,20).
struct MixtureNoiseModel {
  double p{0.0};  // outlier probability, in [0, 0.5)
  static constexpr double kUniformBound = 20.0;

  explicit MixtureNoiseModel(double p_);
};

/// i.i.d. draws from the mixture, deterministic for a given seed.
std::vector<double> sample_mixture(const MixtureNoiseModel& model, std::size_t n,
                                   std::uint64_t seed);

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct EmptyInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace corrfuse
