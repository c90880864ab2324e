#include "corrfuse/correntropy.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace corrfuse {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_positive_sigma(double sigma, const char* who) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument(std::string(who) + ": sigma must be positive and finite");
}

// exp(-sigma^2 (1 - G_sigma(e))) written as exp(sigma^2 expm1(-e^2/(2 sigma^2)))
// so no precision is lost for large sigma.
double unnormalized_density_log(double e, double sigma) {
  const double u = -(e * e) / (2.0 * sigma * sigma);
  return sigma * sigma * std::expm1(u);
}

double unnormalized_density(double e, double sigma) {
  return std::exp(unnormalized_density_log(e, sigma));
}

struct SimpsonState {
  double sigma;
  int max_depth{60};
};

double simpson_segment(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const SimpsonState& st, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = unnormalized_density(lm, st.sigma);
  const double frm = unnormalized_density(rm, st.sigma);
  const double left = simpson_segment(fa, flm, fm, m - a);
  const double right = simpson_segment(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= st.max_depth)
    throw QuadratureFailure("induced_pdf_build: adaptive quadrature tolerance unreachable");
  return adaptive_simpson(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double integrate_density(double sigma, double a, double b, double tol) {
  SimpsonState st{sigma};
  const double m = 0.5 * (a + b);
  const double fa = unnormalized_density(a, sigma);
  const double fm = unnormalized_density(m, sigma);
  const double fb = unnormalized_density(b, sigma);
  const double whole = simpson_segment(fa, fm, fb, b - a);
  return adaptive_simpson(st, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace

KernelBandwidths::KernelBandwidths(std::vector<double> s) : sigma(std::move(s)) {
  if (sigma.empty()) throw std::invalid_argument("KernelBandwidths: need at least one channel");
  for (double v : sigma) require_positive_sigma(v, "KernelBandwidths");
}

double gaussian_kernel(double e, double sigma) {
  require_positive_sigma(sigma, "gaussian_kernel");
  return std::exp(-(e * e) / (2.0 * sigma * sigma));
}

double mkcl_loss_term(double e, double sigma) {
  require_positive_sigma(sigma, "mkcl_loss_term");
  const double u = -(e * e) / (2.0 * sigma * sigma);
  return sigma * sigma * (-std::expm1(u));
}

double mkcl_loss(std::span<const double> e, const KernelBandwidths& bw) {
  if (e.size() != bw.size())
    throw DimensionMismatch("mkcl_loss: residual and bandwidth dimensions differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) sum += mkcl_loss_term(e[i], bw.sigma[i]);
  return sum;
}

double ls_loss(std::span<const double> e) {
  double sum = 0.0;
  for (double v : e) sum += v * v;
  return 0.5 * sum;
}

double mkcl_influence(double e, double sigma) {
  require_positive_sigma(sigma, "mkcl_influence");
  return e * std::exp(-(e * e) / (2.0 * sigma * sigma));
}

double InducedPdf::operator()(double e) const {
  if (std::abs(e) > bound_) return 0.0;
  return c_ * unnormalized_density(e, sigma_);
}

double InducedPdf::log_density(double e) const {
  if (std::abs(e) > bound_) return -std::numeric_limits<double>::infinity();
  return std::log(c_) + unnormalized_density_log(e, sigma_);
}

InducedPdf induced_pdf_build(double sigma, double support_bound) {
  require_positive_sigma(sigma, "induced_pdf_build");
  if (!(support_bound > 0.0) || !std::isfinite(support_bound))
    throw std::invalid_argument("induced_pdf_build: support bound must be positive");
  const double integral = integrate_density(sigma, -support_bound, support_bound, 1e-10);
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw QuadratureFailure("induced_pdf_build: degenerate normalization integral");
  return InducedPdf(sigma, support_bound, 1.0 / integral);
}

std::pair<double, double> loglik_compare(std::span<const double> samples, double sigma,
                                         double support_bound) {
  if (samples.empty()) throw EmptyInput("loglik_compare: no samples");
  const InducedPdf pdf = induced_pdf_build(sigma, support_bound);
  const double log_norm_const = -0.5 * std::log(kTwoPi);
  double sum_cl = 0.0;
  double sum_ls = 0.0;
  for (double v : samples) {
    sum_cl += pdf.log_density(v);
    sum_ls += log_norm_const - 0.5 * v * v;
  }
  const double n = static_cast<double>(samples.size());
  return {sum_cl / n, sum_ls / n};
}

MixtureNoiseModel::MixtureNoiseModel(double p_) : p(p_) {
  if (!(p >= 0.0 && p < 0.5))
    throw std::invalid_argument("MixtureNoiseModel: p must lie in [0, 0.5)");
}

std::vector<double> sample_mixture(const MixtureNoiseModel& model, std::size_t n,
                                   std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_mixture: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> outlier(-MixtureNoiseModel::kUniformBound,
                                                 MixtureNoiseModel::kUniformBound);
  std::vector<double> out(n);
  for (auto& v : out) v = coin(rng) < model.p ? outlier(rng) : gauss(rng);
  return out;
}

}  // namespace corrfuse
