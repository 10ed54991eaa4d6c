#include "cvqss/affine_form.hpp"

#include <stdexcept>

namespace cvqss {

LatentBasis LatentBasis::graph_only(int n_modes) {
  if (n_modes < 0) throw std::invalid_argument("negative mode count");
  LatentBasis b;
  b.n_modes = n_modes;
  return b;
}

LatentBasis LatentBasis::with_secret(int n_modes, double var_x, double var_p,
                                     double mean_x, double mean_p) {
  if (n_modes < 0) throw std::invalid_argument("negative mode count");
  if (var_x <= 0.0 || var_p <= 0.0)
    throw std::invalid_argument("secret variances must be positive");
  LatentBasis b;
  b.n_modes = n_modes;
  b.has_secret = true;
  b.secret_var_x = var_x;
  b.secret_var_p = var_p;
  b.secret_mean_x = mean_x;
  b.secret_mean_p = mean_p;
  return b;
}

int LatentBasis::x_index(int mode) const {
  if (mode < 0 || mode >= n_modes) throw std::invalid_argument("mode out of range");
  return mode;
}

int LatentBasis::p_index(int mode) const {
  if (mode < 0 || mode >= n_modes) throw std::invalid_argument("mode out of range");
  return n_modes + mode;
}

int LatentBasis::secret_x_index() const {
  if (!has_secret) throw std::invalid_argument("basis has no secret latents");
  return 2 * n_modes;
}

int LatentBasis::secret_p_index() const {
  if (!has_secret) throw std::invalid_argument("basis has no secret latents");
  return 2 * n_modes + 1;
}

double LatentBasis::latent_variance(int latent) const {
  if (latent < 0 || latent >= dim())
    throw std::invalid_argument("latent index out of range");
  if (latent < 2 * n_modes) return 1.0;
  return latent == 2 * n_modes ? secret_var_x : secret_var_p;
}

double LatentBasis::latent_mean(int latent) const {
  if (latent < 0 || latent >= dim())
    throw std::invalid_argument("latent index out of range");
  if (latent < 2 * n_modes) return 0.0;
  return latent == 2 * n_modes ? secret_mean_x : secret_mean_p;
}

bool LatentBasis::compatible(const LatentBasis& other) const {
  return n_modes == other.n_modes && has_secret == other.has_secret &&
         secret_var_x == other.secret_var_x &&
         secret_var_p == other.secret_var_p &&
         secret_mean_x == other.secret_mean_x &&
         secret_mean_p == other.secret_mean_p;
}

MomentSummary AffineForm::moments(double gamma) const {
  MomentSummary m;
  m.mean = secret_coeff * gamma + constant;
  m.variance = 0.0;
  for (int i = 0; i < coeffs.size(); ++i) {
    m.mean += coeffs[i] * basis.latent_mean(i);
    m.variance += coeffs[i] * coeffs[i] * basis.latent_variance(i);
  }
  return m;
}

double AffineForm::variance() const { return moments(0.0).variance; }

double AffineForm::mean(double gamma) const { return moments(gamma).mean; }

AffineForm& AffineForm::operator+=(const AffineForm& other) {
  if (!basis.compatible(other.basis))
    throw std::invalid_argument("affine forms over incompatible bases");
  coeffs += other.coeffs;
  secret_coeff += other.secret_coeff;
  constant += other.constant;
  return *this;
}

AffineForm& AffineForm::operator-=(const AffineForm& other) {
  if (!basis.compatible(other.basis))
    throw std::invalid_argument("affine forms over incompatible bases");
  coeffs -= other.coeffs;
  secret_coeff -= other.secret_coeff;
  constant -= other.constant;
  return *this;
}

AffineForm& AffineForm::operator*=(double s) {
  coeffs *= s;
  secret_coeff *= s;
  constant *= s;
  return *this;
}

AffineForm linear_combine(const std::vector<AffineForm>& forms,
                          const Eigen::VectorXd& weights) {
  if (forms.empty()) throw std::invalid_argument("no forms to combine");
  if (weights.size() != static_cast<Eigen::Index>(forms.size()))
    throw std::invalid_argument("weights length does not match form count");
  AffineForm out(forms.front().basis);
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (!out.basis.compatible(forms[i].basis))
      throw std::invalid_argument("affine forms over incompatible bases");
    out.coeffs += weights[static_cast<Eigen::Index>(i)] * forms[i].coeffs;
    out.secret_coeff += weights[static_cast<Eigen::Index>(i)] * forms[i].secret_coeff;
    out.constant += weights[static_cast<Eigen::Index>(i)] * forms[i].constant;
  }
  return out;
}

double covariance(const AffineForm& f, const AffineForm& g) {
  if (!f.basis.compatible(g.basis))
    throw std::invalid_argument("affine forms over incompatible bases");
  double cov = 0.0;
  for (int i = 0; i < f.coeffs.size(); ++i)
    cov += f.coeffs[i] * g.coeffs[i] * f.basis.latent_variance(i);
  return cov;
}

}  // namespace cvqss
