#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cvqss {

// Latent layout: 2m unit-variance vacuum latents ordered X(0)_1..X(0)_m then
// P(0)_1..P(0)_m, optionally followed by a secret-qumode pair (X_S, P_S) with
// its own variances and mean offsets. All latents are mutually independent.
struct LatentBasis {
  int n_modes = 0;
  bool has_secret = false;
  double secret_var_x = 1.0;
  double secret_var_p = 1.0;
  double secret_mean_x = 0.0;
  double secret_mean_p = 0.0;

  static LatentBasis graph_only(int n_modes);
  static LatentBasis with_secret(int n_modes, double var_x, double var_p,
                                 double mean_x = 0.0, double mean_p = 0.0);

  int dim() const { return 2 * n_modes + (has_secret ? 2 : 0); }
  int x_index(int mode) const;
  int p_index(int mode) const;
  int secret_x_index() const;
  int secret_p_index() const;

  double latent_variance(int latent) const;
  double latent_mean(int latent) const;
  bool compatible(const LatentBasis& other) const;
};

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
};

// A quadrature or measurement outcome: a linear combination of the basis
// latents plus secret_coeff * gamma (the classical secret) plus a constant
// offset (e.g. published measurement results fed forward).
struct AffineForm {
  LatentBasis basis;
  Eigen::VectorXd coeffs;
  double secret_coeff = 0.0;
  double constant = 0.0;

  AffineForm() = default;
  explicit AffineForm(const LatentBasis& b)
      : basis(b), coeffs(Eigen::VectorXd::Zero(b.dim())) {}

  MomentSummary moments(double gamma = 0.0) const;
  double variance() const;
  double mean(double gamma = 0.0) const;

  AffineForm& operator+=(const AffineForm& other);
  AffineForm& operator-=(const AffineForm& other);
  AffineForm& operator*=(double s);
  friend AffineForm operator+(AffineForm lhs, const AffineForm& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend AffineForm operator-(AffineForm lhs, const AffineForm& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend AffineForm operator*(double s, AffineForm f) {
    f *= s;
    return f;
  }
};

AffineForm linear_combine(const std::vector<AffineForm>& forms,
                          const Eigen::VectorXd& weights);

double covariance(const AffineForm& f, const AffineForm& g);

}  // namespace cvqss
