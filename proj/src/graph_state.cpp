#include "cvqss/graph_state.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqss {

GraphSpec GraphSpec::validated(Eigen::MatrixXd G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("G must be square");
  const int n = static_cast<int>(G.rows());
  for (int i = 0; i < n; ++i) {
    if (G(i, i) != 0.0)
      throw std::invalid_argument("G must have zero diagonal");
    for (int j = i + 1; j < n; ++j)
      if (G(i, j) != G(j, i))
        throw std::invalid_argument("G must be symmetric");
  }
  GraphSpec spec;
  spec.n_modes = n;
  spec.G = std::move(G);
  return spec;
}

GraphSpec GraphSpec::empty(int n_modes) {
  return validated(Eigen::MatrixXd::Zero(n_modes, n_modes));
}

SqueezingSpec SqueezingSpec::from_r(Eigen::VectorXd r) {
  SqueezingSpec s;
  s.r = std::move(r);
  return s;
}

SqueezingSpec SqueezingSpec::uniform(int n_modes, double r_value) {
  return from_r(Eigen::VectorXd::Constant(n_modes, r_value));
}

Eigen::VectorXd SqueezingSpec::R() const { return r.array().exp(); }

Eigen::VectorXd SqueezingSpec::R_inverse() const { return (-r.array()).exp(); }

std::vector<std::pair<AffineForm, AffineForm>> make_squeezed_vacua(
    const LatentBasis& basis, const Eigen::VectorXd& r) {
  if (r.size() != basis.n_modes)
    throw std::invalid_argument("squeezing vector length does not match mode count");
  std::vector<std::pair<AffineForm, AffineForm>> modes;
  modes.reserve(static_cast<std::size_t>(basis.n_modes));
  for (int j = 0; j < basis.n_modes; ++j) {
    AffineForm x(basis), p(basis);
    x.coeffs[basis.x_index(j)] = std::exp(r[j]);
    p.coeffs[basis.p_index(j)] = std::exp(-r[j]);
    modes.emplace_back(std::move(x), std::move(p));
  }
  return modes;
}

std::vector<std::pair<AffineForm, AffineForm>> make_squeezed_vacua(
    int n, const Eigen::VectorXd& r) {
  return make_squeezed_vacua(LatentBasis::graph_only(n), r);
}

GraphState apply_qnd(GraphState state, int i, int j, double gain) {
  const int n = state.spec.n_modes;
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw std::invalid_argument("mode index out of range");
  if (i == j)
    throw std::invalid_argument("QND coupling needs two distinct modes");
  state.p_forms[static_cast<std::size_t>(i)] +=
      gain * state.x_forms[static_cast<std::size_t>(j)];
  state.p_forms[static_cast<std::size_t>(j)] +=
      gain * state.x_forms[static_cast<std::size_t>(i)];
  state.spec.G(i, j) += gain;
  state.spec.G(j, i) += gain;
  return state;
}

GraphState build_cvgs(const GraphSpec& spec, const Eigen::VectorXd& r,
                      const LatentBasis& basis) {
  if (basis.n_modes != spec.n_modes)
    throw std::invalid_argument("basis mode count does not match graph");
  if (r.size() != spec.n_modes)
    throw std::invalid_argument("squeezing vector length does not match graph");
  GraphState state;
  state.spec = spec;
  state.squeezing = SqueezingSpec::from_r(r);
  state.basis = basis;
  auto modes = make_squeezed_vacua(basis, r);
  state.x_forms.reserve(modes.size());
  state.p_forms.reserve(modes.size());
  for (auto& m : modes) {
    state.x_forms.push_back(std::move(m.first));
    state.p_forms.push_back(std::move(m.second));
  }
  // P_j += sum_l G_jl X_l, written directly on the coefficient level.
  for (int j = 0; j < spec.n_modes; ++j)
    for (int l = 0; l < spec.n_modes; ++l)
      if (spec.G(j, l) != 0.0)
        state.p_forms[static_cast<std::size_t>(j)].coeffs[basis.x_index(l)] +=
            spec.G(j, l) * std::exp(r[l]);
  return state;
}

GraphState build_cvgs(const GraphSpec& spec, const Eigen::VectorXd& r) {
  return build_cvgs(spec, r, LatentBasis::graph_only(spec.n_modes));
}

GraphState encode_secret(GraphState state, const Eigen::VectorXd& c) {
  if (c.size() != state.spec.n_modes)
    throw std::invalid_argument("displacement vector length does not match graph");
  for (int j = 0; j < state.spec.n_modes; ++j)
    state.p_forms[static_cast<std::size_t>(j)].secret_coeff += c[j];
  return state;
}

Eigen::MatrixXd quadrature_covariance(const GraphState& state) {
  const int n = state.spec.n_modes;
  Eigen::MatrixXd cov(2 * n, 2 * n);
  auto form_at = [&](int idx) -> const AffineForm& {
    return idx < n ? state.x_forms[static_cast<std::size_t>(idx)]
                   : state.p_forms[static_cast<std::size_t>(idx - n)];
  };
  for (int i = 0; i < 2 * n; ++i)
    for (int j = i; j < 2 * n; ++j)
      cov(i, j) = cov(j, i) = covariance(form_at(i), form_at(j));
  return cov;
}

}  // namespace cvqss
