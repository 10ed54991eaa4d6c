#include "cvqss/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace cvqss {

Eigen::VectorXd draw_latents_with(ShotRng& rng, const LatentBasis& basis) {
  Eigen::VectorXd v(basis.dim());
  for (int j = 0; j < basis.n_modes; ++j) v[basis.x_index(j)] = rng.normal();
  for (int j = 0; j < basis.n_modes; ++j) v[basis.p_index(j)] = rng.normal();
  if (basis.has_secret) {
    v[basis.secret_x_index()] =
        basis.secret_mean_x + std::sqrt(basis.secret_var_x) * rng.normal();
    v[basis.secret_p_index()] =
        basis.secret_mean_p + std::sqrt(basis.secret_var_p) * rng.normal();
  }
  return v;
}

Eigen::VectorXd draw_latents(const LatentBasis& basis, std::uint64_t seed,
                             std::uint64_t shot) {
  ShotRng rng(seed, shot);
  return draw_latents_with(rng, basis);
}

double evaluate(const AffineForm& form, const Eigen::VectorXd& latents,
                double gamma) {
  if (latents.size() != form.coeffs.size())
    throw std::invalid_argument("latent vector does not match form basis");
  return form.coeffs.dot(latents) + form.secret_coeff * gamma + form.constant;
}

void for_each_chunk(std::int64_t shots, int n_chunks,
                    const std::function<void(std::int64_t, std::int64_t, int)>& fn) {
  if (shots <= 0) return;
  n_chunks = static_cast<int>(std::min<std::int64_t>(n_chunks, shots));
  unsigned hw = std::thread::hardware_concurrency();
  int n_threads = static_cast<int>(std::max(1u, std::min<unsigned>(hw, n_chunks)));

  auto chunk_range = [&](int c) {
    std::int64_t lo = shots * c / n_chunks;
    std::int64_t hi = shots * (c + 1) / n_chunks;
    return std::pair<std::int64_t, std::int64_t>(lo, hi);
  };

  if (n_threads == 1) {
    for (int c = 0; c < n_chunks; ++c) {
      auto [lo, hi] = chunk_range(c);
      fn(lo, hi, c);
    }
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t] {
      for (int c = t; c < n_chunks; c += n_threads) {
        auto [lo, hi] = chunk_range(c);
        fn(lo, hi, c);
      }
    });
  }
  for (auto& w : workers) w.join();
}

Eigen::MatrixXd sample(const std::vector<AffineForm>& forms, double gamma,
                       std::int64_t shots, std::uint64_t seed) {
  if (forms.empty()) throw std::invalid_argument("no forms to sample");
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  const LatentBasis& basis = forms.front().basis;
  for (const auto& f : forms)
    if (!basis.compatible(f.basis))
      throw std::invalid_argument("affine forms over incompatible bases");

  Eigen::MatrixXd out(shots, static_cast<Eigen::Index>(forms.size()));
  for_each_chunk(shots, 64, [&](std::int64_t lo, std::int64_t hi, int) {
    for (std::int64_t s = lo; s < hi; ++s) {
      Eigen::VectorXd v = draw_latents(basis, seed, static_cast<std::uint64_t>(s));
      for (std::size_t f = 0; f < forms.size(); ++f)
        out(s, static_cast<Eigen::Index>(f)) = evaluate(forms[f], v, gamma);
    }
  });
  return out;
}

namespace {

// Streaming moments; combine() merges partitions exactly (Chan et al.).
struct MomentAccumulator {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void combine(const MomentAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    std::int64_t tot = n + o.n;
    mean += d * static_cast<double>(o.n) / static_cast<double>(tot);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) /
                     static_cast<double>(tot);
    n = tot;
  }

  MomentSummary summary() const {
    MomentSummary s;
    s.mean = mean;
    s.variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return s;
  }
};

}  // namespace

std::vector<MomentSummary> sample_moments(const std::vector<AffineForm>& forms,
                                          double gamma, std::int64_t shots,
                                          std::uint64_t seed) {
  if (forms.empty()) throw std::invalid_argument("no forms to sample");
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  const LatentBasis& basis = forms.front().basis;
  for (const auto& f : forms)
    if (!basis.compatible(f.basis))
      throw std::invalid_argument("affine forms over incompatible bases");

  const int n_chunks = 64;
  std::vector<std::vector<MomentAccumulator>> acc(
      n_chunks, std::vector<MomentAccumulator>(forms.size()));
  for_each_chunk(shots, n_chunks, [&](std::int64_t lo, std::int64_t hi, int slot) {
    for (std::int64_t s = lo; s < hi; ++s) {
      Eigen::VectorXd v = draw_latents(basis, seed, static_cast<std::uint64_t>(s));
      for (std::size_t f = 0; f < forms.size(); ++f)
        acc[slot][f].add(evaluate(forms[f], v, gamma));
    }
  });

  std::vector<MomentSummary> out(forms.size());
  for (std::size_t f = 0; f < forms.size(); ++f) {
    MomentAccumulator total;
    for (int c = 0; c < n_chunks; ++c) total.combine(acc[c][f]);
    out[f] = total.summary();
  }
  return out;
}

}  // namespace cvqss
