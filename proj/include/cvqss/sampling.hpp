#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cvqss/affine_form.hpp"
#include "cvqss/rng.hpp"

namespace cvqss {

// One latent vector for a shot. Draw order is fixed: graph X latents, graph P
// latents, then the secret pair, so every form sharing the basis sees the same
// physical noise realization within a shot.
Eigen::VectorXd draw_latents(const LatentBasis& basis, std::uint64_t seed,
                             std::uint64_t shot);

// Same draw but continuing an existing per-shot stream (used when coins or
// other decisions are drawn before the latents within the same shot).
Eigen::VectorXd draw_latents_with(ShotRng& rng, const LatentBasis& basis);

double evaluate(const AffineForm& form, const Eigen::VectorXd& latents,
                double gamma = 0.0);

// shots x forms matrix; row i evaluates every form on shot i's latents.
Eigen::MatrixXd sample(const std::vector<AffineForm>& forms, double gamma,
                       std::int64_t shots, std::uint64_t seed);

// Streaming mean/variance per form, chunked so the result is identical for
// any worker count.
std::vector<MomentSummary> sample_moments(const std::vector<AffineForm>& forms,
                                          double gamma, std::int64_t shots,
                                          std::uint64_t seed);

// Runs fn(first_shot, last_shot, slot) over a fixed chunk grid, possibly on
// several threads; slot indexes a chunk-ordered accumulator.
void for_each_chunk(std::int64_t shots, int n_chunks,
                    const std::function<void(std::int64_t, std::int64_t, int)>& fn);

}  // namespace cvqss
