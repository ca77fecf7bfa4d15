#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tfden/quantize.hpp"
#include "tfden/tfr.hpp"

namespace tfden {

struct FilterParams {
    double h = 10.0;          // gray-level bandwidth (levels)
    double rho = 10.0;        // spatial bandwidth (pixels)
    double eps = 0.02;        // transport strength
    double eps_tilde = 2.55;  // TV regularization (gray levels)
    double sigma_smooth = 2.0;  // presmoothing sigma for the transport field (pixels)
    double dtau = 2.5;        // artificial time step
    double tol = 0.04;        // relative-change stopping tolerance
    int max_iter = 50;        // iteration cap for tolerance-stopped schemes
    int fixed_steps = 0;      // explicit step count; 0 derives 1/(eps*dtau)
    int q_levels = 255;
    bool truncate_spatial = true;  // cut the spatial Gaussian at 3*rho
};

struct FilterResult {
    Tfr image;
    int iterations = 0;
    std::vector<double> per_iter_change;
    bool hit_max_iter = false;
    double setup_seconds = 0.0;  // quantization, indexing, field precomputes
    double iter_seconds = 0.0;   // the iteration core

    double core_seconds() const { return setup_seconds + iter_seconds; }
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One Neighborhood-filter step expressed on level sets: for output level j,
/// value(j) = sum_k a(j,k) * level_sums[k] / sum_k a(j,k) * counts[k] with
/// a(j,k) = exp(-((j-k)/h)^2). Empty levels are skipped in both sums. Cost is
/// O(Q^2), independent of pixel count.
std::vector<double> nf_level_step(const LevelIndex& index,
                                  const std::vector<double>& level_sums,
                                  double h);

/// Iterated Neighborhood filter with weights frozen at the quantized input.
/// Quantizes once, builds the level index once, then repeats nf_level_step
/// until the relative L2 change drops below params.tol or max_iter is hit.
FilterResult nf_iterate(const Tfr& s0_image, const FilterParams& params);

/// Literal per-pixel-pair evaluation of one frozen-weight step:
/// out(x) = sum_y w(x,y) si(y) / sum_y w(x,y), w = exp(-(s0(x)-s0(y))^2/h^2).
/// O((MN)^2); intended as the reference for small images.
Tfr nf_brute_force(const Tfr& s0_image, const Tfr& si_image, double h);

/// Yaroslavsky filter: Neighborhood weights multiplied by a spatial Gaussian
/// exp(-(|y-x|/rho)^2) in pixel units, truncated at |y-x| <= 3*rho unless
/// params.truncate_spatial is off. Gray-level weights are frozen at the
/// quantized input; the iteration count matches the PDE step count.
FilterResult yaroslavsky_iterate(const Tfr& s0_image, const FilterParams& params);

/// Nonlocal Means with Gaussian patch comparison: weights exp(-F(x,y)/h^2),
/// F(x,y) = sum_z G_sigma(z) (v(x+z) - v(y+z))^2, patch truncated at 3*sigma,
/// reflective bounds. O((MN)^2 * patch); small inputs only.
Tfr nlmeans(const Tfr& v, double h, double sigma_patch);

/// Checks the averaged-difference identity between a Wigner-Ville distribution
/// and the spectrogram taken with the matched Gaussian window: for sampled
/// pixel pairs, F(x,y) = |sum_z G(z)(WV(x+z)-WV(y+z))|^2 is compared against
/// (S(x)-S(y))^2. Returns max over pairs of |F - d^2| / (1 + d^2). Pairs are
/// drawn from a centered interior region of up to 64x64 pixels.
double f_correspondence(const Tfr& wv, double sigma_window_seconds, const Tfr& s,
                        int n_pairs = 500, std::uint64_t seed = 1);

/// Transport plus regularized total-variation flow, semi-implicit in the
/// curvature term:
///   (I/dtau + A(S_k)) S_{k+1} = S_k/dtau - b . grad_up(S_k)
/// with A the 5-point forward-difference form of -div(grad / sqrt(|grad|^2 +
/// eps_tilde^2)) under homogeneous Neumann boundaries, b = (eps/2) grad log of
/// the presmoothed input (floored at 1e-3*Q), and first-order upwinding of the
/// convection. Each step solves the SPD system by Jacobi-preconditioned
/// conjugate gradients to relative residual 1e-8; runs until tau = 1/eps.
FilterResult tv_transport_denoise(const Tfr& s0_image, const FilterParams& params);

/// Step count shared by the PDE scheme and the Yaroslavsky iteration:
/// fixed_steps if set, otherwise round(1 / (eps * dtau)).
int pde_step_count(const FilterParams& params);

/// Discrete regularized TV functional sum sqrt(|grad S|^2 + eps_tilde^2) with
/// the same forward differences the flow uses.
double tv_functional(const Tfr& image, double eps_tilde);

}  // namespace tfden
