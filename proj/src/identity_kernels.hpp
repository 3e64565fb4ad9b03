#pragma once

// Per-point residual kernels behind Session::run.

#include "nk6/verify.hpp"

#include <vector>

namespace nk6::detail {

struct KernelContext {
    int draws = 10;
    double mu = 0.0;  // global mean, for the identities that compare against it
};

/// Residuals of registry identity `number` (1..32, except 16) at one point.
std::vector<double> identity_residuals(int number, const PointGeometry& pg, Rng& rng, const KernelContext& ctx);

/// Frame-component residuals of d sigma = 3 mu psi+ and d psi- = -2 mu sigma^sigma.
/// `scale` rescales the frame by 1/scale (1 for the plain check).
std::pair<double, double> pde_residuals(const PointGeometry& pg, double mu, double scale);

}  // namespace nk6::detail
