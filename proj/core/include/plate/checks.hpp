#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "plate/control.hpp"
#include "plate/csv.hpp"
#include "plate/kernels.hpp"
#include "plate/riemann.hpp"

namespace plate {

/// Smooth random physical state: short cosine sums with coefficients in
/// [-1, 1]. With `sbp_slopes` the slope fields are the summation-by-parts
/// derivative of the sampled fields instead of the exact derivative.
PhysicalModalState random_smooth_state(const Grid1D& g, std::mt19937_64& rng, bool sbp_slopes);

/// Max relative deviation between the hyperbolic law (mapped to physical
/// inputs) and the physical-variable law over `trials` random states.
double dual_gain_deviation(const ControllerKernels& k, const DimensionlessParams& d, int n,
                           const Grid1D& g, int trials, std::uint64_t seed, bool sbp_slopes);

/// Max error of hyperbolic -> physical -> hyperbolic on random states.
double riemann_roundtrip_error(const DimensionlessParams& d, const Grid1D& g, int trials,
                               std::uint64_t seed);

/// Max error of reconstruct -> project on random band-limited coefficients,
/// and of project -> reconstruct on the samples.
double modal_roundtrip_error(int N, double L, int y_points, int trials, std::uint64_t seed);

/// max |Sigma Phi(0) + A - diag(-delta)|.
double e1_diagonal_error(const ControllerKernels& k, const ModalCoefficients& c);

/// Compares stored kernel rows with freshly computed ones. Returns an empty
/// string when they match, otherwise a description of the first mismatch.
std::string compare_kernel_records(const std::vector<KernelRecord>& stored,
                                   const std::vector<KernelRecord>& fresh, double rel_tol = 1e-12);

}  // namespace plate
