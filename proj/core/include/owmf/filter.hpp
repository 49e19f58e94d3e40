#pragma once

#include <optional>
#include <span>
#include <vector>

#include "owmf/detect.hpp"
#include "owmf/image.hpp"

namespace owmf {

/// Smoothing kernel applied over patch offsets when comparing patches.
enum class PatchKernel {
    kappa0,   ///< radial staircase kernel built from 1/(2k+1)^2 tail sums
    gaussian, ///< exp(-|offset|^2 / (2 h_g))
    uniform   ///< constant weight
};

/// Full tuning of the mixed filter. H1/H2 default to the formulas driven by
/// (p_hint, sigma) when left unset. The detection stage reads d and K from
/// `detect`; its sigma field is overwritten with the sigma passed to the
/// filter entry points.
struct OwmfParams {
    WindowSpec window;
    DetectParams detect;
    std::optional<double> H1;
    std::optional<double> H2;
    PatchKernel patch_kernel = PatchKernel::kappa0;
    double gauss_bandwidth = 2.0; // h_g, used only by PatchKernel::gaussian
    int iterations = 1;           // whole-pipeline repeats, 1..5
    // When set, the weighted patch distance is normalized by the same
    // kappa*J*J products used in its numerator instead of the plain kappa
    // sum. Off by default; kept for experiments.
    bool j_weighted_normalizer = false;

    void validate() const;
};

/// One candidate of a brightness-variation profile.
struct RhoEntry {
    PixelCoord candidate;
    double rho = 0.0;
};

/// The rho values over the search window of `center`, sorted ascending.
/// The center itself always contributes rho = 0, so entries.front().rho == 0.
struct RhoProfile {
    PixelCoord center;
    std::vector<RhoEntry> entries;
};

/// Normalized averaging weights emitted at one pixel, for diagnostics and
/// testing. Candidates are in row-major search-window order; weights are
/// nonnegative and sum to 1. bandwidth is empty when the Remark-style solve
/// hit the all-zero-rho case (weights then degenerate to the uniform or
/// J-weighted limit).
struct PixelWeights {
    PixelCoord center;
    std::vector<PixelCoord> candidates;
    std::vector<double> weights;
    std::optional<double> bandwidth;
    double output = 0.0;
};

/// Root mean square distance between the data patches at x and x0:
/// sqrt( (1/m) sum_{|delta|<=eta} (Y(x+delta) - Y(x0+delta))^2 ).
/// Out-of-bounds samples are resolved by mirroring.
double patch_distance(const Image& img, PixelCoord x, PixelCoord x0, int eta);

/// Brightness-variation estimate from a patch distance: (dist - sqrt(2) sigma)^+.
double rho_plain(double dist, double sigma);

/// Staircase kernel weight for a patch offset with Chebyshev norm j:
/// sum_{k=max(1,j)}^{eta} 1/(2k+1)^2.
double kappa0_weight(int j, int eta);

/// Gaussian kernel weight exp(-(offset.col^2+offset.row^2) / (2 h_g)).
double kappa_gauss(PixelCoord offset, double h_g);

/// Impulse-aware patch distance: kappa- and J-weighted L2 norm of the patch
/// difference, normalized by sqrt(sum of kappa). `jmap` is J(., H1) over the
/// image.
double weighted_patch_distance(const Image& img, const ScalarField& jmap,
                               PixelCoord x, PixelCoord x0, const OwmfParams& params);

/// (weighted_patch_distance - sqrt(2) sigma)^+ with sigma = params.detect.sigma.
double rho_weighted(const Image& img, const ScalarField& jmap, PixelCoord x,
                    PixelCoord x0, const OwmfParams& params);

/// Solves sum_i rho_i (a - rho_i)^+ = sigma^2 for the averaging bandwidth by
/// the sorted-prefix procedure. Returns an empty optional exactly when every
/// rho is zero (callers treat that as an infinite bandwidth: all candidates
/// equally similar).
std::optional<double> solve_bandwidth(std::span<const double> rhos, double sigma);

/// Plain-distance rho profile over the search window of x0, sorted ascending.
RhoProfile owf_rho_profile(const Image& img, double sigma, const WindowSpec& window,
                           PixelCoord x0);

/// J-weighted rho profile over the search window of x0, sorted ascending.
/// `j1` is J(., H1); sigma comes from params.detect.sigma.
RhoProfile owmf_rho_profile(const Image& img, const ScalarField& j1,
                            const OwmfParams& params, PixelCoord x0);

/// Optimal Weights Filter for pure Gaussian noise: triangular-kernel average
/// with per-pixel bandwidth from solve_bandwidth.
Image owf_denoise(const Image& img, double sigma, const WindowSpec& window,
                  int threads = 0);

/// Optimal Weights Mixed Filter: ROADG-driven J weights suppress impulse
/// pixels both inside the patch distance (via H1) and in the averaging
/// weights (via H2). p_hint feeds the default H1/H2 formulas. When
/// params.iterations > 1 the whole pipeline is re-applied to its own output,
/// recomputing ROADG each pass.
Image owmf_denoise(const Image& img, double sigma, double p_hint,
                   const OwmfParams& params, int threads = 0);

/// Reference per-pixel evaluation of OWF, composed from the public
/// operations; slow but independent of the bulk implementation.
PixelWeights owf_pixel_weights(const Image& img, double sigma,
                               const WindowSpec& window, PixelCoord x0);

/// Reference per-pixel evaluation of OWMF (single iteration).
PixelWeights owmf_pixel_weights(const Image& img, double sigma, double p_hint,
                                const OwmfParams& params, PixelCoord x0);

} // namespace owmf
