#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "drgrade/augment/image.hpp"
#include "drgrade/common/rng.hpp"

namespace drg::aug {

// The nine augmentation ops, in the fixed order used by the tenfold expansion.
enum class AugKind {
    blur,
    vflip,
    hflip,
    rotate,
    sharpen,
    clahe,
    emboss,
    fancy_pca,
    brightness_contrast,
};

inline constexpr std::array<AugKind, 9> kAllAugKinds = {
    AugKind::blur,     AugKind::vflip,  AugKind::hflip,     AugKind::rotate,             AugKind::sharpen,
    AugKind::clahe,    AugKind::emboss, AugKind::fancy_pca, AugKind::brightness_contrast};

const char* aug_kind_name(AugKind kind);
std::optional<AugKind> aug_kind_from_name(const std::string& name);

// Parameter ranges for the randomized ops. Values drawn per application from
// the caller-supplied stream.
struct AugmentParams {
    double rotation_limit_deg = 180.0;
    double blur_sigma_lo = 0.5;
    double blur_sigma_hi = 1.5;
    int blur_ksize = 5;
    double clahe_clip_limit = 2.0;
    int clahe_tiles_x = 8;
    int clahe_tiles_y = 8;
    double pca_sigma = 0.1;
    double brightness_limit = 0.2;
    double contrast_limit = 0.2;
    double blend_alpha_lo = 0.2;
    double blend_alpha_hi = 0.5;
};

struct AugmentSpec {
    AugKind kind;
    AugmentParams params;
};

// --- deterministic primitives -----------------------------------------------

// Bilinear resampling with half-pixel-centered source coordinates.
ImageU8 resize_bilinear(const ImageU8& img, int out_h, int out_w);

ImageU8 hflip(const ImageU8& img);
ImageU8 vflip(const ImageU8& img);

// Rotation about the image center (positive angle turns content
// counter-clockwise with y pointing down), bilinear sampling, out-of-bounds
// filled black.
ImageU8 rotate(const ImageU8& img, double angle_deg);

// Separable Gaussian, kernel normalized to sum 1, replicated edges. ksize must
// be odd and >= 3; sigma <= 0 degenerates to the identity kernel.
ImageU8 gaussian_blur(const ImageU8& img, double sigma, int ksize);
std::vector<double> gaussian_kernel(double sigma, int ksize);

// out = (1-alpha)*img + alpha*(kernel*img), clamped. The emboss kernel result
// is biased by +128 before blending.
ImageU8 sharpen(const ImageU8& img, double alpha);
ImageU8 emboss(const ImageU8& img, double alpha);

// Contrast-limited adaptive histogram equalization on the BT.601 luma channel;
// chroma offsets are preserved exactly. Tile mappings are min/max-anchored
// CDFs, blended bilinearly between tile centers.
ImageU8 clahe(const ImageU8& img, double clip_limit, int tiles_y, int tiles_x);

// Clip each bin at clip_limit*tile_pixels/256 and redistribute the excess
// uniformly (single pass: equal share per bin, remainder to the lowest bins).
std::vector<uint32_t> clahe_clip_histogram(std::vector<uint32_t> hist, double clip_limit,
                                           int64_t tile_pixels);

// Eigenstructure of the per-image RGB covariance (pixels scaled to [0,1]).
// Eigenvalues sorted descending; each eigenvector's largest-magnitude
// component is made positive.
struct PixelBasis {
    std::array<double, 3> eigenvalues{};
    std::array<std::array<double, 3>, 3> eigenvectors{}; // eigenvectors[i] = p_i
};
PixelBasis rgb_pixel_basis(const ImageU8& img);

// Draws alpha_i ~ N(0, sigma) (three sequential draws) and adds
// 255 * sum_i alpha_i * lambda_i * p_i to every pixel.
ImageU8 fancy_pca(const ImageU8& img, double sigma, RngState& rng);

// out = clamp((1+contrast)*(v - mean) + mean + 255*brightness) with mean the
// per-image BT.601 luma mean.
ImageU8 brightness_contrast(const ImageU8& img, double brightness, double contrast);

// --- randomized application --------------------------------------------------

// Applies one op, drawing its parameters from the given stream.
ImageU8 apply_augment(const ImageU8& img, AugKind kind, const AugmentParams& params, RngState rng);

// Original plus the nine ops, each applied once; variant k draws from the
// sub-stream "v<k>" of the supplied image stream, so expansion order does not
// matter.
std::array<ImageU8, 10> expand_tenfold(const ImageU8& img, const AugmentParams& params,
                                       const RngState& rng);

// Variant k of the general multiplier scheme: k == 0 is the original, k >= 1
// applies op (k-1) mod 9 with the "v<k>" sub-stream. expand_tenfold is
// variants 0..9 of this.
ImageU8 augment_variant(const ImageU8& img, int variant, const AugmentParams& params,
                        const RngState& rng);
AugKind variant_kind(int variant);

} // namespace drg::aug
