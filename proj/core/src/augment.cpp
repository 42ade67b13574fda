#include "drgrade/augment/ops.hpp"

#include <algorithm>
#include <cmath>

namespace drg::aug {

const char* aug_kind_name(AugKind kind) {
    switch (kind) {
    case AugKind::blur: return "blur";
    case AugKind::vflip: return "vflip";
    case AugKind::hflip: return "hflip";
    case AugKind::rotate: return "rotate";
    case AugKind::sharpen: return "sharpen";
    case AugKind::clahe: return "clahe";
    case AugKind::emboss: return "emboss";
    case AugKind::fancy_pca: return "fancy_pca";
    case AugKind::brightness_contrast: return "brightness_contrast";
    }
    return "?";
}

std::optional<AugKind> aug_kind_from_name(const std::string& name) {
    for (AugKind k : kAllAugKinds)
        if (name == aug_kind_name(k)) return k;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

ImageU8 resize_bilinear(const ImageU8& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw Error::validation("resize: output dimensions must be >= 1");
    ImageU8 out(out_h, out_w);
    const double sy_scale = static_cast<double>(img.height) / out_h;
    const double sx_scale = static_cast<double>(img.width) / out_w;
    for (int oy = 0; oy < out_h; ++oy) {
        double sy = (oy + 0.5) * sy_scale - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(std::floor(sy));
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double fy = sy - y0;
        for (int ox = 0; ox < out_w; ++ox) {
            double sx = (ox + 0.5) * sx_scale - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(std::floor(sx));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double fx = sx - x0;
            for (int c = 0; c < 3; ++c) {
                const double v = (1 - fy) * ((1 - fx) * img.at(y0, x0, c) + fx * img.at(y0, x1, c)) +
                                 fy * ((1 - fx) * img.at(y1, x0, c) + fx * img.at(y1, x1, c));
                out.at(oy, ox, c) = quantize_u8(v);
            }
        }
    }
    return out;
}

ImageU8 hflip(const ImageU8& img) {
    ImageU8 out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, img.width - 1 - x, c);
    return out;
}

ImageU8 vflip(const ImageU8& img) {
    ImageU8 out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(img.height - 1 - y, x, c);
    return out;
}

ImageU8 rotate(const ImageU8& img, double angle_deg) {
    ImageU8 out(img.height, img.width);
    const double a = angle_deg * M_PI / 180.0;
    const double ca = std::cos(a), sa = std::sin(a);
    const double cx = (img.width - 1) / 2.0, cy = (img.height - 1) / 2.0;
    for (int r = 0; r < img.height; ++r) {
        for (int q = 0; q < img.width; ++q) {
            const double dx = q - cx, dy = r - cy;
            // inverse map: sample source at R(-angle) * d + center
            const double sx = cx + ca * dx + sa * dy;
            const double sy = cy - sa * dx + ca * dy;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double fx = sx - x0, fy = sy - y0;
            for (int c = 0; c < 3; ++c) {
                double v = 0.0; // out-of-bounds neighbors stay black
                for (int dyi = 0; dyi <= 1; ++dyi) {
                    for (int dxi = 0; dxi <= 1; ++dxi) {
                        const int yy = y0 + dyi, xx = x0 + dxi;
                        if (yy < 0 || yy >= img.height || xx < 0 || xx >= img.width) continue;
                        const double wgt = (dyi ? fy : 1 - fy) * (dxi ? fx : 1 - fx);
                        v += wgt * img.at(yy, xx, c);
                    }
                }
                out.at(r, q, c) = quantize_u8(v);
            }
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma, int ksize) {
    if (ksize < 3 || ksize % 2 == 0) throw Error::validation("blur: kernel size must be odd and >= 3");
    std::vector<double> k(static_cast<size_t>(ksize), 0.0);
    const int r = ksize / 2;
    if (sigma <= 0.0) {
        k[static_cast<size_t>(r)] = 1.0; // degenerate identity kernel
        return k;
    }
    double sum = 0.0;
    for (int i = 0; i < ksize; ++i) {
        const double d = i - r;
        k[static_cast<size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += k[static_cast<size_t>(i)];
    }
    for (double& v : k) v /= sum;
    return k;
}

ImageU8 gaussian_blur(const ImageU8& img, double sigma, int ksize) {
    const std::vector<double> kern = gaussian_kernel(sigma, ksize);
    const int r = ksize / 2;
    std::vector<double> tmp(img.data.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i) {
                    const int xx = std::clamp(x + i, 0, img.width - 1);
                    acc += kern[static_cast<size_t>(i + r)] * img.at(y, xx, c);
                }
                tmp[(static_cast<size_t>(y) * img.width + x) * 3 + static_cast<size_t>(c)] = acc;
            }
        }
    }
    ImageU8 out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i) {
                    const int yy = std::clamp(y + i, 0, img.height - 1);
                    acc += kern[static_cast<size_t>(i + r)] *
                           tmp[(static_cast<size_t>(yy) * img.width + x) * 3 + static_cast<size_t>(c)];
                }
                out.at(y, x, c) = quantize_u8(acc);
            }
        }
    }
    return out;
}

namespace {

// 3x3 convolution with replicated edges, blended with the original:
// out = (1-alpha)*img + alpha*(kernel*img + bias).
ImageU8 kernel3_blend(const ImageU8& img, const double kernel[3][3], double bias, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error::validation("blend alpha must be in [0,1]");
    ImageU8 out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double conv = bias;
                for (int i = -1; i <= 1; ++i) {
                    const int yy = std::clamp(y + i, 0, img.height - 1);
                    for (int j = -1; j <= 1; ++j) {
                        const int xx = std::clamp(x + j, 0, img.width - 1);
                        conv += kernel[i + 1][j + 1] * img.at(yy, xx, c);
                    }
                }
                out.at(y, x, c) = quantize_u8((1.0 - alpha) * img.at(y, x, c) + alpha * conv);
            }
        }
    }
    return out;
}

} // namespace

ImageU8 sharpen(const ImageU8& img, double alpha) {
    static const double k[3][3] = {{-1, -1, -1}, {-1, 9, -1}, {-1, -1, -1}};
    return kernel3_blend(img, k, 0.0, alpha);
}

ImageU8 emboss(const ImageU8& img, double alpha) {
    static const double k[3][3] = {{-2, -1, 0}, {-1, 1, 1}, {0, 1, 2}};
    return kernel3_blend(img, k, 128.0, alpha);
}

// ---------------------------------------------------------------------------
// fancy PCA

namespace {

// Cyclic Jacobi eigensolve of a symmetric 3x3 matrix.
void jacobi3(double a[3][3], double eigval[3], double eigvec[3][3]) {
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < 3; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < 3; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (int i = 0; i < 3; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        eigval[i] = a[i][i];
        for (int j = 0; j < 3; ++j) eigvec[i][j] = v[j][i]; // row i = eigenvector i
    }
}

} // namespace

PixelBasis rgb_pixel_basis(const ImageU8& img) {
    const double n = static_cast<double>(img.pixel_count());
    double mean[3] = {0, 0, 0};
    for (size_t i = 0; i < img.data.size(); i += 3)
        for (int c = 0; c < 3; ++c) mean[c] += img.data[i + static_cast<size_t>(c)] / 255.0;
    for (double& m : mean) m /= n;

    double cov[3][3] = {};
    for (size_t i = 0; i < img.data.size(); i += 3) {
        double d[3];
        for (int c = 0; c < 3; ++c) d[c] = img.data[i + static_cast<size_t>(c)] / 255.0 - mean[c];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) cov[a][b] += d[a] * d[b];
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) cov[a][b] /= n;

    double eigval[3], eigvec[3][3];
    jacobi3(cov, eigval, eigvec);

    // sort descending, then make each vector's largest-|.| component positive
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) { return eigval[a] > eigval[b]; });
    PixelBasis basis;
    for (int i = 0; i < 3; ++i) {
        basis.eigenvalues[static_cast<size_t>(i)] = eigval[order[i]];
        int arg = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(eigvec[order[i]][j]) > std::abs(eigvec[order[i]][arg])) arg = j;
        const double sign = eigvec[order[i]][arg] < 0 ? -1.0 : 1.0;
        for (int j = 0; j < 3; ++j)
            basis.eigenvectors[static_cast<size_t>(i)][static_cast<size_t>(j)] = sign * eigvec[order[i]][j];
    }
    return basis;
}

ImageU8 fancy_pca(const ImageU8& img, double sigma, RngState& rng) {
    if (sigma < 0.0) throw Error::validation("fancy_pca: sigma must be >= 0");
    const PixelBasis basis = rgb_pixel_basis(img);
    double alpha[3];
    for (double& a : alpha) a = rng.normal(0.0, sigma);
    double delta[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 3; ++c)
            delta[c] += alpha[i] * basis.eigenvalues[static_cast<size_t>(i)] *
                        basis.eigenvectors[static_cast<size_t>(i)][static_cast<size_t>(c)];

    ImageU8 out(img.height, img.width);
    for (size_t i = 0; i < img.data.size(); i += 3)
        for (int c = 0; c < 3; ++c)
            out.data[i + static_cast<size_t>(c)] =
                quantize_u8(img.data[i + static_cast<size_t>(c)] + 255.0 * delta[c]);
    return out;
}

ImageU8 brightness_contrast(const ImageU8& img, double brightness, double contrast) {
    double mean = 0.0;
    for (size_t i = 0; i < img.data.size(); i += 3)
        mean += luma601(img.data[i], img.data[i + 1], img.data[i + 2]);
    mean /= static_cast<double>(img.pixel_count());

    ImageU8 out(img.height, img.width);
    for (size_t i = 0; i < img.data.size(); ++i) {
        const double v = img.data[i];
        out.data[i] = quantize_u8((1.0 + contrast) * (v - mean) + mean + 255.0 * brightness);
    }
    return out;
}

// ---------------------------------------------------------------------------

ImageU8 apply_augment(const ImageU8& img, AugKind kind, const AugmentParams& p, RngState rng) {
    switch (kind) {
    case AugKind::blur:
        return gaussian_blur(img, rng.uniform(p.blur_sigma_lo, p.blur_sigma_hi), p.blur_ksize);
    case AugKind::vflip:
        return vflip(img);
    case AugKind::hflip:
        return hflip(img);
    case AugKind::rotate:
        return rotate(img, rng.uniform(-p.rotation_limit_deg, p.rotation_limit_deg));
    case AugKind::sharpen:
        return sharpen(img, rng.uniform(p.blend_alpha_lo, p.blend_alpha_hi));
    case AugKind::clahe:
        return clahe(img, p.clahe_clip_limit, p.clahe_tiles_y, p.clahe_tiles_x);
    case AugKind::emboss:
        return emboss(img, rng.uniform(p.blend_alpha_lo, p.blend_alpha_hi));
    case AugKind::fancy_pca:
        return fancy_pca(img, p.pca_sigma, rng);
    case AugKind::brightness_contrast: {
        const double b = rng.uniform(-p.brightness_limit, p.brightness_limit);
        const double c = rng.uniform(-p.contrast_limit, p.contrast_limit);
        return brightness_contrast(img, b, c);
    }
    }
    throw Error::validation("apply_augment: unknown op");
}

AugKind variant_kind(int variant) {
    if (variant < 1) throw Error::validation("variant_kind: variant must be >= 1");
    return kAllAugKinds[static_cast<size_t>((variant - 1) % 9)];
}

ImageU8 augment_variant(const ImageU8& img, int variant, const AugmentParams& params,
                        const RngState& rng) {
    if (variant < 0) throw Error::validation("augment_variant: variant must be >= 0");
    if (variant == 0) return img;
    return apply_augment(img, variant_kind(variant), params,
                         rng.fork("v" + std::to_string(variant)));
}

std::array<ImageU8, 10> expand_tenfold(const ImageU8& img, const AugmentParams& params,
                                       const RngState& rng) {
    std::array<ImageU8, 10> out;
    for (int k = 0; k < 10; ++k) out[static_cast<size_t>(k)] = augment_variant(img, k, params, rng);
    return out;
}

} // namespace drg::aug
