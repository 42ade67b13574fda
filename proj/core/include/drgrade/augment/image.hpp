#pragma once

#include <cstdint>
#include <vector>

#include "drgrade/common/error.hpp"

namespace drg::aug {

// 8-bit RGB image, row-major, 3 channels. The unit of augmentation and of
// model input after float conversion.
struct ImageU8 {
    int height = 0;
    int width = 0;
    std::vector<uint8_t> data; // height*width*3

    ImageU8() = default;
    ImageU8(int h, int w) : height(h), width(w) {
        if (h < 1 || w < 1) throw Error::validation("image: dimensions must be >= 1");
        data.assign(static_cast<size_t>(h) * static_cast<size_t>(w) * 3, 0);
    }

    static ImageU8 filled(int h, int w, uint8_t r, uint8_t g, uint8_t b) {
        ImageU8 img(h, w);
        for (size_t i = 0; i < img.data.size(); i += 3) {
            img.data[i] = r;
            img.data[i + 1] = g;
            img.data[i + 2] = b;
        }
        return img;
    }

    uint8_t& at(int y, int x, int c) {
        return data[(static_cast<size_t>(y) * static_cast<size_t>(width) + static_cast<size_t>(x)) * 3 +
                    static_cast<size_t>(c)];
    }
    uint8_t at(int y, int x, int c) const {
        return data[(static_cast<size_t>(y) * static_cast<size_t>(width) + static_cast<size_t>(x)) * 3 +
                    static_cast<size_t>(c)];
    }

    bool same_size(const ImageU8& other) const { return height == other.height && width == other.width; }
    size_t pixel_count() const { return static_cast<size_t>(height) * static_cast<size_t>(width); }
};

// The one float -> u8 conversion used everywhere: clamp to [0,255] and round
// half away from zero.
uint8_t quantize_u8(double v);

// BT.601 luma of an RGB triple, unquantized.
double luma601(uint8_t r, uint8_t g, uint8_t b);

} // namespace drg::aug
