#include "drgrade/augment/image.hpp"

#include <cmath>

namespace drg::aug {

uint8_t quantize_u8(double v) {
    double r = std::round(v); // round halves away from zero
    if (r < 0.0) return 0;
    if (r > 255.0) return 255;
    return static_cast<uint8_t>(r);
}

double luma601(uint8_t r, uint8_t g, uint8_t b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

} // namespace drg::aug
