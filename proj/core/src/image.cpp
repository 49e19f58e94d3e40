#include "owmf/image.hpp"

#include <algorithm>
#include <cmath>

namespace owmf {

namespace {

void check_dimensions(int width, int height) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("image dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

void check_finite(const std::vector<double>& data) {
    for (double v : data) {
        if (!std::isfinite(v)) {
            throw ValidationError("image intensities must be finite");
        }
    }
}

} // namespace

Image::Image(int width, int height, double fill)
    : width_(width), height_(height) {
    check_dimensions(width, height);
    if (!std::isfinite(fill)) {
        throw ValidationError("image fill value must be finite");
    }
    data_.assign(pixel_count(), fill);
}

Image::Image(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dimensions(width, height);
    if (data_.size() != pixel_count()) {
        throw ValidationError("image data length " + std::to_string(data_.size()) +
                              " does not match " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    check_finite(data_);
}

double Image::min_value() const {
    return *std::min_element(data_.begin(), data_.end());
}

double Image::max_value() const {
    return *std::max_element(data_.begin(), data_.end());
}

void WindowSpec::validate() const {
    if (search_radius < 1) {
        throw ValidationError("search radius must be >= 1");
    }
    if (patch_radius < 1) {
        throw ValidationError("patch radius must be >= 1");
    }
    if (detection_radius < 1) {
        throw ValidationError("detection radius must be >= 1");
    }
}

int mirror_index(int i, int n) {
    if (n == 1) {
        return 0;
    }
    if (i < 0) {
        i = -i;
    }
    if (i >= n) {
        i = 2 * (n - 1) - i;
    }
    return i;
}

Image mirror_extend(const Image& img, int radius) {
    if (radius < 0) {
        throw ValidationError("mirror radius must be >= 0");
    }
    if (img.empty()) {
        throw ValidationError("cannot extend an empty image");
    }
    // One reflection must resolve every virtual coordinate. A length-1 axis
    // is the exception: every fold lands back on the single sample.
    if ((img.width() > 1 && radius >= img.width()) ||
        (img.height() > 1 && radius >= img.height())) {
        throw ValidationError("mirror radius " + std::to_string(radius) +
                              " too large for " + std::to_string(img.width()) + "x" +
                              std::to_string(img.height()) +
                              " image (multi-fold reflection not supported)");
    }
    if (radius == 0) {
        return img;
    }

    const int w = img.width();
    const int h = img.height();
    const int ew = w + 2 * radius;
    const int eh = h + 2 * radius;
    std::vector<double> out(static_cast<std::size_t>(ew) * eh);

    std::vector<int> col_map(ew);
    for (int c = 0; c < ew; ++c) {
        col_map[c] = mirror_index(c - radius, w);
    }
    for (int r = 0; r < eh; ++r) {
        const int sr = mirror_index(r - radius, h);
        const double* src = img.data() + static_cast<std::size_t>(sr) * w;
        double* dst = out.data() + static_cast<std::size_t>(r) * ew;
        for (int c = 0; c < ew; ++c) {
            dst[c] = src[col_map[c]];
        }
    }
    return Image(ew, eh, std::move(out));
}

std::vector<PixelCoord> window_coords(PixelCoord center, int radius) {
    if (radius < 0) {
        throw ValidationError("window radius must be >= 0");
    }
    std::vector<PixelCoord> coords;
    coords.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
    for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
            coords.push_back({center.col + dc, center.row + dr});
        }
    }
    return coords;
}

std::vector<PixelCoord> deleted_window_coords(PixelCoord center, int d) {
    if (d < 1) {
        throw ValidationError("deleted neighborhood radius must be >= 1");
    }
    std::vector<PixelCoord> coords = window_coords(center, d);
    coords.erase(std::remove(coords.begin(), coords.end(), center), coords.end());
    return coords;
}

} // namespace owmf
