#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace owmf {

/// Thrown when a parameter or input violates a documented precondition.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown on file format or filesystem failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Integer pixel coordinate, (0,0) at the top-left corner. May lie outside
/// the image bounds; border handling resolves such coordinates by mirroring.
struct PixelCoord {
    int col = 0;
    int row = 0;

    friend bool operator==(PixelCoord a, PixelCoord b) {
        return a.col == b.col && a.row == b.row;
    }
};

/// Grayscale image with double-precision intensities stored row-major.
/// Intensities are nominally in [0,255] but are not clamped; clamping is a
/// save-time concern only. All values must be finite.
class Image {
public:
    Image() = default;
    Image(int width, int height, double fill = 0.0);
    Image(int width, int height, std::vector<double> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const { return data_.empty(); }

    double at(int col, int row) const {
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }
    double& at(int col, int row) {
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }
    const std::vector<double>& pixels() const { return data_; }

    double min_value() const;
    double max_value() const;

    friend bool operator==(const Image& a, const Image& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Square-window geometry: search radius h, patch radius eta and impulse
/// detection radius d, all in pixels (Chebyshev balls).
struct WindowSpec {
    int search_radius = 6;    // h; search window is (2h+1)^2 pixels
    int patch_radius = 12;    // eta; patch window is (2eta+1)^2 pixels
    int detection_radius = 2; // d; deleted neighborhood has (2d+1)^2-1 pixels

    int search_count() const { return (2 * search_radius + 1) * (2 * search_radius + 1); }
    int patch_count() const { return (2 * patch_radius + 1) * (2 * patch_radius + 1); }

    void validate() const;
};

/// Maps an arbitrary integer index onto [0,n-1] by whole-sample reflection
/// about the first and last samples (the border sample is not duplicated).
/// A single fold must suffice, i.e. |i| <= n-1 and i <= 2(n-1); a length-1
/// axis extends as a constant.
int mirror_index(int i, int n);

/// Extends the image by `radius` pixels on every side, reflecting
/// symmetrically about the border pixels (and about the corner pixels at
/// corners). radius must be small enough that one reflection suffices;
/// larger radii are rejected.
Image mirror_extend(const Image& img, int radius);

/// All (2*radius+1)^2 coordinates with Chebyshev distance <= radius from
/// `center`, in row-major order. Coordinates may fall outside any image.
std::vector<PixelCoord> window_coords(PixelCoord center, int radius);

/// window_coords minus the center: the deleted neighborhood of radius d.
std::vector<PixelCoord> deleted_window_coords(PixelCoord center, int d);

} // namespace owmf
