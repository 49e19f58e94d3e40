#pragma once

#include <string>

#include "owmf/detect.hpp"
#include "owmf/image.hpp"

namespace owmf {

enum class ImageFormat {
    pgm_binary, ///< P5, 8-bit
    pgm_ascii,  ///< P2, 8-bit
    raw_float   ///< "OWRF" header + little-endian float64 pixels, lossless
};

/// Loads PGM (P5/P2, maxval <= 255) or the raw float format, detected from
/// the file's magic bytes.
Image load_image(const std::string& path);

/// Writes the image in the given format. The 8-bit PGM writers clamp to
/// [0,255] and round half away from zero; raw_float is exact.
void save_image(const Image& img, const std::string& path,
                ImageFormat format = ImageFormat::pgm_binary);

/// The 8-bit save rule applied to one intensity.
std::uint8_t quantize_u8(double v);

/// Copy of the image after the 8-bit save rule (clamp + round), still held
/// as doubles; used for post-quantization PSNR checks.
Image quantized(const Image& img);

/// Writes a scalar field as headerless CSV lines "col,row,value", one line
/// per pixel in row-major order.
void save_field_csv(const ScalarField& field, const std::string& path);

/// Writes a scalar field as an 8-bit PGM, linearly rescaled so the value
/// range maps onto [0,255]; a constant field maps to 0.
void save_field_pgm(const ScalarField& field, const std::string& path);

} // namespace owmf
