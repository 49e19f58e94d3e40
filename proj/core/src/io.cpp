#include "owmf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace owmf {

namespace {

constexpr char kRawMagic[4] = {'O', 'W', 'R', 'F'};

// PGM token reader: skips whitespace and '#' comment lines.
int next_pgm_int(std::istream& in, const std::string& path) {
    for (;;) {
        const int ch = in.peek();
        if (ch == EOF) {
            throw IoError(path + ": truncated PGM header");
        }
        if (ch == '#') {
            std::string dummy;
            std::getline(in, dummy);
            continue;
        }
        if (std::isspace(ch)) {
            in.get();
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) {
        throw IoError(path + ": malformed PGM header");
    }
    return value;
}

Image load_pgm(std::istream& in, bool binary, const std::string& path) {
    const int width = next_pgm_int(in, path);
    const int height = next_pgm_int(in, path);
    const int maxval = next_pgm_int(in, path);
    if (width <= 0 || height <= 0) {
        throw IoError(path + ": invalid PGM dimensions");
    }
    if (maxval <= 0 || maxval > 255) {
        throw IoError(path + ": unsupported PGM maxval " + std::to_string(maxval) +
                      " (only 8-bit images are supported)");
    }
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<double> data(n);
    if (binary) {
        in.get(); // single whitespace after maxval
        std::vector<std::uint8_t> bytes(n);
        in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n) {
            throw IoError(path + ": truncated PGM pixel data");
        }
        for (std::size_t i = 0; i < n; ++i) {
            data[i] = bytes[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            int v = 0;
            if (!(in >> v)) {
                throw IoError(path + ": truncated ASCII PGM pixel data");
            }
            if (v < 0 || v > maxval) {
                throw IoError(path + ": ASCII PGM sample out of range");
            }
            data[i] = v;
        }
    }
    return Image(width, height, std::move(data));
}

Image load_raw(std::istream& in, const std::string& path) {
    std::uint32_t dims[2];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in) {
        throw IoError(path + ": truncated raw header");
    }
    const int width = static_cast<int>(dims[0]);
    const int height = static_cast<int>(dims[1]);
    if (width <= 0 || height <= 0) {
        throw IoError(path + ": invalid raw dimensions");
    }
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<double> data(n);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double)) {
        throw IoError(path + ": truncated raw pixel data");
    }
    return Image(width, height, std::move(data));
}

} // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in) {
        throw IoError(path + ": file too short");
    }
    if (magic[0] == 'P' && magic[1] == '5') {
        return load_pgm(in, true, path);
    }
    if (magic[0] == 'P' && magic[1] == '2') {
        return load_pgm(in, false, path);
    }
    if (magic[0] == kRawMagic[0] && magic[1] == kRawMagic[1]) {
        char rest[2];
        in.read(rest, 2);
        if (in && rest[0] == kRawMagic[2] && rest[1] == kRawMagic[3]) {
            return load_raw(in, path);
        }
    }
    throw IoError(path + ": unrecognized image format (expected PGM P5/P2 or OWRF raw)");
}

std::uint8_t quantize_u8(double v) {
    v = std::clamp(v, 0.0, 255.0);
    // round half away from zero; nonnegative after the clamp
    return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

Image quantized(const Image& img) {
    std::vector<double> data(img.pixels());
    for (double& v : data) {
        v = quantize_u8(v);
    }
    return Image(img.width(), img.height(), std::move(data));
}

void save_image(const Image& img, const std::string& path, ImageFormat format) {
    if (img.empty()) {
        throw ValidationError("cannot save an empty image");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    const std::size_t n = img.pixel_count();
    switch (format) {
    case ImageFormat::pgm_binary: {
        out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
        std::vector<std::uint8_t> bytes(n);
        for (std::size_t i = 0; i < n; ++i) {
            bytes[i] = quantize_u8(img.data()[i]);
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(n));
        break;
    }
    case ImageFormat::pgm_ascii: {
        out << "P2\n" << img.width() << " " << img.height() << "\n255\n";
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                out << static_cast<int>(quantize_u8(img.at(c, r)));
                out << (c + 1 == img.width() ? '\n' : ' ');
            }
        }
        break;
    }
    case ImageFormat::raw_float: {
        out.write(kRawMagic, 4);
        const std::uint32_t dims[2] = {static_cast<std::uint32_t>(img.width()),
                                       static_cast<std::uint32_t>(img.height())};
        out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
        out.write(reinterpret_cast<const char*>(img.data()),
                  static_cast<std::streamsize>(n * sizeof(double)));
        break;
    }
    }
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

void save_field_csv(const ScalarField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    std::ostringstream buf;
    buf.precision(17);
    for (int r = 0; r < field.height(); ++r) {
        for (int c = 0; c < field.width(); ++c) {
            buf << c << ',' << r << ',' << field.at(c, r) << '\n';
        }
    }
    out << buf.str();
    if (!out) {
        throw IoError("failed writing " + path);
    }
}

void save_field_pgm(const ScalarField& field, const std::string& path) {
    const double lo = *std::min_element(field.values().begin(), field.values().end());
    const double hi = *std::max_element(field.values().begin(), field.values().end());
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::vector<double> data(field.values());
    for (double& v : data) {
        v = (v - lo) * scale;
    }
    save_image(Image(field.width(), field.height(), std::move(data)), path,
               ImageFormat::pgm_binary);
}

} // namespace owmf
