#include "cabinseg/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace cabinseg {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    // libpng expects a longjmp; we re-enter C++ through the jmp buffer
    // installed by the caller. The message is stashed in the error ptr.
    auto* slot = static_cast<std::string*>(png_get_error_ptr(png));
    if (slot) *slot = msg ? msg : "libpng error";
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

bool has_png_signature(std::FILE* f) {
    unsigned char sig[8] = {};
    const std::size_t got = std::fread(sig, 1, 8, f);
    std::rewind(f);
    return got == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

ByteImage load_png(std::FILE* f, const std::filesystem::path& path) {
    std::string errmsg;
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_error_fn, png_warning_fn);
    if (!png) throw FormatError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw FormatError("libpng init failed");
    }

    std::vector<png_bytep> row_ptrs;
    ByteImage img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path.string() + ": " + (errmsg.empty() ? "corrupt PNG" : errmsg));
    }

    png_init_io(png, f);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (bit_depth == 16) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path.string() + ": 16-bit PNG not supported");
    }

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError(path.string() + ": unsupported channel count " +
                          std::to_string(channels));
    }

    img = ByteImage(static_cast<int>(w), static_cast<int>(h), channels);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        row_ptrs[y] = img.samples.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

// Binary PPM (P6) / PGM (P5) with maxval <= 255.
ByteImage load_pnm(std::FILE* f, const std::filesystem::path& path) {
    auto next_token = [&]() -> std::string {
        std::string tok;
        int c;
        while ((c = std::fgetc(f)) != EOF) {
            if (c == '#') {
                while ((c = std::fgetc(f)) != EOF && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        return tok;
    };

    const std::string magic = next_token();
    int channels;
    if (magic == "P5")
        channels = 1;
    else if (magic == "P6")
        channels = 3;
    else
        throw FormatError(path.string() + ": unsupported image format");

    const std::string ws = next_token(), hs = next_token(), ms = next_token();
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ws);
        h = std::stoi(hs);
        maxval = std::stoi(ms);
    } catch (const std::exception&) {
        throw FormatError(path.string() + ": malformed PNM header");
    }
    if (w < 1 || h < 1) throw FormatError(path.string() + ": malformed PNM header");
    if (maxval > 255) throw FormatError(path.string() + ": 16-bit PNM not supported");
    if (maxval < 1) throw FormatError(path.string() + ": malformed PNM header");

    ByteImage img(w, h, channels);
    const std::size_t expect = img.samples.size();
    if (std::fread(img.samples.data(), 1, expect, f) != expect)
        throw FormatError(path.string() + ": truncated PNM payload");
    return img;
}

void save_png(const ByteImage& img, const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw IoError("cannot open for writing: " + path.string());

    std::string errmsg;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &errmsg, png_error_fn, png_warning_fn);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }

    std::vector<png_bytep> row_ptrs(img.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path.string() + ": " + (errmsg.empty() ? "PNG write failed" : errmsg));
    }

    png_init_io(png, f.get());
    const int color_type = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        row_ptrs[y] = const_cast<png_bytep>(img.samples.data() +
                                            static_cast<std::size_t>(y) * img.width * img.channels);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool is_image_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

}  // namespace

ByteImage load_image(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) throw IoError("cannot open: " + path.string());
    if (has_png_signature(f.get())) return load_png(f.get(), path);
    return load_pnm(f.get(), path);
}

void save_image(const ByteImage& img, const std::filesystem::path& path) {
    save_png(img, path);
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    save_png(mask_to_image(mask), path);
}

BinaryMask load_mask(const std::filesystem::path& path) {
    ByteImage img = load_image(path);
    return image_to_mask(img);
}

FrameSequence load_sequence(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    FrameSequence seq;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && is_image_file(entry.path()))
            seq.frames.push_back(entry.path());
    std::sort(seq.frames.begin(), seq.frames.end());
    if (seq.frames.empty()) throw IoError("no frames found in " + dir.string());
    return seq;
}

}  // namespace cabinseg
