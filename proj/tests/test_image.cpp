#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cabinseg/image.hpp"
#include "cabinseg/image_io.hpp"
#include "cabinseg/rng.hpp"
#include "helpers.hpp"

using namespace cabinseg;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "cabinseg_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("pgm decode is an identity on the payload") {
    const fs::path path = temp_file("tiny.pgm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n2 2\n255\n";
        const unsigned char bytes[4] = {0, 255, 128, 64};
        out.write(reinterpret_cast<const char*>(bytes), 4);
    }
    const ByteImage img = load_image(path);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.channels == 1);
    CHECK(img.samples == std::vector<std::uint8_t>{0, 255, 128, 64});
}

TEST_CASE("ppm decode keeps channel order") {
    const fs::path path = temp_file("red.ppm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "P6\n# a comment\n1 1\n255\n";
        const unsigned char bytes[3] = {255, 0, 0};
        out.write(reinterpret_cast<const char*>(bytes), 3);
    }
    const ByteImage img = load_image(path);
    CHECK(img.channels == 3);
    CHECK(img.samples == std::vector<std::uint8_t>{255, 0, 0});
}

TEST_CASE("png round trip is lossless") {
    Rng rng(7);
    ByteImage img(13, 9, 3);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng.next_below(256));
    const fs::path path = temp_file("roundtrip.png");
    save_image(img, path);
    const ByteImage back = load_image(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.channels == img.channels);
    CHECK(back.samples == img.samples);
}

TEST_CASE("1x1 red png decodes to the expected pixel") {
    const fs::path path = temp_file("red.png");
    ByteImage img(1, 1, 3);
    img.samples = {255, 0, 0};
    save_image(img, path);
    const ByteImage back = load_image(path);
    CHECK(back.samples == std::vector<std::uint8_t>{255, 0, 0});
}

TEST_CASE("truncated png raises a format error") {
    const fs::path good = temp_file("good.png");
    save_image(ByteImage(8, 8, 1, 42), good);
    const auto size = fs::file_size(good);
    std::vector<char> data(size / 2);
    {
        std::ifstream in(good, std::ios::binary);
        in.read(data.data(), static_cast<std::streamsize>(data.size()));
    }
    const fs::path bad = temp_file("trunc.png");
    {
        std::ofstream out(bad, std::ios::binary);
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
    }
    CHECK_THROWS_AS(load_image(bad), FormatError);
}

TEST_CASE("missing file raises an io error") {
    CHECK_THROWS_AS(load_image("/nonexistent/nope.png"), IoError);
}

TEST_CASE("16-bit inputs are rejected") {
    const fs::path pnm = temp_file("deep.pgm");
    {
        std::ofstream out(pnm, std::ios::binary);
        out << "P5\n2 2\n65535\n";
        const unsigned char bytes[8] = {0, 0, 1, 0, 2, 0, 3, 0};
        out.write(reinterpret_cast<const char*>(bytes), 8);
    }
    CHECK_THROWS_AS(load_image(pnm), FormatError);

    // hand-rolled minimal 16-bit grayscale PNG (1x1, zlib stored block)
    const fs::path png = temp_file("deep.png");
    {
        std::ofstream out(png, std::ios::binary);
        auto be32 = [&](std::uint32_t v) {
            const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                        static_cast<unsigned char>(v >> 16),
                                        static_cast<unsigned char>(v >> 8),
                                        static_cast<unsigned char>(v)};
            out.write(reinterpret_cast<const char*>(b), 4);
        };
        auto chunk = [&](const char* tag, const std::vector<unsigned char>& payload) {
            be32(static_cast<std::uint32_t>(payload.size()));
            std::vector<unsigned char> body(tag, tag + 4);
            body.insert(body.end(), payload.begin(), payload.end());
            out.write(reinterpret_cast<const char*>(body.data()),
                      static_cast<std::streamsize>(body.size()));
            std::uint32_t crc = 0xffffffffu;
            for (unsigned char c : body) {
                crc ^= c;
                for (int k = 0; k < 8; ++k)
                    crc = (crc >> 1) ^ (0xedb88320u & (~(crc & 1u) + 1u));
            }
            be32(~crc);
        };
        const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
        out.write(reinterpret_cast<const char*>(sig), 8);
        chunk("IHDR", {0, 0, 0, 1, 0, 0, 0, 1, 16, 0, 0, 0, 0});
        // zlib stream: stored block holding filter byte + two sample bytes
        chunk("IDAT", {0x78, 0x01, 0x01, 0x03, 0x00, 0xfc, 0xff, 0x00, 0x12,
                       0x34, 0x00, 0x5b, 0x00, 0x47});
        chunk("IEND", {});
    }
    CHECK_THROWS_AS(load_image(png), FormatError);
}

TEST_CASE("unsupported format raises a format error") {
    const fs::path path = temp_file("ascii.pnm");
    {
        std::ofstream out(path);
        out << "P2\n1 1\n255\n42\n";
    }
    CHECK_THROWS_AS(load_image(path), FormatError);
}

TEST_CASE("grayscale conversion endpoints and luma") {
    ByteImage img(3, 1, 3);
    // white, black, red
    img.samples = {255, 255, 255, 0, 0, 0, 255, 0, 0};
    const ScalarField g = to_grayscale(img);
    CHECK(g.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.at(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.at(2, 0) == doctest::Approx(0.299).epsilon(1e-12));
}

TEST_CASE("grayscale is a rescale on single-channel input and stays in [0,1]") {
    Rng rng(11);
    ByteImage img(16, 16, 1);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng.next_below(256));
    const ScalarField g = to_grayscale(img);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        CHECK(g.values[i] == doctest::Approx(img.samples[i] / 255.0).epsilon(1e-12));
        CHECK(g.values[i] >= 0.0);
        CHECK(g.values[i] <= 1.0);
    }
}

TEST_CASE("mask png uses 0/255 and round trips exactly") {
    const fs::path path = temp_file("mask.png");

    BinaryMask all_false(2, 2);
    save_mask(all_false, path);
    ByteImage raw = load_image(path);
    CHECK(raw.samples == std::vector<std::uint8_t>{0, 0, 0, 0});

    BinaryMask all_true(2, 2, true);
    save_mask(all_true, path);
    raw = load_image(path);
    CHECK(raw.samples == std::vector<std::uint8_t>{255, 255, 255, 255});

    Rng rng(3);
    for (int round = 0; round < 20; ++round) {
        const BinaryMask mask = testing::random_mask(rng, 17, 11);
        save_mask(mask, path);
        CHECK(load_mask(path) == mask);
    }
}

TEST_CASE("sequence loading sorts and requires frames") {
    const fs::path dir = fs::temp_directory_path() / "cabinseg_test" / "seq";
    fs::remove_all(dir);
    fs::create_directories(dir);
    save_image(ByteImage(2, 2, 1, 1), dir / "b.png");
    save_image(ByteImage(2, 2, 1, 2), dir / "a.png");
    const FrameSequence seq = load_sequence(dir);
    REQUIRE(seq.frames.size() == 2);
    CHECK(seq.frames[0].filename() == "a.png");
    CHECK(seq.frames[1].filename() == "b.png");
    CHECK_THROWS_AS(load_sequence(dir / "missing"), IoError);
}
