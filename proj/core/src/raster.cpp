#include "skyrx/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "skyrx/binary_io.hpp"

namespace skyrx {

namespace {

// libpng reports errors by longjmp; nothing with a destructor lives between
// setjmp and the library frames.
void on_png_warning(png_structp, png_const_charp) {}

void append_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + len);
}

void no_flush(png_structp) {}

std::vector<std::uint8_t> encode_png(std::uint32_t width, std::uint32_t height, int color_type, int depth,
                                     const std::uint8_t* data, std::size_t row_bytes) {
    if (width == 0 || height == 0) throw InvalidInput("png: empty image");
    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(height);
    for (std::uint32_t y = 0; y < height; ++y) rows[y] = const_cast<png_bytep>(data + y * row_bytes);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, on_png_warning);
    if (!png) throw std::runtime_error("png: cannot create writer");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png: encoding failed");
    }
    png_set_write_fn(png, &out, append_bytes, no_flush);
    png_set_IHDR(png, info, width, height, depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 3);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

struct ReadCursor {
    std::span<const std::uint8_t> in;
    std::size_t pos = 0;
};

void read_bytes(png_structp png, png_bytep data, png_size_t len) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->in.size() - cur->pos < len) png_error(png, "truncated stream");
    std::memcpy(data, cur->in.data() + cur->pos, len);
    cur->pos += len;
}

std::uint16_t score_to_u16(float v) {
    const float c = std::clamp(v, 0.0f, 1.0f);
    return static_cast<std::uint16_t>(std::lround(c * 65535.0f));
}

std::uint8_t channel_to_u8(float v, float max) {
    if (!(max > 0.0f)) return 0;
    const float c = std::clamp(v / max, 0.0f, 1.0f);
    return static_cast<std::uint8_t>(std::lround(c * 255.0f));
}

}  // namespace

std::vector<std::uint8_t> encode_png_rgb8(std::uint32_t w, std::uint32_t h, std::span<const std::uint8_t> rgb) {
    if (rgb.size() != 3 * static_cast<std::size_t>(w) * h) throw InvalidInput("png: rgb buffer size mismatch");
    return encode_png(w, h, PNG_COLOR_TYPE_RGB, 8, rgb.data(), 3 * static_cast<std::size_t>(w));
}

std::vector<std::uint8_t> encode_png_gray8(std::uint32_t w, std::uint32_t h, std::span<const std::uint8_t> gray) {
    if (gray.size() != static_cast<std::size_t>(w) * h) throw InvalidInput("png: gray buffer size mismatch");
    return encode_png(w, h, PNG_COLOR_TYPE_GRAY, 8, gray.data(), w);
}

std::vector<std::uint8_t> encode_png_gray16(std::uint32_t w, std::uint32_t h, std::span<const std::uint16_t> gray) {
    if (gray.size() != static_cast<std::size_t>(w) * h) throw InvalidInput("png: gray buffer size mismatch");
    // PNG stores 16-bit samples big-endian.
    std::vector<std::uint8_t> be(2 * gray.size());
    for (std::size_t i = 0; i < gray.size(); ++i) {
        be[2 * i] = static_cast<std::uint8_t>(gray[i] >> 8);
        be[2 * i + 1] = static_cast<std::uint8_t>(gray[i] & 0xFF);
    }
    return encode_png(w, h, PNG_COLOR_TYPE_GRAY, 16, be.data(), 2 * static_cast<std::size_t>(w));
}

PngImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw FormatError("png: bad signature", 0);
    ReadCursor cur{bytes, 0};
    PngImage img;
    std::vector<std::uint8_t> raw;
    std::vector<png_bytep> rows;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, on_png_warning);
    if (!png) throw std::runtime_error("png: cannot create reader");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("png: malformed stream", cur.pos);
    }
    png_set_read_fn(png, &cur, read_bytes);
    png_read_info(png, info);
    img.width = png_get_image_width(png, info);
    img.height = png_get_image_height(png, info);
    img.channels = png_get_channels(png, info);
    img.bit_depth = png_get_bit_depth(png, info);
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    raw.resize(row_bytes * img.height);
    rows.resize(img.height);
    for (std::uint32_t y = 0; y < img.height; ++y) rows[y] = raw.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const std::size_t n = static_cast<std::size_t>(img.width) * img.height * img.channels;
    img.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        img.samples[i] = img.bit_depth == 16 ? static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]) : raw[i];
    }
    return img;
}

ChannelMax raster_channel_max(const Raster& r) {
    ChannelMax m;
    for (std::size_t i = 0; i < r.valid.size(); ++i) {
        if (!r.valid[i]) continue;
        m.r = std::max(m.r, r.rgb[3 * i]);
        m.g = std::max(m.g, r.rgb[3 * i + 1]);
        m.b = std::max(m.b, r.rgb[3 * i + 2]);
    }
    return m;
}

std::vector<std::uint8_t> raster_rgb8(const Raster& r, const ChannelMax& max) {
    std::vector<std::uint8_t> out(3 * r.valid.size(), 0);
    for (std::size_t i = 0; i < r.valid.size(); ++i) {
        if (!r.valid[i]) continue;
        out[3 * i] = channel_to_u8(r.rgb[3 * i], max.r);
        out[3 * i + 1] = channel_to_u8(r.rgb[3 * i + 1], max.g);
        out[3 * i + 2] = channel_to_u8(r.rgb[3 * i + 2], max.b);
    }
    return out;
}

std::vector<std::uint16_t> raster_score16(const Raster& r) {
    std::vector<std::uint16_t> out(r.valid.size(), 0);
    for (std::size_t i = 0; i < r.valid.size(); ++i) {
        if (r.valid[i]) out[i] = score_to_u16(r.score[i]);
    }
    return out;
}

void write_raster_png(const std::string& path, const Raster& r) {
    write_file_bytes(path, encode_png_rgb8(r.width, r.height, raster_rgb8(r, raster_channel_max(r))));
}

void write_score_png(const std::string& path, const Raster& r) {
    write_file_bytes(path, encode_png_gray16(r.width, r.height, raster_score16(r)));
}

void export_raster_f32(const std::string& base, const Raster& r) {
    std::vector<std::uint8_t> bytes;
    ByteWriter w(bytes);
    for (float v : r.score) w.f32(v);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < r.valid.size(); ++i) w.f32(r.rgb[3 * i + c]);
    }
    for (std::uint8_t v : r.valid) w.f32(v ? 1.0f : 0.0f);
    write_file_bytes(base + ".f32", bytes);

    std::ofstream txt(base + ".txt");
    if (!txt) throw std::runtime_error("cannot write " + base + ".txt");
    txt << std::setprecision(17);
    txt << "origin_east " << r.origin_east << "\n"
        << "origin_north " << r.origin_north << "\n"
        << "gsd " << r.gsd << "\n"
        << "width " << r.width << "\n"
        << "height " << r.height << "\n"
        << "planes score,red,green,blue,valid\n";
}

BoundingBox raster_bounds(const Raster& r) noexcept {
    if (r.empty()) return {};
    return {r.origin_east, r.origin_north - r.height * r.gsd, r.origin_east + r.width * r.gsd, r.origin_north};
}

std::vector<std::uint8_t> render_tile(const Raster& r, TileMode mode, const BoundingBox& bbox, std::uint32_t w,
                                      std::uint32_t h, const ChannelMax& max) {
    if (w == 0 || h == 0 || w > 4096 || h > 4096) throw InvalidInput("tile: size must be 1..4096");
    if (!bbox.valid()) throw InvalidInput("tile: bbox must satisfy e0 < e1 and n0 < n1");
    const double de = (bbox.east1 - bbox.east0) / w;
    const double dn = (bbox.north1 - bbox.north0) / h;
    if (mode == TileMode::Rgb) {
        std::vector<std::uint8_t> px(3 * static_cast<std::size_t>(w) * h, 0);
        for (std::uint32_t y = 0; y < h; ++y) {
            for (std::uint32_t x = 0; x < w; ++x) {
                const auto c = r.locate(bbox.east0 + (x + 0.5) * de, bbox.north1 - (y + 0.5) * dn);
                if (!c || !r.valid[*c]) continue;
                const std::size_t o = 3 * (static_cast<std::size_t>(y) * w + x);
                px[o] = channel_to_u8(r.rgb[3 * *c], max.r);
                px[o + 1] = channel_to_u8(r.rgb[3 * *c + 1], max.g);
                px[o + 2] = channel_to_u8(r.rgb[3 * *c + 2], max.b);
            }
        }
        return encode_png_rgb8(w, h, px);
    }
    std::vector<std::uint16_t> px(static_cast<std::size_t>(w) * h, 0);
    for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) {
            const auto c = r.locate(bbox.east0 + (x + 0.5) * de, bbox.north1 - (y + 0.5) * dn);
            if (c && r.valid[*c]) px[static_cast<std::size_t>(y) * w + x] = score_to_u16(r.score[*c]);
        }
    }
    return encode_png_gray16(w, h, px);
}

}  // namespace skyrx
