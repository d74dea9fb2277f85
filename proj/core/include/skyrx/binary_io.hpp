#pragma once

// Little-endian byte packing used by every file and wire format.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skyrx/errors.hpp"

namespace skyrx {

class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put_le(v); }
    void u32(std::uint32_t v) { put_le(v); }
    void u64(std::uint64_t v) { put_le(v); }
    void f32(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        put_le(bits);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        put_le(bits);
    }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void tag(std::string_view magic) { out_.insert(out_.end(), magic.begin(), magic.end()); }
    void zeros(std::size_t n) { out_.insert(out_.end(), n, 0); }

    std::size_t size() const noexcept { return out_.size(); }

private:
    template <typename U>
    void put_le(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    std::vector<std::uint8_t>& out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> in, std::size_t base_offset = 0)
        : in_(in), base_(base_offset) {}

    std::uint8_t u8() { return get_le<std::uint8_t>(); }
    std::uint16_t u16() { return get_le<std::uint16_t>(); }
    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    std::uint64_t u64() { return get_le<std::uint64_t>(); }
    float f32() {
        const std::uint32_t bits = get_le<std::uint32_t>();
        float v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    double f64() {
        const std::uint64_t bits = get_le<std::uint64_t>();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::span<const std::uint8_t> bytes(std::size_t n) {
        require(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    // Reads a fixed-width tag and throws if it differs from `magic`.
    void expect_tag(std::string_view magic, std::string_view what) {
        const std::size_t at = offset();
        auto b = bytes(magic.size());
        if (std::memcmp(b.data(), magic.data(), magic.size()) != 0) {
            throw FormatError(std::string(what) + ": bad magic, expected \"" + std::string(magic) + "\"", at);
        }
    }
    void skip(std::size_t n) { bytes(n); }

    std::size_t offset() const noexcept { return base_ + pos_; }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    void require(std::size_t n) const {
        if (in_.size() - pos_ < n) {
            throw FormatError("truncated data: need " + std::to_string(n) + " bytes, have " +
                                  std::to_string(in_.size() - pos_),
                              base_ + pos_);
        }
    }

    template <typename U>
    U get_le() {
        require(sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v = static_cast<U>(v | (static_cast<U>(in_[pos_ + i]) << (8 * i)));
        }
        pos_ += sizeof(U);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace skyrx
