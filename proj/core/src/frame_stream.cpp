#include "skyrx/frame_stream.hpp"

#include "skyrx/binary_io.hpp"

namespace skyrx {

FrameStreamWriter::FrameStreamWriter(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
}

void FrameStreamWriter::write(const Frame& frame) { write_raw(encode_frame(frame)); }

void FrameStreamWriter::write_raw(const std::vector<std::uint8_t>& bytes) {
    std::vector<std::uint8_t> len;
    ByteWriter w(len);
    w.u32(static_cast<std::uint32_t>(bytes.size()));
    out_.write(reinterpret_cast<const char*>(len.data()), 4);
    out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out_) throw std::runtime_error("frame stream write failed");
}

void FrameStreamWriter::flush() { out_.flush(); }

std::vector<std::vector<std::uint8_t>> read_frame_records(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    ByteReader r(bytes);
    std::vector<std::vector<std::uint8_t>> records;
    while (r.remaining() > 0) {
        const std::uint32_t len = r.u32();
        auto rec = r.bytes(len);
        records.emplace_back(rec.begin(), rec.end());
    }
    return records;
}

void write_frame_stream(const std::string& path, const std::vector<Frame>& frames) {
    FrameStreamWriter w(path);
    for (const Frame& f : frames) w.write(f);
    w.flush();
}

std::vector<Frame> read_frame_stream(const std::string& path) {
    std::vector<Frame> frames;
    for (const auto& rec : read_frame_records(path)) frames.push_back(decode_frame(rec));
    return frames;
}

}  // namespace skyrx
