#pragma once

// ".fst" record/replay file: a sequence of (u32 length, frame bytes) records.

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "skyrx/packet.hpp"

namespace skyrx {

class FrameStreamWriter {
public:
    explicit FrameStreamWriter(const std::string& path);

    void write(const Frame& frame);
    void write_raw(const std::vector<std::uint8_t>& bytes);
    void flush();

private:
    std::ofstream out_;
};

// Raw records in file order; frames are decoded by the consumer so a single
// malformed record does not poison the rest of the stream.
std::vector<std::vector<std::uint8_t>> read_frame_records(const std::string& path);

void write_frame_stream(const std::string& path, const std::vector<Frame>& frames);
std::vector<Frame> read_frame_stream(const std::string& path);

}  // namespace skyrx
