#pragma once

// Lossy link simulation. Each frame independently survives or is dropped;
// the Gilbert-Elliott variant adds bursty losses through a two-state chain.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "skyrx/packet.hpp"

namespace skyrx {

struct ChannelModel {
    enum class Mode { Bernoulli, GilbertElliott };

    Mode mode = Mode::Bernoulli;
    double p_loss = 0.0;
    double p_good_to_bad = 0.0;
    double p_bad_to_good = 1.0;
    double loss_good = 0.0;
    double loss_bad = 1.0;
    std::uint64_t seed = 1;

    static ChannelModel lossless() { return {}; }
    static ChannelModel bernoulli(double p, std::uint64_t seed = 1);
    static ChannelModel gilbert_elliott(double p_gb, double p_bg, double loss_good, double loss_bad,
                                        std::uint64_t seed = 1);
};

// Parses "bernoulli:<p>" or "ge:<pgb>,<pbg>,<lg>,<lb>".
ChannelModel parse_channel(const std::string& text, std::uint64_t seed = 1);
std::string describe(const ChannelModel& model);

// Stateful per-frame survival decisions.
class Channel {
public:
    explicit Channel(const ChannelModel& model);

    bool survives();

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    ChannelModel model_;
    std::mt19937_64 rng_;
    bool bad_ = false;
};

std::vector<Frame> channel_transmit(const std::vector<Frame>& frames, const ChannelModel& model);

}  // namespace skyrx
