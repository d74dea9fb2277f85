#include "skyrx/channel.hpp"

#include <sstream>

namespace skyrx {

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidInput(std::string("channel: ") + name + " must lie in [0, 1]");
    }
}

void validate(const ChannelModel& m) {
    check_probability(m.p_loss, "p_loss");
    check_probability(m.p_good_to_bad, "p_good_to_bad");
    check_probability(m.p_bad_to_good, "p_bad_to_good");
    check_probability(m.loss_good, "loss_good");
    check_probability(m.loss_bad, "loss_bad");
}

}  // namespace

ChannelModel ChannelModel::bernoulli(double p, std::uint64_t seed) {
    ChannelModel m;
    m.mode = Mode::Bernoulli;
    m.p_loss = p;
    m.seed = seed;
    validate(m);
    return m;
}

ChannelModel ChannelModel::gilbert_elliott(double p_gb, double p_bg, double lg, double lb, std::uint64_t seed) {
    ChannelModel m;
    m.mode = Mode::GilbertElliott;
    m.p_good_to_bad = p_gb;
    m.p_bad_to_good = p_bg;
    m.loss_good = lg;
    m.loss_bad = lb;
    m.seed = seed;
    validate(m);
    return m;
}

ChannelModel parse_channel(const std::string& text, std::uint64_t seed) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidInput("channel: expected <mode>:<params>, got \"" + text + "\"");
    const std::string mode = text.substr(0, colon);
    std::vector<double> params;
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            params.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInput("channel: bad number \"" + item + "\"");
        }
    }
    if (mode == "bernoulli" && params.size() == 1) return ChannelModel::bernoulli(params[0], seed);
    if (mode == "ge" && params.size() == 4) {
        return ChannelModel::gilbert_elliott(params[0], params[1], params[2], params[3], seed);
    }
    throw InvalidInput("channel: expected bernoulli:<p> or ge:<pgb>,<pbg>,<lg>,<lb>, got \"" + text + "\"");
}

std::string describe(const ChannelModel& m) {
    std::ostringstream os;
    if (m.mode == ChannelModel::Mode::Bernoulli) {
        os << "bernoulli:" << m.p_loss;
    } else {
        os << "ge:" << m.p_good_to_bad << ',' << m.p_bad_to_good << ',' << m.loss_good << ',' << m.loss_bad;
    }
    return os.str();
}

Channel::Channel(const ChannelModel& model) : model_(model), rng_(model.seed) { validate(model_); }

bool Channel::survives() {
    if (model_.mode == ChannelModel::Mode::Bernoulli) return !(uniform() < model_.p_loss);
    const bool lost = uniform() < (bad_ ? model_.loss_bad : model_.loss_good);
    const double flip = bad_ ? model_.p_bad_to_good : model_.p_good_to_bad;
    if (uniform() < flip) bad_ = !bad_;
    return !lost;
}

std::vector<Frame> channel_transmit(const std::vector<Frame>& frames, const ChannelModel& model) {
    Channel ch(model);
    std::vector<Frame> out;
    out.reserve(frames.size());
    for (const Frame& f : frames) {
        if (ch.survives()) out.push_back(f);
    }
    return out;
}

}  // namespace skyrx
