#include "safeplan/rng.hpp"

#include "safeplan/errors.hpp"

#include <sstream>

namespace safeplan {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream RngStream::derive(std::uint64_t key) const {
    return RngStream(splitmix64(seed_ ^ splitmix64(key + 0x632be59bd9b4e019ULL)));
}

RngStream RngStream::derive(std::initializer_list<std::uint64_t> keys) const {
    RngStream s = *this;
    for (std::uint64_t k : keys)
        s = s.derive(k);
    return s;
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
    if (bound == 0)
        throw ValidationError("uniform_below: bound must be positive");
    // Rejection on the top of the range keeps the draw unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = engine_();
        if (r >= threshold)
            return r % bound;
    }
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo)
        throw ValidationError("uniform_int: empty range");
    auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0)
        return static_cast<std::int64_t>(engine_());
    return lo + static_cast<std::int64_t>(uniform_below(span));
}

double RngStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::string RngStream::serialize() const {
    std::ostringstream out;
    out << seed_ << ' ' << engine_;
    return out.str();
}

RngStream RngStream::deserialize(const std::string &text) {
    std::istringstream in(text);
    RngStream s;
    in >> s.seed_ >> s.engine_;
    if (!in)
        throw ValidationError("malformed serialized random stream");
    return s;
}

std::uint64_t stream_key(const std::string &label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace safeplan
