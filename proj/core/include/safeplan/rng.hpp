#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>

namespace safeplan {

std::uint64_t splitmix64(std::uint64_t x);

/*
  Seedable, splittable random stream. derive() produces an independent child
  stream from (seed, key path) without consuming any numbers from the parent,
  so results never depend on the order in which children are created.

  Bounded integers and reals are produced by our own rejection/bit-shift code
  rather than std:: distributions, whose output differs between standard
  library implementations.
*/
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const {
        return seed_;
    }

    RngStream derive(std::uint64_t key) const;
    RngStream derive(std::initializer_list<std::uint64_t> keys) const;

    std::uint64_t next_u64() {
        return engine_();
    }
    // Uniform in [0, bound). bound must be > 0.
    std::uint64_t uniform_below(std::uint64_t bound);
    // Uniform in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    // Uniform in [0, 1) with 53 random bits.
    double uniform01();
    bool bernoulli(double p) {
        return uniform01() < p;
    }

    // Full engine state, restorable with deserialize().
    std::string serialize() const;
    static RngStream deserialize(const std::string &text);

    bool operator==(const RngStream &other) const {
        return seed_ == other.seed_ && engine_ == other.engine_;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

// Stable 64-bit key for a string label, for use with RngStream::derive.
std::uint64_t stream_key(const std::string &label);

} // namespace safeplan
