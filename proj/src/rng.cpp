#include "xa/rng.hpp"

#include <cmath>

namespace xa {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngHandle RngHandle::child(std::uint64_t index) const {
    auto stream = stream_;
    stream.push_back(index);
    return RngHandle(seed_, std::move(stream));
}

RngHandle RngHandle::child(std::initializer_list<std::uint64_t> path) const {
    auto stream = stream_;
    stream.insert(stream.end(), path.begin(), path.end());
    return RngHandle(seed_, std::move(stream));
}

std::uint64_t RngHandle::key() const noexcept {
    // Length is folded in so that {} and {0} are different streams.
    std::uint64_t h = splitmix64(seed_ ^ 0x6A09E667F3BCC908ULL);
    for (std::uint64_t s : stream_) {
        h = splitmix64(h ^ splitmix64(s + 0x3C6EF372FE94F82BULL));
    }
    return splitmix64(h + stream_.size());
}

Rng::Rng(const RngHandle& handle) : engine_(handle.key()) {}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

double Rng::exponential(double rate) {
    return -std::log(uniform_open()) / rate;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound <= 1) {
        return 0;
    }
    // Largest multiple of bound representable; reject draws above it.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % bound;
}

}  // namespace xa
