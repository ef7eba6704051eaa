#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace xa {

/// Identifies one independent random substream: a run seed plus a path of
/// indices such as {age_index, trial_index, role}.
///
/// Two handles with the same seed and stream always produce the same draws.
/// The engine and every variate transform below are fully specified here
/// (no std:: distributions), so output does not depend on the standard
/// library implementation or on which worker thread consumes the stream.
class RngHandle {
public:
    RngHandle() = default;
    explicit RngHandle(std::uint64_t seed, std::vector<std::uint64_t> stream = {})
        : seed_(seed), stream_(std::move(stream)) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const std::vector<std::uint64_t>& stream() const noexcept { return stream_; }

    /// Handle for a nested substream.
    [[nodiscard]] RngHandle child(std::uint64_t index) const;
    [[nodiscard]] RngHandle child(std::initializer_list<std::uint64_t> path) const;

    /// 64-bit key mixing seed and stream path (splitmix64 chain).
    [[nodiscard]] std::uint64_t key() const noexcept;

    friend bool operator==(const RngHandle&, const RngHandle&) = default;

private:
    std::uint64_t seed_ = 0;
    std::vector<std::uint64_t> stream_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Random variate source bound to one RngHandle.
class Rng {
public:
    explicit Rng(const RngHandle& handle);

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Exponential with the given rate, by inversion.
    double exponential(double rate);
    /// Uniform integer in [0, bound), unbiased (rejection on the top range).
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace xa
