#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xa/rng.hpp"

namespace xa {

/// Strictly increasing event timestamps observed from `origin` onward.
class EventSequence {
public:
    EventSequence() = default;
    /// Throws ValidationError unless times are finite, strictly increasing
    /// and not before origin.
    explicit EventSequence(std::vector<double> times, double origin = 0.0);

    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    [[nodiscard]] double origin() const noexcept { return origin_; }
    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] bool empty() const noexcept { return times_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const { return times_[i]; }

    friend bool operator==(const EventSequence&, const EventSequence&) = default;

private:
    std::vector<double> times_;
    double origin_ = 0.0;
};

/// Positive waiting times between consecutive events.
class InterArrivalSequence {
public:
    InterArrivalSequence() = default;
    /// Throws ValidationError unless every value is finite and > 0.
    explicit InterArrivalSequence(std::vector<double> taus);

    [[nodiscard]] std::span<const double> taus() const noexcept { return taus_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return taus_; }
    [[nodiscard]] std::size_t size() const noexcept { return taus_.size(); }
    [[nodiscard]] bool empty() const noexcept { return taus_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const { return taus_[i]; }
    [[nodiscard]] double mean() const;

    friend bool operator==(const InterArrivalSequence&, const InterArrivalSequence&) = default;

private:
    std::vector<double> taus_;
};

/// Differences of consecutive events; the origin-to-first-event gap is not a
/// waiting time and is dropped. Throws EmptySampleError for < 2 events.
[[nodiscard]] InterArrivalSequence to_interarrivals(const EventSequence& events);

/// Cumulative sums from origin: times[k] = origin + taus[0] + ... + taus[k].
/// With anchor_event, origin itself is emitted as the first event, which makes
/// from_interarrivals(to_interarrivals(e), e[0], true) reproduce e.
[[nodiscard]] EventSequence from_interarrivals(const InterArrivalSequence& taus, double origin = 0.0,
                                               bool anchor_event = false);

/// Number of events t with window_start < t <= window_end.
[[nodiscard]] std::size_t count_in(const EventSequence& events, double window_start, double window_end);

/// Uniform random permutation (Fisher-Yates) driven by the handle's substream.
[[nodiscard]] InterArrivalSequence shuffle(const InterArrivalSequence& taus, const RngHandle& rng);

void shuffle_in_place(std::span<double> values, Rng& rng);

// ---------------------------------------------------------------------------
// Newline-delimited text format: one decimal number per line, '#' comments.

enum class InputMode { timestamps, interarrivals };

struct LoadedSequence {
    EventSequence events;
    InterArrivalSequence taus;
    std::vector<std::string> warnings;
};

/// Parses numbers; throws ValidationError naming the offending line.
[[nodiscard]] std::vector<double> read_values(std::istream& in);

/// Builds both views from raw values. With jitter > 0, timestamps get
/// uniform (0, jitter) noise before validation so exact ties are broken.
[[nodiscard]] LoadedSequence load_sequence(std::vector<double> values, InputMode mode,
                                           double jitter = 0.0, const RngHandle& rng = RngHandle{});

[[nodiscard]] LoadedSequence load_sequence_file(const std::string& path, InputMode mode,
                                                double jitter = 0.0, const RngHandle& rng = RngHandle{});

void write_values(std::ostream& out, std::span<const double> values);

}  // namespace xa
