#include "xa/event_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "xa/errors.hpp"
#include "xa/format.hpp"

namespace xa {

EventSequence::EventSequence(std::vector<double> times, double origin)
    : times_(std::move(times)), origin_(origin) {
    if (!std::isfinite(origin_)) {
        throw ValidationError("event origin must be finite");
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_[i])) {
            throw ValidationError("event time " + std::to_string(i) + " is not finite");
        }
        if (times_[i] < origin_) {
            throw ValidationError("event time " + std::to_string(i) + " precedes the origin");
        }
        if (i > 0 && !(times_[i - 1] < times_[i])) {
            throw ValidationError("event times must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

InterArrivalSequence::InterArrivalSequence(std::vector<double> taus) : taus_(std::move(taus)) {
    for (std::size_t i = 0; i < taus_.size(); ++i) {
        if (!(taus_[i] > 0.0) || !std::isfinite(taus_[i])) {
            throw ValidationError("inter-arrival time " + std::to_string(i) + " must be positive and finite");
        }
    }
}

double InterArrivalSequence::mean() const {
    if (taus_.empty()) {
        throw ValidationError("mean of an empty inter-arrival sequence");
    }
    return std::accumulate(taus_.begin(), taus_.end(), 0.0) / static_cast<double>(taus_.size());
}

InterArrivalSequence to_interarrivals(const EventSequence& events) {
    if (events.size() < 2) {
        throw EmptySampleError("at least two events are needed to form an inter-arrival time", 0);
    }
    const auto t = events.times();
    std::vector<double> taus(t.size() - 1);
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        taus[i] = t[i + 1] - t[i];
    }
    return InterArrivalSequence(std::move(taus));
}

EventSequence from_interarrivals(const InterArrivalSequence& taus, double origin, bool anchor_event) {
    std::vector<double> times;
    times.reserve(taus.size() + (anchor_event ? 1 : 0));
    if (anchor_event) {
        times.push_back(origin);
    }
    double t = origin;
    for (double tau : taus.taus()) {
        t += tau;
        times.push_back(t);
    }
    return EventSequence(std::move(times), origin);
}

std::size_t count_in(const EventSequence& events, double window_start, double window_end) {
    if (window_start > window_end) {
        throw ValidationError("count_in: window start after window end");
    }
    const auto t = events.times();
    const auto lo = std::upper_bound(t.begin(), t.end(), window_start);
    const auto hi = std::upper_bound(t.begin(), t.end(), window_end);
    return static_cast<std::size_t>(hi - lo);
}

void shuffle_in_place(std::span<double> values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(values[i - 1], values[j]);
    }
}

InterArrivalSequence shuffle(const InterArrivalSequence& taus, const RngHandle& handle) {
    std::vector<double> values = taus.values();
    Rng rng(handle);
    shuffle_in_place(values, rng);
    return InterArrivalSequence(std::move(values));
}

std::vector<double> read_values(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line.substr(first));
        double v = 0.0;
        std::string rest;
        if (!(ss >> v) || (ss >> rest)) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected one decimal number");
        }
        values.push_back(v);
    }
    return values;
}

LoadedSequence load_sequence(std::vector<double> values, InputMode mode, double jitter, const RngHandle& handle) {
    LoadedSequence out;
    const bool integral = !values.empty() && std::all_of(values.begin(), values.end(),
                                                         [](double v) { return v == std::floor(v); });
    if (integral) {
        out.warnings.emplace_back(
            "input values are all integers; discrete data makes the KS p-values conservative");
    }
    if (jitter < 0.0) {
        throw ValidationError("jitter must be non-negative");
    }
    if (mode == InputMode::timestamps) {
        if (jitter > 0.0) {
            Rng rng(handle);
            for (double& v : values) {
                v += jitter * rng.uniform_open();
            }
            std::sort(values.begin(), values.end());
        }
        const double origin = values.empty() ? 0.0 : std::min(0.0, values.front());
        out.events = EventSequence(std::move(values), origin);
        out.taus = to_interarrivals(out.events);
    } else {
        out.taus = InterArrivalSequence(std::move(values));
        out.events = from_interarrivals(out.taus, 0.0, true);
    }
    return out;
}

LoadedSequence load_sequence_file(const std::string& path, InputMode mode, double jitter, const RngHandle& rng) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open input file: " + path);
    }
    return load_sequence(read_values(in), mode, jitter, rng);
}

void write_values(std::ostream& out, std::span<const double> values) {
    for (double v : values) {
        out << format_double(v) << '\n';
    }
}

}  // namespace xa
