#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "xa/errors.hpp"
#include "xa/event_core.hpp"
#include "xa/rng.hpp"

using namespace xa;

TEST_SUITE("rng") {
    TEST_CASE("identical handles draw identical values") {
        Rng a(RngHandle(42, {3, 7})), b(RngHandle(42, {3, 7}));
        for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    }

    TEST_CASE("distinct streams and seeds diverge") {
        const RngHandle root(42);
        CHECK(root.child(0).key() != root.child(1).key());
        CHECK(root.child({1, 2}).key() != root.child({2, 1}).key());
        CHECK(root.child({0}).key() != root.key());
        CHECK(RngHandle(1).key() != RngHandle(2).key());
        CHECK(root.child(3).child(4) == root.child({3, 4}));
    }

    TEST_CASE("uniform_open stays inside (0, 1) and below() is in range") {
        Rng r(RngHandle(9));
        for (int i = 0; i < 10000; ++i) {
            const double u = r.uniform_open();
            CHECK((u > 0.0 && u < 1.0));
            CHECK(r.below(7) < 7u);
        }
    }

    TEST_CASE("normal variates have unit moments") {
        Rng r(RngHandle(5));
        std::vector<double> x(100000);
        for (auto& v : x) v = r.normal();
        CHECK(std::abs(oracle::mean(x)) < 0.01);
        CHECK(std::abs(oracle::variance(x) - 1.0) < 0.02);
    }
}

TEST_SUITE("event_core") {
    TEST_CASE("to_interarrivals takes consecutive differences") {
        CHECK(to_interarrivals(EventSequence({0, 1, 3, 6})).values() == std::vector<double>{1, 2, 3});
        CHECK(to_interarrivals(EventSequence({0, 1})).values() == std::vector<double>{1});
        CHECK_THROWS_AS((void)to_interarrivals(EventSequence({4})), EmptySampleError);
        CHECK_THROWS_AS((void)to_interarrivals(EventSequence{}), EmptySampleError);
    }

    TEST_CASE("invalid sequences are rejected at construction") {
        CHECK_THROWS_AS(EventSequence({0, 2, 1}), ValidationError);
        CHECK_THROWS_AS(EventSequence({1, 1}), ValidationError);
        CHECK_THROWS_AS(EventSequence({-1, 2}, 0.0), ValidationError);
        CHECK_THROWS_AS(EventSequence({0, NAN}), ValidationError);
        CHECK_THROWS_AS(InterArrivalSequence({1, 0}), ValidationError);
        CHECK_THROWS_AS(InterArrivalSequence({1, -2}), ValidationError);
        CHECK_NOTHROW(EventSequence{});
    }

    TEST_CASE("from_interarrivals accumulates from the origin") {
        CHECK(from_interarrivals(InterArrivalSequence({1, 1, 1}), 0.0).times().size() == 3);
        const auto e = from_interarrivals(InterArrivalSequence({1, 1, 1}), 0.0);
        CHECK(std::vector<double>(e.times().begin(), e.times().end()) == std::vector<double>{1, 2, 3});
        CHECK(from_interarrivals(InterArrivalSequence{}, 0.0).empty());
        const auto f = from_interarrivals(InterArrivalSequence({2.5}), 10.0);
        REQUIRE(f.size() == 1);
        CHECK(f[0] == 12.5);
    }

    TEST_CASE("round trip through waiting times with an anchored first event") {
        Rng r(RngHandle(11));
        std::vector<double> times{3.0};
        for (int i = 0; i < 200; ++i) times.push_back(times.back() + 1 + r.uniform());
        const EventSequence e(times, 0.0);
        const auto back = from_interarrivals(to_interarrivals(e), e[0], true);
        REQUIRE(back.size() == e.size());
        for (std::size_t i = 0; i < e.size(); ++i) CHECK(back[i] == doctest::Approx(e[i]).epsilon(1e-14));
    }

    TEST_CASE("count_in uses left-open windows") {
        const EventSequence e({1, 2, 3});
        CHECK(count_in(e, 0, 3) == 3);
        CHECK(count_in(e, 1, 2) == 1);
        CHECK(count_in(EventSequence{}, 0, 100) == 0);
        CHECK(count_in(e, 2, 2) == 0);
        CHECK_THROWS_AS((void)count_in(e, 3, 1), ValidationError);
    }

    TEST_CASE("shuffle preserves the multiset and is deterministic") {
        CHECK(shuffle(InterArrivalSequence({5}), RngHandle(1)).values() == std::vector<double>{5});
        const InterArrivalSequence t({1, 2, 3, 4, 5, 6, 7, 8});
        auto s = shuffle(t, RngHandle(3, {1}));
        CHECK(s == shuffle(t, RngHandle(3, {1})));
        auto sorted = s.values();
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == t.values());
    }

    TEST_CASE("shuffle is uniform over the 720 permutations of six items") {
        const InterArrivalSequence t({1, 2, 3, 4, 5, 6});
        std::map<std::vector<double>, int> freq;
        const int draws = 72000;
        for (int i = 0; i < draws; ++i) ++freq[shuffle(t, RngHandle(17, {static_cast<std::uint64_t>(i)})).values()];
        CHECK(freq.size() == 720);
        // Each cell is Binomial(draws, 1/720); compare the chi-square statistic
        // (719 dof) with its mean plus five standard deviations.
        const double expected = draws / 720.0;
        double chi2 = 0.0;
        for (const auto& [perm, count] : freq) {
            chi2 += (count - expected) * (count - expected) / expected;
            CHECK(std::abs(count - expected) < 4.0 * std::sqrt(expected * (1 - 1.0 / 720)) + 1);
        }
        CHECK(chi2 < 719 + 5 * std::sqrt(2 * 719.0));
    }

    TEST_CASE("text format round trips at full precision") {
        std::vector<double> v{0.1, 1.0 / 3.0, 2.5e-17, 12345.678901234567};
        std::stringstream ss;
        write_values(ss, v);
        CHECK(read_values(ss) == v);
    }

    TEST_CASE("reader skips comments and names bad lines") {
        std::istringstream ok("# header\n1.5\n\n2.5\n");
        CHECK(read_values(ok) == std::vector<double>{1.5, 2.5});
        std::istringstream bad("1\nabc\n");
        try {
            (void)read_values(bad);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("2") != std::string::npos);
        }
    }

    TEST_CASE("load_sequence interprets both modes and jitters ties") {
        auto ts = load_sequence({0, 1, 3}, InputMode::timestamps);
        CHECK(ts.taus.values() == std::vector<double>{1, 2});
        auto ia = load_sequence({1, 2}, InputMode::interarrivals);
        CHECK(ia.taus.values() == std::vector<double>{1, 2});
        CHECK_THROWS_AS((void)load_sequence({0, 1, 1, 2}, InputMode::timestamps), ValidationError);
        auto j = load_sequence({0, 1, 1, 2}, InputMode::timestamps, 1e-3, RngHandle(1));
        CHECK(j.events.size() == 4);
    }
}
