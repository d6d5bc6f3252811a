#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hvmax/rng.hpp"
#include "hvmax/stats.hpp"

using namespace hvmax::stats;
using namespace hvmax::record;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using hvmax::rng::Stream;

namespace {

// record whose per-epoch metrics are all set to the given series
RunRecord make_record(std::uint64_t seed, const std::vector<double>& series) {
    RunRecord r;
    r.seed = seed;
    for (std::size_t i = 0; i < series.size(); ++i) {
        EpochMetrics m;
        m.epoch = static_cast<int>(i);
        m.train = {series[i], series[i]};
        m.valid = {series[i], series[i]};
        m.test = {series[i], series[i]};
        r.epochs.push_back(m);
    }
    return r;
}

}  // namespace

TEST_CASE("mean and sample_stdev") {
    CHECK(mean(std::vector<double>{2.0, 4.0}) == 3.0);
    CHECK(sample_stdev(std::vector<double>{1.0, 1.0}) == 0.0);
    CHECK_THAT(sample_stdev(std::vector<double>{1.0, 2.0, 3.0}), WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(mean(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(sample_stdev(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("regularized incomplete beta against frozen references") {
    // reference values computed with a 60-digit library implementation
    CHECK_THAT(regularized_incomplete_beta(0.5, 0.5, 0.25),
               WithinAbs(0.3333333333333333, 1e-13));
    CHECK_THAT(regularized_incomplete_beta(2.0, 0.5, 0.0196078431372549),
               WithinRel(1.4512817061319762e-4, 1e-10));
    CHECK_THAT(regularized_incomplete_beta(4.5, 0.5, 0.9),
               WithinAbs(0.34343639613791355, 1e-13));
    CHECK_THAT(regularized_incomplete_beta(1.0, 1.0, 0.3), WithinAbs(0.3, 1e-14));
    // I(3,2,x) = 4x^3 - 3x^4 analytically
    CHECK_THAT(regularized_incomplete_beta(3.0, 2.0, 0.65),
               WithinAbs(0.56298125, 1e-13));

    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("student_t_cdf matches the high-precision oracle within 1e-10") {
    CHECK(student_t_cdf(0.0, 1) == 0.5);
    CHECK_THAT(student_t_cdf(1.0, 1), WithinAbs(0.75, 1e-14));            // arctan form
    CHECK_THAT(student_t_cdf(0.5, 2), WithinAbs(2.0 / 3.0, 1e-14));       // closed form
    CHECK_THAT(student_t_cdf(2.0, 4), WithinAbs(0.9419417382415922, 1e-10));
    CHECK_THAT(student_t_cdf(2.0, 10), WithinAbs(0.9633059826146299, 1e-10));
    CHECK_THAT(student_t_cdf(-1.5, 9), WithinAbs(0.08392532802853742, 1e-10));
    CHECK_THAT(student_t_cdf(2.5, 29), WithinAbs(0.9908373278307869, 1e-10));
    CHECK_THAT(student_t_cdf(13.8, 9), WithinAbs(0.999999883891787, 1e-10));
    CHECK_THAT(student_t_cdf(-3.25, 7), WithinAbs(0.0070286423575968695, 1e-10));
    CHECK_THROWS_AS(student_t_cdf(1.0, 0), std::invalid_argument);
}

TEST_CASE("student_t_cdf symmetry and monotonicity") {
    Stream s(70);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = s.uniform(-6.0, 6.0);
        const int df = 1 + static_cast<int>(s.below(40));
        CHECK_THAT(student_t_cdf(t, df) + student_t_cdf(-t, df), WithinAbs(1.0, 1e-14));
        CHECK(student_t_cdf(t + 0.5, df) > student_t_cdf(t, df));
    }
}

TEST_CASE("paired_t_test frozen oracle case") {
    // one-sample form: a carries the differences, b is zero
    const std::vector<double> a{1.1, 0.9, 1.0, 1.2, 0.8};
    const std::vector<double> b(5, 0.0);
    const TTestResult r = paired_t_test(a, b);
    CHECK_THAT(r.t, WithinRel(14.142135623730951, 1e-13));
    CHECK_THAT(r.p_two_sided, WithinRel(1.4512817061319762e-4, 1e-8));

    // same differences riding on a nonzero baseline
    const std::vector<double> base{0.4, 0.3, 0.2, 0.1, 0.0};
    std::vector<double> shifted(5);
    for (int i = 0; i < 5; ++i)
        shifted[static_cast<std::size_t>(i)] =
            a[static_cast<std::size_t>(i)] + base[static_cast<std::size_t>(i)];
    const TTestResult r2 = paired_t_test(shifted, base);
    CHECK_THAT(r2.t, WithinRel(14.142135623730951, 1e-10));
}

TEST_CASE("paired_t_test edge rules") {
    CHECK_THROWS_AS(paired_t_test(std::vector<double>{1.0, 2.0, 3.0},
                                  std::vector<double>{0.0, 1.0, 2.0}),
                    ZeroVariance);  // constant difference
    const TTestResult r =
        paired_t_test(std::vector<double>{1.0, -1.0}, std::vector<double>{0.0, 0.0});
    CHECK(r.t == 0.0);
    CHECK(r.p_two_sided == 1.0);

    CHECK_THROWS_AS(paired_t_test(std::vector<double>{1.0}, std::vector<double>{0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(paired_t_test(std::vector<double>{1.0, 2.0},
                                  std::vector<double>{0.0}),
                    std::invalid_argument);
}

TEST_CASE("paired_t_test antisymmetry is exact") {
    Stream s(71);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(s.below(10));
        std::vector<double> a, b;
        for (int i = 0; i < n; ++i) {
            a.push_back(s.uniform(0.0, 2.0));
            b.push_back(s.uniform(0.0, 2.0));
        }
        TTestResult fwd, rev;
        try {
            fwd = paired_t_test(a, b);
            rev = paired_t_test(b, a);
        } catch (const ZeroVariance&) {
            continue;
        }
        CHECK(fwd.t == -rev.t);
        CHECK(fwd.p_two_sided == rev.p_two_sided);
        CHECK(fwd.p_two_sided > 0.0);
        CHECK(fwd.p_two_sided <= 1.0);
        if (fwd.t != 0.0) CHECK(fwd.p_two_sided < 1.0);
    }
}

TEST_CASE("best_validation_epoch") {
    CHECK(best_validation_epoch(make_record(1, {5.0, 4.0, 3.0, 2.0})) == 3);
    CHECK(best_validation_epoch(make_record(1, {2.0, 2.0, 2.0})) == 0);  // tie rule
    CHECK(best_validation_epoch(make_record(1, {3.0, 1.0, 1.0, 4.0})) == 1);

    Stream s(72);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> series;
        const int n = 1 + static_cast<int>(s.below(30));
        for (int i = 0; i < n; ++i) series.push_back(s.uniform(0.0, 5.0));
        const int got = best_validation_epoch(make_record(1, series));
        int want = 0;
        for (int i = 1; i < n; ++i)
            if (series[static_cast<std::size_t>(i)] <
                series[static_cast<std::size_t>(want)])
                want = i;
        CHECK(got == want);
    }

    CHECK_THROWS_AS(best_validation_epoch(RunRecord{}), std::invalid_argument);
}

TEST_CASE("difference_series on identical records is zero") {
    const std::vector<RunRecord> runs{make_record(1, {3.0, 2.0}),
                                      make_record(2, {4.0, 1.0})};
    const auto series = difference_series(runs, runs, Split::Test, Metric::Mean);
    REQUIRE(series.size() == 2);
    for (const auto& pt : series) {
        CHECK(pt.median == 0.0);
        CHECK(pt.lower == 0.0);
        CHECK(pt.upper == 0.0);
    }
}

TEST_CASE("difference_series single pair collapses the spread") {
    const std::vector<RunRecord> base{make_record(7, {3.0, 2.5})};
    const std::vector<RunRecord> hv{make_record(7, {2.0, 2.0})};
    const auto series = difference_series(base, hv, Split::Valid, Metric::Mean);
    REQUIRE(series.size() == 2);
    CHECK(series[0].median == 1.0);
    CHECK(series[0].lower == 1.0);
    CHECK(series[0].upper == 1.0);
    CHECK_THAT(series[1].median, WithinAbs(0.5, 1e-15));
    CHECK(series[0].epoch == 0);
    CHECK(series[1].epoch == 1);
}

TEST_CASE("difference_series median and bounds against a sort oracle") {
    // diffs per seed at the single epoch: 3, 1, 2
    const std::vector<RunRecord> base{make_record(1, {5.0}), make_record(2, {4.0}),
                                      make_record(3, {6.0})};
    const std::vector<RunRecord> hv{make_record(1, {2.0}), make_record(2, {3.0}),
                                    make_record(3, {4.0})};
    const auto series = difference_series(base, hv, Split::Train, Metric::Max);
    REQUIRE(series.size() == 1);
    CHECK(series[0].median == 2.0);
    CHECK(series[0].lower == 1.0);
    CHECK(series[0].upper == 3.0);

    // even count: median averages the middle two (diffs 1, 2, 3, 10)
    const std::vector<RunRecord> base4{make_record(1, {2.0}), make_record(2, {3.0}),
                                       make_record(3, {4.0}), make_record(4, {11.0})};
    const std::vector<RunRecord> hv4{make_record(1, {1.0}), make_record(2, {1.0}),
                                     make_record(3, {1.0}), make_record(4, {1.0})};
    const auto s4 = difference_series(base4, hv4, Split::Test, Metric::Mean);
    CHECK_THAT(s4[0].median, WithinAbs(2.5, 1e-15));
    CHECK(s4[0].lower == 1.0);
    CHECK(s4[0].upper == 10.0);

    // seed pairing is by value, not by position
    const std::vector<RunRecord> swapped{make_record(3, {4.0}), make_record(1, {2.0}),
                                         make_record(2, {3.0})};
    const auto reordered = difference_series(base, swapped, Split::Train, Metric::Max);
    CHECK(reordered[0].median == 2.0);
}

TEST_CASE("difference_series validation") {
    const std::vector<RunRecord> base{make_record(1, {1.0}), make_record(2, {1.0})};
    const std::vector<RunRecord> unpaired{make_record(1, {1.0}), make_record(9, {1.0})};
    CHECK_THROWS_AS(difference_series(base, unpaired, Split::Test, Metric::Mean),
                    std::invalid_argument);

    const std::vector<RunRecord> dup{make_record(1, {1.0}), make_record(1, {1.0})};
    CHECK_THROWS_AS(difference_series(base, dup, Split::Test, Metric::Mean),
                    std::invalid_argument);
    CHECK_THROWS_AS(difference_series(dup, base, Split::Test, Metric::Mean),
                    std::invalid_argument);

    const std::vector<RunRecord> longer{make_record(1, {1.0, 2.0}),
                                        make_record(2, {1.0, 2.0})};
    CHECK_THROWS_AS(difference_series(base, longer, Split::Test, Metric::Mean),
                    std::invalid_argument);
    CHECK_THROWS_AS(difference_series({}, {}, Split::Test, Metric::Mean),
                    std::invalid_argument);
}
