#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hysfem/hysteresis/play.hpp"
#include "hysfem/hysteresis/preisach.hpp"
#include "oracles.hpp"

using namespace hysfem;
using namespace hysfem::hysteresis;
using hysfem::testkit::benchmark_preisach;

namespace {

const PlayParams kTable1Play{-0.5, 0.5, 2.0};

double outputs_after(const std::vector<double>& inputs, const PreisachParams& p, PreisachMemory m) {
    for (double u : inputs) preisach_update_in_place(m, u, p);
    return preisach_output(m, p);
}

}  // namespace

TEST(PlayInit, ClampFormula) {
    EXPECT_EQ(play_init(0.0, 0.0, kTable1Play).w, 0.0);
    EXPECT_EQ(play_init(0.0, 5.0, kTable1Play).w, 1.0);
    EXPECT_EQ(play_init(2.0, 0.0, kTable1Play).w, 3.0);
}

TEST(PlayUpdate, MatchesStopOracle) {
    struct Case {
        double w, u_prev, u_new, expected;
    };
    // u_prev is any input consistent with w
    for (const auto& c : {Case{0.0, 0.0, 2.0, 3.0}, Case{3.0, 2.0, 1.8, 3.0}, Case{3.0, 2.0, 0.5, 2.0}}) {
        EXPECT_EQ(play_update({c.w}, c.u_new, kTable1Play).w, c.expected);
        testkit::StopOracle oracle(c.u_prev, c.w, kTable1Play);
        EXPECT_NEAR(oracle.advance(c.u_new, 10000), c.expected, 1e-12);
    }
}

TEST(PlayUpdate, StaysInBand) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-5.0, 5.0);
    PlayState s = play_init(0.0, 0.0, kTable1Play);
    for (int k = 0; k < 1000; ++k) {
        const double u = U(rng);
        s = play_update(s, u, kTable1Play);
        EXPECT_LE(kTable1Play.c * (u - kTable1Play.b), s.w);
        EXPECT_LE(s.w, kTable1Play.c * (u - kTable1Play.a));
    }
}

TEST(PlayUpdate, RandomReversalsMatchOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = testkit::random_reversal_input(rng, 30, -3.0, 3.0);
        PlayState s = play_init(u[0], 0.0, kTable1Play);
        testkit::StopOracle oracle(u[0], 0.0, kTable1Play);
        for (std::size_t k = 1; k < u.size(); ++k) {
            s = play_update(s, u[k], kTable1Play);
            ASSERT_NEAR(s.w, oracle.advance(u[k], 10000), 1e-10);
        }
    }
}

TEST(PlayUpdate, RejectsInvalidParams) {
    EXPECT_THROW((PlayParams{1.0, 0.0, 1.0}.validate()), InvalidArgument);
    EXPECT_THROW((PlayParams{0.0, 1.0, 0.0}.validate()), InvalidArgument);
}

TEST(GeneralizedPlay, ReducesToLinearPlay) {
    const auto& p = kTable1Play;
    GeneralizedPlayParams g{[&](double u) { return p.c * (u - p.a); }, [&](double u) { return p.c * (u - p.b); }};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    double w = 0.0;
    PlayState s{0.0};
    for (int k = 0; k < 200; ++k) {
        const double u = U(rng);
        w = generalized_play_update(w, u, g);
        s = play_update(s, u, p);
        ASSERT_EQ(w, s.w);
    }
}

TEST(GeneralizedPlay, InsideBandUnchanged) {
    GeneralizedPlayParams g{[](double u) { return u + 1.0; }, [](double u) { return u - 1.0; }};
    EXPECT_EQ(generalized_play_update(0.3, 0.0, g), 0.3);
}

TEST(GeneralizedPlay, DegenerateBandCollapses) {
    auto gamma = [](double u) { return std::tanh(u); };
    GeneralizedPlayParams g{gamma, gamma};
    for (double w : {-10.0, 0.0, 10.0}) EXPECT_DOUBLE_EQ(generalized_play_update(w, 0.7, g), std::tanh(0.7));
}

TEST(GeneralizedPlay, RejectsCrossedCurves) {
    GeneralizedPlayParams g{[](double u) { return u - 1.0; }, [](double u) { return u + 1.0; }};
    EXPECT_THROW(generalized_play_update(0.0, 0.0, g), InvalidArgument);
}

TEST(PlayLevelFunction, KinksAndSlopes) {
    const auto phi = play_level_function(0.0, kTable1Play, 1.0);
    ASSERT_EQ(phi.kinks().size(), 2u);
    EXPECT_EQ(phi.kinks()[0], -0.5);
    EXPECT_EQ(phi.kinks()[1], 0.5);
    EXPECT_EQ(phi(-2.0).d1, 2.0);
    EXPECT_EQ(phi(0.0).d1, 0.0);
    EXPECT_EQ(phi(2.0).d1, 2.0);
    EXPECT_EQ(phi.lipschitz_bound(), 2.0);
}

TEST(PlayLevelFunction, ZeroScaleIsConstant) {
    const auto phi = play_level_function(1.0, kTable1Play, 0.0);
    EXPECT_TRUE(phi.kinks().empty());
    for (double x : {-3.0, 0.0, 3.0}) EXPECT_EQ(phi.value(x), 0.0);
}

TEST(PlayLevelFunction, MatchesPointwiseUpdate) {
    const double w = 0.7;
    const double scale = 0.37;
    const auto phi = play_level_function(w, kTable1Play, scale);
    for (int i = 0; i <= 100; ++i) {
        const double x = -3.0 + 6.0 * i / 100.0;
        EXPECT_DOUBLE_EQ(phi.value(x), scale * play_update({w}, x, kTable1Play).w) << x;
    }
    EXPECT_LT(phi.max_continuity_defect(), 1e-14);
}

TEST(PreisachParams, AntiderivativeTableMatchesQuadrature) {
    const auto p = benchmark_preisach();
    for (std::size_t j : {0u, 17u, 50u, 99u}) {
        for (double s : {-400.0, -95.3, -1.25, 0.0, 0.4, 12.0, 91.24317, 250.0, 700.0}) {
            const double oracle = testkit::composite_gauss([&](double x) { return p->density(p->r(j), x); }, s);
            EXPECT_NEAR(p->antiderivative(j, s).value, oracle, 1e-12 * (1.0 + std::abs(oracle))) << j << ' ' << s;
        }
    }
}

TEST(PreisachParams, AntiderivativeDerivativesAreDensity) {
    const auto p = benchmark_preisach();
    for (std::size_t j : {3u, 60u}) {
        for (double s : {-120.0, -0.3, 7.7, 88.0}) {
            const Jet jet = p->antiderivative(j, s);
            EXPECT_NEAR(jet.d1, p->density(p->r(j), s), 1e-12 * (1.0 + std::abs(jet.d1)));
            const double h = 1e-4;
            const double fd = (p->density(p->r(j), s + h) - p->density(p->r(j), s - h)) / (2 * h);
            EXPECT_NEAR(jet.d2, fd, 1e-8 * (1.0 + std::abs(fd)));
        }
    }
}

TEST(PreisachParams, DensityIsEvenInSigma) {
    const LorentzianDensity d;
    for (double r : {1.0, 50.0, 300.0})
        for (double s : {0.5, 40.0, 200.0}) EXPECT_NEAR(d(r, s), d(r, -s), 1e-18);
}

TEST(PreisachInit, RedDotDrive) {
    const auto p = benchmark_preisach();
    const auto m = preisach_init(0.0, DriveFromSaturation{0.0, {308.672}}, *p);
    for (std::size_t j = 0; j < p->size(); ++j) {
        EXPECT_LE(-p->r(j) - 1e-12, m.plays[j]);
        EXPECT_LE(m.plays[j], p->r(j) + 1e-12);
    }
    // plays reached by the drive sit at 308.672 - r and were then pulled down by u = 0
    const double after_drive = preisach_output(m, *p);
    EXPECT_GT(after_drive, 0.0);
}

TEST(PreisachInit, DemagnetizedMemoryIsZero) {
    const auto p = benchmark_preisach();
    const auto m = preisach_init(0.0, ExplicitPlays{std::vector<double>(p->size(), 0.0)}, *p);
    EXPECT_EQ(preisach_output(m, *p), 0.0);
}

TEST(PreisachInit, SingleNodeReducesToPlay) {
    auto box = [](double, double) { return 1.0; };
    PreisachParams p({0.5}, {1.0}, box, {}, SigmaTableOptions{4.0, 0.5});
    const auto m = preisach_init(2.0, DriveFromSaturation{4.0, {}}, p);
    EXPECT_DOUBLE_EQ(m.plays[0], play_init(2.0, -4.0 + 0.5, PlayParams{-0.5, 0.5, 1.0}).w);
}

TEST(PreisachInit, RejectsInconsistentPlays) {
    const auto p = benchmark_preisach();
    std::vector<double> plays(p->size(), 0.0);
    plays[0] = 10.0;  // r_0 is about 2.1
    EXPECT_THROW(preisach_init(0.0, ExplicitPlays{plays}, *p), InvalidArgument);
}

TEST(PreisachUpdate, SaturationSweep) {
    const auto p = benchmark_preisach();
    auto m = preisach_init(0.0, ExplicitPlays{std::vector<double>(p->size(), 0.0)}, *p);
    const double top = 1000.0;
    m = preisach_update(m, top, *p);
    for (std::size_t j = 0; j < p->size(); ++j) EXPECT_DOUBLE_EQ(m.plays[j], top - p->r(j));
}

TEST(PreisachUpdate, SameInputIsIdentity) {
    const auto p = benchmark_preisach();
    auto m = preisach_init(37.0, DriveFromSaturation{0.0, {120.0, -40.0}}, *p);
    const auto again = preisach_update(m, 37.0, *p);
    EXPECT_EQ(again.plays, m.plays);
}

TEST(PreisachUpdate, TwoReversalsMatchOracle) {
    const auto p = benchmark_preisach();
    const auto m0 = preisach_init(0.0, ExplicitPlays{std::vector<double>(p->size(), 0.0)}, *p);
    testkit::PreisachOracle oracle(0.0, m0, *p);
    auto m = m0;
    for (double u : {250.0, -80.0, 30.0}) {
        m = preisach_update(m, u, *p);
        oracle.advance(u, 10000);
    }
    const auto expected = oracle.plays();
    for (std::size_t j = 0; j < p->size(); ++j) EXPECT_NEAR(m.plays[j], expected[j], 1e-10);
}

TEST(PreisachOutput, BoxDensityIsClampedPlay) {
    // omega = 1 on |sigma| <= 2
    auto box = [](double, double s) { return std::abs(s) <= 2.0 ? 1.0 : 0.0; };
    PreisachParams p({1.0}, {0.25}, box, [](double, double) { return 0.0; }, SigmaTableOptions{2.0, 0.5});
    for (double w : {-3.0, -2.0, -0.7, 0.0, 1.1, 2.0, 3.5}) {
        PreisachMemory m{{w}};
        EXPECT_NEAR(preisach_output(m, p), 2.0 * 0.25 * std::clamp(w, -2.0, 2.0), 1e-12) << w;
    }
}

TEST(PreisachOutput, MajorLoopSaturatesAndIsOdd) {
    const auto p = benchmark_preisach();
    const auto zero = preisach_init(0.0, ExplicitPlays{std::vector<double>(p->size(), 0.0)}, *p);
    std::vector<double> up, down;
    auto m = zero;
    for (int i = 0; i <= 200; ++i) preisach_update_in_place(m, 1500.0 * i / 200.0, *p);
    for (int i = 0; i <= 400; ++i) {
        preisach_update_in_place(m, 1500.0 - 3000.0 * i / 400.0, *p);
        down.push_back(preisach_output(m, *p));
    }
    for (int i = 0; i <= 400; ++i) {
        preisach_update_in_place(m, -1500.0 + 3000.0 * i / 400.0, *p);
        up.push_back(preisach_output(m, *p));
    }
    // odd symmetry: descending branch at u equals minus the ascending branch at -u
    for (int i = 0; i <= 400; ++i) EXPECT_NEAR(down[i], -up[i], 1e-9 * std::abs(up.back()));
    // saturation: output barely moves over the last tenth of the sweep
    EXPECT_LT(std::abs(up[400] - up[360]), 1e-2 * std::abs(up[400]));
    EXPECT_GT(up[400], 0.0);
}

TEST(PreisachLevelFunction, MatchesCopyUpdateOracle) {
    const auto p = benchmark_preisach();
    const auto m = preisach_init(10.0, DriveFromSaturation{0.0, {308.672, -50.0}}, *p);
    const double scale = 0.8;
    const double offset = -3.0;
    const auto phi = preisach_level_function(m, p, scale, offset);
    for (int i = 0; i <= 200; ++i) {
        const double x = -500.0 + 1000.0 * i / 200.0;
        const double expected = scale * preisach_output(preisach_update(m, x, *p), *p) + offset;
        EXPECT_NEAR(phi.value(x), expected, 1e-12 * (1.0 + std::abs(expected))) << x;
    }
}

TEST(PreisachLevelFunction, DerivativeMatchesFiniteDifference) {
    const auto p = benchmark_preisach();
    const auto m = preisach_init(0.0, DriveFromSaturation{0.0, {308.672}}, *p);
    const auto phi = preisach_level_function(m, p, 1.0);
    const auto& k = phi.kinks();
    for (std::size_t piece = 1; piece < k.size(); piece += 13) {
        const double x = 0.5 * (k[piece - 1] + k[piece]);
        if (k[piece] - k[piece - 1] < 1e-1) continue;
        const double h = 1e-3;
        const double fd = (phi.value(x + h) - phi.value(x - h)) / (2 * h);
        const double d = phi(x).d1;
        if (std::abs(d) < 1e-8) {
            EXPECT_NEAR(fd, d, 1e-7);
        } else {
            EXPECT_NEAR(fd, d, 1e-6 * std::abs(d)) << x;
        }
    }
}

TEST(PreisachLevelFunction, KinksAreSwitchPoints) {
    const auto p = benchmark_preisach();
    const auto m = preisach_init(0.0, DriveFromSaturation{0.0, {100.0}}, *p);
    const auto phi = preisach_level_function(m, p, 1.0);
    const auto& k = phi.kinks();
    EXPECT_TRUE(std::is_sorted(k.begin(), k.end()));
    for (std::size_t j = 0; j < p->size(); ++j) {
        for (double s : {m.plays[j] - p->r(j), m.plays[j] + p->r(j)}) {
            const auto it = std::lower_bound(k.begin(), k.end(), s - 1e-9 * (1 + std::abs(s)));
            ASSERT_TRUE(it != k.end());
            EXPECT_NEAR(*it, s, 1e-9 * (1 + std::abs(s)));
        }
    }
    EXPECT_LT(phi.max_continuity_defect(), 1e-9);
}

TEST(PreisachLevelFunction, SingleNodeIsOmegaOfPlay) {
    auto box = [](double, double) { return 1.0; };
    auto p = std::make_shared<const PreisachParams>(std::vector<double>{0.5}, std::vector<double>{1.0}, box,
                                                    [](double, double) { return 0.0; }, SigmaTableOptions{20.0, 0.5});
    const PreisachMemory m{{0.2}};
    const auto phi = preisach_level_function(m, p, 1.0);
    const auto lin = play_level_function(0.2, PlayParams{-0.5, 0.5, 1.0}, 2.0);
    for (double x : {-3.0, -0.3, 0.0, 0.69, 0.71, 4.0}) EXPECT_NEAR(phi.value(x), lin.value(x), 1e-12) << x;
}

// Operator properties on random inputs

TEST(HysteresisProperties, RateIndependence) {
    const auto p = benchmark_preisach();
    std::mt19937_64 rng(5);
    const auto turns = testkit::random_reversal_input(rng, 12, -300.0, 300.0);
    // same path sampled on two different time grids
    auto sample = [&](int per_segment) {
        std::vector<double> u{turns[0]};
        for (std::size_t k = 1; k < turns.size(); ++k)
            for (int i = 1; i <= per_segment; ++i) u.push_back(turns[k - 1] + (turns[k] - turns[k - 1]) * i / per_segment);
        return u;
    };
    const auto zero = preisach_init(turns[0], DriveFromSaturation{0.0, {}}, *p);
    EXPECT_EQ(outputs_after(sample(1), *p, zero), outputs_after(sample(7), *p, zero));

    PlayState a = play_init(turns[0] / 100, 0.0, kTable1Play), b = a;
    for (double u : sample(1)) a = play_update(a, u / 100, kTable1Play);
    for (double u : sample(5)) b = play_update(b, u / 100, kTable1Play);
    EXPECT_EQ(a.w, b.w);
}

TEST(HysteresisProperties, Causality) {
    const auto p = benchmark_preisach();
    std::mt19937_64 rng(9);
    auto u = testkit::random_reversal_input(rng, 20, -300.0, 300.0);
    auto run = [&](const std::vector<double>& in) {
        std::vector<double> w;
        auto m = preisach_init(in[0], DriveFromSaturation{0.0, {}}, *p);
        for (double x : in) {
            preisach_update_in_place(m, x, *p);
            w.push_back(preisach_output(m, *p));
        }
        return w;
    };
    const auto base = run(u);
    for (std::size_t k = 11; k < u.size(); ++k) u[k] = -u[k] + 17.0;
    const auto mutated = run(u);
    for (std::size_t k = 0; k < 11; ++k) EXPECT_EQ(base[k], mutated[k]);
}

TEST(HysteresisProperties, PiecewiseMonotone) {
    const auto p = benchmark_preisach();
    auto m = preisach_init(0.0, DriveFromSaturation{0.0, {200.0, -100.0}}, *p);
    double prev = preisach_output(m, *p);
    for (int i = 1; i <= 100; ++i) {
        preisach_update_in_place(m, 3.0 * i, *p);
        const double w = preisach_output(m, *p);
        EXPECT_GE(w, prev);
        prev = w;
    }
    for (int i = 1; i <= 100; ++i) {
        preisach_update_in_place(m, 300.0 - 5.0 * i, *p);
        const double w = preisach_output(m, *p);
        EXPECT_LE(w, prev);
        prev = w;
    }
}

TEST(HysteresisProperties, LipschitzBounds) {
    const auto p = benchmark_preisach();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(-400.0, 400.0);
    auto m = preisach_init(0.0, DriveFromSaturation{0.0, {}}, *p);
    double u_prev = 0.0, w_prev = preisach_output(m, *p);
    PlayState s = play_init(0.0, 0.0, kTable1Play);
    for (int k = 0; k < 500; ++k) {
        const double u = U(rng);
        preisach_update_in_place(m, u, *p);
        const double w = preisach_output(m, *p);
        EXPECT_LE(std::abs(w - w_prev), p->lipschitz_bound() * std::abs(u - u_prev) * (1 + 1e-12) + 1e-12);
        const PlayState s_new = play_update(s, u / 100, kTable1Play);
        EXPECT_LE(std::abs(s_new.w - s.w), kTable1Play.c * std::abs(u - u_prev) / 100 * (1 + 1e-14));
        s = s_new;
        u_prev = u;
        w_prev = w;
    }
}

TEST(HysteresisProperties, LevelFunctionsNondecreasingAndContinuous) {
    const auto p = benchmark_preisach();
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto drive = testkit::random_reversal_input(rng, 6, -350.0, 350.0);
        const auto m = preisach_init(drive.back(), DriveFromSaturation{0.0, drive}, *p);
        const auto phi = preisach_level_function(m, p, 0.5);
        EXPECT_LT(phi.max_continuity_defect(), 1e-9);
        double prev = phi.value(-600.0);
        for (int i = 1; i <= 1200; ++i) {
            const double v = phi.value(-600.0 + i);
            EXPECT_GE(v, prev - 1e-12);
            prev = v;
        }
    }
}

TEST(HysteresisProperties, RandomFiftyReversalsMatchOracle) {
    const auto p = benchmark_preisach();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3; ++trial) {
        const auto u = testkit::random_reversal_input(rng, 50, -400.0, 400.0);
        auto m = preisach_init(u[0], DriveFromSaturation{0.0, {}}, *p);
        testkit::PreisachOracle oracle(u[0], m, *p);
        for (std::size_t k = 1; k < u.size(); ++k) {
            preisach_update_in_place(m, u[k], *p);
            oracle.advance(u[k], 2000);
        }
        const auto plays = oracle.plays();
        for (std::size_t j = 0; j < p->size(); ++j) ASSERT_NEAR(m.plays[j], plays[j], 1e-10);
        EXPECT_NEAR(preisach_output(m, *p), testkit::preisach_output_oracle(plays, *p), 1e-10);
    }
}
