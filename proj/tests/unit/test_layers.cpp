#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mlsta/layers.hpp"
#include "oracles.hpp"

using namespace mlsta;
using Catch::Approx;

namespace {

BarrierLadder three_layers() { return validate_ladder({1e-4, 1e-3, 1e-2}, 0.5); }

}  // namespace

TEST_CASE("select_layer branches", "[layers]") {
    const auto ladder = three_layers();
    const double mid12 = 0.5 * (1e-4 + 1e-3);

    CHECK(select_layer(2e-2, ladder, kAdaptiveMode) == kAdaptiveMode);
    CHECK(select_layer(2e-2, ladder, LayerId{2}) == kAdaptiveMode);
    CHECK(select_layer(0.5e-4, ladder, kAdaptiveMode) == LayerId{1});
    CHECK(select_layer(0.5e-4, ladder, LayerId{3}) == LayerId{1});
    CHECK(select_layer(mid12, ladder, kAdaptiveMode) == kAdaptiveMode);
    CHECK(select_layer(mid12, ladder, LayerId{3}) == LayerId{2});
    CHECK(select_layer(5e-3, ladder, LayerId{1}) == LayerId{3});
}

TEST_CASE("select_layer boundary convention", "[layers]") {
    const auto ladder = three_layers();
    CHECK(select_layer(1e-4, ladder, LayerId{1}) == LayerId{2});  // left-closed
    CHECK(select_layer(1e-3, ladder, LayerId{1}) == LayerId{3});
    CHECK(select_layer(1e-2, ladder, LayerId{1}) == kAdaptiveMode);  // s = eps_N
    CHECK(select_layer(1e-4, ladder, kAdaptiveMode) == kAdaptiveMode);
    CHECK(select_layer(0.0, ladder, kAdaptiveMode) == LayerId{1});
}

TEST_CASE("single-barrier ladder has no sticky band", "[layers]") {
    const auto ladder = validate_ladder({0.1}, 0.5);
    CHECK(select_layer(0.05, ladder, kAdaptiveMode) == LayerId{1});
    CHECK(select_layer(0.1, ladder, LayerId{1}) == kAdaptiveMode);
    CHECK(select_layer(0.2, ladder, LayerId{1}) == kAdaptiveMode);
}

TEST_CASE("select_layer agrees with the rule-table oracle", "[layers][property]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n : {1, 2, 5, 50}) {
        const auto ladder = n == 1 ? validate_ladder({1e-3}, 0.5)
                                   : ladder_from_range(1e-4, 1e-1, n, Spacing::Linear, 0.5);
        std::uniform_int_distribution<std::size_t> prev(0, ladder.size());
        for (int i = 0; i < 20000; ++i) {
            const double s_abs = 1.2 * ladder.outer() * u(rng);
            const std::size_t a = prev(rng);
            REQUIRE(select_layer(s_abs, ladder, LayerId{a}).value ==
                    oracle::layer_rule(s_abs, ladder.widths(), a));
        }
    }
}

TEST_CASE("memory is irrelevant at the extremes", "[layers][property]") {
    const auto ladder = ladder_from_range(1e-4, 1e-1, 5, Spacing::Linear, 0.5);
    for (std::size_t a = 0; a <= ladder.size(); ++a) {
        CHECK(select_layer(0.3e-4, ladder, LayerId{a}) == LayerId{1});
        CHECK(select_layer(0.3, ladder, LayerId{a}) == kAdaptiveMode);
    }
}

TEST_CASE("adaptive mode is sticky inside (eps_1, eps_N)", "[layers][property]") {
    const auto ladder = ladder_from_range(1e-4, 1e-1, 20, Spacing::Linear, 0.5);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        LayerId a = kAdaptiveMode;
        for (int k = 0; k < 200; ++k) {
            const double s_abs = ladder.inner() + (ladder.outer() - ladder.inner()) * u(rng);
            if (s_abs <= ladder.inner()) continue;
            a = select_layer(s_abs, ladder, a);
            REQUIRE(a == kAdaptiveMode);
        }
        // The only way out of A0 is below the innermost barrier.
        CHECK(select_layer(0.5 * ladder.inner(), ladder, a) == LayerId{1});
    }
}

TEST_CASE("a0_update forward Euler step", "[layers]") {
    AdaptationLimits limits = AdaptationLimits::defaults_for(0.5);
    AdaptiveGainState st{1.0, 1.0, 1.0 - 1e-3, true};  // (s - s_prev)/Ts = 1
    const auto [gains, next] = a0_update(st, 1.0, 1e-3, 0.5, limits);
    CHECK(next.k1d == Approx(1.001).epsilon(1e-13));
    CHECK(next.k2d == Approx(1.0005).epsilon(1e-13));
    CHECK(gains.k1 == next.k1d);
    CHECK(gains.k2 == next.k2d);
    CHECK(next.s_prev == 1.0);
    CHECK(next.have_prev);
}

TEST_CASE("a0_update first sample uses the derivative floor", "[layers]") {
    AdaptationLimits limits = AdaptationLimits::defaults_for(0.5);
    limits.k1_cap = 1e300;
    limits.k2_cap = 1e300;
    const AdaptiveGainState st{};
    const auto [gains, next] = a0_update(st, 0.3, 1e-5, 0.5, limits);
    CHECK(next.k1d == Approx(1.0 + 1e-5 / limits.d_floor).epsilon(1e-12));
    CHECK(next.k2d == Approx(1.0 + 1e-5 / (2.0 * std::sqrt(0.3))).epsilon(1e-12));
}

TEST_CASE("a0_update saturates at the caps", "[layers]") {
    const AdaptationLimits limits = AdaptationLimits::defaults_for(0.5);
    CHECK(limits.k1_cap == Approx(158.11388300841898).epsilon(1e-14));
    CHECK(limits.k2_cap == Approx(25000.0).epsilon(1e-12));
    CHECK(AdaptationLimits::defaults_for(0.1).k1_cap == 5.0);

    AdaptiveGainState st{limits.k1_cap, limits.k2_cap, 0.0, true};
    const auto [gains, next] = a0_update(st, 1e-3, 1e-4, 0.5, limits);
    CHECK(next.k1d == limits.k1_cap);
    CHECK(next.k2d == limits.k2_cap);
}

TEST_CASE("ai_update decays dynamic gains and applies barrier gains", "[layers]") {
    AdaptationLimits limits = AdaptationLimits::defaults_for(0.5);
    const auto ladder = validate_ladder({0.5e-1, 1.0}, 0.5);

    AdaptiveGainState st{2.0, 2.0, 0.0, false};
    auto [gains, next] = ai_update(st, 0.5, LayerId{2}, ladder, 0.1, limits);
    CHECK(next.k1d == Approx(1.8).epsilon(1e-14));
    CHECK(next.k2d == Approx(1.8).epsilon(1e-14));
    CHECK(gains.k1 == Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(gains.k2 == Approx(2.0).epsilon(1e-14));

    auto [zero, unused] = ai_update(st, 0.0, LayerId{1}, ladder, 0.1, limits);
    CHECK(zero.k1 == 0.0);
    CHECK(zero.k2 == 0.0);

    CHECK_THROWS(ai_update(st, 0.0, kAdaptiveMode, ladder, 0.1, limits));
    CHECK_THROWS(ai_update(st, 0.0, LayerId{3}, ladder, 0.1, limits));
}

TEST_CASE("gain updates keep the dynamic gains within [floor, cap]", "[layers][property]") {
    const AdaptationLimits limits = AdaptationLimits::defaults_for(0.5);
    const auto ladder = ladder_from_range(1e-4, 1e-1, 5, Spacing::Linear, 0.5);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    AdaptiveGainState st{};
    for (int k = 0; k < 100000; ++k) {
        const double s = 0.2 * u(rng) * std::pow(10.0, 3.0 * u(rng));
        const double ts = std::pow(10.0, -3.5 + 1.5 * u(rng));
        const LayerId layer = select_layer(std::fabs(s), ladder, LayerId{std::size_t(k % 6)});
        st = layer.is_adaptive() ? a0_update(st, s, ts, 0.5, limits).second
                                 : ai_update(st, s, layer, ladder, ts, limits).second;
        REQUIRE(st.k1d >= limits.gain_floor);
        REQUIRE(st.k1d <= limits.k1_cap);
        REQUIRE(st.k2d >= limits.gain_floor);
        REQUIRE(st.k2d <= limits.k2_cap);
    }
}
