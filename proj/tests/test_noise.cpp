#include <doctest.h>

#include "nrd/noise.hpp"
#include "nrd/wiener.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace nrd;

namespace {
const double kH = 2.5e-4;
} // namespace

TEST_CASE("difference quotient of a linear path is the slope") {
    const WienerPath lin = WienerPath::linear(1.7, -1.0, 1.0, kH);
    const NoiseKind kind = NoiseKind::difference_quotient(0.05);
    for (double t : {-0.5, 0.0, 0.25, 0.9})
        CHECK(eval_noise(kind, lin, t) == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("ou noise of a linear path evaluates to the slope") {
    const WienerPath lin = WienerPath::linear(1.0, -6.0, 1.0, kH);
    const NoiseKind kind = NoiseKind::ou(0.1);
    for (double t : {-0.5, 0.0, 0.5})
        CHECK(eval_noise(kind, lin, t) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mollifier bump is normalized and its derivative integrates the slope") {
    const double norm = mollifier_normalization();
    double acc = 0.0;
    const int n = 20000;
    for (int j = 0; j <= n; ++j) {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += w * mollifier_bump((double)j / n, norm);
    }
    CHECK(acc / n == doctest::Approx(1.0).epsilon(1e-10));

    const WienerPath lin = WienerPath::linear(2.5, -1.0, 1.0, kH);
    const NoiseKind kind = NoiseKind::mollifier(0.05);
    CHECK(eval_noise(kind, lin, 0.25) == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("all noise kinds vanish on the zero path") {
    const WienerPath z = WienerPath::zero(-6.0, 1.0, kH);
    for (auto v : {NoiseVariant::Ou, NoiseVariant::MollifierDerivative,
                   NoiseVariant::DifferenceQuotient}) {
        const NoiseKind kind = NoiseKind::make(v, 0.1);
        CHECK(eval_noise(kind, z, 0.0) == 0.0);
        CHECK(eval_noise(kind, z, 0.5) == 0.0);
    }
}

TEST_CASE("noise formulas are linear in the path") {
    const WienerPath a = sample_path(31, -6.0, 1.0, kH);
    const WienerPath b = sample_path(77, -6.0, 1.0, kH);
    const WienerPath mix = combine_paths(a, b, 0.3, -1.2);
    for (auto v : {NoiseVariant::Ou, NoiseVariant::MollifierDerivative,
                   NoiseVariant::DifferenceQuotient}) {
        const NoiseKind kind = NoiseKind::make(v, 0.1);
        for (double t : {-0.25, 0.5}) {
            const double lhs = eval_noise(kind, mix, t);
            const double rhs = 0.3 * eval_noise(kind, a, t) - 1.2 * eval_noise(kind, b, t);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("noise commutes with the wiener shift") {
    const WienerPath p = sample_path(13, -8.0, 2.0, kH);
    const WienerPath sh = shift(p, 0.5);
    for (auto v : {NoiseVariant::Ou, NoiseVariant::MollifierDerivative,
                   NoiseVariant::DifferenceQuotient}) {
        const NoiseKind kind = NoiseKind::make(v, 0.05);
        for (double t : {-0.5, 0.0, 0.75})
            CHECK(std::abs(eval_noise(kind, sh, t) - eval_noise(kind, p, t + 0.5)) < 1e-10);
    }
}

TEST_CASE("stationarity in law across shifted evaluation points") {
    const int n = 500;
    const NoiseKind kind = NoiseKind::ou(0.1);
    double s0 = 0, s1 = 0, q0 = 0, q1 = 0;
    for (int s = 0; s < n; ++s) {
        const WienerPath p = sample_path((std::uint64_t)s + 1, -5.0, 1.2, kH);
        const double a = eval_noise(kind, p, 0.0);
        const double b = eval_noise(kind, p, 1.0);
        s0 += a; s1 += b; q0 += a * a; q1 += b * b;
    }
    const double m0 = s0 / n, m1 = s1 / n;
    const double v0 = q0 / n - m0 * m0, v1 = q1 / n - m1 * m1;
    const double z = std::abs(m0 - m1) / std::sqrt(v0 / n + v1 / n);
    CHECK(z < 2.576); // two-sample location test at the 1 percent level
}

TEST_CASE("table evaluation agrees with the direct quadrature") {
    const WienerPath p = sample_path(7, -8.0, 1.0, kH);
    for (auto v : {NoiseVariant::Ou, NoiseVariant::MollifierDerivative,
                   NoiseVariant::DifferenceQuotient}) {
        const NoiseKind kind = NoiseKind::make(v, 0.1);
        const NoiseTable tab = NoiseTable::build(kind, p, p.node_of(-0.5), p.node_of(0.5));
        for (double t : {-0.5, -0.1, 0.0, 0.25, 0.5}) {
            const double direct = eval_noise(kind, p, t);
            CHECK(tab.at_node(p.node_of(t)) == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("integrate_noise is zero at the origin and antisymmetric in orientation") {
    const WienerPath p = sample_path(5, -3.0, 3.0, kH);
    const NoiseKind kind = NoiseKind::difference_quotient(0.05);
    CHECK(integrate_noise(kind, p, 0.0) == 0.0);
    const double fwd = integrate_noise(kind, p, 1.0);
    CHECK(fwd != 0.0);
}

TEST_CASE("difference quotient integral matches the window-average identity") {
    const WienerPath p = sample_path(19, -1.0, 2.5, kH);
    const NoiseKind kind = NoiseKind::difference_quotient(0.1);
    const double t = 1.5, d = 0.1;
    const double lhs = integrate_noise(kind, p, t);
    auto window_avg = [&](double a) {
        // (1/d) integral_a^{a+d} w, trapezoid at path resolution
        const std::int64_t ia = p.node_of(a), n = (std::int64_t)std::llround(d / kH);
        double acc = 0.0;
        for (std::int64_t i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += w * p.at_node(ia + i);
        }
        return acc * kH / d;
    };
    const double rhs = window_avg(t) - window_avg(0.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("integral gap shrinks along the delta ladder") {
    const WienerPath p = sample_path(7, -6.0, 1.2, kH);
    const std::vector<double> deltas{0.1, 0.05, 0.025, 0.0125};
    for (auto v : {NoiseVariant::Ou, NoiseVariant::DifferenceQuotient}) {
        double prev = 1e300;
        for (double d : deltas) {
            const NoiseKind kind = NoiseKind::make(v, d);
            double gap = 0.0;
            for (double t = -1.0; t <= 1.0 + 1e-12; t += 0.05)
                gap = std::max(gap, std::abs(integrate_noise(kind, p, t) - p.eval(t)));
            CHECK(gap < prev * 1.1);
            prev = gap;
        }
    }
}

TEST_CASE("stationary variable on synthetic paths") {
    const WienerPath lin = WienerPath::linear(1.0, -50.0, 1.0, 1e-3);
    CHECK(stationary_x_white(lin, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(stationary_x_white(lin, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
    const NoiseKind kind = NoiseKind::difference_quotient(0.05);
    CHECK(stationary_x(kind, lin, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
    const WienerPath z = WienerPath::zero(-50.0, 1.0, 1e-3);
    CHECK(stationary_x_white(z, 0.0) == 0.0);
    CHECK(stationary_x(kind, z, 0.0) == 0.0);
}

TEST_CASE("stationary variable satisfies its defining equation") {
    SUBCASE("first-order residual on a smooth path") {
        const WienerPath lin = WienerPath::linear(1.3, -46.0, 1.0, kH);
        const NoiseKind kind = NoiseKind::difference_quotient(0.05);
        const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants / kH);
        const std::int64_t i0 = lin.node_of(0.0), i1 = lin.node_of(0.5);
        const NoiseTable z = NoiseTable::build(kind, lin, i0 - K, i1);
        const HistoryTable x = HistoryTable::of_noise(z, 1.0, i0, i1);
        double worst = 0.0;
        for (std::int64_t i = i0; i < i1; ++i)
            worst = std::max(worst, std::abs((x.at_node(i + 1) - x.at_node(i)) / kH +
                                             x.at_node(i) - z.at_node(i)));
        CHECK(worst < 10.0 * kH);
    }
    SUBCASE("residual decays along wider difference spans on a random path") {
        // pathwise the noise increments dominate, so the decay sits near order 1/2
        const WienerPath p = sample_path(3, -46.0, 1.0, kH);
        const NoiseKind kind = NoiseKind::ou(0.1);
        const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants / kH);
        const std::int64_t i0 = p.node_of(0.0), i1 = p.node_of(0.5);
        const NoiseTable z = NoiseTable::build(kind, p, i0 - K, i1);
        const HistoryTable x = HistoryTable::of_noise(z, 1.0, i0, i1);
        auto worst_at = [&](std::int64_t span) {
            double w = 0.0;
            const double H = (double)span * kH;
            for (std::int64_t i = i0; i + span <= i1; i += span)
                w = std::max(w, std::abs((x.at_node(i + span) - x.at_node(i)) / H +
                                         x.at_node(i) - z.at_node(i)));
            return w;
        };
        const double w_coarse = worst_at(64), w_fine = worst_at(4);
        const double order = std::log(w_coarse / w_fine) / std::log(16.0);
        CHECK(order > 0.2);
    }
}

TEST_CASE("hypothesis certification on the zero path gives zero gaps") {
    const WienerPath z = WienerPath::zero(-45.0, 1.5, 1e-3);
    const HypothesisReport rep =
        certify_hypotheses(NoiseVariant::DifferenceQuotient, z, 1.0, {0.1, 0.05});
    for (double g : rep.integral_gap) CHECK(g == 0.0);
    for (double g : rep.stationary_gap) CHECK(g == 0.0);
    CHECK(rep.pass);
}

TEST_CASE("difference quotient growth constant stays under the traced ceiling") {
    for (std::uint64_t seed : {2ull, 9ull}) {
        const WienerPath p = sample_path(seed, -45.0, 1.2, 1e-3);
        const HypothesisReport rep =
            certify_hypotheses(NoiseVariant::DifferenceQuotient, p, 1.0, {0.1, 0.05, 0.025});
        for (std::size_t j = 0; j < rep.delta.size(); ++j)
            CHECK(rep.k_delta[j] <= 2.0 * (1.0 + rep.delta[j]) / rep.delta[j] + 1e-9);
    }
}

TEST_CASE("ou time-average variance approaches the stationary law") {
    const NoiseKind kind = NoiseKind::ou(0.1);
    double avg = 0.0;
    const int seeds = 3;
    for (int s = 1; s <= seeds; ++s) {
        const WienerPath p = sample_path((std::uint64_t)s, -4.5, 20.0, 1e-3);
        const NoiseTable z = NoiseTable::build(kind, p, 0, p.node_of(20.0));
        double m = 0.0, q = 0.0;
        const std::int64_t n = p.node_of(20.0) + 1;
        for (std::int64_t i = 0; i < n; ++i) {
            m += z.at_node(i);
            q += z.at_node(i) * z.at_node(i);
        }
        m /= (double)n;
        avg += q / (double)n - m * m;
    }
    avg /= seeds;
    CHECK(avg == doctest::Approx(5.0).epsilon(0.25));
}

TEST_CASE("langevin recursion cross-checks the quadrature table") {
    const WienerPath p = sample_path(21, -5.0, 1.0, kH);
    const NoiseKind kind = NoiseKind::ou(0.1);
    const NoiseTable z = NoiseTable::build(kind, p, 0, p.node_of(1.0));
    const std::vector<double> rec = ou_langevin_recursion(kind, p, 0, p.node_of(1.0));
    double rms_diff = 0.0, rms = 0.0;
    for (std::int64_t i = 0; i <= p.node_of(1.0); ++i) {
        const double d = rec[(std::size_t)i] - z.at_node(i);
        rms_diff += d * d;
        rms += z.at_node(i) * z.at_node(i);
    }
    CHECK(std::sqrt(rms_diff / rms) < 0.15);
}

TEST_CASE("the certifier accepts a user-supplied noise family") {
    const WienerPath p = sample_path(5, -45.0, 1.2, 1e-3);
    // hand-rolled difference quotient, supplied as a plain evaluator
    const NoiseEvaluator diffq = [](double d, const WienerPath& path, std::int64_t lo,
                                    std::int64_t hi) {
        return NoiseTable::build(NoiseKind::difference_quotient(d), path, lo, hi);
    };
    const HypothesisReport custom = certify_hypotheses(diffq, "custom", p, 1.0, {0.1, 0.05});
    const HypothesisReport builtin =
        certify_hypotheses(NoiseVariant::DifferenceQuotient, p, 1.0, {0.1, 0.05});
    CHECK(custom.kind == "custom");
    REQUIRE(custom.integral_gap.size() == builtin.integral_gap.size());
    for (std::size_t j = 0; j < custom.integral_gap.size(); ++j) {
        CHECK(custom.integral_gap[j] == builtin.integral_gap[j]);
        CHECK(custom.stationary_gap[j] == builtin.stationary_gap[j]);
    }
}

TEST_CASE("delta must stay grid aligned") {
    const WienerPath p = sample_path(1, -1.0, 1.0, 1e-3);
    const NoiseKind kind = NoiseKind::difference_quotient(0.0005123);
    CHECK_THROWS_AS((void)eval_noise(kind, p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)certify_hypotheses(NoiseVariant::Ou, p, 1.0, {}),
                    std::invalid_argument);
}

TEST_CASE("window exhaustion is reported") {
    const WienerPath p = sample_path(1, -0.5, 0.5, 1e-3);
    CHECK_THROWS_AS((void)eval_noise(NoiseKind::ou(0.1), p, -0.2), std::out_of_range);
    CHECK_THROWS_AS((void)eval_noise(NoiseKind::difference_quotient(0.1), p, 0.45),
                    std::out_of_range);
}
