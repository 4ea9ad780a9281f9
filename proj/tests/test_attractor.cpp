#include <doctest.h>

#include "nrd/attractor.hpp"
#include "nrd/prng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace nrd;

namespace {

PointCloud cloud_of(std::vector<Field> members) {
    PointCloud c;
    c.members = std::move(members);
    return c;
}

Field vec2(double a, double b) {
    Field f(4);
    f.coeffs[0] = a;
    f.coeffs[1] = b;
    return f;
}

} // namespace

TEST_CASE("hausdorff semidistance basics") {
    const PointCloud a = cloud_of({vec2(0, 0), vec2(1, 0)});
    const PointCloud b = cloud_of({vec2(0, 0), vec2(1, 0), vec2(5, 5)});
    CHECK(hausdorff_semidistance(a, b) == 0.0); // subset
    CHECK(hausdorff_semidistance(b, a) > 0.0);  // asymmetry witness
    CHECK(hausdorff_semidistance(a, a) == 0.0);

    const PointCloud origin = cloud_of({vec2(0, 0)});
    const PointCloud p34 = cloud_of({vec2(3, 4)});
    CHECK(hausdorff_semidistance(origin, p34) == doctest::Approx(5.0));

    CHECK_THROWS_AS((void)hausdorff_semidistance(cloud_of({}), a), std::invalid_argument);
}

TEST_CASE("hausdorff semidistance satisfies the triangle inequality") {
    std::uint64_t ctr = 0;
    auto random_cloud = [&](int n) {
        std::vector<Field> m;
        for (int i = 0; i < n; ++i) {
            Field f(4);
            for (auto& c : f.coeffs) c = gaussian(55, ctr++);
            m.push_back(f);
        }
        return cloud_of(std::move(m));
    };
    for (int trial = 0; trial < 100; ++trial) {
        const PointCloud a = random_cloud(4), b = random_cloud(3), c = random_cloud(5);
        CHECK(hausdorff_semidistance(a, c) <=
              hausdorff_semidistance(a, b) + hausdorff_semidistance(b, c) + 1e-12);
    }
}

TEST_CASE("additive radius with vanished auxiliary reduces to elementary integrals") {
    ModelSpec spec;
    spec.epsilon = 0.0;
    const WienerPath z = WienerPath::zero(-60.0, 0.5, 1e-3);
    const RadiusReport rep = absorbing_radius(spec, z, NoiseKind::ou(0.1), RadiusFormula::Additive);
    const double cf = spec.c_f, m = spec.m, mt = spec.m_tilde;
    const double kap = m * kLambda1 - 4.0 * cf;
    const double hand = 8.0 * cf / (m * kap) + 4.0 * kLambda1 * cf * cf / (kap * kap) +
                        (4.0 + 2.0 * kLambda1 * cf * m + kap + 2.0 * cf) / (m * kap) +
                        (4.0 / m + 2.0 * kLambda1 * cf) * (2.0 * mt * mt / m) / kap +
                        2.0 * (kLambda1 * cf + mt * mt / m) * (1.0 - std::exp(-kap)) / kap;
    CHECK(rep.r_squared == doctest::Approx(hand).epsilon(1e-8));
    CHECK(rep.r_squared_white == doctest::Approx(hand).epsilon(1e-8));
}

TEST_CASE("multiplicative radius with vanished auxiliary reduces to elementary integrals") {
    ModelSpec spec;
    spec.coupling = CouplingType::Multiplicative;
    spec.epsilon = 0.0;
    const WienerPath z = WienerPath::zero(-60.0, 0.5, 1e-3);
    const RadiusReport rep =
        absorbing_radius(spec, z, NoiseKind::ou(0.1), RadiusFormula::Multiplicative);
    const double cf = spec.c_f, m = spec.m;
    const double kap = m * kLambda1 - 3.0 * cf;
    const double hand = (1.0 / m) * (1.0 + cf * std::exp(-kap) / kap) +
                        ((cf + 2.0 * cf * cf) / m) * (1.0 - std::exp(-kap)) / kap;
    CHECK(rep.r_squared == doctest::Approx(hand).epsilon(1e-8));
    CHECK(rep.r_squared_white == doctest::Approx(hand).epsilon(1e-8));
}

TEST_CASE("general-regime radius on the zero path") {
    ModelSpec spec;
    spec.f_profile = FProfile::CubicP4;
    spec.p = 4.0;
    spec.alpha2 = 0.5;
    spec.coupling = CouplingType::General;
    spec.epsilon = 0.1;
    const WienerPath z = WienerPath::zero(-10.0, 0.5, 1e-3);
    const RadiusReport rep = absorbing_radius(spec, z, NoiseKind::ou(0.05), RadiusFormula::General);
    const double hand = 1.0 + 2.0 * spec.kappa / (spec.m * kLambda1);
    CHECK(rep.r_squared == doctest::Approx(hand).epsilon(1e-4));
}

TEST_CASE("radius formulas enforce their regimes") {
    ModelSpec spec; // additive p=2
    const WienerPath z = WienerPath::zero(-60.0, 0.5, 1e-3);
    CHECK_THROWS_AS(
        (void)absorbing_radius(spec, z, NoiseKind::ou(0.1), RadiusFormula::Multiplicative),
        std::invalid_argument);
    CHECK_THROWS_AS((void)absorbing_radius(spec, z, NoiseKind::ou(0.1), RadiusFormula::General),
                    std::invalid_argument);
}

TEST_CASE("delta radius approaches the white radius") {
    const WienerPath p = sample_path(7, -62.0, 0.5, 2.5e-4);
    for (auto coupling : {CouplingType::Additive, CouplingType::Multiplicative}) {
        ModelSpec spec;
        spec.coupling = coupling;
        spec.epsilon = 0.25;
        const RadiusFormula formula = coupling == CouplingType::Additive
                                          ? RadiusFormula::Additive
                                          : RadiusFormula::Multiplicative;
        double prev = 1e300;
        for (double d : {0.1, 0.05, 0.025}) {
            const RadiusReport rep =
                absorbing_radius(spec, p, NoiseKind::difference_quotient(d), formula);
            const double gap = std::abs(rep.r_squared - rep.r_squared_white);
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("additive and general radii are monotone in epsilon") {
    const WienerPath p = sample_path(9, -62.0, 0.5, 1e-3);
    ModelSpec add;
    double prev = -1.0;
    for (double eps : {0.0, 0.1, 0.2, 0.4}) {
        add.epsilon = eps;
        const RadiusReport rep =
            absorbing_radius(add, p, NoiseKind::ou(0.05), RadiusFormula::Additive);
        CHECK(rep.r_squared >= prev);
        prev = rep.r_squared;
    }
    ModelSpec gen;
    gen.f_profile = FProfile::CubicP4;
    gen.p = 4.0;
    gen.coupling = CouplingType::General;
    prev = -1.0;
    for (double eps : {0.0, 0.1, 0.2, 0.4}) {
        gen.epsilon = eps;
        const RadiusReport rep = absorbing_radius(gen, p, NoiseKind::ou(0.05), RadiusFormula::General);
        CHECK(rep.r_squared >= prev);
        prev = rep.r_squared;
    }
}

TEST_CASE("linear contracting dynamics collapse the pullback cloud") {
    ModelSpec spec;
    spec.a_profile = AProfile::Constant;
    spec.m = 1.0;
    spec.m_tilde = 1.0;
    spec.f_profile = FProfile::Linear;
    spec.epsilon = 0.0;
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_modes = 8;
    cfg.n_grid = 32;
    const WienerPath z = WienerPath::zero(-6.0, 0.5, 1e-3);
    const auto ics = default_ic_cloud(8, 2.0, 8);
    const PointCloud cloud = pullback_attractor_sample(spec, z, nullptr,
                                                       DynamicsMode::Deterministic, {2.0, 5.0},
                                                       ics, cfg, 1e-6, 1);
    double diam = 0.0;
    for (const Field& a : cloud.members)
        for (const Field& b : cloud.members) diam = std::max(diam, l2_distance(a, b));
    CHECK(diam < 1e-6);
}

TEST_CASE("pullback diameter shrinks with the pullback time") {
    ModelSpec spec; // default data, globally contracting
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_modes = 8;
    cfg.n_grid = 32;
    const WienerPath z = WienerPath::zero(-6.0, 0.5, 1e-3);
    const auto ics = default_ic_cloud(8, 2.0, 8);
    auto diameter_at = [&](double t) {
        const PointCloud c = pullback_attractor_sample(spec, z, nullptr,
                                                       DynamicsMode::Deterministic, {t}, ics, cfg,
                                                       1e9, 1);
        double d = 0.0;
        for (const Field& a : c.members)
            for (const Field& b : c.members) d = std::max(d, l2_distance(a, b));
        return d;
    };
    const double d1 = diameter_at(0.5), d2 = diameter_at(1.0), d3 = diameter_at(2.0);
    CHECK(d2 < d1);
    CHECK(d3 < d2);
}

TEST_CASE("cloud is independent of the ic ordering") {
    ModelSpec spec;
    spec.epsilon = 0.1;
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_modes = 8;
    cfg.n_grid = 32;
    const WienerPath p = sample_path(7, -48.0, 0.5, 2.5e-4);
    cfg.dt = 1e-3;
    auto ics = default_ic_cloud(8, 2.0, 6);
    const NoiseKind kind = NoiseKind::ou(0.1);
    const PointCloud a = pullback_attractor_sample(spec, p, &kind, DynamicsMode::Stationary,
                                                   {1.0, 2.0}, ics, cfg, 1e-3, 1);
    std::reverse(ics.begin(), ics.end());
    const PointCloud b = pullback_attractor_sample(spec, p, &kind, DynamicsMode::Stationary,
                                                   {1.0, 2.0}, ics, cfg, 1e-3, 2);
    // same set: each member of a appears in b exactly
    for (const Field& fa : a.members) {
        double best = 1e300;
        for (const Field& fb : b.members) best = std::min(best, l2_distance(fa, fb));
        CHECK(best == 0.0);
    }
}

TEST_CASE("non-cauchy ensembles are rejected with the displacement curve") {
    ModelSpec spec;
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_modes = 8;
    cfg.n_grid = 32;
    const WienerPath z = WienerPath::zero(-3.0, 0.5, 1e-3);
    const auto ics = default_ic_cloud(8, 2.0, 4);
    try {
        (void)pullback_attractor_sample(spec, z, nullptr, DynamicsMode::Deterministic,
                                        {0.25, 0.5}, ics, cfg, 1e-18, 1);
        FAIL("expected NonCauchyError");
    } catch (const NonCauchyError& e) {
        REQUIRE(e.displacement_curve.size() == 1);
        CHECK(e.displacement_curve.front() > 1e-18);
    }
}

TEST_CASE("absorbing check contains the zero ball trivially") {
    ModelSpec spec;
    spec.coupling = CouplingType::Multiplicative;
    spec.epsilon = 0.1;
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_modes = 8;
    cfg.n_grid = 32;
    const WienerPath p = sample_path(3, -66.0, 0.5, 1e-3);
    const NoiseKind kind = NoiseKind::ou(0.1);
    const RadiusReport rad = absorbing_radius(spec, p, kind, RadiusFormula::Multiplicative);
    const AbsorbReport rep = absorbing_check(spec, p, kind, rad, 0.0, 2.0, 4, cfg);
    CHECK(rep.max_terminal_sq == 0.0);
    CHECK(rep.contained);
}

TEST_CASE("absorption saturates in the pullback time") {
    ModelSpec spec;
    spec.epsilon = 0.1;
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_modes = 8;
    cfg.n_grid = 32;
    const WienerPath p = sample_path(7, -70.0, 0.5, 1e-3);
    const NoiseKind kind = NoiseKind::difference_quotient(0.1);
    const RadiusReport rad = absorbing_radius(spec, p, kind, RadiusFormula::Additive);
    const AbsorbReport at5 = absorbing_check(spec, p, kind, rad, 5.0, 5.0, 8, cfg);
    const AbsorbReport at10 = absorbing_check(spec, p, kind, rad, 5.0, 10.0, 8, cfg);
    CHECK(at5.contained);
    CHECK(at10.contained);
    CHECK(at10.max_terminal_sq <= at5.max_terminal_sq * 1.01 + 1e-12);
}

TEST_CASE("default ic cloud is deterministic and norm bounded") {
    const auto a = default_ic_cloud(16, 2.0, 32);
    const auto b = default_ic_cloud(16, 2.0, 32);
    REQUIRE(a.size() == 32);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].l2_norm() <= 2.0 + 1e-12);
        CHECK(l2_distance(a[i], b[i]) == 0.0);
    }
}

TEST_CASE("semidistance rows with epsilon zero vanish identically") {
    ModelSpec spec;
    SolveConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_modes = 8;
    cfg.n_grid = 32;
    const WienerPath z = WienerPath::zero(-6.0, 0.5, 1e-3);
    const auto ics = default_ic_cloud(8, 2.0, 4);
    const auto rows = semicontinuity_experiment(spec, z, NoiseVariant::Ou, {{0.1, 0.0}},
                                                {1.0, 2.0}, ics, cfg, 1e-3, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows.front().dist_total == 0.0);
    CHECK(rows.front().dist_total <= rows.front().dist_split1 + rows.front().dist_split2 + 1e-12);
}
