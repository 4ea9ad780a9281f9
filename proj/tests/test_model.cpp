#include <doctest.h>

#include "nrd/manifest.hpp"
#include "nrd/model.hpp"
#include "nrd/noise.hpp"
#include "nrd/solver.hpp"
#include "nrd/wiener.hpp"

#include <cmath>
#include <stdexcept>

using namespace nrd;

TEST_CASE("default spec passes the structural checks and the spectral gap") {
    ModelSpec spec;
    const ValidationReport rep = validate(spec);
    CHECK(rep.ok());
    bool saw_gap = false;
    for (const auto& r : rep.rows) {
        if (r.name.find("spectral gap") != std::string::npos) {
            saw_gap = true;
            CHECK(r.lhs == doctest::Approx(kPi * kPi));
            CHECK(r.rhs == doctest::Approx(6.0));
            CHECK(r.pass);
        }
    }
    CHECK(saw_gap);
}

TEST_CASE("an oversized growth constant fails the gap check") {
    ModelSpec spec;
    spec.c_f = 3.0; // 4*C_f = 12 > pi^2
    const ValidationReport rep = validate(spec);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("sampled lipschitz constant matches the analytic bound") {
    ModelSpec spec;
    const ValidationReport rep = validate(spec);
    const double analytic = (spec.m_tilde - spec.m) * 3.0 * std::sqrt(3.0) / 8.0;
    CHECK(rep.lipschitz_a <= analytic + 1e-6);
    CHECK(rep.lipschitz_a >= analytic * 0.999 - 1e-6);
}

TEST_CASE("constant diffusion collapses the smallness conditions") {
    ModelSpec spec;
    spec.a_profile = AProfile::Constant;
    const ValidationReport rep = validate(spec, kLambda1, 1.0);
    CHECK(rep.lipschitz_a == doctest::Approx(0.0));
    for (const auto& r : rep.rows) {
        if (r.name.find("additive smallness") != std::string::npos) {
            CHECK(r.rhs == doctest::Approx(2.0 * spec.eta / kLambda1));
            CHECK(r.pass); // m = 1 > 2*1.5/pi^2 = 0.304
        }
        if (r.name.find("multiplicative smallness") != std::string::npos)
            CHECK(r.rhs == doctest::Approx(4.0 * spec.eta / kLambda1));
    }
}

TEST_CASE("smallness rows are informational, not fatal") {
    ModelSpec spec; // rational profile: 2*L_a*|l| = 1.3 > m = 1 fails the sufficient condition
    const ValidationReport rep = validate(spec, kLambda1, 0.0);
    bool saw_fail = false;
    for (const auto& r : rep.rows)
        if (!r.pass) {
            CHECK_FALSE(r.fatal);
            saw_fail = true;
        }
    CHECK(saw_fail);
    CHECK(rep.ok());
}

TEST_CASE("cubic reaction satisfies the sign condition at the documented constants") {
    ModelSpec spec;
    spec.f_profile = FProfile::CubicP4;
    spec.p = 4.0;
    spec.kappa = 0.5;
    spec.alpha1 = 1.0;
    spec.alpha2 = 0.5;
    spec.coupling = CouplingType::General;
    const ValidationReport rep = validate(spec);
    CHECK(rep.ok());
    // symbolic spot checks: f(s)s = s^2 - s^4 against the two-sided bound
    for (double s : {-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0}) {
        const double fs_s = spec.f(s) * s;
        CHECK(fs_s <= spec.kappa - spec.alpha2 * std::pow(s, 4.0) + 1e-12);
        CHECK(fs_s >= -spec.kappa - spec.alpha1 * std::pow(s, 4.0) - 1e-12);
    }
}

TEST_CASE("conjugate exponent is computed, not stored") {
    ModelSpec spec;
    spec.p = 4.0;
    CHECK(spec.p1() == doctest::Approx(4.0 / 3.0));
    spec.p = 2.0;
    CHECK(spec.p1() == doctest::Approx(2.0));
}

TEST_CASE("config serialization round trips and rejects unknown keys") {
    ModelSpec spec;
    spec.epsilon = 0.25;
    spec.coupling = CouplingType::Multiplicative;
    spec.psi1 = TimeProfile{TimeProfile::ExpDecay, 0.3, 2.0};
    const std::string text = serialize_config(spec);
    const ModelSpec back = parse_config_text(text);
    CHECK(back.epsilon == spec.epsilon);
    CHECK(back.coupling == CouplingType::Multiplicative);
    CHECK(back.psi1.kind == TimeProfile::ExpDecay);
    CHECK(back.psi1.amplitude == spec.psi1.amplitude);
    CHECK(serialize_config(back) == text);

    CHECK_THROWS_AS((void)parse_config_text("m = 1\nbogus_key = 3\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_config_text("m 1\n"), std::invalid_argument);
}

TEST_CASE("alpha bound of the zero data problem is zero") {
    ModelSpec spec;
    spec.epsilon = 0.0;
    spec.f_profile = FProfile::Linear; // f(0) = 0 either way; linear keeps it exact
    const WienerPath z = WienerPath::zero(-1.0, 1.0, 1e-3);
    std::vector<Field> ics{Field(8)};
    const double a = alpha_bound(spec, z, nullptr, 0.5, 0.0, ics, 8);
    CHECK(a == 0.0);
}

TEST_CASE("alpha bound of the linear first-mode problem is the first eigenvalue") {
    ModelSpec spec;
    spec.a_profile = AProfile::Constant; // a = m = 1
    spec.f_profile = FProfile::Linear;
    spec.eta = 1.0;
    spec.c_f = 1.0;
    spec.epsilon = 0.0;
    const WienerPath z = WienerPath::zero(-1.0, 1.0, 1e-3);
    std::vector<Field> ics{Field::basis(8, 1, 1.0)};
    const double a = alpha_bound(spec, z, nullptr, 0.5, 1.0, ics, 8);
    CHECK(a == doctest::Approx(kPi * kPi).epsilon(1e-9));
}

TEST_CASE("alpha bound is reproducible on seeded noise") {
    ModelSpec spec;
    spec.epsilon = 0.1;
    const WienerPath p = sample_path(7, -46.0, 1.0, 2.5e-4);
    const NoiseKind kind = NoiseKind::ou(0.05);
    std::vector<Field> ics{Field::basis(8, 1, 0.5), Field::basis(8, 2, -0.5)};
    const double a1 = alpha_bound(spec, p, &kind, 0.5, 1.0, ics, 8);
    const double a2 = alpha_bound(spec, p, &kind, 0.5, 1.0, ics, 8);
    CHECK(a1 == a2);
    CHECK(std::isfinite(a1));
    CHECK(a1 > 0.0);
}
