#include "nrd/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nrd {

double TimeProfile::operator()(double t) const {
    switch (kind) {
    case Zero: return 0.0;
    case Constant: return amplitude;
    case ExpDecay: return amplitude * std::exp(-rate * std::abs(t));
    }
    return 0.0;
}

double ModelSpec::a(double s) const {
    switch (a_profile) {
    case AProfile::Rational: return m + (m_tilde - m) / (1.0 + s * s);
    case AProfile::Constant: return m;
    }
    return m;
}

double ModelSpec::f(double s) const {
    switch (f_profile) {
    case FProfile::SinP2: return -s + 0.5 * std::sin(s);
    case FProfile::CubicP4: return s - s * s * s;
    case FProfile::Linear: return -s;
    }
    return 0.0;
}

double ModelSpec::g(double t, double s) const {
    (void)t;
    return d1 * s;
}

Field ModelSpec::phi(std::size_t n_modes) const {
    return Field::basis(n_modes, phi_mode, phi_amplitude);
}

Field ModelSpec::h_field(double t, std::size_t n_modes) const {
    Field h(n_modes);
    switch (h_profile.kind) {
    case HProfile::Zero: break;
    case HProfile::ConstantField:
        h = Field::basis(n_modes, h_profile.mode, h_profile.amplitude);
        break;
    case HProfile::Pulse:
        h = Field::basis(n_modes, h_profile.mode,
                         h_profile.amplitude * std::exp(-h_profile.rate * std::abs(t)));
        break;
    }
    return h;
}

double ModelSpec::ell(double x) const {
    switch (l_weight) {
    case LWeight::One: return 1.0;
    case LWeight::Tilt: return 1.0 + l_tilt * (x - 0.5);
    }
    return 1.0;
}

double ModelSpec::l_norm(std::size_t n_grid) const {
    if (l_weight == LWeight::One) return 1.0;
    const double hx = 1.0 / (double)n_grid;
    double acc = 0.0;
    for (std::size_t j = 0; j <= n_grid; ++j) {
        const double w = (j == 0 || j == n_grid) ? 0.5 : 1.0;
        const double v = ell((double)j * hx);
        acc += w * v * v;
    }
    return std::sqrt(acc * hx);
}

double nonlocal_l(const ModelSpec& spec, const std::vector<double>& samples, double hx) {
    double acc = 0.0; // boundary values vanish under the Dirichlet condition
    for (std::size_t j = 0; j < samples.size(); ++j)
        acc += spec.ell((double)(j + 1) * hx) * samples[j];
    return acc * hx;
}

double nonlocal_l(const ModelSpec& spec, const Field& u, std::size_t n_grid) {
    const std::vector<double> s = to_samples(u, n_grid);
    return nonlocal_l(spec, s, 1.0 / (double)(n_grid + 1));
}

double nonlocal_value(const ModelSpec& spec, const Field& u, std::size_t n_grid) {
    return spec.a(nonlocal_l(spec, u, n_grid));
}

bool ValidationReport::ok() const {
    for (const auto& r : rows)
        if (r.fatal && !r.pass) return false;
    return true;
}

namespace {

void add_row(ValidationReport& rep, const std::string& name, double lhs, double rhs, bool pass,
             bool fatal) {
    rep.rows.push_back({name, lhs, rhs, pass, fatal});
}

} // namespace

ValidationReport validate(const ModelSpec& spec, double lambda_1, double alpha) {
    ValidationReport rep;
    if (!(lambda_1 > 0.0)) throw std::invalid_argument("model: lambda_1 must be positive");

    // sampling range wide enough that the |s|^p terms dominate
    double s_max = 10.0;
    if (spec.p > 2.0 && spec.alpha2 > 0.0)
        s_max = std::max(s_max, 10.0 * std::pow(spec.kappa / spec.alpha2, 1.0 / spec.p));
    const int n_samp = 20001;
    const double ds = 2.0 * s_max / (n_samp - 1);

    double a_min = 1e300, a_max = -1e300;
    double worst_lip = 0.0, worst_growth = -1e300, worst_sign_hi = -1e300, worst_sign_lo = -1e300;
    double worst_g1 = -1e300, worst_g2 = -1e300;
    double prev_a = spec.a(-s_max);
    for (int i = 0; i < n_samp; ++i) {
        const double s = -s_max + i * ds;
        const double as = spec.a(s);
        const double fs = spec.f(s);
        a_min = std::min(a_min, as);
        a_max = std::max(a_max, as);
        if (i > 0) worst_lip = std::max(worst_lip, std::abs(as - prev_a) / ds);
        prev_a = as;
        if (spec.p == 2.0) {
            worst_growth = std::max(worst_growth, std::abs(fs) - spec.c_f * (1.0 + std::abs(s)));
        } else {
            worst_sign_hi = std::max(worst_sign_hi,
                                     fs * s - (spec.kappa - spec.alpha2 * std::pow(std::abs(s), spec.p)));
            worst_sign_lo = std::max(worst_sign_lo,
                                     (-spec.kappa - spec.alpha1 * std::pow(std::abs(s), spec.p)) - fs * s);
        }
        if (spec.coupling == CouplingType::General) {
            const double gs = spec.g(0.0, s);
            worst_g1 = std::max(worst_g1, std::abs(gs) -
                                              (spec.d1 * std::pow(std::abs(s), spec.q - 1.0) + spec.psi1(0.0)));
            worst_g2 = std::max(worst_g2, spec.d1 - (spec.d2 * std::pow(std::abs(s), spec.q - 2.0) +
                                                     spec.psi2(0.0)));
        }
    }
    rep.lipschitz_a = worst_lip;

    add_row(rep, "a bounded below: min a(s) >= m", a_min, spec.m, a_min >= spec.m - 1e-12, true);
    add_row(rep, "a bounded above: max a(s) <= m_tilde", a_max, spec.m_tilde,
            a_max <= spec.m_tilde + 1e-12, true);
    add_row(rep, "m positive", spec.m, 0.0, spec.m > 0.0, true);

    if (spec.p == 2.0) {
        // p = 2 regime: Lipschitz reaction with linear growth
        double worst_f_lip = 0.0;
        double pf = spec.f(-s_max);
        for (int i = 1; i < n_samp; ++i) {
            const double s = -s_max + i * ds;
            const double fs = spec.f(s);
            worst_f_lip = std::max(worst_f_lip, std::abs(fs - pf) / ds);
            pf = fs;
        }
        add_row(rep, "f Lipschitz: max slope <= eta", worst_f_lip, spec.eta,
                worst_f_lip <= spec.eta + 1e-9, true);
        add_row(rep, "f linear growth: |f| - C_f(1+|s|) <= 0", worst_growth, 0.0,
                worst_growth <= 1e-9, true);
    } else {
        add_row(rep, "f sign upper: f(s)s <= kappa - alpha2|s|^p", worst_sign_hi, 0.0,
                worst_sign_hi <= 1e-9, true);
        add_row(rep, "f sign lower: f(s)s >= -kappa - alpha1|s|^p", worst_sign_lo, 0.0,
                worst_sign_lo <= 1e-9, true);
        add_row(rep, "exponent range: 2 <= q < p", spec.q, spec.p,
                spec.q >= 2.0 && spec.q < spec.p, true);
    }
    if (spec.coupling == CouplingType::General) {
        add_row(rep, "g growth: |g| <= d1|s|^{q-1} + psi1", worst_g1, 0.0, worst_g1 <= 1e-9, true);
        add_row(rep, "g slope: |dg/ds| <= d2|s|^{q-2} + psi2", worst_g2, 0.0, worst_g2 <= 1e-9,
                true);
    }

    const double gap_lhs = spec.m * lambda_1, gap_rhs = 4.0 * spec.c_f;
    add_row(rep, "spectral gap: m*lambda1 > 4*C_f", gap_lhs, gap_rhs, gap_lhs > gap_rhs, true);

    if (alpha >= 0.0) {
        const double la = rep.lipschitz_a, ln = spec.l_norm();
        const double add_rhs =
            alpha * la * ln / lambda_1 + 2.0 * la * ln + 2.0 * spec.eta / lambda_1;
        add_row(rep, "additive smallness: m > alpha*L_a|l|/lambda1 + 2L_a|l| + 2eta/lambda1",
                spec.m, add_rhs, spec.m > add_rhs, false);
        const double mul_rhs = (alpha + 2.0) * la * ln / lambda_1 + la * ln * (alpha + 2.0) +
                               4.0 * spec.eta / lambda_1;
        add_row(rep, "multiplicative smallness: m > (alpha+2)L_a|l|/lambda1 + (alpha+2)L_a|l| + 4eta/lambda1",
                spec.m, mul_rhs, spec.m > mul_rhs, false);
    }
    return rep;
}

} // namespace nrd
