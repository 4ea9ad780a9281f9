#include "nrd/attractor.hpp"

#include "nrd/parallel.hpp"
#include "nrd/prng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace nrd {

double hausdorff_semidistance(const PointCloud& a, const PointCloud& b) {
    if (a.members.empty() || b.members.empty())
        throw std::invalid_argument("attractor: semidistance of an empty cloud");
    double outer = 0.0;
    for (const Field& fa : a.members) {
        double inner = 1e300;
        for (const Field& fb : b.members) inner = std::min(inner, l2_distance(fa, fb));
        outer = std::max(outer, inner);
    }
    return outer;
}

namespace {

double exact_exp_integral(double rate, double s_lo, double s_hi) {
    // integral_{s_lo}^{s_hi} e^{rate*s} ds
    return (std::exp(rate * s_hi) - std::exp(rate * s_lo)) / rate;
}

/// integral of exp(g(s)) with g piecewise-linear between grid nodes; exact for
/// linear g, O(h^2) otherwise.
double exp_product_integral(const std::vector<double>& g, double h) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double dg = g[i + 1] - g[i];
        if (std::abs(dg) < 1e-12) {
            acc += h * 0.5 * (std::exp(g[i]) + std::exp(g[i + 1]));
        } else {
            acc += h * (std::exp(g[i + 1]) - std::exp(g[i])) / dg;
        }
    }
    return acc;
}

double additive_radius_formula(const ModelSpec& spec, const AuxTable& aux, double phi_norm, double h,
                    std::int64_t s_nodes) {
    const double kap = spec.m * kLambda1 - 4.0 * spec.c_f;
    const double measure = 1.0;
    const double cf = spec.c_f, m = spec.m, mt = spec.m_tilde;
    auto x2 = [&](std::int64_t i) {
        const double v = aux.scalar_at_node(i) * phi_norm;
        return v * v;
    };
    // path-dependent integrals by trapezoid, constant kernels in closed form
    double ix = 0.0;
    for (std::int64_t i = -s_nodes; i <= 0; ++i) {
        const double w = (i == -s_nodes || i == 0) ? 0.5 : 1.0;
        ix += w * std::exp(kap * (double)i * h) * x2(i);
    }
    ix *= h;
    const std::int64_t one = (std::int64_t)std::llround(1.0 / h);
    double jx = 0.0;
    for (std::int64_t i = -one; i <= 0; ++i) {
        const double w = (i == -one || i == 0) ? 0.5 : 1.0;
        jx += w * std::exp(kap * (double)i * h) * x2(i);
    }
    jx *= h;
    // blow-up guard: the kernel must have tamed the tail
    const double head = std::exp(0.0) * x2(0), tailv = std::exp(-kap * (double)s_nodes * h) * x2(-s_nodes);
    if (tailv > head + 1.0)
        throw std::runtime_error("attractor: radius integrand growing along the truncation study");

    double r = 2.0 * x2(0);
    r += 8.0 * cf * measure / (m * kap);
    r += 4.0 * kLambda1 * cf * cf * measure / (kap * kap);
    r += (4.0 + 2.0 * kLambda1 * cf * m + kap + 2.0 * cf * measure) / (m * kap);
    const double hist_kernel = exact_exp_integral(kap, -(double)s_nodes * h, 0.0);
    r += (4.0 / m + 2.0 * kLambda1 * cf) *
         ((1.0 / (kLambda1 * cf) + 2.0 * cf / kLambda1) * ix + (2.0 * mt * mt / m) * hist_kernel);
    const double unit_kernel = exact_exp_integral(kap, -1.0, 0.0);
    r += 2.0 * ((kLambda1 * cf * measure + mt * mt / m) * unit_kernel +
                (cf * kLambda1 + kLambda1 / cf) * jx);
    return r;
}

double multiplicative_radius_formula(const ModelSpec& spec, const AuxTable& aux, double h, std::int64_t s_nodes) {
    const double kap = spec.m * kLambda1 - 3.0 * spec.c_f;
    const double measure = 1.0;
    const double cf = spec.c_f, m = spec.m;
    const std::int64_t one = (std::int64_t)std::llround(1.0 / h);
    const std::int64_t lo = -one - s_nodes;
    // Y(i) = integral_{s_i}^{0} 2 y(theta_r w) dr, trapezoid from 0 downward
    std::vector<double> Y((std::size_t)(-lo) + 1, 0.0);
    for (std::int64_t i = -1; i >= lo; --i)
        Y[(std::size_t)(-i)] = Y[(std::size_t)(-i - 1)] +
                               h * (aux.scalar_at_node(i) + aux.scalar_at_node(i + 1));
    auto y_at = [&](std::int64_t i) { return aux.scalar_at_node(i); };
    auto Y_at = [&](std::int64_t i) { return Y[(std::size_t)(-i)]; };

    const double e0 = Y_at(-one) + 2.0 * y_at(0);
    std::vector<double> g;
    g.reserve((std::size_t)s_nodes + 1);
    for (std::int64_t i = lo; i <= -one; ++i)
        g.push_back(-2.0 * y_at(i) + kap * (double)i * h + (Y_at(i) - Y_at(-one)));
    if (g.front() > g.back() + 40.0)
        throw std::runtime_error("attractor: radius integrand growing along the truncation study");
    const double i1 = exp_product_integral(g, h);
    g.clear();
    for (std::int64_t i = -one; i <= 0; ++i)
        g.push_back(-2.0 * y_at(i) + kap * (double)i * h + 2.0 * y_at(0) + Y_at(i));
    const double i2 = exp_product_integral(g, h);
    return (1.0 / m) * std::exp(e0) * (1.0 + cf * measure * i1) +
           ((cf + 2.0 * cf * cf) * measure / m) * i2;
}

double general_radius_formula(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind) {
    const double h = path.dt_grid();
    const double rate = spec.m * kLambda1;
    const std::int64_t s_nodes = (std::int64_t)std::llround(kHistoryTimeConstants / (rate * h));
    const NoiseTable z = NoiseTable::build(kind, path, -s_nodes, 0);
    const double measure = 1.0;
    const double p1 = spec.p1();
    const double expo = spec.p / (spec.p - spec.q);
    double acc = 0.0;
    double head = -1e300, tailv = 0.0;
    for (std::int64_t i = -s_nodes; i <= 0; ++i) {
        const double s = (double)i * h;
        const double zn = std::abs(z.at_node(i));
        const double h_star = spec.h_field(s, 16).h_minus1_norm_sq();
        const double psi1v = std::abs(spec.psi1(s));
        const double integ =
            std::exp(rate * s) *
            ((2.0 / spec.m) * h_star +
             (2.0 * spec.kappa + spec.epsilon * spec.c_const * std::pow(zn, expo)) * measure +
             spec.epsilon * spec.c_const * std::pow(zn, p1) * std::pow(psi1v, p1));
        if (i == -s_nodes) tailv = integ;
        head = std::max(head, integ);
        const double w = (i == -s_nodes || i == 0) ? 0.5 : 1.0;
        acc += w * integ;
    }
    if (tailv > head * 0.9 && tailv > 1e-8)
        throw std::runtime_error("attractor: radius integrand not decayed at the truncation cut");
    return 1.0 + acc * h;
}

} // namespace

RadiusReport absorbing_radius(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                              RadiusFormula formula) {
    RadiusReport rep;
    rep.formula = formula;
    rep.quad_step = path.dt_grid();
    const double h = path.dt_grid();
    switch (formula) {
    case RadiusFormula::General: {
        if (spec.p <= 2.0)
            throw std::invalid_argument("attractor: the general-regime radius needs the p > 2 regime");
        rep.truncation = kHistoryTimeConstants / (spec.m * kLambda1);
        rep.r_squared = general_radius_formula(spec, path, kind);
        rep.r_squared_white = std::nan("");
        return rep;
    }
    case RadiusFormula::Additive: {
        if (spec.coupling != CouplingType::Additive || spec.p != 2.0)
            throw std::invalid_argument("attractor: the additive radius needs the additive p = 2 regime");
        const double kap = spec.m * kLambda1 - 4.0 * spec.c_f;
        if (!(kap > 0.0)) throw std::invalid_argument("attractor: spectral gap violated");
        const std::int64_t s_nodes = (std::int64_t)std::llround(kHistoryTimeConstants / (kap * h));
        rep.truncation = (double)s_nodes * h;
        const Field phi = spec.phi(8);
        const double phi_norm = phi.l2_norm();
        const AuxProcess pd = AuxProcess::additive(kind, spec.epsilon, spec.eta_damp, phi);
        const AuxProcess pw = AuxProcess::additive(std::nullopt, spec.epsilon, spec.eta_damp, phi);
        const AuxTable ad = AuxTable::build(pd, path, -s_nodes, 0);
        const AuxTable aw = AuxTable::build(pw, path, -s_nodes, 0);
        rep.r_squared = additive_radius_formula(spec, ad, phi_norm, h, s_nodes);
        rep.r_squared_white = additive_radius_formula(spec, aw, phi_norm, h, s_nodes);
        return rep;
    }
    case RadiusFormula::Multiplicative: {
        if (spec.coupling != CouplingType::Multiplicative || spec.p != 2.0)
            throw std::invalid_argument(
                "attractor: the multiplicative radius needs the multiplicative p = 2 regime");
        const double kap = spec.m * kLambda1 - 3.0 * spec.c_f;
        if (!(kap > 0.0)) throw std::invalid_argument("attractor: spectral gap violated");
        const std::int64_t s_nodes = (std::int64_t)std::llround(kHistoryTimeConstants / (kap * h));
        const std::int64_t one = (std::int64_t)std::llround(1.0 / h);
        rep.truncation = (double)(s_nodes + one) * h;
        const AuxProcess pd = AuxProcess::multiplicative(kind, spec.epsilon);
        const AuxProcess pw = AuxProcess::multiplicative(std::nullopt, spec.epsilon);
        const AuxTable ad = AuxTable::build(pd, path, -one - s_nodes, 0);
        const AuxTable aw = AuxTable::build(pw, path, -one - s_nodes, 0);
        rep.r_squared = multiplicative_radius_formula(spec, ad, h, s_nodes);
        rep.r_squared_white = multiplicative_radius_formula(spec, aw, h, s_nodes);
        return rep;
    }
    }
    throw std::logic_error("attractor: unknown radius formula");
}

std::vector<Field> default_ic_cloud(std::size_t n_modes, double radius, int count,
                                    std::uint64_t ic_seed) {
    std::vector<Field> ics;
    ics.reserve((std::size_t)count);
    const int half = count / 2;
    for (int i = 0; i < half; ++i) {
        const int mode = (i / 2) % (int)n_modes + 1;
        const double amp = (i % 2 == 0 ? radius : -radius);
        ics.push_back(Field::basis(n_modes, mode, amp));
    }
    std::uint64_t ctr = 0;
    for (int i = half; i < count; ++i) {
        Field f(n_modes);
        for (std::size_t k = 0; k < n_modes; ++k) f.coeffs[k] = gaussian(ic_seed, ctr++);
        const double norm = f.l2_norm();
        const double target = radius * (double)(i - half + 1) / (double)std::max(1, count - half);
        if (norm > 0.0) f = (target / norm) * f;
        ics.push_back(std::move(f));
    }
    return ics;
}

namespace {

Field evolve_terminal(const ModelSpec& spec, const WienerPath& path, const NoiseKind* kind,
                      DynamicsMode mode, double t_from, const Field& ic, const SolveConfig& proto,
                      const NoiseTable* z, const AuxTable* aux) {
    SolveConfig cfg = proto;
    cfg.t_start = t_from;
    cfg.t_end = 0.0;
    cfg.recording = Recording::TerminalOnly;
    switch (mode) {
    case DynamicsMode::Deterministic:
        return solve_deterministic(spec, cfg, ic).terminal();
    case DynamicsMode::Stationary:
        return solve_stationary(spec, path, *kind, cfg, ic, z).terminal();
    case DynamicsMode::White:
        if (spec.coupling == CouplingType::Additive)
            return solve_white_additive(spec, path, cfg, ic, aux).u.terminal();
        return solve_white_multiplicative(spec, path, cfg, ic, aux).u.terminal();
    }
    throw std::logic_error("attractor: unknown dynamics mode");
}

} // namespace

NonCauchyError::NonCauchyError(std::vector<double> displacements)
    : std::runtime_error("attractor: pullback ensemble is not Cauchy across pullback times"),
      displacement_curve(std::move(displacements)) {}

PointCloud pullback_attractor_sample(const ModelSpec& spec, const WienerPath& path,
                                     const NoiseKind* kind, DynamicsMode mode,
                                     const std::vector<double>& pullback_times,
                                     const std::vector<Field>& ics, const SolveConfig& cfg,
                                     double cauchy_tol, unsigned workers) {
    if (pullback_times.empty() || ics.empty())
        throw std::invalid_argument("attractor: need pullback times and initial states");
    if (mode == DynamicsMode::Stationary && kind == nullptr)
        throw std::invalid_argument("attractor: stationary sampling needs a noise kind");
    for (std::size_t j = 1; j < pullback_times.size(); ++j)
        if (pullback_times[j] <= pullback_times[j - 1])
            throw std::invalid_argument("attractor: pullback times must increase");

    // Shared tables covering the largest pullback window.
    const double t_max = pullback_times.back();
    std::optional<NoiseTable> z;
    std::optional<AuxTable> aux;
    if (mode == DynamicsMode::Stationary && spec.epsilon != 0.0) {
        const std::int64_t i0 = path.node_of(-t_max);
        z = NoiseTable::build(*kind, path, i0, 0);
    } else if (mode == DynamicsMode::White) {
        const std::int64_t i0 = path.node_of(-t_max);
        const AuxProcess proc =
            spec.coupling == CouplingType::Additive
                ? AuxProcess::additive(std::nullopt, spec.epsilon, spec.eta_damp,
                                       spec.phi(cfg.n_modes))
                : AuxProcess::multiplicative(std::nullopt, spec.epsilon);
        aux = AuxTable::build(proc, path, i0, 0);
    }

    std::vector<Field> prev, cur(ics.size());
    std::vector<double> displacement;
    for (std::size_t j = 0; j < pullback_times.size(); ++j) {
        const double t_from = -pullback_times[j];
        parallel_for(ics.size(), workers, [&](std::size_t i) {
            cur[i] = evolve_terminal(spec, path, kind, mode, t_from, ics[i], cfg,
                                     z ? &*z : nullptr, aux ? &*aux : nullptr);
        });
        if (j > 0) {
            double disp = 0.0;
            for (std::size_t i = 0; i < ics.size(); ++i)
                disp = std::max(disp, l2_distance(cur[i], prev[i]));
            displacement.push_back(disp);
        }
        prev = cur;
    }
    if (!displacement.empty() && displacement.back() > cauchy_tol)
        throw NonCauchyError(displacement);

    PointCloud cloud;
    cloud.members = std::move(cur);
    cloud.meta.epsilon = spec.epsilon;
    cloud.meta.delta = (mode == DynamicsMode::Stationary && kind) ? kind->delta : 0.0;
    cloud.meta.seed = path.seed();
    cloud.meta.pullback_time = t_max;
    cloud.meta.object = mode == DynamicsMode::Deterministic ? "attractor"
                        : mode == DynamicsMode::White       ? "attractor-white"
                                                            : "attractor-stationary";
    return cloud;
}

AbsorbReport absorbing_check(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                             const RadiusReport& radius, double ball_radius, double pullback_time,
                             int n_ics, const SolveConfig& cfg, double slack, unsigned workers) {
    if (!(pullback_time > 0.0)) throw std::invalid_argument("attractor: pullback time must be positive");
    const std::vector<Field> ics = default_ic_cloud(cfg.n_modes, ball_radius, n_ics);
    std::optional<NoiseTable> z;
    if (spec.epsilon != 0.0)
        z = NoiseTable::build(kind, path, path.node_of(-pullback_time), 0);
    std::vector<double> terminal_sq(ics.size());
    parallel_for(ics.size(), workers, [&](std::size_t i) {
        const Field u0 = evolve_terminal(spec, path, &kind, DynamicsMode::Stationary,
                                         -pullback_time, ics[i], cfg, z ? &*z : nullptr, nullptr);
        const double n = u0.l2_norm();
        terminal_sq[i] = n * n;
    });
    AbsorbReport rep;
    rep.r_squared = radius.r_squared;
    rep.bound = radius.r_squared / kLambda1 * (1.0 + slack);
    for (double v : terminal_sq) rep.max_terminal_sq = std::max(rep.max_terminal_sq, v);
    rep.contained = rep.max_terminal_sq <= rep.bound;
    return rep;
}

std::vector<SemidistRow> semicontinuity_experiment(
    const ModelSpec& spec, const WienerPath& path, NoiseVariant variant,
    const std::vector<std::pair<double, double>>& schedule,
    const std::vector<double>& pullback_times, const std::vector<Field>& ics,
    const SolveConfig& cfg, double cauchy_tol, unsigned workers) {
    if (spec.p != 2.0)
        throw std::invalid_argument("attractor: semicontinuity experiment needs the p = 2 regime");
    const PointCloud det = pullback_attractor_sample(spec, path, nullptr,
                                                     DynamicsMode::Deterministic, pullback_times,
                                                     ics, cfg, cauchy_tol, workers);
    std::vector<SemidistRow> rows;
    for (const auto& [d, eps] : schedule) {
        ModelSpec se = spec;
        se.epsilon = eps;
        SemidistRow row;
        row.delta = d;
        row.epsilon = eps;
        if (eps == 0.0) {
            row.dist_total = hausdorff_semidistance(det, det);
            row.dist_split1 = 0.0;
            row.dist_split2 = 0.0;
            rows.push_back(row);
            continue;
        }
        const NoiseKind kind = NoiseKind::make(variant, d);
        const PointCloud cde = pullback_attractor_sample(se, path, &kind, DynamicsMode::Stationary,
                                                         pullback_times, ics, cfg, cauchy_tol,
                                                         workers);
        const PointCloud c0e = pullback_attractor_sample(se, path, nullptr, DynamicsMode::White,
                                                         pullback_times, ics, cfg, cauchy_tol,
                                                         workers);
        row.dist_total = hausdorff_semidistance(cde, det);
        row.dist_split1 = hausdorff_semidistance(cde, c0e);
        row.dist_split2 = hausdorff_semidistance(c0e, det);
        rows.push_back(row);
    }
    return rows;
}

void dump_cloud_csv(const PointCloud& cloud, std::ostream& os, const std::string& manifest_line) {
    if (!manifest_line.empty()) os << manifest_line << "\n";
    os << "ic_index";
    if (!cloud.members.empty())
        for (std::size_t k = 1; k <= cloud.members.front().n_modes(); ++k) os << ",c" << k;
    os << "\n";
    char buf[64];
    for (std::size_t i = 0; i < cloud.members.size(); ++i) {
        os << i;
        for (double c : cloud.members[i].coeffs) {
            std::snprintf(buf, sizeof buf, ",%.17g", c);
            os << buf;
        }
        os << "\n";
    }
}

} // namespace nrd
