#include "nrd/solver.hpp"

#include "nrd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nrd {

DivergenceError::DivergenceError(double t_at)
    : std::runtime_error([t_at] {
          char buf[96];
          std::snprintf(buf, sizeof buf, "solver: state diverged at t = %.6g", t_at);
          return std::string(buf);
      }()),
      t(t_at) {}

namespace {

constexpr double kDivergenceGuard = 1e6;

struct StepGrid {
    std::int64_t i_start = 0;   // path node of t_start (0 when no path)
    std::int64_t nodes_per_step = 1;
    std::size_t steps = 0;
    double dt = 0.0;
    double t0 = 0.0;
    double time_of(std::size_t n) const { return t0 + (double)n * dt; }
};

StepGrid make_grid(const SolveConfig& cfg, const WienerPath* path) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(cfg.t_start < cfg.t_end)) throw std::invalid_argument("solver: t_start must precede t_end");
    StepGrid g;
    g.dt = cfg.dt;
    g.t0 = cfg.t_start;
    const double raw_steps = (cfg.t_end - cfg.t_start) / cfg.dt;
    g.steps = (std::size_t)std::llround(raw_steps);
    if (g.steps == 0 || std::abs((double)g.steps - raw_steps) > 1e-9)
        throw std::invalid_argument("solver: horizon must be an integer number of steps");
    if (path) {
        const double h = path->dt_grid();
        g.nodes_per_step = (std::int64_t)std::llround(cfg.dt / h);
        if (g.nodes_per_step < 1 || std::abs((double)g.nodes_per_step * h - cfg.dt) > 1e-12)
            throw std::invalid_argument("solver: dt must be an integer multiple of dt_grid");
        g.i_start = path->node_of(cfg.t_start);
    }
    return g;
}

void guard_state(const Field& u, double t) {
    const double n = u.l2_norm();
    if (!std::isfinite(n) || n > kDivergenceGuard) throw DivergenceError(t);
}

/** Shared per-solve workspace: transform plan, sample buffers, and the additive
 * data (phi samples, l(phi)) that stay fixed along a trajectory. */
struct Stepper {
    const ModelSpec& spec;
    SineTransform plan;
    std::vector<double> samp, rhs_s;
    Field rhs;
    Field phi;
    std::vector<double> phi_samp;
    double l_phi = 0.0;

    Stepper(const ModelSpec& s, const SolveConfig& cfg)
        : spec(s), plan(cfg.n_modes, cfg.n_grid), rhs(cfg.n_modes) {
        if (s.coupling == CouplingType::Additive) {
            phi = s.phi(cfg.n_modes);
            plan.to_samples(phi, phi_samp);
            l_phi = nonlocal_l(s, phi_samp, plan.dx());
        }
    }

    void add_forcing(double t) {
        if (spec.h_profile.is_zero()) return;
        const Field h = spec.h_field(t, rhs.n_modes());
        for (std::size_t k = 0; k < rhs.n_modes(); ++k) rhs.coeffs[k] += h.coeffs[k];
    }

    Field imex_update(const Field& u, double dt, double a_n) {
        Field next(u.n_modes());
        for (std::size_t k = 0; k < u.n_modes(); ++k)
            next.coeffs[k] =
                (u.coeffs[k] + dt * rhs.coeffs[k]) / (1.0 + dt * a_n * eigenvalue((int)k + 1));
        return next;
    }

    /// Stationary/deterministic right-hand side; zeta == nullptr drops the noise term.
    double assemble_stationary(const Field& u, double t, const double* zeta) {
        plan.to_samples(u, samp);
        const double a_n = spec.a(nonlocal_l(spec, samp, plan.dx()));
        rhs_s.resize(samp.size());
        if (zeta) {
            const double ez = spec.epsilon * *zeta;
            switch (spec.coupling) {
            case CouplingType::Multiplicative:
                for (std::size_t j = 0; j < samp.size(); ++j)
                    rhs_s[j] = spec.f(samp[j]) + ez * samp[j];
                break;
            case CouplingType::General:
                for (std::size_t j = 0; j < samp.size(); ++j)
                    rhs_s[j] = spec.f(samp[j]) + ez * spec.g(t, samp[j]);
                break;
            case CouplingType::Additive:
                for (std::size_t j = 0; j < samp.size(); ++j) rhs_s[j] = spec.f(samp[j]);
                break;
            }
        } else {
            for (std::size_t j = 0; j < samp.size(); ++j) rhs_s[j] = spec.f(samp[j]);
        }
        plan.from_samples(rhs_s, rhs);
        if (zeta && spec.coupling == CouplingType::Additive) {
            const double ez = spec.epsilon * *zeta;
            for (std::size_t k = 0; k < rhs.n_modes(); ++k) rhs.coeffs[k] += ez * phi.coeffs[k];
        }
        add_forcing(t);
        return a_n;
    }

    Field step_stationary(const Field& u, double t, double dt, const double* zeta) {
        const double a_n = assemble_stationary(u, t, zeta);
        return imex_update(u, dt, a_n);
    }

    /// Explicit full right-hand side (cross-check scheme).
    Field full_rhs(const Field& u, double t, const double* zeta) {
        const double a_n = assemble_stationary(u, t, zeta);
        Field out(u.n_modes());
        for (std::size_t k = 0; k < u.n_modes(); ++k)
            out.coeffs[k] = rhs.coeffs[k] - a_n * eigenvalue((int)k + 1) * u.coeffs[k];
        return out;
    }

    Field step_heun(const Field& u, double t, double dt, const double* zeta0,
                    const double* zeta1) {
        const Field f0 = full_rhs(u, t, zeta0);
        Field pred(u.n_modes());
        for (std::size_t k = 0; k < u.n_modes(); ++k)
            pred.coeffs[k] = u.coeffs[k] + dt * f0.coeffs[k];
        const Field f1 = full_rhs(pred, t + dt, zeta1);
        Field next(u.n_modes());
        for (std::size_t k = 0; k < u.n_modes(); ++k)
            next.coeffs[k] = u.coeffs[k] + 0.5 * dt * (f0.coeffs[k] + f1.coeffs[k]);
        return next;
    }

    /// p-equation of the additive conjugation; s = eps*G(t) scales phi.
    Field step_additive_p(const Field& p, double t, double dt, double s) {
        plan.to_samples(p, samp);
        const double a_n = spec.a(nonlocal_l(spec, samp, plan.dx()) + s * l_phi);
        rhs_s.resize(samp.size());
        for (std::size_t j = 0; j < samp.size(); ++j)
            rhs_s[j] = spec.f(samp[j] + s * phi_samp[j]);
        plan.from_samples(rhs_s, rhs);
        for (std::size_t k = 0; k < rhs.n_modes(); ++k)
            rhs.coeffs[k] += s * phi.coeffs[k] * (spec.eta_damp - a_n * eigenvalue((int)k + 1));
        add_forcing(t);
        return imex_update(p, dt, a_n);
    }

    /// q-equation of the multiplicative conjugation; y = eps*G(t).
    Field step_multiplicative_q(const Field& q, double t, double dt, double y) {
        plan.to_samples(q, samp);
        const double ey = std::exp(y), eyi = std::exp(-y);
        const double a_n = spec.a(nonlocal_l(spec, samp, plan.dx()) * ey);
        rhs_s.resize(samp.size());
        for (std::size_t j = 0; j < samp.size(); ++j) rhs_s[j] = eyi * spec.f(samp[j] * ey);
        plan.from_samples(rhs_s, rhs);
        for (std::size_t k = 0; k < rhs.n_modes(); ++k) rhs.coeffs[k] += y * q.coeffs[k];
        add_forcing(t);
        return imex_update(q, dt, a_n);
    }
};

void record(Trajectory& traj, const SolveConfig& cfg, double t, const Field& u, bool last) {
    if (cfg.recording == Recording::Full || last || traj.times.empty()) {
        if (cfg.recording == Recording::TerminalOnly && !traj.times.empty()) {
            traj.times.back() = t;
            traj.states.back() = u;
        } else {
            traj.times.push_back(t);
            traj.states.push_back(u);
        }
    }
}

} // namespace

Field step(const ModelSpec& spec, const Field& u, double t, double dt,
           std::optional<double> noise_sample, std::size_t n_grid) {
    SolveConfig cfg;
    cfg.n_modes = u.n_modes();
    cfg.n_grid = n_grid ? n_grid : 4 * u.n_modes();
    Stepper st(spec, cfg);
    const Field next =
        st.step_stationary(u, t, dt, noise_sample ? &*noise_sample : nullptr);
    guard_state(next, t + dt);
    return next;
}

Trajectory solve_deterministic(const ModelSpec& spec, const SolveConfig& cfg,
                               const Field& u_init) {
    const StepGrid grid = make_grid(cfg, nullptr);
    Stepper st(spec, cfg);
    Trajectory traj;
    traj.meta.noise = "none";
    traj.meta.scheme = cfg.scheme == Scheme::ImexEuler ? "imex-euler" : "explicit-heun";
    Field u = u_init;
    record(traj, cfg, grid.time_of(0), u, false);
    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t = grid.time_of(n);
        u = cfg.scheme == Scheme::ImexEuler ? st.step_stationary(u, t, grid.dt, nullptr)
                                            : st.step_heun(u, t, grid.dt, nullptr, nullptr);
        guard_state(u, t + grid.dt);
        record(traj, cfg, grid.time_of(n + 1), u, n + 1 == grid.steps);
    }
    return traj;
}

Trajectory solve_stationary(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                            const SolveConfig& cfg, const Field& u_init,
                            const NoiseTable* prebuilt) {
    const StepGrid grid = make_grid(cfg, &path);
    if (spec.epsilon == 0.0) {
        // identical arithmetic path as the deterministic solver
        Trajectory traj = solve_deterministic(spec, cfg, u_init);
        traj.meta.seed = path.seed();
        traj.meta.noise = kind.name() + ":" + std::to_string(kind.delta);
        return traj;
    }
    std::optional<NoiseTable> local;
    if (!prebuilt)
        local = NoiseTable::build(kind, path, grid.i_start,
                                  grid.i_start + (std::int64_t)grid.steps * grid.nodes_per_step);
    const NoiseTable& z = prebuilt ? *prebuilt : *local;
    Stepper st(spec, cfg);
    Trajectory traj;
    traj.meta.seed = path.seed();
    traj.meta.noise = kind.name() + ":" + std::to_string(kind.delta);
    traj.meta.scheme = cfg.scheme == Scheme::ImexEuler ? "imex-euler" : "explicit-heun";
    Field u = u_init;
    record(traj, cfg, grid.time_of(0), u, false);
    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t = grid.time_of(n);
        const double z0 = z.at_node(grid.i_start + (std::int64_t)n * grid.nodes_per_step);
        if (cfg.scheme == Scheme::ImexEuler) {
            u = st.step_stationary(u, t, grid.dt, &z0);
        } else {
            const double z1 =
                z.at_node(grid.i_start + (std::int64_t)(n + 1) * grid.nodes_per_step);
            u = st.step_heun(u, t, grid.dt, &z0, &z1);
        }
        guard_state(u, t + grid.dt);
        record(traj, cfg, grid.time_of(n + 1), u, n + 1 == grid.steps);
    }
    return traj;
}

ConjugatedSolve solve_white_additive(const ModelSpec& spec, const WienerPath& path,
                                     const SolveConfig& cfg, const Field& u_init,
                                     const AuxTable* prebuilt) {
    if (spec.coupling != CouplingType::Additive)
        throw std::invalid_argument("solver: white additive solve requires additive coupling");
    const StepGrid grid = make_grid(cfg, &path);
    const std::int64_t i_end = grid.i_start + (std::int64_t)grid.steps * grid.nodes_per_step;
    const AuxProcess proc =
        AuxProcess::additive(std::nullopt, spec.epsilon, spec.eta_damp, spec.phi(cfg.n_modes));
    std::optional<AuxTable> local;
    if (!prebuilt) local = AuxTable::build(proc, path, grid.i_start, i_end);
    const AuxTable& aux = prebuilt ? *prebuilt : *local;

    Stepper st(spec, cfg);
    const Field phi = spec.phi(cfg.n_modes);
    ConjugatedSolve out;
    out.u.meta.seed = out.transformed.meta.seed = path.seed();
    out.u.meta.noise = out.transformed.meta.noise = "white";
    out.u.meta.scheme = out.transformed.meta.scheme = "imex-euler";

    double s = aux.scalar_at_node(grid.i_start);
    Field p = u_init - s * phi;
    Field u = p + s * phi;
    auto note = [&](double t, bool last) {
        record(out.u, cfg, t, u, last);
        record(out.transformed, cfg, t, p, last);
        if (cfg.recording == Recording::Full || last) out.aux.push_back(s);
        out.max_roundtrip_abs = std::max(out.max_roundtrip_abs, l2_distance(u, p + s * phi));
    };
    note(grid.time_of(0), false);
    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t = grid.time_of(n);
        p = st.step_additive_p(p, t, grid.dt, s);
        s = aux.scalar_at_node(grid.i_start + (std::int64_t)(n + 1) * grid.nodes_per_step);
        u = p + s * phi;
        guard_state(u, t + grid.dt);
        note(grid.time_of(n + 1), n + 1 == grid.steps);
    }
    if (cfg.recording == Recording::TerminalOnly) {
        out.aux.assign(1, s);
    }
    return out;
}

ConjugatedSolve solve_white_multiplicative(const ModelSpec& spec, const WienerPath& path,
                                           const SolveConfig& cfg, const Field& u_init,
                                           const AuxTable* prebuilt) {
    if (spec.coupling != CouplingType::Multiplicative)
        throw std::invalid_argument(
            "solver: white multiplicative solve requires multiplicative coupling");
    const StepGrid grid = make_grid(cfg, &path);
    const std::int64_t i_end = grid.i_start + (std::int64_t)grid.steps * grid.nodes_per_step;
    const AuxProcess proc = AuxProcess::multiplicative(std::nullopt, spec.epsilon);
    std::optional<AuxTable> local;
    if (!prebuilt) local = AuxTable::build(proc, path, grid.i_start, i_end);
    const AuxTable& aux = prebuilt ? *prebuilt : *local;

    Stepper st(spec, cfg);
    ConjugatedSolve out;
    out.u.meta.seed = out.transformed.meta.seed = path.seed();
    out.u.meta.noise = out.transformed.meta.noise = "white";
    out.u.meta.scheme = out.transformed.meta.scheme = "imex-euler";

    double y = aux.scalar_at_node(grid.i_start);
    Field q = std::exp(-y) * u_init;
    Field u = std::exp(y) * q;
    auto note = [&](double t, bool last) {
        record(out.u, cfg, t, u, last);
        record(out.transformed, cfg, t, q, last);
        if (cfg.recording == Recording::Full || last) out.aux.push_back(y);
        const double un = u.l2_norm();
        if (un > 1e-8)
            out.max_roundtrip_rel =
                std::max(out.max_roundtrip_rel, l2_distance(u, std::exp(y) * q) / un);
    };
    note(grid.time_of(0), false);
    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t = grid.time_of(n);
        q = st.step_multiplicative_q(q, t, grid.dt, y);
        y = aux.scalar_at_node(grid.i_start + (std::int64_t)(n + 1) * grid.nodes_per_step);
        u = std::exp(y) * q;
        guard_state(u, t + grid.dt);
        note(grid.time_of(n + 1), n + 1 == grid.steps);
    }
    if (cfg.recording == Recording::TerminalOnly) {
        out.aux.assign(1, y);
    }
    return out;
}

namespace {

double sup_sq_gap(const Trajectory& a, const Trajectory& b) {
    double sup = 0.0;
    for (std::size_t n = 0; n < a.states.size(); ++n) {
        const double d = l2_distance(a.states[n], b.states[n]);
        sup = std::max(sup, d * d);
    }
    return sup;
}

} // namespace

std::vector<GapRow> converge_solutions(const ModelSpec& spec, const WienerPath& path,
                                       NoiseVariant variant,
                                       const std::vector<std::pair<double, double>>& schedule,
                                       const SolveConfig& cfg, const Field& u_init,
                                       unsigned workers) {
    if (schedule.empty()) throw std::invalid_argument("solver: empty (delta, epsilon) schedule");
    const Trajectory det = solve_deterministic(spec, cfg, u_init);

    const bool conjugated = spec.coupling == CouplingType::Additive ||
                            spec.coupling == CouplingType::Multiplicative;
    std::vector<double> eps_values;
    for (const auto& [d, eps] : schedule)
        if (std::find(eps_values.begin(), eps_values.end(), eps) == eps_values.end())
            eps_values.push_back(eps);
    std::vector<ConjugatedSolve> whites(conjugated ? eps_values.size() : 0);
    if (conjugated) {
        parallel_for(eps_values.size(), workers, [&](std::size_t i) {
            ModelSpec se = spec;
            se.epsilon = eps_values[i];
            whites[i] = spec.coupling == CouplingType::Additive
                            ? solve_white_additive(se, path, cfg, u_init)
                            : solve_white_multiplicative(se, path, cfg, u_init);
        });
    }

    std::vector<GapRow> rows(schedule.size());
    parallel_for(schedule.size(), workers, [&](std::size_t i) {
        const auto [d, eps] = schedule[i];
        ModelSpec se = spec;
        se.epsilon = eps;
        const Trajectory ude = solve_stationary(se, path, NoiseKind::make(variant, d), cfg, u_init);
        GapRow row;
        row.delta = d;
        row.epsilon = eps;
        row.sup_gap_vs_deterministic = sup_sq_gap(ude, det);
        if (conjugated) {
            const std::size_t w = (std::size_t)(std::find(eps_values.begin(), eps_values.end(),
                                                          eps) -
                                                eps_values.begin());
            row.sup_gap_vs_white = sup_sq_gap(ude, whites[w].u);
            row.max_roundtrip_abs = whites[w].max_roundtrip_abs;
            row.max_roundtrip_rel = whites[w].max_roundtrip_rel;
        } else {
            row.sup_gap_vs_white = std::nan("");
        }
        rows[i] = row;
    });
    return rows;
}

EnergyReport energy_check(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                          const SolveConfig& cfg, const Field& u_init) {
    const StepGrid grid = make_grid(cfg, &path);
    const NoiseTable z = NoiseTable::build(
        kind, path, grid.i_start, grid.i_start + (std::int64_t)grid.steps * grid.nodes_per_step);
    Stepper st(spec, cfg);
    SineTransform norms(cfg.n_modes, cfg.n_grid);
    std::vector<double> samp;

    EnergyReport rep;
    rep.dt = grid.dt;
    rep.steps = grid.steps;
    rep.max_violation = -1e300;
    const double measure = 1.0; // |O| for O = (0,1)
    const double p1 = spec.p1();
    Field u = u_init;
    for (std::size_t n = 0; n < grid.steps; ++n) {
        const double t = grid.time_of(n);
        const double zn = z.at_node(grid.i_start + (std::int64_t)n * grid.nodes_per_step);
        norms.to_samples(u, samp);
        double lp_p = 0.0;
        for (double v : samp) lp_p += std::pow(std::abs(v), spec.p);
        lp_p *= norms.dx();
        const double l2_sq = u.l2_norm() * u.l2_norm();
        const double h1_sq = u.h1_norm_sq();

        const Field next = st.step_stationary(u, t, grid.dt, &zn);
        guard_state(next, t + grid.dt);
        const double l2n_sq = next.l2_norm() * next.l2_norm();

        const double lhs = (l2n_sq - l2_sq) / grid.dt + spec.m * kLambda1 * l2_sq +
                           0.5 * spec.m * h1_sq + spec.alpha2 * lp_p;
        const double h_star = spec.h_field(t, cfg.n_modes).h_minus1_norm_sq();
        const double psi1v = std::abs(spec.psi1(t));
        const double rhs =
            (2.0 / spec.m) * h_star +
            (2.0 * spec.kappa +
             spec.epsilon * spec.c_const * std::pow(std::abs(zn), spec.p / (spec.p - spec.q))) *
                measure +
            spec.epsilon * spec.c_const * std::pow(std::abs(zn), p1) * std::pow(psi1v, p1);
        rep.max_violation = std::max(rep.max_violation, lhs - rhs);
        u = next;
    }
    rep.c_measured = rep.max_violation / grid.dt;
    return rep;
}

} // namespace nrd
