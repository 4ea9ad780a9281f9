#include "nrd/attractor.hpp"
#include "nrd/model.hpp"
#include "nrd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nrd {

namespace {

double sup_h1_sq(const Trajectory& traj) {
    double sup = 0.0;
    for (const Field& f : traj.states) sup = std::max(sup, f.h1_norm_sq());
    return sup;
}

} // namespace

double alpha_bound(const ModelSpec& spec, const WienerPath& path, const NoiseKind* kind,
                   double horizon, double ic_radius, const std::vector<Field>& ics,
                   std::size_t n_modes, double dt) {
    if (!(horizon > 0.0)) throw std::invalid_argument("model: alpha_bound horizon must be positive");
    SolveConfig cfg;
    cfg.t_start = 0.0;
    cfg.t_end = horizon;
    cfg.dt = dt;
    cfg.n_modes = n_modes;
    cfg.n_grid = 4 * n_modes;

    const std::vector<Field> ensemble =
        ics.empty() ? default_ic_cloud(n_modes, ic_radius, 8) : ics;
    const Field phi =
        spec.coupling == CouplingType::Additive ? spec.phi(n_modes) : Field(n_modes);

    // prefix integral of the stationary noise along the horizon, path resolution
    std::vector<double> zeta_prefix;
    std::int64_t i0 = 0, kdt = 1;
    if (kind && spec.epsilon > 0.0) {
        i0 = path.node_of(0.0);
        const std::int64_t i1 = path.node_of(horizon);
        kdt = (std::int64_t)std::llround(dt / path.dt_grid());
        const NoiseTable z = NoiseTable::build(*kind, path, i0, i1);
        zeta_prefix.resize((std::size_t)(i1 - i0) + 1, 0.0);
        for (std::int64_t i = i0 + 1; i <= i1; ++i)
            zeta_prefix[(std::size_t)(i - i0)] = zeta_prefix[(std::size_t)(i - i0 - 1)] +
                                                 0.5 * path.dt_grid() *
                                                     (z.at_node(i - 1) + z.at_node(i));
    }

    double alpha = 0.0;
    for (const Field& ic : ensemble) {
        const Trajectory det = solve_deterministic(spec, cfg, ic);
        alpha = std::max(alpha, sup_h1_sq(det));
        if (spec.epsilon <= 0.0) continue;

        if (spec.coupling == CouplingType::Additive) {
            const ConjugatedSolve white = solve_white_additive(spec, path, cfg, ic);
            for (std::size_t n = 0; n < white.u.states.size(); ++n) {
                const double wt = path.eval(white.u.times[n]);
                const Field v = white.u.states[n] - (spec.epsilon * wt) * phi;
                alpha = std::max(alpha, v.h1_norm_sq());
            }
            if (kind) {
                const Trajectory ude = solve_stationary(spec, path, *kind, cfg, ic);
                for (std::size_t n = 0; n < ude.states.size(); ++n) {
                    const double zi = zeta_prefix[(std::size_t)((std::int64_t)n * kdt)];
                    const Field v = ude.states[n] - (spec.epsilon * zi) * phi;
                    alpha = std::max(alpha, v.h1_norm_sq());
                }
            }
        } else if (spec.coupling == CouplingType::Multiplicative) {
            const ConjugatedSolve white = solve_white_multiplicative(spec, path, cfg, ic);
            for (std::size_t n = 0; n < white.u.states.size(); ++n) {
                const double wt = path.eval(white.u.times[n]);
                const Field v = std::exp(-spec.epsilon * wt) * white.u.states[n];
                alpha = std::max(alpha, v.h1_norm_sq());
            }
            if (kind) {
                const Trajectory ude = solve_stationary(spec, path, *kind, cfg, ic);
                for (std::size_t n = 0; n < ude.states.size(); ++n) {
                    const double zi = zeta_prefix[(std::size_t)((std::int64_t)n * kdt)];
                    const Field v = std::exp(-spec.epsilon * zi) * ude.states[n];
                    alpha = std::max(alpha, v.h1_norm_sq());
                }
            }
        } else {
            const Trajectory ude = kind ? solve_stationary(spec, path, *kind, cfg, ic)
                                        : solve_deterministic(spec, cfg, ic);
            alpha = std::max(alpha, sup_h1_sq(ude));
        }
    }
    return alpha;
}

} // namespace nrd
