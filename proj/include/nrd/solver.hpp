#ifndef NRD_SOLVER_HPP
#define NRD_SOLVER_HPP

#include "nrd/conjugate.hpp"
#include "nrd/galerkin.hpp"
#include "nrd/model.hpp"
#include "nrd/noise.hpp"
#include "nrd/wiener.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nrd {

enum class Scheme { ImexEuler, ExplicitHeun };
enum class Recording { Full, TerminalOnly };

struct SolveConfig {
    double dt = 1e-3;
    double t_start = 0.0;
    double t_end = 1.0;
    Scheme scheme = Scheme::ImexEuler;
    std::size_t n_modes = 32;
    std::size_t n_grid = 128;
    Recording recording = Recording::Full;
};

struct TrajectoryMeta {
    std::uint64_t spec_hash = 0;
    std::uint64_t seed = 0;
    std::string noise;  // "none", "white", or "<kind>:<delta>"
    std::string scheme; // "imex-euler" or "explicit-heun"
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> states;
    TrajectoryMeta meta;
    const Field& terminal() const { return states.back(); }
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(double t_at);
    double t = 0.0;
};

/** One semi-implicit Euler step of the reaction-diffusion update: the nonlocal
 * diffusion coefficient is frozen at the current state, the stiff mode decay is
 * implicit, reaction/forcing/noise terms explicit and pseudo-spectral. Passing
 * no noise sample integrates the deterministic equation. */
Field step(const ModelSpec& spec, const Field& u, double t, double dt,
           std::optional<double> noise_sample, std::size_t n_grid = 0);

/// Deterministic equation (no noise term).
Trajectory solve_deterministic(const ModelSpec& spec, const SolveConfig& cfg, const Field& u_init);

/** Pathwise integration of the stationary-noise equation: the noise value
 * zeta_delta(theta_t w) is sampled at every step start. epsilon == 0 takes the
 * identical arithmetic path as solve_deterministic. */
Trajectory solve_stationary(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                            const SolveConfig& cfg, const Field& u_init,
                            const NoiseTable* prebuilt = nullptr);

struct ConjugatedSolve {
    Trajectory u;           // physical states
    Trajectory transformed; // p (additive) or q (multiplicative)
    std::vector<double> aux; // scalar auxiliary value per recorded time
    double max_roundtrip_abs = 0.0; // additive: |u - (p + x*)|
    double max_roundtrip_rel = 0.0; // multiplicative: |u - e^y q|/|u| where |u| > 1e-8
};

/// White-noise additive equation through the p = u - x* conjugation.
ConjugatedSolve solve_white_additive(const ModelSpec& spec, const WienerPath& path,
                                     const SolveConfig& cfg, const Field& u_init,
                                     const AuxTable* prebuilt = nullptr);

/// White-noise multiplicative equation through the q = e^{-y} u conjugation.
ConjugatedSolve solve_white_multiplicative(const ModelSpec& spec, const WienerPath& path,
                                           const SolveConfig& cfg, const Field& u_init,
                                           const AuxTable* prebuilt = nullptr);

struct GapRow {
    double delta = 0.0;
    double epsilon = 0.0;
    double sup_gap_vs_deterministic = 0.0; // sup_t |u_de(t) - u(t)|^2
    double sup_gap_vs_white = 0.0;         // sup_t |u_de(t) - u_0e(t)|^2
    double max_roundtrip_abs = 0.0;        // conjugation bookkeeping of the white solve
    double max_roundtrip_rel = 0.0;
};

/** For each (delta, epsilon) pair: sup-norm-squared gaps of the stationary
 * solution against the deterministic and white solutions on [t_start, t_end].
 * Rows fan out to the worker pool and merge in schedule order. */
std::vector<GapRow> converge_solutions(const ModelSpec& spec, const WienerPath& path,
                                       NoiseVariant variant,
                                       const std::vector<std::pair<double, double>>& schedule,
                                       const SolveConfig& cfg, const Field& u_init,
                                       unsigned workers = 1);

struct EnergyReport {
    double max_violation = 0.0; // max_n (discrete energy LHS - RHS)
    double c_measured = 0.0;    // max_violation / dt
    double dt = 0.0;
    std::size_t steps = 0;
};

/** Discrete energy-inequality audit along a stationary-noise solve:
 * (|u^{n+1}|^2-|u^n|^2)/dt + m*l1*|u^n|^2 + (m/2)*||u^n||^2 + alpha2*|u^n|_p^p
 * against (2/m)*||h||_*^2 + (2*kappa + eps*c*|z_n|^{p/(p-q)})*|O| +
 * eps*c*|z_n|^{p1}*|psi1|^{p1}. */
EnergyReport energy_check(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                          const SolveConfig& cfg, const Field& u_init);

} // namespace nrd

#endif
