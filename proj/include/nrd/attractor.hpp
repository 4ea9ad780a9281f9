#ifndef NRD_ATTRACTOR_HPP
#define NRD_ATTRACTOR_HPP

#include "nrd/model.hpp"
#include "nrd/noise.hpp"
#include "nrd/solver.hpp"
#include "nrd/wiener.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nrd {

struct CloudMeta {
    std::string object; // what the cloud approximates
    double delta = 0.0, epsilon = 0.0;
    std::uint64_t seed = 0;
    double pullback_time = 0.0;
};

struct PointCloud {
    std::vector<Field> members;
    CloudMeta meta;
};

/// max over a of min over b of the L2 field distance; brute force.
double hausdorff_semidistance(const PointCloud& a, const PointCloud& b);

enum class RadiusFormula { General, Additive, Multiplicative };

struct RadiusReport {
    double r_squared = 0.0;       // R_{delta,eps}(w)
    double r_squared_white = 0.0; // R_{0,eps}(w), additive/multiplicative formulas only
    RadiusFormula formula = RadiusFormula::Additive;
    double truncation = 0.0;      // history cut of the radius integral, time units
    double quad_step = 0.0;
};

/** Evaluates the explicit absorbing-radius formula for the spec's regime by
 * truncated quadrature along the given path; additive/multiplicative formulas
 * also evaluate the white-noise radius for comparison. */
RadiusReport absorbing_radius(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                              RadiusFormula formula);

struct AbsorbReport {
    double max_terminal_sq = 0.0; // max |u(0)|^2 over the evolved ball
    double bound = 0.0;           // lambda1^{-1} * r_squared * (1 + slack)
    bool contained = false;
    double r_squared = 0.0;
};

/** Evolves n_ics states of L2 norm <= ball_radius from -pullback_time to 0
 * along the path and compares terminal norms against the absorbing bound. */
AbsorbReport absorbing_check(const ModelSpec& spec, const WienerPath& path, const NoiseKind& kind,
                             const RadiusReport& radius, double ball_radius, double pullback_time,
                             int n_ics, const SolveConfig& cfg, double slack = 0.05,
                             unsigned workers = 1);

/// 50% scaled basis modes (+/- amplitude), 50% seeded random directions of norm <= radius.
std::vector<Field> default_ic_cloud(std::size_t n_modes, double radius, int count,
                                    std::uint64_t ic_seed = 2024);

enum class DynamicsMode { Deterministic, Stationary, White };

struct NonCauchyError : std::runtime_error {
    explicit NonCauchyError(std::vector<double> displacements);
    std::vector<double> displacement_curve;
};

/** Attractor surrogate: evolve every IC from -t to 0 for each pullback time,
 * verify the terminal clouds are Cauchy across successive times (matched-IC
 * displacement below tol), and return the terminal cloud of the largest time.
 * Noise pulled back along the given path; Deterministic mode ignores it. */
PointCloud pullback_attractor_sample(const ModelSpec& spec, const WienerPath& path,
                                     const NoiseKind* kind, DynamicsMode mode,
                                     const std::vector<double>& pullback_times,
                                     const std::vector<Field>& ics, const SolveConfig& cfg,
                                     double cauchy_tol = 1e-6, unsigned workers = 1);

struct SemidistRow {
    double delta = 0.0, epsilon = 0.0;
    double dist_total = 0.0;  // dist(A_de, A)
    double dist_split1 = 0.0; // dist(A_de, A_0e)
    double dist_split2 = 0.0; // dist(A_0e, A)
};

/** Upper-semicontinuity table: per (delta, epsilon), the semidistance from the
 * sampled random attractor to the deterministic one, plus the two-hop split
 * through the white-noise attractor. p = 2 regimes only. */
std::vector<SemidistRow> semicontinuity_experiment(
    const ModelSpec& spec, const WienerPath& path, NoiseVariant variant,
    const std::vector<std::pair<double, double>>& schedule,
    const std::vector<double>& pullback_times, const std::vector<Field>& ics,
    const SolveConfig& cfg, double cauchy_tol = 1e-6, unsigned workers = 1);

void dump_cloud_csv(const PointCloud& cloud, std::ostream& os, const std::string& manifest_line);

} // namespace nrd

#endif
