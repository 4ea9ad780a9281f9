#ifndef NRD_MODEL_HPP
#define NRD_MODEL_HPP

#include "nrd/galerkin.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nrd {

class WienerPath;
struct NoiseKind;

enum class AProfile { Rational, Constant };
enum class FProfile { SinP2, CubicP4, Linear };
enum class CouplingType { Additive, Multiplicative, General };
enum class LWeight { One, Tilt };

struct TimeProfile {
    enum Kind { Zero, Constant, ExpDecay } kind = Zero;
    double amplitude = 0.0;
    double rate = 1.0;
    double operator()(double t) const;
};

struct HProfile {
    enum Kind { Zero, ConstantField, Pulse } kind = Zero;
    double amplitude = 0.0;
    int mode = 1;
    double rate = 1.0; // Pulse: amplitude * exp(-rate*|t|) on the mode
    bool is_zero() const { return kind == Zero || amplitude == 0.0; }
};

/** Problem data: nonlocal coefficient a(l(u)), reaction f, noise coupling g,
 * forcing h, and the constants the estimates are phrased in. Immutable in use. */
struct ModelSpec {
    double m = 1.0, m_tilde = 2.0;
    AProfile a_profile = AProfile::Rational;
    LWeight l_weight = LWeight::One;
    double l_tilt = 0.0;

    FProfile f_profile = FProfile::SinP2;
    double eta = 1.5;    // Lipschitz constant of f
    double c_f = 1.5;    // linear growth constant (p = 2 regime)
    double kappa = 0.5;
    double alpha1 = 1.0;
    double alpha2 = 0.5;
    double p = 2.0;

    CouplingType coupling = CouplingType::Additive;
    int phi_mode = 1;
    double phi_amplitude = 1.0;
    double d1 = 0.5, d2 = 0.5, q = 2.0;
    TimeProfile psi1, psi2;

    HProfile h_profile;
    double epsilon = 0.1;
    double eta_damp = 1.0; // damping rate of the auxiliary additive process
    double c_const = 0.5;  // absorbing-radius constant, see docs/energy_constant.md

    double a(double s) const;
    double f(double s) const;
    double g(double t, double s) const; // General coupling only
    double p1() const { return p / (p - 1.0); }

    Field phi(std::size_t n_modes) const;
    Field h_field(double t, std::size_t n_modes) const;
    double ell(double x) const;          // weight of l(u) = integral(ell * u)
    double l_norm(std::size_t n_grid = 4096) const; // L2 norm of the weight
};

/// l(u) = integral ell(x) u(x) dx by trapezoid quadrature on samples.
double nonlocal_l(const ModelSpec& spec, const Field& u, std::size_t n_grid);
double nonlocal_l(const ModelSpec& spec, const std::vector<double>& samples, double hx);
/// a(l(u)); always lands in [m, m_tilde] by profile construction.
double nonlocal_value(const ModelSpec& spec, const Field& u, std::size_t n_grid = 128);

struct ValidationRow {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    bool pass = false;
    bool fatal = true; // informational rows do not fail validation
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    double lipschitz_a = 0.0; // sampled estimate of L_a
    bool ok() const;          // every fatal row passes
};

/** Dense-sampling checks of the standing bounds, the Lipschitz constant of a,
 * the spectral gap m*lambda1 > 4*C_f, and (when alpha >= 0 is supplied) the
 * smallness conditions for the additive/multiplicative convergence lemmas.
 * Reports, never throws. */
ValidationReport validate(const ModelSpec& spec, double lambda_1 = kLambda1, double alpha = -1.0);

/** Empirical a-priori bound: max over the ensemble of sup_t ||v(t)||^2 for the
 * shifted/scaled transforms of the white and stationary solutions plus the
 * deterministic solution. ics empty -> a default ensemble of radius ic_radius. */
double alpha_bound(const ModelSpec& spec, const WienerPath& path, const NoiseKind* kind,
                   double horizon, double ic_radius, const std::vector<Field>& ics = {},
                   std::size_t n_modes = 16, double dt = 1e-3);

} // namespace nrd

#endif
