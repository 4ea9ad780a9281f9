#ifndef NRD_NOISE_HPP
#define NRD_NOISE_HPP

#include "nrd/wiener.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nrd {

/// Truncation horizon for improper history integrals, in time constants of the
/// kernel: exp(-40) sits below double-precision roundoff of the retained mass.
constexpr double kHistoryTimeConstants = 40.0;

enum class NoiseVariant { Ou, MollifierDerivative, DifferenceQuotient };

/** One stationary approximation of white noise at smoothing scale delta.
 * delta must be an integer multiple of the consuming path's grid step. */
struct NoiseKind {
    NoiseVariant variant = NoiseVariant::Ou;
    double delta = 0.1;
    double mollifier_norm = 0.0; // bump normalization, fixed at construction

    static NoiseKind ou(double delta);
    static NoiseKind mollifier(double delta);
    static NoiseKind difference_quotient(double delta);
    static NoiseKind make(NoiseVariant v, double delta);

    std::string name() const;
};

/// Normalized bump c*exp(-1/(t(1-t))) on (0,1); integral 1 to 1e-10.
double mollifier_bump(double u, double norm);
double mollifier_bump_derivative(double u, double norm);
/// The normalization constant (computed to ~1e-12 by refined quadrature, cached).
double mollifier_normalization();

/** zeta_delta(theta_t w) by the defining integral formula:
 *  Ou:  -(1/d^2) integral_{-40d}^{0} e^{s/d} (theta_t w)(s) ds   (trapezoid)
 *  MollifierDerivative: -(1/d^2) integral_0^d bump'(s/d) (theta_t w)(s) ds
 *  DifferenceQuotient:  (w(t+d) - w(t))/d
 */
double eval_noise(const NoiseKind& kind, const WienerPath& path, double t);

/// integral_0^t zeta_delta(theta_r w) dr, trapezoid at path resolution.
double integrate_noise(const NoiseKind& kind, const WienerPath& path, double t);

/// x_delta(theta_t w) = integral_{-40}^{0} e^r zeta_delta(theta_{r+t} w) dr.
double stationary_x(const NoiseKind& kind, const WienerPath& path, double t);
/// x_0(theta_t w) = -integral_{-40}^{0} e^r (theta_t w)(r) dr (white-noise case).
double stationary_x_white(const WienerPath& path, double t);

/** Dense tabulation of zeta_delta(theta_t w) at path nodes [lo, hi]. Same
 * trapezoid sums as eval_noise, computed with a sliding window so a table
 * costs O(path) instead of O(path * window). */
class NoiseTable {
public:
    static NoiseTable build(const NoiseKind& kind, const WienerPath& path, std::int64_t lo,
                            std::int64_t hi);
    double at_node(std::int64_t i) const { return v_[(std::size_t)(i - lo_)]; }
    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }
    double dt() const { return h_; }

private:
    std::int64_t lo_ = 0, hi_ = 0;
    double h_ = 0.0;
    std::vector<double> v_;
};

/** Exponential history integrals over node range [lo, hi]:
 *  of a noise table Z:   G(t) = integral_{-40/rate}^{0} e^{rate*r} Z(t+r) dr
 *  of the path (white):  G(t) = -rate * integral_{-40/rate}^{0} e^{rate*r} (theta_t w)(r) dr
 * The white flavor at rate 1 is x_0(theta_t w). */
class HistoryTable {
public:
    static HistoryTable of_noise(const NoiseTable& z, double rate, std::int64_t lo, std::int64_t hi);
    static HistoryTable of_white(const WienerPath& path, double rate, std::int64_t lo,
                                 std::int64_t hi);
    double at_node(std::int64_t i) const { return v_[(std::size_t)(i - lo_)]; }
    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return hi_; }

private:
    std::int64_t lo_ = 0, hi_ = 0;
    std::vector<double> v_;
};

struct HypothesisReport {
    std::string kind;
    std::vector<double> delta;
    std::vector<double> k_delta;    // empirical constant in the growth estimate
    std::vector<double> integral_gap;   // sup_{|t|<=T} |integral_0^t zeta - w(t)|
    std::vector<double> stationary_gap;  // sup_{|t|<=T} |x_delta - x_0|
    bool pass = false;              // both gap families decay along the delta sequence
    double slack = 1.1;
    double T = 1.0;
};

/** Estimates K_delta, the integral gap, and the stationary-variable gap on
 * [-T, T] for each delta; passes when both gap columns are nonincreasing
 * within the slack factor. */
HypothesisReport certify_hypotheses(NoiseVariant variant, const WienerPath& path, double T,
                                    const std::vector<double>& deltas, double slack = 1.1);

/// Pluggable form: certify a user-supplied stationary family. The evaluator
/// tabulates the process at scale delta over path nodes [lo, hi].
using NoiseEvaluator = std::function<NoiseTable(double delta, const WienerPath& path,
                                                std::int64_t lo, std::int64_t hi)>;
HypothesisReport certify_hypotheses(const NoiseEvaluator& evaluator, const std::string& name,
                                    const WienerPath& path, double T,
                                    const std::vector<double>& deltas, double slack = 1.1);

/// Exact-in-law Langevin recursion for the Ou variant; cross-check oracle only.
std::vector<double> ou_langevin_recursion(const NoiseKind& kind, const WienerPath& path,
                                          std::int64_t lo, std::int64_t hi);

} // namespace nrd

#endif
