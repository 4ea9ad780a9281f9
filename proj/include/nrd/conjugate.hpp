#ifndef NRD_CONJUGATE_HPP
#define NRD_CONJUGATE_HPP

#include "nrd/galerkin.hpp"
#include "nrd/noise.hpp"
#include "nrd/wiener.hpp"

#include <optional>
#include <vector>

namespace nrd {

enum class AuxFlavor { AdditiveXStar, MultiplicativeY };

/** Stationary auxiliary process for the state transforms.
 *
 * Additive:       x*(theta_t w) = eps * G(t) * phi, with
 *   G(t) = integral_{-inf}^{0} e^{rate*r} zeta_delta(theta_{t+r} w) dr   (noise)
 *   G(t) = -rate * integral_{-inf}^{0} e^{rate*r} (theta_t w)(r) dr      (white)
 * Multiplicative: y(theta_t w) = eps * G(t) with rate fixed to 1.
 * kind empty means the white-noise flavor. History truncated at 40/rate.
 */
struct AuxProcess {
    AuxFlavor flavor = AuxFlavor::AdditiveXStar;
    std::optional<NoiseKind> kind; // nullopt: white noise
    double epsilon = 0.0;
    double rate = 1.0; // additive damping rate; multiplicative always 1
    Field phi;         // additive only

    static AuxProcess additive(std::optional<NoiseKind> kind, double epsilon, double rate,
                               Field phi);
    static AuxProcess multiplicative(std::optional<NoiseKind> kind, double epsilon);
};

/** Scalar part of the auxiliary process tabulated at path nodes; the additive
 * field is scalar * phi, assembled lazily by callers. */
class AuxTable {
public:
    static AuxTable build(const AuxProcess& proc, const WienerPath& path, std::int64_t lo,
                          std::int64_t hi);
    double scalar_at_node(std::int64_t i) const { return epsilon_ * hist_.at_node(i); }
    std::int64_t lo() const { return hist_.lo(); }
    std::int64_t hi() const { return hist_.hi(); }

private:
    AuxTable(HistoryTable h, double eps) : hist_(std::move(h)), epsilon_(eps) {}
    HistoryTable hist_;
    double epsilon_;
};

/// One-off evaluation (internally tabulates the needed history slice).
double eval_aux_scalar(const AuxProcess& proc, const WienerPath& path, double t);
/// Additive flavor: the full field eps * G(t) * phi.
Field eval_aux_field(const AuxProcess& proc, const WienerPath& path, double t);

/// p = u - x* and back.
Field to_transformed_additive(const Field& u, const Field& x_star);
Field from_transformed_additive(const Field& p, const Field& x_star);
/// q = e^{-y} u and back.
Field to_transformed_multiplicative(const Field& u, double y);
Field from_transformed_multiplicative(const Field& q, double y);

struct AuxLimitRow {
    double delta = 0.0;
    double gap = 0.0;       // sup over the sampled range of |aux_delta - aux_white|
    double white_sup = 0.0; // sup |aux_white| over the same range
};

/** Gap table between the delta-flavored and white auxiliary processes.
 * Additive flavor samples t in [-T, 0]; multiplicative samples |t| <= T.
 * Norms are the H norm (|scalar| * |phi| for the additive field). */
std::vector<AuxLimitRow> limit_check(const AuxProcess& proto, const std::vector<double>& deltas,
                                     const WienerPath& path, double T);

/// Finite-window surrogate for the sublinear growth of the process:
/// sup over sampled nodes of |aux(theta_t w)| / (|t|+1).
double sublinear_growth_bound(const AuxProcess& proc, const WienerPath& path, double t_lo,
                              double t_hi);

} // namespace nrd

#endif
