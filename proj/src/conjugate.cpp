#include "nrd/conjugate.hpp"

#include <cmath>
#include <stdexcept>

namespace nrd {

AuxProcess AuxProcess::additive(std::optional<NoiseKind> kind, double epsilon, double rate,
                                Field phi) {
    if (epsilon < 0.0) throw std::invalid_argument("conjugate: epsilon must be nonnegative");
    if (!(rate > 0.0)) throw std::invalid_argument("conjugate: rate must be positive");
    AuxProcess p;
    p.flavor = AuxFlavor::AdditiveXStar;
    p.kind = std::move(kind);
    p.epsilon = epsilon;
    p.rate = rate;
    p.phi = std::move(phi);
    return p;
}

AuxProcess AuxProcess::multiplicative(std::optional<NoiseKind> kind, double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("conjugate: epsilon must be nonnegative");
    AuxProcess p;
    p.flavor = AuxFlavor::MultiplicativeY;
    p.kind = std::move(kind);
    p.epsilon = epsilon;
    p.rate = 1.0;
    return p;
}

AuxTable AuxTable::build(const AuxProcess& proc, const WienerPath& path, std::int64_t lo,
                         std::int64_t hi) {
    const double rate = proc.flavor == AuxFlavor::AdditiveXStar ? proc.rate : 1.0;
    if (!proc.kind.has_value())
        return AuxTable(HistoryTable::of_white(path, rate, lo, hi), proc.epsilon);
    const double h = path.dt_grid();
    const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants / (rate * h));
    const NoiseTable z = NoiseTable::build(*proc.kind, path, lo - K, hi);
    return AuxTable(HistoryTable::of_noise(z, rate, lo, hi), proc.epsilon);
}

double eval_aux_scalar(const AuxProcess& proc, const WienerPath& path, double t) {
    const std::int64_t it = path.node_of(t);
    return AuxTable::build(proc, path, it, it).scalar_at_node(it);
}

Field eval_aux_field(const AuxProcess& proc, const WienerPath& path, double t) {
    if (proc.flavor != AuxFlavor::AdditiveXStar)
        throw std::invalid_argument("conjugate: field evaluation is additive-only");
    return eval_aux_scalar(proc, path, t) * proc.phi;
}

Field to_transformed_additive(const Field& u, const Field& x_star) { return u - x_star; }
Field from_transformed_additive(const Field& p, const Field& x_star) { return p + x_star; }

Field to_transformed_multiplicative(const Field& u, double y) { return std::exp(-y) * u; }
Field from_transformed_multiplicative(const Field& q, double y) { return std::exp(y) * q; }

std::vector<AuxLimitRow> limit_check(const AuxProcess& proto, const std::vector<double>& deltas,
                                     const WienerPath& path, double T) {
    if (deltas.empty()) throw std::invalid_argument("conjugate: empty delta list");
    const double h = path.dt_grid();
    const std::int64_t iT = (std::int64_t)std::llround(T / h);
    // the additive flavor samples t <= 0, the multiplicative one |t| <= T
    const std::int64_t lo = -iT;
    const std::int64_t hi = proto.flavor == AuxFlavor::AdditiveXStar ? 0 : iT;
    const double field_scale =
        proto.flavor == AuxFlavor::AdditiveXStar ? proto.phi.l2_norm() : 1.0;

    AuxProcess white = proto;
    white.kind.reset();
    const AuxTable w = AuxTable::build(white, path, lo, hi);
    double white_sup = 0.0;
    for (std::int64_t i = lo; i <= hi; ++i)
        white_sup = std::max(white_sup, std::abs(w.scalar_at_node(i)));
    white_sup *= field_scale;

    std::vector<AuxLimitRow> rows;
    for (double d : deltas) {
        AuxProcess pd = proto;
        pd.kind = NoiseKind::make(proto.kind ? proto.kind->variant : NoiseVariant::Ou, d);
        const AuxTable g = AuxTable::build(pd, path, lo, hi);
        double gap = 0.0;
        for (std::int64_t i = lo; i <= hi; ++i)
            gap = std::max(gap, std::abs(g.scalar_at_node(i) - w.scalar_at_node(i)));
        rows.push_back({d, gap * field_scale, white_sup});
    }
    return rows;
}

double sublinear_growth_bound(const AuxProcess& proc, const WienerPath& path, double t_lo,
                              double t_hi) {
    const std::int64_t lo = path.node_of(t_lo), hi = path.node_of(t_hi);
    const AuxTable g = AuxTable::build(proc, path, lo, hi);
    const double field_scale =
        proc.flavor == AuxFlavor::AdditiveXStar ? proc.phi.l2_norm() : 1.0;
    double bound = 0.0;
    for (std::int64_t i = lo; i <= hi; ++i) {
        const double t = (double)i * path.dt_grid();
        bound = std::max(bound, std::abs(g.scalar_at_node(i)) * field_scale / (std::abs(t) + 1.0));
    }
    return bound;
}

} // namespace nrd
