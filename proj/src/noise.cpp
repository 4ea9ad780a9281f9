#include "nrd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nrd {

namespace {

std::int64_t aligned_steps(double delta, double h, const char* what) {
    const std::int64_t k = (std::int64_t)std::llround(delta / h);
    if (k < 1 || std::abs((double)k * h - delta) > 1e-9 * std::max(1.0, delta))
        throw std::invalid_argument(std::string("noise: ") + what +
                                    " must be a positive integer multiple of dt_grid");
    return k;
}

void require_window(const WienerPath& p, std::int64_t lo, std::int64_t hi, const char* what) {
    if (lo < p.node_lo() || hi > p.node_hi())
        throw std::out_of_range(std::string("noise: path window exhausted in ") + what);
}

double integral_of_bump() {
    // integrand vanishes to all orders at both endpoints; refined Simpson.
    auto raw = [](double t) {
        const double d = t * (1.0 - t);
        return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
    };
    double prev = 0.0, val = 0.0;
    for (std::size_t n = 1 << 10; n <= (1 << 22); n <<= 1) {
        double acc = raw(0.0) + raw(1.0);
        const double hx = 1.0 / (double)n;
        for (std::size_t j = 1; j < n; ++j) acc += (j % 2 ? 4.0 : 2.0) * raw((double)j * hx);
        prev = val;
        val = acc * hx / 3.0;
        if (n > (1 << 10) && std::abs(val - prev) < 1e-14) break;
    }
    return val;
}

} // namespace

double mollifier_normalization() {
    static const double c = 1.0 / integral_of_bump();
    return c;
}

double mollifier_bump(double u, double norm) {
    const double d = u * (1.0 - u);
    return d > 0.0 ? norm * std::exp(-1.0 / d) : 0.0;
}

double mollifier_bump_derivative(double u, double norm) {
    const double d = u * (1.0 - u);
    if (d <= 0.0) return 0.0;
    return mollifier_bump(u, norm) * (1.0 - 2.0 * u) / (d * d);
}

NoiseKind NoiseKind::make(NoiseVariant v, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("noise: delta must be positive");
    NoiseKind k;
    k.variant = v;
    k.delta = delta;
    if (v == NoiseVariant::MollifierDerivative) k.mollifier_norm = mollifier_normalization();
    return k;
}

NoiseKind NoiseKind::ou(double delta) { return make(NoiseVariant::Ou, delta); }
NoiseKind NoiseKind::mollifier(double delta) { return make(NoiseVariant::MollifierDerivative, delta); }
NoiseKind NoiseKind::difference_quotient(double delta) {
    return make(NoiseVariant::DifferenceQuotient, delta);
}

std::string NoiseKind::name() const {
    switch (variant) {
    case NoiseVariant::Ou: return "ou";
    case NoiseVariant::MollifierDerivative: return "mollifier";
    case NoiseVariant::DifferenceQuotient: return "diffq";
    }
    return "?";
}

double eval_noise(const NoiseKind& kind, const WienerPath& path, double t) {
    const double h = path.dt_grid();
    const std::int64_t it = path.node_of(t);
    const std::int64_t kd = aligned_steps(kind.delta, h, "delta");
    switch (kind.variant) {
    case NoiseVariant::DifferenceQuotient: {
        require_window(path, it, it + kd, "difference quotient");
        return (path.at_node(it + kd) - path.at_node(it)) / kind.delta;
    }
    case NoiseVariant::MollifierDerivative: {
        require_window(path, it, it + kd, "mollifier");
        const double wt = path.at_node(it);
        double acc = 0.0;
        for (std::int64_t k = 0; k <= kd; ++k) {
            const double w = (k == 0 || k == kd) ? 0.5 : 1.0;
            acc += w * mollifier_bump_derivative((double)k / (double)kd, kind.mollifier_norm) *
                   (path.at_node(it + k) - wt);
        }
        return -acc * h / (kind.delta * kind.delta);
    }
    case NoiseVariant::Ou: {
        const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants * kind.delta / h);
        require_window(path, it - K, it, "ou history");
        const double wt = path.at_node(it);
        double acc = 0.0;
        for (std::int64_t k = 0; k <= K; ++k) {
            const double w = (k == 0 || k == K) ? 0.5 : 1.0;
            const double s = (double)(k - K) * h;
            acc += w * std::exp(s / kind.delta) * (path.at_node(it + k - K) - wt);
        }
        return -acc * h / (kind.delta * kind.delta);
    }
    }
    return 0.0;
}

NoiseTable NoiseTable::build(const NoiseKind& kind, const WienerPath& path, std::int64_t lo,
                             std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("noise: empty table range");
    const double h = path.dt_grid();
    const std::int64_t kd = aligned_steps(kind.delta, h, "delta");
    NoiseTable tab;
    tab.lo_ = lo;
    tab.hi_ = hi;
    tab.h_ = h;
    tab.v_.resize((std::size_t)(hi - lo) + 1);
    switch (kind.variant) {
    case NoiseVariant::DifferenceQuotient: {
        require_window(path, lo, hi + kd, "difference quotient");
        for (std::int64_t i = lo; i <= hi; ++i)
            tab.v_[(std::size_t)(i - lo)] = (path.at_node(i + kd) - path.at_node(i)) / kind.delta;
        return tab;
    }
    case NoiseVariant::MollifierDerivative: {
        require_window(path, lo, hi + kd, "mollifier");
        std::vector<double> kern((std::size_t)kd + 1);
        for (std::int64_t k = 0; k <= kd; ++k) {
            const double w = (k == 0 || k == kd) ? 0.5 : 1.0;
            kern[(std::size_t)k] =
                w * mollifier_bump_derivative((double)k / (double)kd, kind.mollifier_norm);
        }
        const double scale = -h / (kind.delta * kind.delta);
        for (std::int64_t i = lo; i <= hi; ++i) {
            const double wt = path.at_node(i);
            double acc = 0.0;
            for (std::int64_t k = 0; k <= kd; ++k)
                acc += kern[(std::size_t)k] * (path.at_node(i + k) - wt);
            tab.v_[(std::size_t)(i - lo)] = acc * scale;
        }
        return tab;
    }
    case NoiseVariant::Ou: {
        const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants * kind.delta / h);
        require_window(path, lo - K, hi, "ou history");
        const double decay = std::exp(-h / kind.delta);       // one-cell kernel factor
        const double tail = std::exp(-(double)K * h / kind.delta); // kernel at the cut
        // trapezoid weight mass of the kernel over the window
        double wtrap = 0.5 * tail + 0.5;
        for (std::int64_t k = 1; k < K; ++k) wtrap += std::exp((double)(k - K) * h / kind.delta);
        // sliding unit-weight sum B_i = sum_k e^{s_k/delta} w(t_i + s_k)
        double B = 0.0;
        for (std::int64_t k = 0; k <= K; ++k)
            B += std::exp((double)(k - K) * h / kind.delta) * path.at_node(lo + k - K);
        const double scale = -h / (kind.delta * kind.delta);
        for (std::int64_t i = lo;; ++i) {
            const double wt = path.at_node(i);
            const double ctrap = B - 0.5 * tail * path.at_node(i - K) - 0.5 * wt;
            tab.v_[(std::size_t)(i - lo)] = scale * (ctrap - wt * wtrap);
            if (i == hi) break;
            B = decay * (B - tail * path.at_node(i - K)) + path.at_node(i + 1);
        }
        return tab;
    }
    }
    return tab;
}

double integrate_noise(const NoiseKind& kind, const WienerPath& path, double t) {
    const std::int64_t it = path.node_of(t);
    if (it == 0) return 0.0;
    const std::int64_t lo = std::min<std::int64_t>(0, it), hi = std::max<std::int64_t>(0, it);
    const NoiseTable z = NoiseTable::build(kind, path, lo, hi);
    double acc = 0.0;
    for (std::int64_t i = lo; i <= hi; ++i) {
        const double w = (i == lo || i == hi) ? 0.5 : 1.0;
        acc += w * z.at_node(i);
    }
    acc *= path.dt_grid();
    return it > 0 ? acc : -acc;
}

HistoryTable HistoryTable::of_noise(const NoiseTable& z, double rate, std::int64_t lo,
                                    std::int64_t hi) {
    if (!(rate > 0.0)) throw std::invalid_argument("noise: history rate must be positive");
    if (lo > hi) throw std::invalid_argument("noise: empty history range");
    const double h = z.dt();
    const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants / (rate * h));
    if (lo - K < z.lo() || hi > z.hi())
        throw std::out_of_range("noise: noise table too short for history integral");
    HistoryTable g;
    g.lo_ = lo;
    g.hi_ = hi;
    g.v_.resize((std::size_t)(hi - lo) + 1);
    const double decay = std::exp(-rate * h);
    const double tail = std::exp(-rate * (double)K * h);
    double B = 0.0;
    for (std::int64_t k = 0; k <= K; ++k)
        B += std::exp(rate * (double)(k - K) * h) * z.at_node(lo + k - K);
    for (std::int64_t i = lo;; ++i) {
        g.v_[(std::size_t)(i - lo)] = h * (B - 0.5 * tail * z.at_node(i - K) - 0.5 * z.at_node(i));
        if (i == hi) break;
        B = decay * (B - tail * z.at_node(i - K)) + z.at_node(i + 1);
    }
    return g;
}

HistoryTable HistoryTable::of_white(const WienerPath& path, double rate, std::int64_t lo,
                                    std::int64_t hi) {
    if (!(rate > 0.0)) throw std::invalid_argument("noise: history rate must be positive");
    if (lo > hi) throw std::invalid_argument("noise: empty history range");
    const double h = path.dt_grid();
    const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants / (rate * h));
    require_window(path, lo - K, hi, "white history");
    HistoryTable g;
    g.lo_ = lo;
    g.hi_ = hi;
    g.v_.resize((std::size_t)(hi - lo) + 1);
    const double decay = std::exp(-rate * h);
    const double tail = std::exp(-rate * (double)K * h);
    double wtrap = 0.5 * tail + 0.5;
    for (std::int64_t k = 1; k < K; ++k) wtrap += std::exp(rate * (double)(k - K) * h);
    double B = 0.0;
    for (std::int64_t k = 0; k <= K; ++k)
        B += std::exp(rate * (double)(k - K) * h) * path.at_node(lo + k - K);
    for (std::int64_t i = lo;; ++i) {
        const double wt = path.at_node(i);
        const double ctrap = B - 0.5 * tail * path.at_node(i - K) - 0.5 * wt;
        g.v_[(std::size_t)(i - lo)] = -rate * h * (ctrap - wt * wtrap);
        if (i == hi) break;
        B = decay * (B - tail * path.at_node(i - K)) + path.at_node(i + 1);
    }
    return g;
}

double stationary_x(const NoiseKind& kind, const WienerPath& path, double t) {
    const double h = path.dt_grid();
    const std::int64_t it = path.node_of(t);
    const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants / h);
    const NoiseTable z = NoiseTable::build(kind, path, it - K, it);
    const HistoryTable g = HistoryTable::of_noise(z, 1.0, it, it);
    return g.at_node(it);
}

double stationary_x_white(const WienerPath& path, double t) {
    const std::int64_t it = path.node_of(t);
    const HistoryTable g = HistoryTable::of_white(path, 1.0, it, it);
    return g.at_node(it);
}

HypothesisReport certify_hypotheses(NoiseVariant variant, const WienerPath& path, double T,
                                    const std::vector<double>& deltas, double slack) {
    const std::string name =
        deltas.empty() ? "?" : NoiseKind::make(variant, deltas.front()).name();
    return certify_hypotheses(
        [variant](double d, const WienerPath& p, std::int64_t lo, std::int64_t hi) {
            return NoiseTable::build(NoiseKind::make(variant, d), p, lo, hi);
        },
        name, path, T, deltas, slack);
}

HypothesisReport certify_hypotheses(const NoiseEvaluator& evaluator, const std::string& name,
                                    const WienerPath& path, double T,
                                    const std::vector<double>& deltas, double slack) {
    if (deltas.empty()) throw std::invalid_argument("noise: empty delta sequence");
    HypothesisReport rep;
    rep.kind = name;
    rep.T = T;
    rep.slack = slack;
    const double h = path.dt_grid();
    const std::int64_t iT = (std::int64_t)std::llround(T / h);
    const std::int64_t K = (std::int64_t)std::llround(kHistoryTimeConstants / h);
    const double c_omega = path.growth().c_omega;
    const HistoryTable x0 = HistoryTable::of_white(path, 1.0, -iT, iT);
    for (double d : deltas) {
        const NoiseTable z = evaluator(d, path, -iT - K, iT);
        double kd = 0.0, gap19 = 0.0, gap112 = 0.0;
        double prefix = 0.0; // trapezoid of z from 0 forward
        for (std::int64_t i = 0; i <= iT; ++i) {
            if (i > 0) prefix += 0.5 * h * (z.at_node(i - 1) + z.at_node(i));
            gap19 = std::max(gap19, std::abs(prefix - path.at_node(i)));
        }
        prefix = 0.0;
        for (std::int64_t i = 0; i >= -iT; --i) {
            if (i < 0) prefix -= 0.5 * h * (z.at_node(i + 1) + z.at_node(i));
            gap19 = std::max(gap19, std::abs(prefix - path.at_node(i)));
        }
        const HistoryTable xd = HistoryTable::of_noise(z, 1.0, -iT, iT);
        for (std::int64_t i = -iT; i <= iT; ++i) {
            const double t = (double)i * h;
            kd = std::max(kd, std::abs(z.at_node(i)) / (c_omega * (std::abs(t) + 1.0)));
            gap112 = std::max(gap112, std::abs(xd.at_node(i) - x0.at_node(i)));
        }
        rep.delta.push_back(d);
        rep.k_delta.push_back(kd);
        rep.integral_gap.push_back(gap19);
        rep.stationary_gap.push_back(gap112);
    }
    rep.pass = true;
    for (std::size_t j = 1; j < rep.delta.size(); ++j) {
        if (rep.integral_gap[j] > slack * rep.integral_gap[j - 1]) rep.pass = false;
        if (rep.stationary_gap[j] > slack * rep.stationary_gap[j - 1]) rep.pass = false;
    }
    return rep;
}

std::vector<double> ou_langevin_recursion(const NoiseKind& kind, const WienerPath& path,
                                          std::int64_t lo, std::int64_t hi) {
    if (kind.variant != NoiseVariant::Ou)
        throw std::invalid_argument("noise: langevin recursion is an ou cross-check");
    const double h = path.dt_grid();
    const double d = kind.delta;
    std::vector<double> out((std::size_t)(hi - lo) + 1);
    out[0] = eval_noise(kind, path, (double)lo * h);
    const double decay = std::exp(-h / d);
    const double wmid = std::exp(-h / (2.0 * d)) / d;
    for (std::int64_t i = lo; i < hi; ++i) {
        const double inc = path.at_node(i + 1) - path.at_node(i);
        out[(std::size_t)(i + 1 - lo)] = decay * out[(std::size_t)(i - lo)] + wmid * inc;
    }
    return out;
}

} // namespace nrd
