#include "nrd/wiener.hpp"
#include "nrd/prng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nrd {

namespace {
std::int64_t round_to_node(double t, double h) {
    return (std::int64_t)std::llround(t / h);
}
} // namespace

WienerPath WienerPath::sample(std::uint64_t seed, double t_min, double t_max, double dt_grid) {
    if (!(dt_grid > 0.0)) throw std::invalid_argument("wiener: dt_grid must be positive");
    if (t_min > t_max) throw std::invalid_argument("wiener: t_min > t_max");
    WienerPath p;
    p.seed_ = seed;
    p.h_ = dt_grid;
    p.node_lo_ = round_to_node(t_min, dt_grid);
    p.node_hi_ = round_to_node(t_max, dt_grid);
    if (p.node_lo_ > 0 || p.node_hi_ < 0)
        throw std::invalid_argument("wiener: window must contain t=0");
    const std::size_t n = (std::size_t)(p.node_hi_ - p.node_lo_) + 1;
    p.values_.assign(n, 0.0);
    const double sh = std::sqrt(dt_grid);
    // Build outward from w(0)=0 so every window sees the same increments.
    const std::size_t origin = (std::size_t)(-p.node_lo_);
    double w = 0.0;
    for (std::int64_t i = 0; i < p.node_hi_; ++i) {
        w += sh * gaussian(seed, (std::uint64_t)i);
        p.values_[origin + (std::size_t)(i + 1)] = w;
    }
    w = 0.0;
    for (std::int64_t i = -1; i >= p.node_lo_; --i) {
        w -= sh * gaussian(seed, (std::uint64_t)i);
        p.values_[origin - (std::size_t)(-i)] = w;
    }
    return p;
}

WienerPath WienerPath::zero(double t_min, double t_max, double dt_grid) {
    WienerPath p = sample(0, t_min, t_max, dt_grid);
    std::fill(p.values_.begin(), p.values_.end(), 0.0);
    return p;
}

WienerPath WienerPath::linear(double slope, double t_min, double t_max, double dt_grid) {
    WienerPath p = zero(t_min, t_max, dt_grid);
    for (std::int64_t i = p.node_lo_; i <= p.node_hi_; ++i)
        p.values_[(std::size_t)(i - p.node_lo_)] = slope * p.time_at(i);
    return p;
}

bool WienerPath::on_grid(double t) const {
    const std::int64_t i = round_to_node(t, h_);
    return std::abs((double)i * h_ - t) <= 1e-9 * std::max(1.0, std::abs(t));
}

std::int64_t WienerPath::node_of(double t) const {
    if (!on_grid(t)) throw std::invalid_argument("wiener: time is not a grid node");
    return round_to_node(t, h_);
}

double WienerPath::eval(double t) const {
    const double lo = t_min(), hi = t_max();
    if (t < lo - 1e-12 || t > hi + 1e-12)
        throw std::out_of_range("wiener: eval outside path window");
    if (values_.size() == 1) return values_[0];
    double pos = (t / h_) - (double)node_lo_;
    pos = std::clamp(pos, 0.0, (double)(values_.size() - 1));
    std::size_t j = (std::size_t)pos;
    if (j >= values_.size() - 1) j = values_.size() - 2;
    const double frac = pos - (double)j;
    if (frac == 0.0) return values_[j];
    return values_[j] + frac * (values_[j + 1] - values_[j]);
}

WienerPath WienerPath::shifted(double t) const {
    const std::int64_t j = node_of(t);
    if (j < node_lo_ || j > node_hi_)
        throw std::out_of_range("wiener: shift exhausts the window");
    WienerPath q;
    q.seed_ = seed_;
    q.h_ = h_;
    q.node_lo_ = node_lo_ - j;
    q.node_hi_ = node_hi_ - j;
    q.values_.resize(values_.size());
    const double wj = at_node(j);
    for (std::int64_t i = q.node_lo_; i <= q.node_hi_; ++i)
        q.values_[(std::size_t)(i - q.node_lo_)] = at_node(i + j) - wj;
    return q;
}

GrowthReport WienerPath::growth() const {
    GrowthReport r;
    for (std::int64_t i = node_lo_; i <= node_hi_; ++i) {
        const double t = time_at(i);
        const double ratio = std::abs(at_node(i)) / (std::abs(t) + 1.0);
        if (ratio > r.c_omega) {
            r.c_omega = ratio;
            r.worst_t = t;
        }
    }
    return r;
}

void WienerPath::dump_csv(std::ostream& os) const {
    os << "t,omega\n";
    char buf[80];
    for (std::int64_t i = node_lo_; i <= node_hi_; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", time_at(i), at_node(i));
        os << buf;
    }
}

WienerPath combine_paths(const WienerPath& a, const WienerPath& b, double alpha, double beta) {
    if (a.dt_grid() != b.dt_grid())
        throw std::invalid_argument("wiener: combine requires matching grids");
    const std::int64_t lo = std::max(a.node_lo(), b.node_lo());
    const std::int64_t hi = std::min(a.node_hi(), b.node_hi());
    if (lo > 0 || hi < 0) throw std::invalid_argument("wiener: combined window must contain 0");
    WienerPath p;
    p.seed_ = a.seed();
    p.h_ = a.dt_grid();
    p.node_lo_ = lo;
    p.node_hi_ = hi;
    p.values_.resize((std::size_t)(hi - lo) + 1);
    for (std::int64_t i = lo; i <= hi; ++i)
        p.values_[(std::size_t)(i - lo)] = alpha * a.at_node(i) + beta * b.at_node(i);
    return p;
}

WienerPath subsample_path(const WienerPath& fine, int factor) {
    if (factor < 1) throw std::invalid_argument("wiener: subsample factor must be >= 1");
    WienerPath p;
    p.seed_ = fine.seed();
    p.h_ = fine.dt_grid() * factor;
    p.node_lo_ = fine.node_lo() / factor;
    p.node_hi_ = fine.node_hi() / factor;
    p.values_.resize((std::size_t)(p.node_hi_ - p.node_lo_) + 1);
    for (std::int64_t i = p.node_lo_; i <= p.node_hi_; ++i)
        p.values_[(std::size_t)(i - p.node_lo_)] = fine.at_node(i * factor);
    return p;
}

} // namespace nrd
