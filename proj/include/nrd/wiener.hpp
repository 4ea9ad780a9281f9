#ifndef NRD_WIENER_HPP
#define NRD_WIENER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nrd {

struct GrowthReport {
    double c_omega = 0.0; ///< grid sup of |w(s)|/(|s|+1)
    double worst_t = 0.0; ///< node where the sup is attained
};

/** A Brownian sample path on a uniform grid containing t=0, with w(0)=0.
 *
 * Node i lives at t = i*dt_grid, i in [node_lo, node_hi]. The increment over
 * cell [i, i+1] is sqrt(dt_grid)*gaussian(seed, i), independent of the window,
 * so paths with the same seed and grid step agree on shared nodes. Immutable
 * after construction; safe to share across threads.
 */
class WienerPath {
public:
    static WienerPath sample(std::uint64_t seed, double t_min, double t_max, double dt_grid);
    /// w(t) = 0 everywhere (synthetic).
    static WienerPath zero(double t_min, double t_max, double dt_grid);
    /// w(t) = slope*t (synthetic; makes the noise formulas analytically checkable).
    static WienerPath linear(double slope, double t_min, double t_max, double dt_grid);

    std::uint64_t seed() const { return seed_; }
    double dt_grid() const { return h_; }
    double t_min() const { return (double)node_lo_ * h_; }
    double t_max() const { return (double)node_hi_ * h_; }
    std::int64_t node_lo() const { return node_lo_; }
    std::int64_t node_hi() const { return node_hi_; }
    std::size_t size() const { return values_.size(); }

    double at_node(std::int64_t i) const { return values_[(std::size_t)(i - node_lo_)]; }
    double time_at(std::int64_t i) const { return (double)i * h_; }

    /// Nearest grid index for t; throws if t is not on the grid.
    std::int64_t node_of(double t) const;
    /// True when t coincides with a grid node (within representation slack).
    bool on_grid(double t) const;

    /// Exact grid value at nodes, linear interpolation in between.
    double eval(double t) const;

    /// Wiener shift: s -> w(t+s) - w(t) on the largest representable window.
    WienerPath shifted(double t) const;

    GrowthReport growth() const;

    /// CSV dump, header `t,omega`, 17 significant digits.
    void dump_csv(std::ostream& os) const;

private:
    WienerPath() = default;
    friend WienerPath combine_paths(const WienerPath&, const WienerPath&, double, double);
    friend WienerPath subsample_path(const WienerPath&, int);
    std::uint64_t seed_ = 0;
    std::int64_t node_lo_ = 0, node_hi_ = 0;
    double h_ = 0.0;
    std::vector<double> values_;
};

inline WienerPath sample_path(std::uint64_t seed, double t_min, double t_max, double dt_grid) {
    return WienerPath::sample(seed, t_min, t_max, dt_grid);
}
inline WienerPath shift(const WienerPath& p, double t) { return p.shifted(t); }
inline double growth_constant(const WienerPath& p) { return p.growth().c_omega; }

/// Test helper: pointwise alpha*a + beta*b on the common window (grids must match).
WienerPath combine_paths(const WienerPath& a, const WienerPath& b, double alpha, double beta);
/// Test helper: keep every factor-th node (refinement-study companion).
WienerPath subsample_path(const WienerPath& fine, int factor);

} // namespace nrd

#endif
