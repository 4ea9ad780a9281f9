#ifndef NRD_GALERKIN_HPP
#define NRD_GALERKIN_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace nrd {

constexpr double kPi = 3.14159265358979323846264338327950288;
/// First Dirichlet eigenvalue of -d2/dx2 on (0,1).
constexpr double kLambda1 = kPi * kPi;

inline double eigenvalue(int k) { return (double)k * (double)k * kPi * kPi; }

/** Spatial state on (0,1) with Dirichlet boundary: coefficients against the
 * orthonormal basis e_k(x) = sqrt(2) sin(k pi x), k = 1..n_modes. */
struct Field {
    std::vector<double> coeffs;

    Field() = default;
    explicit Field(std::size_t n_modes) : coeffs(n_modes, 0.0) {}

    std::size_t n_modes() const { return coeffs.size(); }
    double& operator[](std::size_t k) { return coeffs[k]; }
    double operator[](std::size_t k) const { return coeffs[k]; }

    /// amplitude * e_mode (1-based mode index).
    static Field basis(std::size_t n_modes, int mode, double amplitude);

    double l2_norm() const;      ///< |u|  = sqrt(sum u_k^2)
    double h1_norm_sq() const;   ///< ||u||^2 = sum lambda_k u_k^2
    double h_minus1_norm_sq() const; ///< ||u||_*^2 = sum u_k^2 / lambda_k
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
double l2_distance(const Field& a, const Field& b);

/** Precomputed sine transform between n_modes coefficients and n_grid interior
 * samples at x_j = j/(n_grid+1). Immutable; shareable across threads. */
class SineTransform {
public:
    SineTransform(std::size_t n_modes, std::size_t n_grid);
    std::size_t n_modes() const { return n_modes_; }
    std::size_t n_grid() const { return n_grid_; }
    double node(std::size_t j) const { return (double)(j + 1) * hx_; } // j = 0..n_grid-1
    double dx() const { return hx_; }

    void to_samples(const Field& f, std::vector<double>& out) const;
    void from_samples(const std::vector<double>& samples, Field& out) const;

private:
    std::size_t n_modes_, n_grid_;
    double hx_;
    std::vector<double> table_; // table_[k*n_grid + j] = sqrt(2) sin((k+1) pi x_j)
};

/// Samples at interior nodes x_j = j/(n_grid+1); requires n_grid >= 2*n_modes.
std::vector<double> to_samples(const Field& f, std::size_t n_grid);
/// Least-squares sine projection (discrete sine transform with trapezoid weights).
Field from_samples(const std::vector<double>& samples, std::size_t n_modes);

/// (integral |u|^p)^(1/p) by trapezoid quadrature on n_grid samples (zero boundary).
double lp_norm(const Field& f, double p, std::size_t n_grid);

void dump_field_csv(const Field& f, std::ostream& os);

} // namespace nrd

#endif
