#include "nrd/galerkin.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nrd {

Field Field::basis(std::size_t n_modes, int mode, double amplitude) {
    if (mode < 1 || (std::size_t)mode > n_modes)
        throw std::invalid_argument("galerkin: basis mode out of range");
    Field f(n_modes);
    f.coeffs[(std::size_t)mode - 1] = amplitude;
    return f;
}

double Field::l2_norm() const {
    double s = 0.0;
    for (double c : coeffs) s += c * c;
    return std::sqrt(s);
}

double Field::h1_norm_sq() const {
    double s = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        s += eigenvalue((int)k + 1) * coeffs[k] * coeffs[k];
    return s;
}

double Field::h_minus1_norm_sq() const {
    double s = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        s += coeffs[k] * coeffs[k] / eigenvalue((int)k + 1);
    return s;
}

Field operator+(const Field& a, const Field& b) {
    Field r(a.n_modes());
    for (std::size_t k = 0; k < r.n_modes(); ++k) r.coeffs[k] = a.coeffs[k] + b.coeffs[k];
    return r;
}

Field operator-(const Field& a, const Field& b) {
    Field r(a.n_modes());
    for (std::size_t k = 0; k < r.n_modes(); ++k) r.coeffs[k] = a.coeffs[k] - b.coeffs[k];
    return r;
}

Field operator*(double s, const Field& a) {
    Field r(a.n_modes());
    for (std::size_t k = 0; k < r.n_modes(); ++k) r.coeffs[k] = s * a.coeffs[k];
    return r;
}

double l2_distance(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.n_modes(); ++k) {
        const double d = a.coeffs[k] - b.coeffs[k];
        s += d * d;
    }
    return std::sqrt(s);
}

SineTransform::SineTransform(std::size_t n_modes, std::size_t n_grid)
    : n_modes_(n_modes), n_grid_(n_grid), hx_(1.0 / (double)(n_grid + 1)) {
    if (n_grid < 2 * n_modes)
        throw std::invalid_argument("galerkin: n_grid below the 2*n_modes anti-aliasing floor");
    table_.resize(n_modes * n_grid);
    const double s2 = std::sqrt(2.0);
    for (std::size_t k = 0; k < n_modes; ++k)
        for (std::size_t j = 0; j < n_grid; ++j)
            table_[k * n_grid + j] = s2 * std::sin((double)(k + 1) * kPi * node(j));
}

void SineTransform::to_samples(const Field& f, std::vector<double>& out) const {
    if (f.n_modes() != n_modes_) throw std::invalid_argument("galerkin: mode count mismatch");
    out.assign(n_grid_, 0.0);
    for (std::size_t k = 0; k < n_modes_; ++k) {
        const double c = f.coeffs[k];
        if (c == 0.0) continue;
        const double* row = &table_[k * n_grid_];
        for (std::size_t j = 0; j < n_grid_; ++j) out[j] += c * row[j];
    }
}

void SineTransform::from_samples(const std::vector<double>& samples, Field& out) const {
    if (samples.size() != n_grid_) throw std::invalid_argument("galerkin: sample count mismatch");
    out.coeffs.assign(n_modes_, 0.0);
    for (std::size_t k = 0; k < n_modes_; ++k) {
        const double* row = &table_[k * n_grid_];
        double acc = 0.0;
        for (std::size_t j = 0; j < n_grid_; ++j) acc += samples[j] * row[j];
        out.coeffs[k] = acc * hx_;
    }
}

std::vector<double> to_samples(const Field& f, std::size_t n_grid) {
    SineTransform plan(f.n_modes(), n_grid);
    std::vector<double> out;
    plan.to_samples(f, out);
    return out;
}

Field from_samples(const std::vector<double>& samples, std::size_t n_modes) {
    SineTransform plan(n_modes, samples.size());
    Field out;
    plan.from_samples(samples, out);
    return out;
}

double lp_norm(const Field& f, double p, std::size_t n_grid) {
    if (p < 1.0) throw std::invalid_argument("galerkin: lp_norm requires p >= 1");
    const std::vector<double> s = to_samples(f, n_grid);
    const double hx = 1.0 / (double)(n_grid + 1);
    double acc = 0.0; // boundary samples are 0, so trapezoid reduces to the interior sum
    for (double v : s) acc += std::pow(std::abs(v), p);
    return std::pow(acc * hx, 1.0 / p);
}

void dump_field_csv(const Field& f, std::ostream& os) {
    os << "k,coeff\n";
    char buf[64];
    for (std::size_t k = 0; k < f.n_modes(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k + 1, f.coeffs[k]);
        os << buf;
    }
}

} // namespace nrd
