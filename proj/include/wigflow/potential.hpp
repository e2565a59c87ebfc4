#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wigflow {

/// One-dimensional potential: polynomial, Morse well, or piecewise-linear segments,
/// together with the particle mass of the Hamiltonian p^2/2M + V(x).
class Potential {
public:
    enum class Kind { Polynomial, Morse, PiecewiseLinear };

    static Potential polynomial(std::vector<double> coeffs, double mass);
    /// V = (K/2) x^2.
    static Potential harmonic(double k_spring, double mass);
    /// V = D (1 - exp(-a x))^2.
    static Potential morse(double depth, double range, double mass);
    /// Contiguous linear segments through the nodes (x_b, v_b); linear extension
    /// beyond the outermost nodes.
    static Potential piecewise_linear(std::vector<double> xs, std::vector<double> vs,
                                      double mass);

    Kind kind() const { return kind_; }
    double mass() const { return mass_; }

    double value(double x) const;
    /// Analytic derivative of the given order (>= 1). At a piecewise breakpoint the
    /// first derivative is the mean of the one-sided slopes; higher orders are zero.
    double derivative(double x, std::size_t order = 1) const;
    /// Degree of the terminating Taylor series; empty for Morse and piecewise forms.
    std::optional<std::size_t> taylor_degree() const;
    bool has_kink_at(double x) const;

    const std::vector<double>& coeffs() const { return coeffs_; }
    double morse_depth() const { return morse_depth_; }
    double morse_range() const { return morse_range_; }
    const std::vector<double>& knots_x() const { return knot_x_; }
    const std::vector<double>& knots_v() const { return knot_v_; }

    std::string describe() const;

private:
    Potential() = default;

    Kind kind_ = Kind::Polynomial;
    double mass_ = 1.0;
    std::vector<double> coeffs_;
    double morse_depth_ = 0.0;
    double morse_range_ = 0.0;
    std::vector<double> knot_x_;
    std::vector<double> knot_v_;
};

}  // namespace wigflow
