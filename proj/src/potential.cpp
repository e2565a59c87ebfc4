#include "wigflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wigflow {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return d;
}

}  // namespace

Potential Potential::polynomial(std::vector<double> coeffs, double mass) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    if (!(mass > 0.0)) throw std::invalid_argument("Potential: mass must be positive");
    Potential p;
    p.kind_ = Kind::Polynomial;
    p.coeffs_ = std::move(coeffs);
    p.mass_ = mass;
    return p;
}

Potential Potential::harmonic(double k_spring, double mass) {
    return polynomial({0.0, 0.0, 0.5 * k_spring}, mass);
}

Potential Potential::morse(double depth, double range, double mass) {
    if (!(depth > 0.0) || !(range > 0.0)) {
        throw std::invalid_argument("Potential: Morse needs depth > 0 and range > 0");
    }
    if (!(mass > 0.0)) throw std::invalid_argument("Potential: mass must be positive");
    Potential p;
    p.kind_ = Kind::Morse;
    p.morse_depth_ = depth;
    p.morse_range_ = range;
    p.mass_ = mass;
    return p;
}

Potential Potential::piecewise_linear(std::vector<double> xs, std::vector<double> vs,
                                      double mass) {
    if (xs.size() < 2 || xs.size() != vs.size()) {
        throw std::invalid_argument("Potential: piecewise form needs >= 2 (x, v) nodes");
    }
    if (!std::is_sorted(xs.begin(), xs.end()) ||
        std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
        throw std::invalid_argument("Potential: piecewise breakpoints must strictly increase");
    }
    for (double v : vs) {
        if (!std::isfinite(v)) throw std::invalid_argument("Potential: non-finite node value");
    }
    if (!(mass > 0.0)) throw std::invalid_argument("Potential: mass must be positive");
    Potential p;
    p.kind_ = Kind::PiecewiseLinear;
    p.knot_x_ = std::move(xs);
    p.knot_v_ = std::move(vs);
    p.mass_ = mass;
    return p;
}

double Potential::value(double x) const {
    switch (kind_) {
        case Kind::Polynomial:
            return poly_eval(coeffs_, x);
        case Kind::Morse: {
            const double u = 1.0 - std::exp(-morse_range_ * x);
            return morse_depth_ * u * u;
        }
        case Kind::PiecewiseLinear: {
            // Segment index: x in [knot_x_[s], knot_x_[s+1]); linear extension outside.
            std::size_t s;
            if (x <= knot_x_.front()) {
                s = 0;
            } else if (x >= knot_x_.back()) {
                s = knot_x_.size() - 2;
            } else {
                s = static_cast<std::size_t>(
                        std::upper_bound(knot_x_.begin(), knot_x_.end(), x) -
                        knot_x_.begin()) - 1;
            }
            const double slope =
                (knot_v_[s + 1] - knot_v_[s]) / (knot_x_[s + 1] - knot_x_[s]);
            return knot_v_[s] + slope * (x - knot_x_[s]);
        }
    }
    return 0.0;
}

double Potential::derivative(double x, std::size_t order) const {
    if (order == 0) return value(x);
    switch (kind_) {
        case Kind::Polynomial: {
            std::vector<double> c = coeffs_;
            for (std::size_t k = 0; k < order; ++k) c = poly_derivative(c);
            return poly_eval(c, x);
        }
        case Kind::Morse: {
            // V = D (1 - 2 e^{-ax} + e^{-2ax})
            const double a = morse_range_;
            const double e1 = std::exp(-a * x);
            const double e2 = e1 * e1;
            const double n = static_cast<double>(order);
            return morse_depth_ *
                   (-2.0 * std::pow(-a, n) * e1 + std::pow(-2.0 * a, n) * e2);
        }
        case Kind::PiecewiseLinear: {
            if (order >= 2) return 0.0;
            auto slope = [&](std::size_t s) {
                return (knot_v_[s + 1] - knot_v_[s]) / (knot_x_[s + 1] - knot_x_[s]);
            };
            if (has_kink_at(x)) {
                // Mean of one-sided slopes at a breakpoint.
                auto it = std::lower_bound(knot_x_.begin(), knot_x_.end(), x - 1e-12);
                std::size_t b = static_cast<std::size_t>(it - knot_x_.begin());
                if (b == 0) return slope(0);
                if (b >= knot_x_.size() - 1) return slope(knot_x_.size() - 2);
                return 0.5 * (slope(b - 1) + slope(b));
            }
            if (x <= knot_x_.front()) return slope(0);
            if (x >= knot_x_.back()) return slope(knot_x_.size() - 2);
            std::size_t s = static_cast<std::size_t>(
                                std::upper_bound(knot_x_.begin(), knot_x_.end(), x) -
                                knot_x_.begin()) - 1;
            return slope(s);
        }
    }
    return 0.0;
}

std::optional<std::size_t> Potential::taylor_degree() const {
    if (kind_ != Kind::Polynomial) return std::nullopt;
    return coeffs_.size() - 1;
}

bool Potential::has_kink_at(double x) const {
    if (kind_ != Kind::PiecewiseLinear) return false;
    const double span = knot_x_.back() - knot_x_.front();
    for (std::size_t b = 1; b + 1 < knot_x_.size(); ++b) {
        if (std::abs(x - knot_x_[b]) < 1e-12 * span) {
            const double sl = (knot_v_[b] - knot_v_[b - 1]) / (knot_x_[b] - knot_x_[b - 1]);
            const double sr = (knot_v_[b + 1] - knot_v_[b]) / (knot_x_[b + 1] - knot_x_[b]);
            if (sl != sr) return true;
        }
    }
    return false;
}

std::string Potential::describe() const {
    char buf[128];
    switch (kind_) {
        case Kind::Polynomial: {
            std::string s = "poly(";
            for (std::size_t k = 0; k < coeffs_.size(); ++k) {
                std::snprintf(buf, sizeof(buf), "%s%.12g", k ? "," : "", coeffs_[k]);
                s += buf;
            }
            return s + ")";
        }
        case Kind::Morse:
            std::snprintf(buf, sizeof(buf), "morse(D=%.12g,a=%.12g)", morse_depth_,
                          morse_range_);
            return buf;
        case Kind::PiecewiseLinear:
            return "pwlinear(" + std::to_string(knot_x_.size()) + " nodes)";
    }
    return "";
}

}  // namespace wigflow
