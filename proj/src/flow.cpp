#include "wigflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wigflow/errors.hpp"
#include "wigflow/spectral.hpp"

namespace wigflow {

namespace {

double wrap_angle(double a) {
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

double vec_max(const CurrentField& J) {
    return std::max(J.j.jx.max_abs(), J.j.jp.max_abs());
}

}  // namespace

Window Window::full(const PhaseGrid& g) {
    return {g.x(0), g.x(g.n_x - 1), g.p(0), g.p(g.n_p() - 1)};
}

double DivergenceMap::unmasked_sup() const {
    double sup = 0.0;
    for (std::size_t n = 0; n < div.values.size(); ++n) {
        if (!mask[n]) sup = std::max(sup, std::abs(div.values[n]));
    }
    return sup;
}

VelocityField velocity_field(const CurrentField& J, const WignerField& W, double eps_w) {
    require_same_grid(*J.j.jp.grid, *W.w.grid, "velocity_field");
    const PhaseGrid& g = *W.w.grid;

    VelocityField out;
    out.eps_w = eps_w;
    out.w.jx = ScalarField::zeros(W.w.grid);
    out.w.jp = ScalarField::zeros(W.w.grid);
    out.mask.assign(g.n_x * g.n_p(), 0);

    const double wmax = W.w.max_abs();
    const double jpmax = J.j.jp.max_abs();
    const double cut = eps_w * wmax;

    const ScalarField dW_p = spectral_derivative(W.w, Axis::P, 1);
    const ScalarField dJ_p = spectral_derivative(J.j.jp, Axis::P, 1);
    const ScalarField dW_x = spectral_derivative(W.w, Axis::X, 1);
    const ScalarField dJ_x = spectral_derivative(J.j.jp, Axis::X, 1);
    const double dwp_max = dW_p.max_abs();
    const double dwx_max = dW_x.max_abs();

    // w_x = p/M everywhere (exact cancellation). Recover 1/M from the bitwise
    // J_x = (p/M) W construction at the best-conditioned cell.
    double inv_mass = 0.0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            const double score = std::abs(W.w.at(i, k) * g.p(k));
            if (score > best_score) {
                best_score = score;
                inv_mass = (score > 0.0) ? J.j.jx.at(i, k) / (W.w.at(i, k) * g.p(k)) : 0.0;
            }
        }
    }
    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            out.w.jx.at(i, k) = g.p(k) * inv_mass;
        }
    }

    for (std::size_t i = 0; i < g.n_x; ++i) {
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            const std::size_t n = i * g.n_p() + k;
            const double w = W.w.at(i, k);
            const double jp = J.j.jp.at(i, k);
            if (std::abs(w) > cut) {
                out.w.jp.at(i, k) = jp / w;
                continue;
            }
            // Removable-singularity path: local limit along the better-conditioned axis.
            bool removable = false;
            double limit = 0.0;
            if (std::abs(dW_p.at(i, k)) > 1e-3 * dwp_max) {
                limit = dJ_p.at(i, k) / dW_p.at(i, k);
                removable = std::abs(jp - limit * w) <= 1e-6 * jpmax;
            }
            if (!removable && std::abs(dW_x.at(i, k)) > 1e-3 * dwx_max) {
                limit = dJ_x.at(i, k) / dW_x.at(i, k);
                removable = std::abs(jp - limit * w) <= 1e-6 * jpmax;
            }
            if (removable) {
                out.w.jp.at(i, k) = limit;
            } else {
                out.w.jp.at(i, k) = 0.0;
                out.mask[n] = 1;
            }
        }
    }
    return out;
}

DivergenceMap divergence_w(const CurrentField& J, const WignerField& W, double eps_w) {
    require_same_grid(*J.j.jp.grid, *W.w.grid, "divergence_w");
    const PhaseGrid& g = *W.w.grid;

    DivergenceMap out;
    out.eps_w = eps_w;
    out.div = ScalarField::zeros(W.w.grid);
    out.div_arctan = ScalarField::zeros(W.w.grid);
    out.mask.assign(g.n_x * g.n_p(), 0);

    const double wmax = W.w.max_abs();
    const double cut = eps_w * wmax;
    const ScalarField dW = spectral_derivative(W.w, Axis::P, 1);
    const ScalarField dJ = spectral_derivative(J.j.jp, Axis::P, 1);

    for (std::size_t n = 0; n < out.div.values.size(); ++n) {
        const double w = W.w.values[n];
        if (std::abs(w) <= cut) {
            out.mask[n] = 1;
            continue;
        }
        const double d = (dJ.values[n] * w - J.j.jp.values[n] * dW.values[n]) / (w * w);
        out.div.values[n] = d;
        out.div_arctan.values[n] = (2.0 / std::numbers::pi) * std::atan(d);
    }

    // d_x(J_x/W) = d_x(p/M) vanishes identically; assert it on the ratio field.
    ScalarField gx = ScalarField::zeros(W.w.grid);
    double gx_max = 0.0;
    for (std::size_t n = 0; n < gx.values.size(); ++n) {
        if (!out.mask[n]) {
            gx.values[n] = J.j.jx.values[n] / W.w.values[n];
            gx_max = std::max(gx_max, std::abs(gx.values[n]));
        }
    }
    // Masked cells: continue the row value (p/M is p-dependent only).
    for (std::size_t k = 0; k < g.n_p(); ++k) {
        double fill = 0.0;
        for (std::size_t i = 0; i < g.n_x; ++i) {
            if (!out.mask[i * g.n_p() + k]) {
                fill = gx.at(i, k);
                break;
            }
        }
        for (std::size_t i = 0; i < g.n_x; ++i) {
            if (out.mask[i * g.n_p() + k]) gx.at(i, k) = fill;
        }
    }
    const ScalarField dgx = spectral_derivative(gx, Axis::X, 1);
    for (std::size_t n = 0; n < dgx.values.size(); ++n) {
        if (!out.mask[n] && std::abs(dgx.values[n]) > 1e-8 * std::max(gx_max, 1e-300)) {
            throw FieldInvariantError(
                "divergence_w: d_x(J_x/W) failed to vanish; J_x is not (p/M) W");
        }
    }
    return out;
}

ScalarField divergencew_ratio_impl(const CurrentField& J, const WignerField& W,
                                   double eps_w) {
    const PhaseGrid& g = *W.w.grid;
    const double cut = eps_w * W.w.max_abs();
    ScalarField ratio = ScalarField::zeros(W.w.grid);
    for (std::size_t i = 0; i < g.n_x; ++i) {
        // Fill each row with J_p/W where defined, then continue the nearest defined
        // value across masked stretches so the row stays spectrally differentiable.
        std::vector<std::size_t> defined;
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            if (std::abs(W.w.at(i, k)) > cut) {
                ratio.at(i, k) = J.j.jp.at(i, k) / W.w.at(i, k);
                defined.push_back(k);
            }
        }
        if (defined.empty()) continue;
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            if (std::abs(W.w.at(i, k)) > cut) continue;
            auto it = std::lower_bound(defined.begin(), defined.end(), k);
            std::size_t nearest;
            if (it == defined.begin()) {
                nearest = *it;
            } else if (it == defined.end()) {
                nearest = defined.back();
            } else {
                nearest = (*it - k <= k - *(it - 1)) ? *it : *(it - 1);
            }
            ratio.at(i, k) = ratio.at(i, nearest);
        }
    }
    return spectral_derivative(ratio, Axis::P, 1);
}

ScalarField divergence_w_from_ratio(const CurrentField& J, const WignerField& W,
                                    double eps_w) {
    require_same_grid(*J.j.jp.grid, *W.w.grid, "divergence_w_from_ratio");
    return divergencew_ratio_impl(J, W, eps_w);
}

LiouvilleFit liouville_residual(const CurrentField& J, const WignerField& W,
                                const Potential& V) {
    require_same_grid(*J.j.jp.grid, *W.w.grid, "liouville_residual");
    const PhaseGrid& g = *W.w.grid;

    LiouvilleFit fit;
    fit.residual = ScalarField::zeros(W.w.grid);
    fit.post_fit = ScalarField::zeros(W.w.grid);
    fit.delta_v_prime.assign(g.n_x, 0.0);

    const double wmax = W.w.max_abs();
    for (std::size_t i = 0; i < g.n_x; ++i) {
        const double v1 = V.derivative(g.x(i), 1);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            const double w = W.w.at(i, k);
            const double r = J.j.jp.at(i, k) + w * v1;
            fit.residual.at(i, k) = r;
            num += r * w;
            den += w * w;
        }
        // R + W dV' minimized per column; empty columns get no correction.
        const double dvp = (den > 1e-24 * wmax * wmax) ? -num / den : 0.0;
        fit.delta_v_prime[i] = dvp;
        fit.max_delta_v_prime = std::max(fit.max_delta_v_prime, std::abs(dvp));
        for (std::size_t k = 0; k < g.n_p(); ++k) {
            fit.post_fit.at(i, k) = fit.residual.at(i, k) + W.w.at(i, k) * dvp;
        }
    }
    auto l2 = [&](const ScalarField& f) {
        double s = 0.0;
        for (double v : f.values) s += v * v;
        return std::sqrt(s * g.dx * g.dp);
    };
    fit.residual_norm = l2(fit.residual);
    fit.post_fit_norm = l2(fit.post_fit);
    return fit;
}

std::optional<double> sample_bilinear(const ScalarField& f, double x, double p) {
    const PhaseGrid& g = *f.grid;
    const double fi = (x - g.x(0)) / g.dx;
    const double fk = (p - g.p(0)) / g.dp;
    if (fi < 0.0 || fk < 0.0 || fi > static_cast<double>(g.n_x - 1) ||
        fk > static_cast<double>(g.n_p() - 1)) {
        return std::nullopt;
    }
    std::size_t i = std::min(static_cast<std::size_t>(fi), g.n_x - 2);
    std::size_t k = std::min(static_cast<std::size_t>(fk), g.n_p() - 2);
    const double u = fi - static_cast<double>(i);
    const double v = fk - static_cast<double>(k);
    return (1 - u) * (1 - v) * f.at(i, k) + u * (1 - v) * f.at(i + 1, k) +
           (1 - u) * v * f.at(i, k + 1) + u * v * f.at(i + 1, k + 1);
}

namespace {

struct Vec2 {
    double x, p;
};

std::optional<Vec2> sample_j(const CurrentField& J, double x, double p) {
    auto jx = sample_bilinear(J.j.jx, x, p);
    auto jp = sample_bilinear(J.j.jp, x, p);
    if (!jx || !jp) return std::nullopt;
    return Vec2{*jx, *jp};
}

// Newton refinement of the bilinear zero inside cell (i, k); empty when the iteration
// leaves the cell or the local system degenerates.
std::optional<Vec2> refine_cell(const CurrentField& J, std::size_t i, std::size_t k,
                                double jmax) {
    const PhaseGrid& g = *J.j.jx.grid;
    auto coeffs = [&](const ScalarField& f, double out[4]) {
        const double f00 = f.at(i, k), f10 = f.at(i + 1, k);
        const double f01 = f.at(i, k + 1), f11 = f.at(i + 1, k + 1);
        out[0] = f00;
        out[1] = f10 - f00;
        out[2] = f01 - f00;
        out[3] = f11 - f10 - f01 + f00;
    };
    double ax[4], ap[4];
    coeffs(J.j.jx, ax);
    coeffs(J.j.jp, ap);

    double u = 0.5, v = 0.5;
    for (int it = 0; it < 50; ++it) {
        const double fx = ax[0] + ax[1] * u + ax[2] * v + ax[3] * u * v;
        const double fp = ap[0] + ap[1] * u + ap[2] * v + ap[3] * u * v;
        if (std::abs(fx) <= 1e-14 * jmax && std::abs(fp) <= 1e-14 * jmax) break;
        const double j11 = ax[1] + ax[3] * v, j12 = ax[2] + ax[3] * u;
        const double j21 = ap[1] + ap[3] * v, j22 = ap[2] + ap[3] * u;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) return std::nullopt;
        u -= (fx * j22 - fp * j12) / det;
        v -= (fp * j11 - fx * j21) / det;
        if (u < -0.5 || u > 1.5 || v < -0.5 || v > 1.5) return std::nullopt;
    }
    if (u < -1e-3 || u > 1.0 + 1e-3 || v < -1e-3 || v > 1.0 + 1e-3) return std::nullopt;
    return Vec2{g.x(i) + u * g.dx, g.p(k) + v * g.dp};
}

}  // namespace

double winding_number(const CurrentField& J, double x, double p, double rx, double rp,
                      std::size_t n, bool* hit_zero) {
    const double jmax = vec_max(J);
    const double floor = 1e-8 * jmax;
    if (hit_zero) *hit_zero = false;

    // n samples counterclockwise along the rectangle perimeter: right edge up, top
    // edge left, left edge down, bottom edge right, each starting at its first corner.
    const std::size_t per_side = n / 4;
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (std::size_t s = 0; s < per_side; ++s) {
        double t = static_cast<double>(s) / static_cast<double>(per_side);
        pts.push_back({x + rx, p - rp + 2.0 * rp * t});
    }
    for (std::size_t s = 0; s < per_side; ++s) {
        double t = static_cast<double>(s) / static_cast<double>(per_side);
        pts.push_back({x + rx - 2.0 * rx * t, p + rp});
    }
    for (std::size_t s = 0; s < per_side; ++s) {
        double t = static_cast<double>(s) / static_cast<double>(per_side);
        pts.push_back({x - rx, p + rp - 2.0 * rp * t});
    }
    for (std::size_t s = 0; s < per_side; ++s) {
        double t = static_cast<double>(s) / static_cast<double>(per_side);
        pts.push_back({x - rx + 2.0 * rx * t, p - rp});
    }

    double winding = 0.0;
    double prev_angle = 0.0;
    bool have_prev = false;
    double first_angle = 0.0;
    for (const auto& q : pts) {
        auto j = sample_j(J, q.x, q.p);
        if (!j) {
            if (hit_zero) *hit_zero = true;
            continue;
        }
        const double mag = std::hypot(j->x, j->p);
        if (mag <= floor) {
            if (hit_zero) *hit_zero = true;
            continue;
        }
        const double a = std::atan2(j->p, j->x);
        if (!have_prev) {
            first_angle = a;
            have_prev = true;
        } else {
            winding += wrap_angle(a - prev_angle);
        }
        prev_angle = a;
    }
    if (have_prev) winding += wrap_angle(first_angle - prev_angle);
    return winding / (2.0 * std::numbers::pi);
}

std::vector<StagnationPoint> stagnation_points(const CurrentField& J, const Window& win) {
    const PhaseGrid& g = *J.j.jx.grid;
    const double jmax = vec_max(J);
    if (jmax == 0.0) return {};
    // Cells whose whole neighborhood sits below the transform noise floor are
    // unresolvable background, not stagnation points.
    const double dead = 1e-8 * jmax;

    std::vector<Vec2> found;
    for (std::size_t i = 0; i + 1 < g.n_x; ++i) {
        if (g.x(i + 1) < win.x_lo || g.x(i) > win.x_hi) continue;
        for (std::size_t k = 0; k + 1 < g.n_p(); ++k) {
            if (g.p(k + 1) < win.p_lo || g.p(k) > win.p_hi) continue;
            double xs[4] = {J.j.jx.at(i, k), J.j.jx.at(i + 1, k), J.j.jx.at(i, k + 1),
                            J.j.jx.at(i + 1, k + 1)};
            double ps[4] = {J.j.jp.at(i, k), J.j.jp.at(i + 1, k), J.j.jp.at(i, k + 1),
                            J.j.jp.at(i + 1, k + 1)};
            bool alive = false;
            for (int c = 0; c < 4; ++c) {
                if (std::abs(xs[c]) > dead || std::abs(ps[c]) > dead) alive = true;
            }
            if (!alive) continue;  // numerically dead background
            auto mixed = [](const double* v) {
                double lo = std::min({v[0], v[1], v[2], v[3]});
                double hi = std::max({v[0], v[1], v[2], v[3]});
                return lo <= 0.0 && hi >= 0.0;
            };
            if (!mixed(xs) || !mixed(ps)) continue;
            if (auto pt = refine_cell(J, i, k, jmax)) {
                if (pt->x >= win.x_lo && pt->x <= win.x_hi && pt->p >= win.p_lo &&
                    pt->p <= win.p_hi) {
                    found.push_back(*pt);
                }
            }
        }
    }

    // Cluster duplicates from adjacent cells.
    std::vector<StagnationPoint> out;
    std::vector<bool> used(found.size(), false);
    for (std::size_t a = 0; a < found.size(); ++a) {
        if (used[a]) continue;
        double sx = found[a].x, sp = found[a].p;
        std::size_t cnt = 1;
        for (std::size_t b = a + 1; b < found.size(); ++b) {
            if (used[b]) continue;
            if (std::abs(found[b].x - found[a].x) < 0.75 * g.dx &&
                std::abs(found[b].p - found[a].p) < 0.75 * g.dp) {
                used[b] = true;
                sx += found[b].x;
                sp += found[b].p;
                ++cnt;
            }
        }
        StagnationPoint s;
        s.x = sx / static_cast<double>(cnt);
        s.p = sp / static_cast<double>(cnt);

        // Loop centered on the nearest interior node.
        auto clampi = [](long v, long lo, long hi) { return std::max(lo, std::min(v, hi)); };
        const long ic = clampi(std::lround((s.x - g.x(0)) / g.dx), 1,
                               static_cast<long>(g.n_x) - 2);
        const long kc = clampi(std::lround((s.p - g.p(0)) / g.dp), 1,
                               static_cast<long>(g.n_p()) - 2);
        bool hit = false;
        s.winding = winding_number(J, g.x(static_cast<std::size_t>(ic)),
                                   g.p(static_cast<std::size_t>(kc)), g.dx, g.dp, 8, &hit);
        s.indeterminate = hit;
        s.omega = static_cast<int>(std::lround(s.winding));
        s.quant_error = std::abs(s.winding - static_cast<double>(s.omega));
        auto j = sample_j(J, s.x, s.p);
        s.residual = j ? std::hypot(j->x, j->p) : 0.0;
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const StagnationPoint& a, const StagnationPoint& b) {
        return a.x != b.x ? a.x < b.x : a.p < b.p;
    });
    return out;
}

std::vector<StagnationPoint> stagnation_points(const CurrentField& J) {
    return stagnation_points(J, Window::full(*J.j.jx.grid));
}

std::vector<Fieldline> fieldlines(const CurrentField& J,
                                  const std::vector<std::array<double, 2>>& seeds,
                                  double step, std::size_t max_steps) {
    const double jmax = vec_max(J);
    const double stag_floor = 1e-9 * jmax;

    std::vector<Fieldline> out;
    out.reserve(seeds.size());
    for (const auto& seed : seeds) {
        Fieldline line;
        double x = seed[0], p = seed[1];
        if (!sample_j(J, x, p)) {
            line.reason = FieldlineEnd::SeedOutside;
            out.push_back(std::move(line));
            continue;
        }
        line.points.push_back({x, p});
        line.reason = FieldlineEnd::MaxSteps;
        for (std::size_t n = 0; n < max_steps; ++n) {
            auto k1 = sample_j(J, x, p);
            if (!k1) {
                line.reason = FieldlineEnd::LeftDomain;
                break;
            }
            if (std::hypot(k1->x, k1->p) <= stag_floor) {
                line.reason = FieldlineEnd::ReachedStagnation;
                break;
            }
            auto k2 = sample_j(J, x + 0.5 * step * k1->x, p + 0.5 * step * k1->p);
            if (!k2) {
                line.reason = FieldlineEnd::LeftDomain;
                break;
            }
            auto k3 = sample_j(J, x + 0.5 * step * k2->x, p + 0.5 * step * k2->p);
            if (!k3) {
                line.reason = FieldlineEnd::LeftDomain;
                break;
            }
            auto k4 = sample_j(J, x + step * k3->x, p + step * k3->p);
            if (!k4) {
                line.reason = FieldlineEnd::LeftDomain;
                break;
            }
            const double nx = x + step / 6.0 * (k1->x + 2.0 * k2->x + 2.0 * k3->x + k4->x);
            const double np = p + step / 6.0 * (k1->p + 2.0 * k2->p + 2.0 * k3->p + k4->p);
            if (!sample_j(J, nx, np)) {
                line.reason = FieldlineEnd::LeftDomain;
                break;
            }
            x = nx;
            p = np;
            line.points.push_back({x, p});
        }
        out.push_back(std::move(line));
    }
    return out;
}

}  // namespace wigflow
