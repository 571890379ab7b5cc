#include "dope/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "dope/errors.hpp"
#include "dope/linalg.hpp"

namespace dope {

namespace {

// x log x with the continuous limit at 0
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double log_integral_term(double x, double a, double b) {
    return xlogx(b - x) + xlogx(x - a) - (b - a);
}

double cubic_interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    const std::size_t n = xs.size();
    if (n == 1) return ys[0];
    if (n < 4) {
        // linear fallback
        auto it = std::lower_bound(xs.begin(), xs.end(), x);
        std::size_t hi = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - xs.begin(), 1), n - 1);
        double t = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
        return (1 - t) * ys[hi - 1] + t * ys[hi];
    }
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - xs.begin(), 1)) - 1;
    std::size_t s = i == 0 ? 0 : std::min(i - 1, n - 4);
    double r = 0.0;
    for (std::size_t p = s; p < s + 4; ++p) {
        double term = ys[p];
        for (std::size_t q = s; q < s + 4; ++q) {
            if (q == p) continue;
            term *= (x - xs[q]) / (xs[p] - xs[q]);
        }
        r += term;
    }
    return r;
}

// second antiderivative of log|t|
double Phi(double t) {
    if (t == 0.0) return 0.0;
    return 0.5 * t * t * std::log(std::fabs(t)) - 0.75 * t * t;
}

// average of log(1/|x-y|) over two cells offset by m*h: exact
std::vector<double> log_kernel_offsets(std::size_t m_cells, double h) {
    std::vector<double> a(m_cells);
    for (std::size_t m = 0; m < m_cells; ++m) {
        double d = static_cast<double>(m) * h;
        a[m] = -(Phi(d + h) - 2.0 * Phi(d) + Phi(d - h)) / (h * h);
    }
    return a;
}

void toeplitz_matvec(const std::vector<double>& off, const std::vector<double>& d,
                     std::vector<double>& out) {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += off[static_cast<std::size_t>(i > j ? i - j : j - i)] * d[j];
        out[i] = s;
    }
}

// project y onto { 0 <= d <= ub, h * sum d = 1 }
void project_box_simplex(const std::vector<double>& y, const std::vector<double>& ub, double h,
                         std::vector<double>& out) {
    double lo = y[0] - ub[0], hi = y[0];
    for (std::size_t i = 0; i < y.size(); ++i) {
        lo = std::min(lo, y[i] - ub[i]);
        hi = std::max(hi, y[i]);
    }
    auto mass = [&](double nu) {
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            s += std::min(ub[i], std::max(0.0, y[i] - nu));
        return h * s;
    };
    // mass(lo) = full box >= 1 (feasible), mass(hi) = 0
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mass(mid) >= 1.0) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-16 * std::max(1.0, std::fabs(lo))) break;
    }
    double nu = lo;
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = std::min(ub[i], std::max(0.0, y[i] - nu));
}

}  // namespace

Field build_field(std::function<double(double)> potential, double a, double b) {
    Field f;
    f.a = a;
    f.b = b;
    f.phi = [potential = std::move(potential), a, b](double x) {
        return potential(x) + log_integral_term(x, a, b);
    };
    return f;
}

Field build_field_from_table(std::vector<double> xs, std::vector<double> vs, double a, double b) {
    if (xs.size() != vs.size() || xs.empty()) throw validation_error("potential table mismatch");
    Field f;
    f.a = a;
    f.b = b;
    f.phi = [xs = std::move(xs), vs = std::move(vs), a, b](double x) {
        return cubic_interp(xs, vs, x) + log_integral_term(x, a, b);
    };
    return f;
}

double EquilibriumMeasure::density_at(double x) const {
    if (grid.empty()) throw validation_error("empty measure");
    if (x <= grid.front()) return density.front();
    if (x >= grid.back()) return density.back();
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), x) - grid.begin());
    double t = (x - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
    return (1 - t) * density[hi - 1] + t * density[hi];
}

double EquilibriumMeasure::upper_at(double x) const {
    if (x <= grid.front()) return upper.front();
    if (x >= grid.back()) return upper.back();
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), x) - grid.begin());
    double t = (x - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
    return (1 - t) * upper[hi - 1] + t * upper[hi];
}

const Region* EquilibriumMeasure::region_containing(double x) const {
    for (const auto& r : regions)
        if (x >= r.lo && x <= r.hi) return &r;
    return nullptr;
}

double EquilibriumMeasure::band_right_edge(double x) const {
    const Region* r = region_containing(x);
    if (!r || r->kind != RegionKind::Band)
        throw validation_error("band_right_edge: point is not inside a band");
    return r->hi;
}

std::vector<Region> classify(const std::vector<double>& density, const std::vector<double>& upper,
                             double a, double h, double eps) {
    const std::size_t n = density.size();
    std::vector<int> label(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (density[i] <= eps * upper[i]) label[i] = 1;            // void
        else if (density[i] >= (1.0 - eps) * upper[i]) label[i] = 2;  // saturated
        else label[i] = 0;                                          // band
    }
    // absorb runs shorter than 3 cells into the longer neighbor
    struct Run { std::size_t lo, hi; int lab; };
    auto build_runs = [&]() {
        std::vector<Run> runs;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && label[j] == label[i]) ++j;
            runs.push_back({i, j, label[i]});
            i = j;
        }
        return runs;
    };
    for (;;) {
        auto runs = build_runs();
        if (runs.size() <= 1) break;
        bool changed = false;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            if (runs[r].hi - runs[r].lo >= 3) continue;
            int newlab;
            if (r == 0) newlab = runs[1].lab;
            else if (r + 1 == runs.size()) newlab = runs[r - 1].lab;
            else {
                std::size_t left_len = runs[r - 1].hi - runs[r - 1].lo;
                std::size_t right_len = runs[r + 1].hi - runs[r + 1].lo;
                newlab = left_len >= right_len ? runs[r - 1].lab : runs[r + 1].lab;
            }
            for (std::size_t i = runs[r].lo; i < runs[r].hi; ++i) label[i] = newlab;
            changed = true;
            break;
        }
        if (!changed) break;
    }
    std::vector<Region> out;
    auto runs = build_runs();
    for (const auto& r : runs) {
        Region reg;
        reg.lo = a + static_cast<double>(r.lo) * h;
        reg.hi = a + static_cast<double>(r.hi) * h;
        reg.kind = r.lab == 0 ? RegionKind::Band : (r.lab == 1 ? RegionKind::Void : RegionKind::Saturated);
        out.push_back(reg);
    }
    return out;
}

EquilibriumMeasure solve_equilibrium(const Field& field, const NodeDensity& rho0, double c,
                                     std::size_t gridsize, const SolveOptions& opt) {
    if (!(c > 0.0 && c < 1.0)) throw validation_error("solve_equilibrium needs 0 < c < 1");
    if (gridsize < 64) throw validation_error("solve_equilibrium needs gridsize >= 64");
    const double a = field.a, b = field.b;
    const std::size_t M = gridsize;
    const double h = (b - a) / static_cast<double>(M);

    EquilibriumMeasure em;
    em.a = a;
    em.b = b;
    em.h = h;
    em.c = c;
    em.grid.resize(M);
    em.upper.resize(M);
    std::vector<double> phi(M);
    for (std::size_t i = 0; i < M; ++i) {
        em.grid[i] = a + (static_cast<double>(i) + 0.5) * h;
        em.upper[i] = rho0.value(em.grid[i]) / c;
        phi[i] = field.phi(em.grid[i]);
    }
    double box_mass = 0.0;
    for (double u : em.upper) box_mass += u * h;
    if (box_mass < 1.0) throw validation_error("infeasible: upper constraint mass below 1");

    auto off = log_kernel_offsets(M, h);

    std::vector<double> d(M), q(M), g(M), d_new(M), g_new(M), y(M);
    for (std::size_t i = 0; i < M; ++i) d[i] = std::min(em.upper[i], 1.0 / (b - a));
    project_box_simplex(d, em.upper, h, d);

    auto eval = [&](const std::vector<double>& dd, std::vector<double>& qq, std::vector<double>& gg) {
        toeplitz_matvec(off, dd, qq);
        double obj = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            gg[i] = 2.0 * c * h * h * qq[i] + h * phi[i];
            obj += c * h * h * dd[i] * qq[i] + h * phi[i] * dd[i];
        }
        return obj;
    };

    double obj = eval(d, q, g);
    if (opt.record_trace) em.objective_trace.push_back(obj);
    double step = 1.0;
    std::vector<double> d_prev, g_prev;
    double resid = HUGE_VAL;
    std::size_t it = 0;
    for (; it < opt.max_iters; ++it) {
        // unit-step projected-gradient residual
        for (std::size_t i = 0; i < M; ++i) y[i] = d[i] - g[i];
        project_box_simplex(y, em.upper, h, d_new);
        resid = 0.0;
        for (std::size_t i = 0; i < M; ++i) resid = std::max(resid, std::fabs(d_new[i] - d[i]));
        if (resid <= opt.tol) break;

        if (!d_prev.empty()) {
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < M; ++i) {
                double si = d[i] - d_prev[i];
                double yi = g[i] - g_prev[i];
                ss += si * si;
                sy += si * yi;
            }
            step = (sy > 1e-300) ? ss / sy : step * 2.0;
            step = std::min(std::max(step, 1e-10), 1e10);
        }

        double t = step;
        double obj_new = 0.0;
        for (int halve = 0; halve < 60; ++halve) {
            for (std::size_t i = 0; i < M; ++i) y[i] = d[i] - t * g[i];
            project_box_simplex(y, em.upper, h, d_new);
            obj_new = eval(d_new, q, g_new);
            if (obj_new <= obj + 1e-14 * std::fabs(obj)) break;
            t *= 0.5;
        }
        d_prev = d;
        g_prev = g;
        d = d_new;
        g = g_new;
        obj = obj_new;
        if (opt.record_trace) em.objective_trace.push_back(obj);
    }
    if (resid > opt.tol && opt.throw_on_nonconvergence)
        throw convergence_error("equilibrium solver stalled at projected-gradient residual " +
                                    std::to_string(resid),
                                resid);

    em.density = d;
    em.iterations = it;
    em.residual = resid;
    em.objective = obj;
    em.regions = classify(em.density, em.upper, a, h, opt.classify_eps);

    // variational derivative and multiplier from band average
    toeplitz_matvec(off, em.density, q);
    std::vector<double> vd(M);
    for (std::size_t i = 0; i < M; ++i) vd[i] = 2.0 * c * h * q[i] + phi[i];
    double lsum = 0.0;
    std::size_t lcount = 0;
    for (std::size_t i = 0; i < M; ++i) {
        const Region* r = em.region_containing(em.grid[i]);
        if (r && r->kind == RegionKind::Band) {
            lsum += vd[i];
            ++lcount;
        }
    }
    em.multiplier = lcount ? lsum / static_cast<double>(lcount) : 0.0;
    em.varderiv.resize(M);
    for (std::size_t i = 0; i < M; ++i) em.varderiv[i] = vd[i] - em.multiplier;
    return em;
}

std::vector<double> variational_derivative(const EquilibriumMeasure& em, const Field& field, double c) {
    const std::size_t M = em.grid.size();
    auto off = log_kernel_offsets(M, em.h);
    std::vector<double> q(M), vd(M);
    toeplitz_matvec(off, em.density, q);
    for (std::size_t i = 0; i < M; ++i)
        vd[i] = 2.0 * c * em.h * q[i] + field.phi(em.grid[i]) - em.multiplier;
    return vd;
}

KktReport kkt_report(const EquilibriumMeasure& em, const Field& field) {
    KktReport rep;
    double phi_min = HUGE_VAL, phi_max = -HUGE_VAL;
    for (double x : em.grid) {
        double p = field.phi(x);
        phi_min = std::min(phi_min, p);
        phi_max = std::max(phi_max, p);
    }
    rep.scale = std::max(phi_max - phi_min, 1e-12);
    rep.void_min = HUGE_VAL;
    rep.saturated_max = -HUGE_VAL;
    bool has_void = false, has_sat = false;
    for (std::size_t i = 0; i < em.grid.size(); ++i) {
        const Region* r = em.region_containing(em.grid[i]);
        if (!r) continue;
        switch (r->kind) {
            case RegionKind::Band:
                rep.band_dev = std::max(rep.band_dev, std::fabs(em.varderiv[i]));
                break;
            case RegionKind::Void:
                rep.void_min = std::min(rep.void_min, em.varderiv[i]);
                has_void = true;
                break;
            case RegionKind::Saturated:
                rep.saturated_max = std::max(rep.saturated_max, em.varderiv[i]);
                has_sat = true;
                break;
        }
    }
    if (!has_void) rep.void_min = 0.0;
    if (!has_sat) rep.saturated_max = 0.0;
    return rep;
}

bool KktReport::pass(double tol_factor) const {
    double tol = tol_factor * scale;
    return band_dev <= tol && void_min >= -tol && saturated_max <= tol;
}

EdgeFit fit_band_edge(const EquilibriumMeasure& em, double edge, bool right_edge, bool saturated_side) {
    auto cell_value = [&](std::size_t i) {
        return saturated_side ? em.upper[i] - em.density[i] : em.density[i];
    };
    // stage 1: v^2 is asymptotically linear in x; fit it on the cells just
    // inside the edge, root = refined edge, |slope| = amplitude^2
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < em.grid.size(); ++i) {
        double x = em.grid[i];
        double dist = right_edge ? edge - x : x - edge;
        if (dist < 1.5 * em.h || dist > 14.0 * em.h) continue;
        const Region* r = em.region_containing(x);
        if (!r || r->kind != RegionKind::Band) continue;
        double v = cell_value(i);
        if (v <= 0.0) continue;
        fx.push_back(x);
        fy.push_back(v * v);
    }
    EdgeFit fit;
    if (fx.size() < 4) throw numeric_error("fit_band_edge: not enough band cells near the edge");
    double m = fit_slope(fx, fy);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        mx += fx[i];
        my += fy[i];
    }
    mx /= static_cast<double>(fx.size());
    my /= static_cast<double>(fy.size());
    fit.edge_refined = mx - my / m;  // root of the linear fit
    fit.amplitude = std::sqrt(std::fabs(m));

    // stage 2: exponent against the refined edge
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < em.grid.size(); ++i) {
        double x = em.grid[i];
        double dist = right_edge ? fit.edge_refined - x : x - fit.edge_refined;
        if (dist < 1.5 * em.h || dist > 20.0 * em.h) continue;
        const Region* r = em.region_containing(x);
        if (!r || r->kind != RegionKind::Band) continue;
        double v = cell_value(i);
        if (v <= 0.0) continue;
        lx.push_back(std::log(dist));
        ly.push_back(std::log(v));
    }
    if (lx.size() >= 4) fit.exponent = fit_slope(lx, ly);
    return fit;
}

double hahn_band_edge(double A, double c) {
    if (A < 0.0 || !(c > 0.0 && c < 1.0)) throw validation_error("hahn_band_edge: domain violation");
    return std::sqrt(c * (1.0 - c) * (2.0 * A + c) * (2.0 * A + c + 1.0)) / (2.0 * (A + c));
}

HahnClosedForms hahn_closed_forms(double A, double c, double lambda, double tau) {
    const double s3 = std::sqrt(3.0);
    if (lambda <= 0.0) throw validation_error("hahn_closed_forms: lambda must be positive");
    if (std::fabs(tau) > s3 * lambda / 2.0 + 1e-15)
        throw validation_error("hahn_closed_forms: |tau| must be <= sqrt(3) lambda / 2");
    HahnClosedForms out;
    out.beta = hahn_band_edge(A, c);
    out.c_A = std::sqrt(A * A + A) - A;
    double tt = 2.0 * tau / (s3 * lambda);
    out.ellipse_y = std::sqrt(lambda + 1.0) * std::sqrt(std::max(0.0, 1.0 - tt * tt));
    out.tau0 = -s3 * lambda * lambda / (2.0 * (2.0 + lambda));
    out.c_of_tau = 2.0 / (2.0 + lambda + 2.0 * tau / s3);
    out.A_of_tau = (-tau / s3) * out.c_of_tau;
    return out;
}

std::string region_kind_name(RegionKind k) {
    switch (k) {
        case RegionKind::Band: return "band";
        case RegionKind::Void: return "void";
        case RegionKind::Saturated: return "saturated";
    }
    return "?";
}

}  // namespace dope
