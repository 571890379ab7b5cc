#include "dope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "dope/errors.hpp"

namespace dope {

Matrix matmul(const Matrix& x, const Matrix& y) {
    Matrix r(x.n);
    for (std::size_t i = 0; i < x.n; ++i) {
        for (std::size_t k = 0; k < x.n; ++k) {
            double xik = x(i, k);
            if (xik == 0.0) continue;
            const double* yrow = &y.a[k * y.n];
            double* rrow = &r.a[i * r.n];
            for (std::size_t j = 0; j < x.n; ++j) rrow[j] += xik * yrow[j];
        }
    }
    return r;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::fabs(x.a[i] - y.a[i]));
    return m;
}

double trace(const Matrix& x) {
    double t = 0.0;
    for (std::size_t i = 0; i < x.n; ++i) t += x(i, i);
    return t;
}

double det_lu(Matrix m) {
    const std::size_t n = m.n;
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::fabs(m(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            double v = std::fabs(m(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        double inv = 1.0 / m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = m(r, col) * inv;
            if (f == 0.0) continue;
            for (std::size_t j = col + 1; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

std::vector<double> jacobi_eigenvalues(Matrix m, double tol) {
    const std::size_t n = m.n;
    if (n == 0) return {};
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::fabs(m(i, j)));
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    const double thresh = tol * scale;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off = std::max(off, std::fabs(m(i, j)));
        if (off <= thresh) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = m(p, q);
                if (std::fabs(apq) <= thresh * 1e-2) continue;
                double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = m(i, p), aiq = m(i, q);
                    m(i, p) = c * aip - s * aiq;
                    m(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    double apj = m(p, j), aqj = m(q, j);
                    m(p, j) = c * apj - s * aqj;
                    m(q, j) = s * apj + c * aqj;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw validation_error("gauss_legendre: order must be >= 1");
    nodes.assign(order, 0.0);
    weights.assign(order, 0.0);
    const int mhalf = (order + 1) / 2;
    for (int i = 0; i < mhalf; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) nodes[order / 2] = 0.0;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

}  // namespace dope
