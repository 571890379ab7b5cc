#include <doctest.h>

#include <cmath>

#include "dope/linalg.hpp"
#include "dope/rng.hpp"

using namespace dope;

TEST_SUITE("linalg") {

TEST_CASE("determinant basics") {
    Matrix m(2);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(1, 0) = 3;
    m(1, 1) = 4;
    CHECK(det_lu(m) == doctest::Approx(-2.0));
    Matrix id(5);
    for (int i = 0; i < 5; ++i) id(i, i) = 1.0;
    CHECK(det_lu(id) == doctest::Approx(1.0));
    Matrix sing(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sing(i, j) = i + j;
    CHECK(det_lu(sing) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("jacobi eigenvalues of a known matrix") {
    // tridiagonal(-1, 2, -1) of size n has eigenvalues 2 - 2 cos(k pi/(n+1))
    const int n = 12;
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 2.0;
        if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -1.0;
    }
    auto ev = jacobi_eigenvalues(m);
    for (int k = 1; k <= n; ++k) {
        double want = 2.0 - 2.0 * std::cos(k * M_PI / (n + 1));
        CHECK(ev[k - 1] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("jacobi eigenvalues match char poly via det") {
    CounterRng rng(11);
    const int n = 6;
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.next_u01() - 0.5;
    auto ev = jacobi_eigenvalues(m);
    // det(M - lambda_i I) ~ 0 for each eigenvalue
    for (double l : ev) {
        Matrix s = m;
        for (int i = 0; i < n; ++i) s(i, i) -= l;
        CHECK(std::fabs(det_lu(s)) < 1e-10);
    }
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    double s0 = 0, s2 = 0, s14 = 0;
    for (int i = 0; i < 8; ++i) {
        s0 += w[i];
        s2 += w[i] * x[i] * x[i];
        s14 += w[i] * std::pow(x[i], 14);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // degree 14 < 2*8: still exact
    CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("slope fit") {
    std::vector<double> x{1, 2, 3, 4}, y{2.0, 4.1, 5.9, 8.0};
    CHECK(fit_slope(x, y) == doctest::Approx(2.0).epsilon(0.02));
}

}  // TEST_SUITE
