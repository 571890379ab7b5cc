#include <doctest.h>

#include <cmath>

#include "dope/errors.hpp"
#include "dope/orthopoly.hpp"

using namespace dope;

namespace {

Ensemble uniform_0123(std::size_t k) {
    auto nodes = build_custom_nodes({0.0, 1.0, 2.0, 3.0});
    return make_ensemble(nodes, make_uniform_weight(nodes), k, EnsembleMode::Standard);
}

Ensemble sym_uniform_2112(std::size_t k) {
    auto nodes = build_custom_nodes({-2.0, -1.0, 1.0, 2.0});
    return make_ensemble(nodes, make_uniform_weight(nodes), k, EnsembleMode::WallSymmetric);
}

Ensemble hahn_sym(std::size_t n_half, std::size_t k_half, long long A = 1) {
    auto nodes = build_equispaced_nodes(2 * static_cast<long long>(n_half));
    long long P = A * 2 * static_cast<long long>(n_half) + 1;
    return make_ensemble(nodes, make_hahn_weight(nodes, P, P), k_half, EnsembleMode::WallSymmetric);
}

}  // namespace

TEST_SUITE("orthopoly") {

TEST_CASE("uniform {0,1,2,3}: exact rational recurrence") {
    auto e = uniform_0123(2);
    auto rt = compute_recurrence(e, 3);
    CHECK(rt.alpha[0] == doctest::Approx(1.5).epsilon(1e-15));   // node mean
    CHECK(rt.beta[0] == doctest::Approx(4.0).epsilon(1e-15));    // total mass
    CHECK(std::exp(rt.log_gamma[0]) == doctest::Approx(0.5).epsilon(1e-14));
    // ||pi_1||^2 = sum (x-1.5)^2 = 5 -> gamma_1 = 1/sqrt(5)
    CHECK(rt.beta[1] == doctest::Approx(5.0 / 4.0).epsilon(1e-14));  // norm ratio 5/4
    CHECK(std::exp(rt.log_gamma[1]) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
    // phi_0 = 1/2 everywhere; phi_1(0) = (0-1.5)/sqrt 5
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(orthonormal_eval_at(rt, 0, i) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(orthonormal_eval(rt, e, 1, 0.0) == doctest::Approx(-1.5 / std::sqrt(5.0)).epsilon(1e-14));
    CHECK(orthonormality_residual(rt, 3) < 1e-13);
}

TEST_CASE("single node: gamma_0 = w0^{-1/2}") {
    auto nodes = build_custom_nodes({2.0});
    std::vector<double> lw{std::log(0.25)};
    auto e = make_ensemble(nodes, make_custom_weight(nodes, lw), 1, EnsembleMode::Standard);
    auto rt = compute_recurrence(e, 0);
    CHECK(std::exp(rt.log_gamma[0]) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("errors: degree too large") {
    auto e = uniform_0123(2);
    CHECK_THROWS_AS(compute_recurrence(e, 4), validation_error);
}

TEST_CASE("orthonormality across built-in families") {
    // uniform, Hahn, associated Hahn, half-hex line
    auto n1 = build_equispaced_nodes(40);
    auto e1 = make_ensemble(n1, make_uniform_weight(n1), 20, EnsembleMode::Standard);
    auto n2 = build_equispaced_nodes(60);
    auto e2 = make_ensemble(n2, make_hahn_weight(n2, 61, 121), 20, EnsembleMode::Standard);
    auto e3 = make_ensemble(n2, make_associated_hahn_weight(n2, 13, 7), 20, EnsembleMode::Standard);
    auto n4 = build_halfhex_line_nodes(8, 12, 10);
    auto e4 = make_ensemble(n4, make_halfhex_weight(n4, 8, 12, 10), 8, EnsembleMode::WallSymmetric);
    for (const auto& e : {e1, e2, e3, e4}) {
        int deg = static_cast<int>(e.nodes.size()) / 2;
        auto rt = compute_recurrence(e, deg);
        CHECK(orthonormality_residual(rt, deg) < 1e-10);
        for (int n = 0; n <= deg; ++n) {
            double s = 0;
            for (std::size_t i = 0; i < e.nodes.size(); ++i) {
                double v = orthonormal_eval(rt, e, n, e.nodes.values[i]);
                s += v * v;
            }
            CHECK(std::fabs(s - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("cd_kernel on uniform {0,1,2,3}") {
    auto e1 = uniform_0123(1);
    auto k1 = cd_kernel(e1, 1);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(k1.at(i, j) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(k1.trace_value() == doctest::Approx(1.0).epsilon(1e-14));

    auto e2 = uniform_0123(2);
    auto k2 = cd_kernel(e2, 2);
    CHECK(k2.at(0, 0) == doctest::Approx(0.7).epsilon(1e-13));  // 1/4 + 2.25/5

    // k = N: identity matrix
    auto e4 = uniform_0123(4);
    auto k4 = cd_kernel(e4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(k4.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("cd kernel: sum form vs quotient form incl. derivative diagonal") {
    auto n2 = build_equispaced_nodes(50);
    auto e = make_ensemble(n2, make_hahn_weight(n2, 51, 51), 20, EnsembleMode::Standard);
    auto ks = cd_kernel(e, 20);
    auto kq = cd_kernel_quotient(e, 20);
    double worst_off = 0, worst_diag = 0;
    for (std::size_t i = 0; i < ks.size(); ++i)
        for (std::size_t j = 0; j < ks.size(); ++j) {
            double d = std::fabs(ks.at(i, j) - kq.at(i, j));
            (i == j ? worst_diag : worst_off) = std::max(i == j ? worst_diag : worst_off, d);
        }
    CHECK(worst_off < 1e-8);
    CHECK(worst_diag < 1e-8);
}

TEST_CASE("projection and trace invariants") {
    auto n2 = build_equispaced_nodes(200);
    auto e = make_ensemble(n2, make_hahn_weight(n2, 201, 201), 80, EnsembleMode::Standard);
    auto km = cd_kernel(e, 80);
    CHECK(km.projection_residual() < 1e-8);
    CHECK(std::fabs(km.trace_value() - 80.0) < 1e-8);
    auto h = hole_kernel(km);
    CHECK(h.projection_residual() < 1e-8);
    CHECK(std::fabs(h.trace_value() - 120.0) < 1e-8);
    // symmetry is exact
    for (std::size_t i = 0; i < km.size(); ++i)
        for (std::size_t j = 0; j < km.size(); ++j) CHECK(km.at(i, j) == km.at(j, i));
}

TEST_CASE("sym kernel on uniform {-2,-1,1,2}, k=1: exact values") {
    auto e = sym_uniform_2112(1);
    auto km = sym_kernel(e);
    REQUIRE(km.size() == 2);
    // p0 = 1/2, p1 = x/sqrt(10): K(1,1)=0.35, K(1,-1)=0.15
    CHECK(km.at(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(km.at(1, 1) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(km.trace_value() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(km.projection_residual() < 1e-14);

    auto kq = sym_kernel_via_squares(e);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(km.at(i, j) == doctest::Approx(kq.at(i, j)).epsilon(1e-13));
}

TEST_CASE("kersym identity: subtraction form equals squared-variable form") {
    for (std::size_t nh : {20ull, 50ull, 100ull}) {
        auto e = hahn_sym(nh, nh / 2);
        auto ka = sym_kernel(e);
        auto kb = sym_kernel_via_squares(e);
        double worst = 0;
        for (std::size_t i = 0; i < ka.size(); ++i)
            for (std::size_t j = 0; j < ka.size(); ++j)
                worst = std::max(worst, std::fabs(ka.at(i, j) - kb.at(i, j)));
        CHECK(worst < 1e-10);
        CHECK(ka.projection_residual() < 1e-8);
        CHECK(std::fabs(ka.trace_value() - static_cast<double>(nh) / 2.0) < 1e-8);
    }
}

TEST_CASE("sym kernel rejects bad input") {
    auto nodes = build_custom_nodes({0.0, 1.0, 2.0, 3.0});
    auto e = make_ensemble(nodes, make_uniform_weight(nodes), 2, EnsembleMode::Standard);
    CHECK_THROWS_AS(sym_kernel(e), validation_error);
}

TEST_CASE("parity: even ensembles have even/odd polynomials") {
    auto e = hahn_sym(20, 10);
    auto rt = compute_recurrence(e, 19);
    // p_n(-x) = (-1)^n p_n(x) shows up as phi_n(-x) = (-1)^n phi_n(x)
    double worst = 0;
    for (int n = 0; n < 20; ++n)
        for (std::size_t i = 0; i < e.nodes.size(); ++i) {
            double a = rt.phi[n][i];
            double b = rt.phi[n][e.nodes.mirror_index(i)];
            double expect = (n % 2 == 0) ? b : -b;
            worst = std::max(worst, std::fabs(a - expect) / std::max(1e-30, std::fabs(a)));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("split_odd: uniform {-2,-1,1,2} exact and Hahn orthogonality") {
    auto e = sym_uniform_2112(1);
    auto rt = compute_recurrence(e, 3);
    auto sp = split_odd(rt, e);
    // pi_1(x) = x -> q_0 = 1, norm sum_Y x^2 = 5
    CHECK(sp.q_values[0][0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sp.q_values[0][1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::exp(sp.log_norms[0]) == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(sp.parity_residual < 1e-14);

    // Hahn(N=20, P=Q=3): sum_Y x^2 w q_i q_j = delta_ij / (2 gamma_{2i+1}^2)
    auto nodes = build_equispaced_nodes(20);
    auto eh = make_ensemble(nodes, make_hahn_weight(nodes, 3, 3), 5, EnsembleMode::WallSymmetric);
    auto rth = compute_recurrence(eh, 11);
    auto sph = split_odd(rth, eh);
    auto pos = eh.positive_indices();
    for (std::size_t a = 0; a < sph.q_values.size(); ++a) {
        for (std::size_t b = a; b < sph.q_values.size(); ++b) {
            double s = 0;
            for (std::size_t i = 0; i < pos.size(); ++i) {
                double x = eh.nodes.values[pos[i]];
                s += x * x * std::exp(eh.weight.logw[pos[i]]) * sph.q_values[a][i] * sph.q_values[b][i];
            }
            double want = (a == b) ? std::exp(sph.log_norms[a]) : 0.0;
            CHECK(std::fabs(s - want) <= 1e-9 * std::max(1.0, std::fabs(want)));
        }
    }
}

TEST_CASE("split_odd rejects asymmetric ensembles") {
    auto e = uniform_0123(2);
    auto rt = compute_recurrence(e, 3);
    CHECK_THROWS_AS(split_odd(rt, e), validation_error);
}

TEST_CASE("precision escalation on a degenerate-support weight") {
    // mass concentrated on a handful of nodes: double Stieltjes loses
    // positivity well before the true degree bound, 256-bit does not
    auto nodes = build_equispaced_nodes(40);
    std::vector<double> lw(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        lw[i] = -2000.0 * nodes.values[i] * nodes.values[i];
    auto e = make_ensemble(nodes, make_custom_weight(nodes, lw), 1, EnsembleMode::Standard);
    auto rt = compute_recurrence(e, 25);
    CHECK(rt.precision_bits == 256);
    CHECK(orthonormality_residual(rt, 25) < 1e-10);
}

}  // TEST_SUITE

TEST_SUITE("orthopoly") {

TEST_CASE("cd_kernel built-in self-check toggle") {
    auto n = build_equispaced_nodes(30);
    auto e = make_ensemble(n, make_hahn_weight(n, 31, 31), 10, EnsembleMode::Standard);
    CHECK_NOTHROW(cd_kernel(e, 10, true));
    CHECK_THROWS_AS(cd_kernel(e, 30, true), validation_error);  // k = N has no degree-k polynomial
}

TEST_CASE("hole kernel of the full projection is the zero matrix") {
    auto n = build_custom_nodes({0.0, 1.0, 2.0, 3.0});
    auto e = make_ensemble(n, make_uniform_weight(n), 4, EnsembleMode::Standard);
    auto h = hole_kernel(cd_kernel(e, 4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::fabs(h.at(i, j)) < 1e-12);
    CHECK(h.rank == 0);
}

}  // TEST_SUITE
