#include <doctest.h>

#include <cmath>

#include "dope/ensembles.hpp"
#include "dope/errors.hpp"

using namespace dope;

TEST_SUITE("ensembles") {

TEST_CASE("equispaced nodes: formula, symmetry, quantization") {
    auto s2 = build_equispaced_nodes(2);
    CHECK(s2.values == std::vector<double>{-0.25, 0.25});
    auto s4 = build_equispaced_nodes(4);
    CHECK(s4.values == std::vector<double>{-0.375, -0.125, 0.125, 0.375});
    CHECK(s4.symmetric);
    CHECK(!build_equispaced_nodes(3).symmetric);
    CHECK_THROWS_AS(build_equispaced_nodes(0), validation_error);

    auto s101 = build_equispaced_nodes(101);
    CHECK(s101.quantization_residual() < 1e-14);
    CHECK_NOTHROW(s101.validate());
    // exact mirror negation even for awkward N
    auto s100 = build_equispaced_nodes(100);
    for (std::size_t i = 0; i < 100; ++i) CHECK(s100.values[i] == -s100.values[99 - i]);
}

TEST_CASE("half-hexagon line nodes") {
    auto l = build_halfhex_line_nodes(1, 2, 2);
    CHECK(l.values == std::vector<double>{-1.5, -0.5, 0.5, 1.5});
    CHECK(l.symmetric);
    CHECK(build_halfhex_line_nodes(2, 3, 2).size() == 6);  // |L_m| = 2k + m
    // L_m == L_{2R-m}
    auto a = build_halfhex_line_nodes(2, 3, 2);
    auto b = build_halfhex_line_nodes(2, 3, 4);
    CHECK(a.values == b.values);
    CHECK_THROWS_AS(build_halfhex_line_nodes(1, 2, 3), unsupported_variant_error);
    CHECK_THROWS_AS(build_halfhex_line_nodes(1, 2, 6), validation_error);
    CHECK_NOTHROW(a.validate());
}

TEST_CASE("half-hexagon weights via log-Gamma") {
    auto nodes = build_halfhex_line_nodes(1, 2, 2);
    auto w = make_halfhex_weight(nodes, 1, 2, 2);
    auto e = make_ensemble(nodes, w, 1, EnsembleMode::WallSymmetric);
    // (2!)(1!)(2!)(1!) = 4 at z = 1/2; (3!)(0!)(3!)(0!) = 36 at z = 3/2
    CHECK(log_weight(e, 0.5) == doctest::Approx(std::log(1.0 / 4.0)).epsilon(1e-14));
    CHECK(log_weight(e, 1.5) == doctest::Approx(std::log(1.0 / 36.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_weight(e, 0.7), not_a_node_error);
    // evenness is exact by construction
    for (std::size_t i = 0; i < nodes.size(); ++i)
        CHECK(w.logw[i] == w.logw[nodes.size() - 1 - i]);
    // no overflow at large parameters
    auto big_nodes = build_halfhex_line_nodes(10000, 10000, 9000);
    auto bw = make_halfhex_weight(big_nodes, 10000, 10000, 9000);
    for (double lw : bw.logw) CHECK(std::isfinite(lw));
}

TEST_CASE("uniform weight is zero") {
    auto nodes = build_equispaced_nodes(6);
    auto e = make_ensemble(nodes, make_uniform_weight(nodes), 3, EnsembleMode::Standard);
    CHECK(log_weight(e, nodes.values[2]) == 0.0);
}

TEST_CASE("AHE identification of the line weight") {
    auto id = hexline_to_ahe(1, 2, 2);
    CHECK(id.N == 4);
    CHECK(id.P == 1);
    CHECK(id.Q == 1);
    auto id2 = hexline_to_ahe(4, 8, 4);
    CHECK(id2.N == 12);
    CHECK(id2.P == 5);

    // shifted weight tables agree up to one constant: compare ratios pairwise
    for (long long m : {2ll, 4ll}) {
        auto nodes = build_halfhex_line_nodes(2, 3, m);
        auto hw = make_halfhex_weight(nodes, 2, 3, m);
        auto ahe = hexline_to_ahe(2, 3, m);
        NodeSet anodes = build_equispaced_nodes(ahe.N);
        auto aw = make_associated_hahn_weight(anodes, ahe.P, ahe.Q);
        REQUIRE(nodes.size() == static_cast<std::size_t>(ahe.N));
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            double lhs = hw.logw[i] - hw.logw[0];
            double rhs = aw.logw[i] - aw.logw[0];
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
        // round trip at relative error 1e-12 after normalizing both to sum 1
        double sh = 0, sa = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            sh += std::exp(hw.logw[i] - hw.logw[0]);
            sa += std::exp(aw.logw[i] - aw.logw[0]);
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            double ph = std::exp(hw.logw[i] - hw.logw[0]) / sh;
            double pa = std::exp(aw.logw[i] - aw.logw[0]) / sa;
            CHECK(std::fabs(ph - pa) / pa < 1e-12);
        }
    }
}

TEST_CASE("extract_potential: uniform symmetry and Hahn N-convergence") {
    auto nodes = build_equispaced_nodes(4);
    auto e = make_ensemble(nodes, make_uniform_weight(nodes), 2, EnsembleMode::Standard);
    auto v = extract_potential(e);
    CHECK(v[0] == doctest::Approx(v[3]).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(v[2]).epsilon(1e-14));

    // V_N tables converge as N doubles (compare on the coarse grid by linear interp)
    auto vn_at = [](long long n, double x) {
        auto ns = build_equispaced_nodes(n);
        auto en = make_ensemble(ns, make_hahn_weight(ns, n + 1, n + 1), 1, EnsembleMode::Standard);
        auto vn = extract_potential(en);
        // linear interpolation
        auto it = std::lower_bound(ns.values.begin(), ns.values.end(), x);
        std::size_t hi = static_cast<std::size_t>(it - ns.values.begin());
        if (hi == 0) hi = 1;
        if (hi >= ns.size()) hi = ns.size() - 1;
        double t = (x - ns.values[hi - 1]) / (ns.values[hi] - ns.values[hi - 1]);
        return (1 - t) * vn[hi - 1] + t * vn[hi];
    };
    double d1 = 0, d2 = 0;
    for (double x = -0.4; x <= 0.4; x += 0.05) {
        d1 = std::max(d1, std::fabs(vn_at(50, x) - vn_at(100, x)));
        d2 = std::max(d2, std::fabs(vn_at(100, x) - vn_at(200, x)));
    }
    CHECK(d2 < d1);

    // custom gaussian table: V_N(x) = x^2 - (1/N) sum log|x - y| by construction,
    // and the interaction term stays bounded uniformly in N
    for (long long n : {50ll, 100ll, 200ll}) {
        auto ns = build_equispaced_nodes(n);
        std::vector<double> lw(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) lw[i] = -static_cast<double>(n) * ns.values[i] * ns.values[i];
        auto en = make_ensemble(ns, make_custom_weight(ns, lw), 1, EnsembleMode::Standard);
        auto vn = extract_potential(en);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            double inter = 0;
            for (std::size_t j = 0; j < ns.size(); ++j)
                if (j != i) inter += std::log(std::fabs(ns.values[i] - ns.values[j]));
            inter /= static_cast<double>(n);
            CHECK(std::fabs(vn[i] - ns.values[i] * ns.values[i] + inter) < 1e-12);
            CHECK(std::fabs(inter) < 3.0);
        }
    }
}

TEST_CASE("even weight on symmetric nodes is mirror-exact (library invariant)") {
    for (long long n : {8ll, 20ll, 50ll}) {
        auto ns = build_equispaced_nodes(n);
        auto w = make_hahn_weight(ns, 2 * n + 1, 2 * n + 1);
        for (std::size_t i = 0; i < ns.size(); ++i) CHECK(w.logw[i] == w.logw[ns.size() - 1 - i]);
    }
}

TEST_CASE("weight CSV round trip") {
    auto nodes = build_halfhex_line_nodes(2, 2, 2);
    auto w = make_halfhex_weight(nodes, 2, 2, 2);
    auto csv = weight_table_to_csv(nodes, w);
    auto [xs, lw] = parse_weight_csv(csv);
    REQUIRE(xs.size() == nodes.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(xs[i] == nodes.values[i]);
        CHECK(lw[i] == w.logw[i]);
    }
    CHECK_THROWS_AS(parse_weight_csv("node,log_weight\n1.0\n"), validation_error);
}

TEST_CASE("wall ensembles reject the odd variant and asymmetric input") {
    auto ns = build_custom_nodes({-1.0, 0.0, 1.0});
    ns.symmetric = false;
    CHECK_THROWS_AS(make_ensemble(ns, make_uniform_weight(ns), 1, EnsembleMode::WallSymmetric),
                    unsupported_variant_error);
    auto asym = build_custom_nodes({0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(make_ensemble(asym, make_uniform_weight(asym), 1, EnsembleMode::WallSymmetric),
                    validation_error);
}

}  // TEST_SUITE
