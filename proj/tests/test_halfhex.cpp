#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "dope/dpp.hpp"
#include "dope/errors.hpp"
#include "dope/halfhex.hpp"
#include "dope/orthopoly.hpp"

using namespace dope;

namespace {

// Exhaustive enumeration of non-intersecting path systems on the hexagon
// lattice: n_paths paths over columns 0..2R with doubled-integer heights,
// start == end == boundary, steps +-1, optional wall (heights > 0).
struct PathEnum {
    long long n_paths, R;
    bool wall;
    std::vector<long long> boundary2;
    std::vector<std::vector<std::vector<long long>>> systems;  // [system][path][column]

    void run() {
        std::vector<std::vector<long long>> cur(n_paths, std::vector<long long>(2 * R + 1, 0));
        for (long long i = 0; i < n_paths; ++i) cur[i][0] = boundary2[i];
        step(cur, 1);
    }

    void step(std::vector<std::vector<long long>>& cur, long long m) {
        if (m > 2 * R) {
            systems.push_back(cur);
            return;
        }
        extend(cur, m, 0);
    }

    void extend(std::vector<std::vector<long long>>& cur, long long m, long long i) {
        if (i == n_paths) {
            step(cur, m + 1);
            return;
        }
        for (long long d : {-1ll, 1ll}) {
            long long h = cur[i][m - 1] + d;
            if (wall && h <= 0) continue;
            if (i > 0 && h <= cur[i - 1][m]) continue;
            if (std::llabs(h - boundary2[i]) > 2 * R - m) continue;  // must reach the end
            cur[i][m] = h;
            extend(cur, m, i + 1);
        }
    }
};

PathEnum enumerate_half(long long k, long long R) {
    PathEnum pe;
    pe.n_paths = k;
    pe.R = R;
    pe.wall = true;
    for (long long i = 0; i < k; ++i) pe.boundary2.push_back(2 * i + 1);
    pe.run();
    return pe;
}

PathEnum enumerate_full(long long k, long long R) {
    PathEnum pe;
    pe.n_paths = 2 * k;
    pe.R = R;
    pe.wall = false;
    for (long long i = 0; i < 2 * k; ++i) pe.boundary2.push_back(2 * (i - k) + 1);
    pe.run();
    return pe;
}

// crossing-set distribution of a column, keyed by sorted doubled ordinates
std::map<std::vector<long long>, double> column_law(const PathEnum& pe, long long m) {
    std::map<std::vector<long long>, double> law;
    for (const auto& sys : pe.systems) {
        std::vector<long long> key;
        for (const auto& path : sys) key.push_back(path[static_cast<std::size_t>(m)]);
        std::sort(key.begin(), key.end());
        law[key] += 1.0;
    }
    for (auto& [k2, v] : law) v /= static_cast<double>(pe.systems.size());
    return law;
}

double macmahon(long long a, long long b, long long c) {
    double v = 1.0;
    for (long long i = 1; i <= a; ++i)
        for (long long j = 1; j <= b; ++j)
            for (long long l = 1; l <= c; ++l)
                v *= static_cast<double>(i + j + l - 1) / static_cast<double>(i + j + l - 2);
    return v;
}

}  // namespace

TEST_SUITE("halfhex") {

TEST_CASE("line ensembles: counts, symmetry in m, AHE identification") {
    HexSpec hs{2, 3};
    auto e2 = line_ensemble(hs, 2);
    CHECK(e2.n_nodes() == 6);  // |L_m| = 2k + m
    CHECK(e2.k == 2);
    auto e4 = line_ensemble(hs, 4);
    CHECK(e2.nodes.values == e4.nodes.values);
    CHECK(e2.weight.logw == e4.weight.logw);
    CHECK_THROWS_AS(line_ensemble(hs, 3), unsupported_variant_error);
    CHECK_THROWS_AS(line_ensemble(hs, 6), validation_error);
}

TEST_CASE("full-hexagon line law equals the enumerated path distribution") {
    const long long k = 2, R = 3;
    auto pe = enumerate_full(k, R);
    // MacMahon box count for the (2k, R, R)-hexagon
    CHECK(static_cast<double>(pe.systems.size()) == doctest::Approx(macmahon(2 * k, R, R)));

    for (long long m : {2ll, 4ll}) {
        auto law = column_law(pe, m);
        auto nodes = build_halfhex_line_nodes(k, R, m);
        auto w = make_halfhex_weight(nodes, k, R, m);
        auto e = make_ensemble(nodes, w, static_cast<std::size_t>(2 * k), EnsembleMode::Standard);
        auto en = enumerate_oracle(e);
        double worst = 0.0;
        for (std::size_t ci = 0; ci < en.configs.size(); ++ci) {
            std::vector<long long> key;
            for (auto idx : en.configs[ci])
                key.push_back(static_cast<long long>(std::llround(2.0 * en.node_values[idx])));
            auto it = law.find(key);
            double lhs = it == law.end() ? 0.0 : it->second;
            worst = std::max(worst, std::fabs(lhs - en.probs[ci]));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("half-hexagon line law equals the enumerated wall-path distribution") {
    for (long long k : {1ll, 2ll}) {
        for (long long R : {2ll, 3ll}) {
            auto pe = enumerate_half(k, R);
            CHECK(!pe.systems.empty());
            for (long long m = 2; m <= 2 * R - 2; m += 2) {
                auto law = column_law(pe, m);
                HexSpec hs{k, R};
                auto e = line_ensemble(hs, m);
                auto en = enumerate_oracle(e);
                double worst = 0.0;
                for (std::size_t ci = 0; ci < en.configs.size(); ++ci) {
                    std::vector<long long> key;
                    for (auto idx : en.configs[ci])
                        key.push_back(static_cast<long long>(std::llround(2.0 * en.node_values[idx])));
                    auto it = law.find(key);
                    double lhs = it == law.end() ? 0.0 : it->second;
                    worst = std::max(worst, std::fabs(lhs - en.probs[ci]));
                }
                CHECK(worst < 1e-12);
            }
        }
    }
}

TEST_CASE("sample_line: half-and-half law at k=1, R=2, m=2") {
    HexSpec hs{1, 2};
    auto batch = sample_line(hs, 2, 100000, 11);
    std::size_t at_low = 0;
    for (const auto& s : batch) {
        REQUIRE(s.indices.size() == 1);  // configuration size k
        at_low += (s.indices[0] == 0);
    }
    double p = static_cast<double>(at_low) / 100000.0;
    // weights (1/4)(1/2)^2 and (1/36)(3/2)^2 are equal: exactly 1/2 each
    CHECK(std::fabs(p - 0.5) < 4.0 * std::sqrt(0.25 / 100000.0));
}

TEST_CASE("sample_line one-point frequencies track the kernel diagonal") {
    HexSpec hs{8, 16};
    Ensemble e = line_ensemble(hs, 10);
    auto km = sym_kernel(e);
    auto batch = sample_batch(km, 20000, 123);
    std::vector<double> freq(km.size(), 0.0);
    for (const auto& s : batch)
        for (auto i : s.indices) freq[i] += 1.0;
    double worst_sigma = 0.0;
    for (std::size_t i = 0; i < km.size(); ++i) {
        freq[i] /= 20000.0;
        double p = km.at(i, i);
        double sigma = std::sqrt(std::max(p * (1 - p), 1e-9) / 20000.0);
        worst_sigma = std::max(worst_sigma, std::fabs(freq[i] - p) / sigma);
    }
    CHECK(worst_sigma < 4.5);
}

TEST_CASE("minimal state and mcmc invariants") {
    HexSpec hs{3, 4};
    auto t0 = mcmc_tile(hs, 0, 1);
    CHECK(t0.valid());
    CHECK(t0.heights2 == minimal_state(hs).heights2);
    auto t = mcmc_tile(hs, 500, 42);
    CHECK(t.valid());
    // crossings per column == k always
    for (long long m = 0; m <= 2 * hs.R; ++m) CHECK(t.column_crossings2(m).size() == 3);
    // determinism
    auto t2 = mcmc_tile(hs, 500, 42);
    CHECK(t.heights2 == t2.heights2);
}

TEST_CASE("mcmc visits the uniform law on a tiny instance") {
    const long long k = 2, R = 2, m = 2;
    auto pe = enumerate_half(k, R);
    auto law = column_law(pe, m);
    HexSpec hs{k, R};
    auto states = mcmc_chain(hs, 500, 20, 20000, 99);
    std::map<std::vector<long long>, double> freq;
    for (const auto& st : states) {
        auto key = st.column_crossings2(m);
        std::sort(key.begin(), key.end());
        freq[key] += 1.0;
    }
    for (auto& [kk, v] : freq) v /= static_cast<double>(states.size());
    for (const auto& [key, p] : law) {
        double got = freq.count(key) ? freq[key] : 0.0;
        CHECK(std::fabs(got - p) < 5.0 * std::sqrt(p * (1 - p) / 20000.0) + 0.005);
    }
}

TEST_CASE("svg rendering: tile counts, three fills, byte determinism") {
    HexSpec tiny{1, 1};
    CHECK(tile_count(tiny) == 2);
    auto t = mcmc_tile(tiny, 0, 0);
    auto svg = render_svg(t);
    std::size_t polys = 0, pos = 0;
    while ((pos = svg.find("<polygon", pos)) != std::string::npos) {
        ++polys;
        ++pos;
    }
    CHECK(polys == tile_count(tiny));

    HexSpec hs{2, 2};
    auto tt = mcmc_tile(hs, 0, 0);
    auto s1 = render_svg(tt);
    auto s2 = render_svg(tt);
    CHECK(s1 == s2);
    polys = 0;
    pos = 0;
    while ((pos = s1.find("<polygon", pos)) != std::string::npos) {
        ++polys;
        ++pos;
    }
    CHECK(polys == tile_count(hs));
    CHECK(s1.find("#4878cf") != std::string::npos);
    CHECK(s1.find("#6acc65") != std::string::npos);
    CHECK(s1.find("#d65f5f") != std::string::npos);
}

TEST_CASE("arctic profile: mass, prediction, gap-type flag") {
    HexSpec hs{8, 16};
    auto ap = arctic_profile(hs, 16, 4000, 5);
    double mass = 0.0;
    for (double f : ap.frequency) mass += f;
    CHECK(mass == doctest::Approx(8.0).epsilon(1e-12));  // k crossings per sample
    CHECK(ap.predicted_edge == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(!ap.saturated_adjacent);  // tau = 0 > tau0: void above the band
    CHECK(ap.tau == doctest::Approx(0.0));
    // left of tau0 the gap is saturated
    auto ap2 = arctic_profile(hs, 4, 500, 5);
    CHECK(ap2.saturated_adjacent);
    CHECK(ap2.count_half_crossing > 0.0);
    CHECK(ap2.top_samples.size() == 500);
}

}  // TEST_SUITE

TEST_SUITE("halfhex") {

TEST_CASE("burned-in tiling shows ordered corners and a disordered center") {
    // small instance so the default burn-in stays cheap
    HexSpec hs{12, 24};
    auto t = mcmc_tile(hs, 10ull * 12 * 24 * 24, 2718);
    REQUIRE(t.valid());
    double k = 12.0;
    // near the left corner the line is almost fully packed: crossings sit in
    // the lowest positions
    auto low = t.column_crossings2(4);
    long long max_low = *std::max_element(low.begin(), low.end());
    CHECK(static_cast<double>(max_low) / 2.0 <= k + 2.0 + 2.0);  // |L_4^+| = k + 2
    // at the center line nothing crosses well above the inscribed circle
    auto cc = t.column_crossings2(24);
    double y_ell = std::sqrt(3.0) * k;
    long long top = *std::max_element(cc.begin(), cc.end());
    CHECK(static_cast<double>(top) / 2.0 < 1.25 * y_ell);
    // and the band interior is genuinely mixed: some holes below the circle
    std::size_t holes_below = 0;
    for (long long h2 = 1; h2 <= static_cast<long long>(2.0 * 0.8 * y_ell); h2 += 2)
        if (std::find(cc.begin(), cc.end(), h2) == cc.end()) ++holes_below;
    CHECK(holes_below > 0);
}

}  // TEST_SUITE
