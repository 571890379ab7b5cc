#include "dope/halfhex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dope/equilibrium.hpp"
#include "dope/errors.hpp"
#include "dope/orthopoly.hpp"
#include "dope/rng.hpp"

namespace dope {

bool TilingState::valid() const {
    if (heights2.size() != static_cast<std::size_t>(k)) return false;
    for (long long i = 0; i < k; ++i) {
        const auto& row = heights2[static_cast<std::size_t>(i)];
        if (row.size() != static_cast<std::size_t>(2 * R + 1)) return false;
        if (row.front() != 2 * i + 1 || row.back() != 2 * i + 1) return false;  // boundary
        for (std::size_t m = 0; m < row.size(); ++m) {
            if (row[m] <= 0) return false;  // wall
            if (m > 0 && std::llabs(row[m] - row[m - 1]) != 1) return false;  // step rule
        }
    }
    for (long long i = 0; i + 1 < k; ++i)  // non-intersection
        for (std::size_t m = 0; m < heights2[static_cast<std::size_t>(i)].size(); ++m)
            if (heights2[static_cast<std::size_t>(i)][m] >= heights2[static_cast<std::size_t>(i + 1)][m])
                return false;
    return true;
}

std::vector<long long> TilingState::column_crossings2(long long m) const {
    std::vector<long long> out;
    for (const auto& row : heights2) out.push_back(row[static_cast<std::size_t>(m)]);
    return out;
}

Ensemble line_ensemble(const HexSpec& h, long long m) {
    if (m < 2 || m > 2 * h.R - 2) throw validation_error("line_ensemble: m must be in [2, 2R-2]");
    if (m % 2 != 0) throw unsupported_variant_error("odd columns are not supported");
    auto nodes = build_halfhex_line_nodes(h.k, h.R, m);
    auto w = make_halfhex_weight(nodes, h.k, h.R, m);
    return make_ensemble(std::move(nodes), std::move(w), static_cast<std::size_t>(h.k),
                         EnsembleMode::WallSymmetric);
}

std::vector<ParticleConfiguration> sample_line(const HexSpec& h, long long m, std::size_t n_samples,
                                               std::uint64_t seed) {
    Ensemble e = line_ensemble(h, m);
    auto km = sym_kernel(e);
    return sample_batch(km, n_samples, seed);
}

TilingState minimal_state(const HexSpec& h) {
    TilingState t;
    t.k = h.k;
    t.R = h.R;
    t.heights2.assign(static_cast<std::size_t>(h.k), std::vector<long long>(2 * h.R + 1, 0));
    for (long long i = 0; i < h.k; ++i)
        for (long long m = 0; m <= 2 * h.R; ++m)
            t.heights2[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] =
                (m % 2 == 0) ? 2 * i + 1 : 2 * i + 2;
    return t;
}

namespace {

// one corner-flip proposal; accepted iff all invariants survive
inline void propose(TilingState& t, long long i, long long m) {
    auto& row = t.heights2[static_cast<std::size_t>(i)];
    long long left = row[static_cast<std::size_t>(m - 1)];
    long long right = row[static_cast<std::size_t>(m + 1)];
    if (left != right) return;  // straight segment, no corner
    long long cur = row[static_cast<std::size_t>(m)];
    long long alt = 2 * left - cur;  // the reflected corner
    if (alt <= 0) return;
    if (i + 1 < t.k && alt >= t.heights2[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(m)])
        return;
    if (i > 0 && alt <= t.heights2[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(m)])
        return;
    row[static_cast<std::size_t>(m)] = alt;
}

}  // namespace

TilingState mcmc_tile(const HexSpec& h, std::uint64_t sweeps, std::uint64_t seed) {
    TilingState t = minimal_state(h);
    CounterRng rng(seed);
    const std::uint64_t per_sweep = static_cast<std::uint64_t>(h.k) * (2 * h.R - 1);
    for (std::uint64_t s = 0; s < sweeps; ++s) {
        for (std::uint64_t p = 0; p < per_sweep; ++p) {
            std::uint64_t r = rng.next_u64();
            long long i = static_cast<long long>(r % static_cast<std::uint64_t>(h.k));
            long long m = 1 + static_cast<long long>((r / static_cast<std::uint64_t>(h.k)) %
                                                     static_cast<std::uint64_t>(2 * h.R - 1));
            propose(t, i, m);
        }
    }
    return t;
}

std::vector<TilingState> mcmc_chain(const HexSpec& h, std::uint64_t burnin, std::uint64_t thin,
                                    std::size_t count, std::uint64_t seed) {
    std::vector<TilingState> out;
    out.reserve(count);
    TilingState t = minimal_state(h);
    CounterRng rng(seed);
    const std::uint64_t per_sweep = static_cast<std::uint64_t>(h.k) * (2 * h.R - 1);
    auto run_sweeps = [&](std::uint64_t n) {
        for (std::uint64_t s = 0; s < n; ++s)
            for (std::uint64_t p = 0; p < per_sweep; ++p) {
                std::uint64_t r = rng.next_u64();
                long long i = static_cast<long long>(r % static_cast<std::uint64_t>(h.k));
                long long m = 1 + static_cast<long long>((r / static_cast<std::uint64_t>(h.k)) %
                                                         static_cast<std::uint64_t>(2 * h.R - 1));
                propose(t, i, m);
            }
    };
    run_sweeps(burnin);
    for (std::size_t c = 0; c < count; ++c) {
        run_sweeps(thin);
        out.push_back(t);
    }
    return out;
}

std::size_t tile_count(const HexSpec& h) {
    // k paths of 2R steps, plus vertical tiles on the interior columns
    std::size_t n = static_cast<std::size_t>(2 * h.k * h.R);
    for (long long m = 1; m < 2 * h.R; ++m) {
        long long span = std::min(m, 2 * h.R - m);
        n += static_cast<std::size_t>((span - (m % 2)) / 2);
    }
    return n;
}

std::string render_svg(const TilingState& t) {
    if (!t.valid()) throw validation_error("render_svg: invalid tiling state");
    const double s3h = std::sqrt(3.0) / 2.0;
    const double xmin = -s3h * static_cast<double>(t.R), xmax = s3h * static_cast<double>(t.R);
    const double ymax = static_cast<double>(t.k) + static_cast<double>(t.R) / 2.0;
    const double scale = 40.0;
    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.4f %.4f %.4f %.4f\">\n",
                  scale * (xmin - 0.6), -scale * (ymax + 0.6), scale * (xmax - xmin + 1.2),
                  scale * (ymax + 0.6));
    svg += buf;
    auto poly = [&](const double* xs, const double* ys, const char* fill) {
        std::string p = "<polygon points=\"";
        for (int i = 0; i < 4; ++i) {
            std::snprintf(buf, sizeof buf, "%s%.4f,%.4f", i ? " " : "", scale * xs[i], -scale * ys[i]);
            p += buf;
        }
        p += "\" fill=\"";
        p += fill;
        p += "\" stroke=\"#333\" stroke-width=\"0.6\"/>\n";
        svg += p;
    };
    const char* kUpFill = "#4878cf";
    const char* kDownFill = "#6acc65";
    const char* kVerticalFill = "#d65f5f";

    // path tiles: one rhombus per step
    for (long long i = 0; i < t.k; ++i) {
        for (long long m = 0; m < 2 * t.R; ++m) {
            double x0 = xmin + s3h * static_cast<double>(m);
            double x1 = x0 + s3h;
            double y0 = static_cast<double>(t.heights2[i][static_cast<std::size_t>(m)]) / 2.0;
            double y1 = static_cast<double>(t.heights2[i][static_cast<std::size_t>(m + 1)]) / 2.0;
            double xs[4] = {x0, x0, x1, x1};
            double ys[4] = {y0 - 0.5, y0 + 0.5, y1 + 0.5, y1 - 0.5};
            poly(xs, ys, y1 > y0 ? kUpFill : kDownFill);
        }
    }
    // vertical tiles at uncrossed lattice points
    for (long long m = 1; m < 2 * t.R; ++m) {
        long long span = std::min(m, 2 * t.R - m);
        double x = xmin + s3h * static_cast<double>(m);
        std::vector<long long> crossed = t.column_crossings2(m);
        // positive ordinates of the column: parity matches m
        for (long long h2 = (m % 2 == 0) ? 1 : 2; h2 <= 2 * t.k + span; h2 += 2) {
            if (std::find(crossed.begin(), crossed.end(), h2) != crossed.end()) continue;
            double y = static_cast<double>(h2) / 2.0;
            double xs[4] = {x - s3h, x, x + s3h, x};
            double ys[4] = {y, y + 0.5, y, y - 0.5};
            poly(xs, ys, kVerticalFill);
        }
    }
    svg += "</svg>\n";
    return svg;
}

ArcticProfile arctic_profile(const HexSpec& h, long long m, std::size_t n_samples, std::uint64_t seed) {
    Ensemble e = line_ensemble(h, m);
    auto km = sym_kernel(e);
    auto samples = sample_batch(km, n_samples, seed);

    ArcticProfile ap;
    ap.m = m;
    const double kd = static_cast<double>(h.k);
    ap.tau = (static_cast<double>(m) - static_cast<double>(h.R)) * std::sqrt(3.0) / (2.0 * kd);
    auto cf = hahn_closed_forms(0.0, 0.5, h.lambda(), ap.tau);
    ap.predicted_edge = cf.ellipse_y;
    // gap type from the Hahn classification of the dual ensemble
    double c = cf.c_of_tau;
    double cA = std::sqrt(cf.A_of_tau * cf.A_of_tau + cf.A_of_tau) - cf.A_of_tau;
    ap.saturated_adjacent = (1.0 - c) < cA;

    const std::size_t np = km.size();
    ap.ordinate.resize(np);
    ap.frequency.assign(np, 0.0);
    for (std::size_t i = 0; i < np; ++i) ap.ordinate[i] = km.node_values[i] / kd;
    ap.top_samples.reserve(n_samples);
    ap.bottom_samples.reserve(n_samples);
    for (const auto& s : samples) {
        for (auto idx : s.indices) ap.frequency[idx] += 1.0;
        ap.top_samples.push_back(km.node_values[s.indices.back()] / kd);
        ap.bottom_samples.push_back(km.node_values[s.indices.front()]);
    }
    for (double& f : ap.frequency) f /= static_cast<double>(n_samples);

    // level-1/2 crossing of the profile itself (outermost downward crossing)
    ap.profile_half_crossing = 0.0;
    for (std::size_t i = 0; i + 1 < np; ++i) {
        if (ap.frequency[i] >= 0.5 && ap.frequency[i + 1] < 0.5) {
            double tfrac = (0.5 - ap.frequency[i]) / (ap.frequency[i + 1] - ap.frequency[i]);
            ap.profile_half_crossing = ap.ordinate[i] + tfrac * (ap.ordinate[i + 1] - ap.ordinate[i]);
        }
    }
    // band-edge estimate: expected number of crossings above y drops through 1/2
    ap.count_half_crossing = 0.0;
    double tail = 0.0;
    for (std::size_t i = np; i-- > 0;) {
        double newtail = tail + ap.frequency[i];
        if (tail < 0.5 && newtail >= 0.5) {
            double tfrac = (0.5 - tail) / (newtail - tail);
            ap.count_half_crossing = ap.ordinate[i] + (1.0 - tfrac) / kd;
        }
        tail = newtail;
    }
    // median of the top crossing
    std::vector<double> tops = ap.top_samples;
    std::sort(tops.begin(), tops.end());
    ap.top_median = tops[tops.size() / 2];
    return ap;
}

}  // namespace dope
