#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dope/dpp.hpp"
#include "dope/ensembles.hpp"

namespace dope {

// (k, R)-half-hexagon: k non-intersecting lattice paths from heights
// {1/2,...,k-1/2} at column 0 to the same heights at column 2R, steps +-1/2,
// staying strictly above the axis.
struct HexSpec {
    long long k = 1;
    long long R = 1;
    double lambda() const { return static_cast<double>(R) / static_cast<double>(k); }
};

// Path ordinates stored as doubled integers: heights2[i][m] = 2 * ordinate of
// path i at column m, so every invariant check is exact integer arithmetic.
struct TilingState {
    long long k = 0, R = 0;
    std::vector<std::vector<long long>> heights2;  // [path][column 0..2R]

    bool valid() const;
    // ordinates (doubled) of path crossings at a column
    std::vector<long long> column_crossings2(long long m) const;
};

// Wall-symmetric ensemble describing the path crossings of the vertical line
// after m steps (m even).
Ensemble line_ensemble(const HexSpec& h, long long m);

std::vector<ParticleConfiguration> sample_line(const HexSpec& h, long long m, std::size_t n_samples,
                                               std::uint64_t seed);

// Minimal (fully packed) starting state.
TilingState minimal_state(const HexSpec& h);

// Glauber single-lozenge flips, uniform stationary law. A sweep proposes
// k*(2R-1) corner flips. Deterministic per seed.
TilingState mcmc_tile(const HexSpec& h, std::uint64_t sweeps, std::uint64_t seed);

// Run a chain and collect thinned states (burn-in sweeps, then one state
// every thin sweeps).
std::vector<TilingState> mcmc_chain(const HexSpec& h, std::uint64_t burnin, std::uint64_t thin,
                                    std::size_t count, std::uint64_t seed);

// Three lozenge classes in three fills; byte-identical for identical state.
std::string render_svg(const TilingState& t);
std::size_t tile_count(const HexSpec& h);

struct ArcticProfile {
    long long m = 0;
    double tau = 0.0;             // (m - R) sqrt(3) / (2k)
    std::vector<double> ordinate;   // node ordinate / k (positive half)
    std::vector<double> frequency;  // empirical one-point profile
    double profile_half_crossing = 0.0;  // where the one-point profile passes 1/2
    double count_half_crossing = 0.0;    // where E[# crossings above y] passes 1/2
    double top_median = 0.0;             // median of the highest crossing
    double predicted_edge = 0.0;         // inscribed-ellipse ordinate at tau
    bool saturated_adjacent = false;     // gap type above the band
    std::vector<double> top_samples;     // highest crossing per sample, /k
    std::vector<double> bottom_samples;  // lowest crossing per sample (lattice units)
};
ArcticProfile arctic_profile(const HexSpec& h, long long m, std::size_t n_samples, std::uint64_t seed);

}  // namespace dope
