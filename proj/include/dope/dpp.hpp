#pragma once

#include <cstdint>
#include <vector>

#include "dope/ensembles.hpp"
#include "dope/orthopoly.hpp"

namespace dope {

struct ParticleConfiguration {
    std::vector<std::size_t> indices;  // strictly increasing, into the kernel's nodes
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// det(K(x_i,x_j)) over the given kernel-node indices; the m-point correlation.
double correlation_fn(const KernelMatrix& km, const std::vector<std::size_t>& sites);
// Site values instead of indices (exact node lookup).
double correlation_fn_values(const KernelMatrix& km, const std::vector<double>& sites);

// Exact projection-DPP sample by sequential conditioning (Cholesky-style
// residual updates), O(N k^2). Deterministic in (seed, stream): draw t uses
// one uniform u_t, and the chosen column is the first index whose cumulative
// residual diagonal exceeds u_t * (remaining trace).
ParticleConfiguration sample_dpp(const KernelMatrix& km, std::uint64_t seed, std::uint64_t stream = 0);

// count samples with stream = 0..count-1; validates the kernel once.
std::vector<ParticleConfiguration> sample_batch(const KernelMatrix& km, std::size_t count,
                                                std::uint64_t seed);

// Exhaustive reference distribution from the defining product formulas,
// accumulated in 256-bit floats. Standard mode enumerates k-subsets of all
// nodes; WallSymmetric enumerates k-subsets of the positive half with the
// x^2 w(x) / (x^2 - y^2)^2 law.
struct Enumeration {
    std::vector<std::vector<std::uint32_t>> configs;
    std::vector<double> probs;  // normalized
    double log_z = 0.0;         // true-measure normalization constant, log
    std::vector<double> node_values;

    double marginal(const std::vector<std::size_t>& sites) const;
    std::vector<double> one_point() const;
    std::vector<double> count_dist(const std::vector<std::size_t>& window) const;
    double prob_of_config(const std::vector<std::size_t>& config) const;
};
Enumeration enumerate_oracle(const Ensemble& e, std::size_t max_configs = 1000000);

struct CountDistribution {
    std::vector<std::size_t> window;
    std::vector<double> probs;  // P(exactly m particles in window), m = 0..
};
// A_m from the eigenvalues of K restricted to the window, through the
// generating polynomial prod((1-lambda) + lambda t).
CountDistribution count_distribution(const KernelMatrix& km, const std::vector<std::size_t>& window);

enum class Side { Rightmost, Leftmost };
enum class Species { Particle, Hole };
// Rightmost: P(x_max <= t). Leftmost: P(x_min >= t). Holes use I - K.
double extremal_cdf(const KernelMatrix& km, double t, Side side, Species species);

}  // namespace dope
