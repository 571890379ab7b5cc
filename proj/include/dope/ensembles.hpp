#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dope {

// Piecewise-polynomial node density rho0 on [a,b]. Suffices for every
// built-in node family (all are constant after rescaling).
struct DensityPiece {
    double lo = 0.0, hi = 0.0;
    std::vector<double> coef;  // value = sum_j coef[j] * x^j
};

struct NodeDensity {
    std::vector<DensityPiece> pieces;

    static NodeDensity constant(double a, double b, double value);
    bool empty() const { return pieces.empty(); }
    double value(double x) const;
    double integral_from_lo(double x) const;  // int_a^x rho0
};

// Sorted abscissas on [a,b]. Nodes are constructed once from exact rationals;
// membership tests compare the stored doubles bit-for-bit, never by tolerance.
struct NodeSet {
    std::vector<double> values;
    double a = 0.0, b = 0.0;
    NodeDensity density;  // optional
    bool symmetric = false;

    std::size_t size() const { return values.size(); }
    std::size_t index_of(double x) const;  // throws not_a_node_error
    bool contains(double x) const;
    std::size_t mirror_index(std::size_t i) const;  // requires symmetric
    // invariants: strict order, range, exact mirror symmetry, quantization rule
    void validate() const;
    // worst quantization residual against the density (0 when no density given)
    double quantization_residual() const;
};

enum class WeightFamily { Uniform, Hahn, AssociatedHahn, HalfHexLine, CustomTable };

// Log-space weight table plus the family it came from. Raw factorial weights
// overflow double well inside desk scale, so only logs are ever stored.
struct WeightSpec {
    WeightFamily family = WeightFamily::Uniform;
    long long N = 0, P = 0, Q = 0;  // Hahn / AssociatedHahn parameters
    long long k = 0, R = 0, m = 0;  // HalfHexLine parameters
    std::vector<double> logw;       // one entry per node
    bool even = false;

    double log_at(std::size_t i) const { return logw[i]; }
};

enum class EnsembleMode { Standard, WallSymmetric };

struct Ensemble {
    NodeSet nodes;
    WeightSpec weight;
    std::size_t k = 0;  // particles; on the positive half for WallSymmetric
    EnsembleMode mode = EnsembleMode::Standard;

    std::size_t n_nodes() const { return nodes.size(); }
    std::size_t half_count() const { return nodes.size() / 2; }
    // k/N for Standard, (2k)/(2N) for WallSymmetric
    double particle_fraction() const;
    std::vector<std::size_t> positive_indices() const;
    void validate() const;
};

// --- node families ---------------------------------------------------------

// x_n = -1/2 + (2n+1)/(2N) on [-1/2, 1/2], rho0 == 1.
NodeSet build_equispaced_nodes(long long n);

// Half-integer ordinates where lattice paths can cross the vertical line after
// m steps in a (2k,R,R)-hexagon; |L_m| = 2k + min(m, 2R-m). Even m only.
NodeSet build_halfhex_line_nodes(long long k, long long R, long long m);

// Arbitrary sorted values (used by tests and CSV import).
NodeSet build_custom_nodes(std::vector<double> values);

// --- weight families -------------------------------------------------------

WeightSpec make_uniform_weight(const NodeSet& nodes);
// Hahn: w(n) ~ (P-1+n)! (Q-1+N-1-n)! / (n! (N-1-n)!), indexed by node order.
WeightSpec make_hahn_weight(const NodeSet& nodes, long long P, long long Q);
// Associated Hahn: w(n) = 1 / (n! (P-1+n)! (N-1-n)! (Q-1+N-1-n)!).
WeightSpec make_associated_hahn_weight(const NodeSet& nodes, long long P, long long Q);
// Half-hexagon line weight, evaluated through log-Gamma.
WeightSpec make_halfhex_weight(const NodeSet& nodes, long long k, long long R, long long m);
WeightSpec make_custom_weight(const NodeSet& nodes, std::vector<double> logw);

Ensemble make_ensemble(NodeSet nodes, WeightSpec weight, std::size_t k, EnsembleMode mode);

// --- operations ------------------------------------------------------------

double log_weight(const Ensemble& e, double x);
double log_weight_at(const Ensemble& e, std::size_t node_index);

struct AheIdentification {
    long long N = 0, P = 0, Q = 0;
    double shift = 0.0;  // z = n - shift maps node order to the half-integer ordinate
};
AheIdentification hexline_to_ahe(long long k, long long R, long long m);

// V_N(x_n) = -(1/N) [ log w(x_n) + sum_{m != n} log |x_n - x_m| ]
std::vector<double> extract_potential(const Ensemble& e);

// --- CSV interchange -------------------------------------------------------

std::string weight_table_to_csv(const NodeSet& nodes, const WeightSpec& w);
// returns (values, logw)
std::pair<std::vector<double>, std::vector<double>> parse_weight_csv(const std::string& text);

}  // namespace dope
