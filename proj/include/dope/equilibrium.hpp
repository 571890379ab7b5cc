#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dope/ensembles.hpp"

namespace dope {

// External field phi(x) = V(x) + int_a^b log|x-y| dy on [a,b]; the integral
// has the closed form (b-x)log(b-x) + (x-a)log(x-a) - (b-a).
struct Field {
    double a = 0.0, b = 0.0;
    std::function<double(double)> phi;
};

Field build_field(std::function<double(double)> potential, double a, double b);
// Table-valued potential (e.g. from extract_potential), cubic interpolation.
Field build_field_from_table(std::vector<double> xs, std::vector<double> vs, double a, double b);

enum class RegionKind { Band, Void, Saturated };

struct Region {
    double lo = 0.0, hi = 0.0;
    RegionKind kind = RegionKind::Band;
};

struct EquilibriumMeasure {
    double a = 0.0, b = 0.0, h = 0.0;
    double c = 0.0;
    std::vector<double> grid;      // cell midpoints
    std::vector<double> density;   // d(x) >= 0, h * sum = 1
    std::vector<double> upper;     // rho0(x)/c per cell
    std::vector<double> varderiv;  // dE/dmu - l_c per cell
    double multiplier = 0.0;       // l_c
    std::vector<Region> regions;
    // solver diagnostics
    double residual = 0.0;
    std::size_t iterations = 0;
    double objective = 0.0;
    std::vector<double> objective_trace;  // filled when SolveOptions::record_trace

    double density_at(double x) const;     // linear interpolation
    double upper_at(double x) const;
    const Region* region_containing(double x) const;
    // right endpoint of the band that contains x (throws if x not in a band)
    double band_right_edge(double x) const;
};

struct SolveOptions {
    double tol = 1e-8;           // projected-gradient max-norm
    std::size_t max_iters = 100000;
    double classify_eps = 1e-3;  // relative band/gap threshold
    bool throw_on_nonconvergence = true;
    bool record_trace = false;
};

// Minimize c * int int log(1/|x-y|) dmu dmu + int phi dmu over densities with
// 0 <= d <= rho0/c and unit mass, by projected gradient with Barzilai-Borwein
// steps and halving safeguard. The log kernel is integrated exactly over
// every cell pair, which tames the diagonal singularity.
EquilibriumMeasure solve_equilibrium(const Field& field, const NodeDensity& rho0, double c,
                                     std::size_t gridsize, const SolveOptions& opt = {});

// delta E/delta mu - l_c recomputed from a measure (classification input).
std::vector<double> variational_derivative(const EquilibriumMeasure& em, const Field& field, double c);

// Cell labels -> merged regions; regions shorter than 3 cells are absorbed.
std::vector<Region> classify(const std::vector<double>& density, const std::vector<double>& upper,
                             double a, double h, double eps = 1e-3);

// KKT sign-pattern report: worst violation per region kind, scaled by the
// field range.
struct KktReport {
    double band_dev = 0.0;       // max |varderiv| on bands
    double void_min = 0.0;       // min varderiv on voids (should be >= -tol)
    double saturated_max = 0.0;  // max varderiv on saturated regions (<= tol)
    double scale = 1.0;          // max phi - min phi
    bool pass(double tol_factor = 1e-3) const;
};
KktReport kkt_report(const EquilibriumMeasure& em, const Field& field);

// Square-root edge fit: density ~ amplitude * sqrt(|edge - x|) approaching a
// band edge from inside (the saturated side fits rho0/c - density instead).
// The squared density is fitted linearly in x over the cells next to the
// edge; its root refines the edge location and its slope gives the
// amplitude. The exponent comes from a log-log fit against the refined edge.
struct EdgeFit {
    double exponent = 0.0;
    double amplitude = 0.0;   // with exponent fixed at 1/2
    double edge_refined = 0.0;
};
EdgeFit fit_band_edge(const EquilibriumMeasure& em, double edge, bool right_edge,
                      bool saturated_side = false);

// Closed forms for the Hahn family w(.; AN+1, AN+1) and the hexagon map.
struct HahnClosedForms {
    double beta = 0.0;       // right band end point
    double c_A = 0.0;        // critical particle fraction sqrt(A^2+A) - A
    double ellipse_y = 0.0;  // inscribed-ellipse ordinate at (lambda, tau)
    double tau0 = 0.0;       // gap-type threshold column
    double c_of_tau = 0.0;   // 2 / (2 + lambda + 2 tau/sqrt(3))
    double A_of_tau = 0.0;   // (-tau/sqrt(3)) * c
};
HahnClosedForms hahn_closed_forms(double A, double c, double lambda, double tau);
// Right band edge of the Hahn equilibrium measure,
// sqrt(c(1-c)(2A+c)(2A+c+1)) / (2(A+c)).
double hahn_band_edge(double A, double c);

std::string region_kind_name(RegionKind k);

}  // namespace dope
