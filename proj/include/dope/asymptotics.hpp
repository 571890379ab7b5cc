#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dope/ensembles.hpp"

namespace dope {

// --- limit kernels ----------------------------------------------------------

// sin(pi d)/(pi d) with the removable singularity handled by series.
double sinc_pi(double d);
// Sine kernel S(xi, eta) and its wall counterpart S0(xi, eta).
double sine_kernel(double xi, double eta);
double sine_wall_kernel(double xi, double eta);

// Airy function and derivative: Maclaurin series in the middle, asymptotic
// expansions outside. Absolute error below 1e-10 on [-15, 15].
struct AiryValue {
    double ai = 0.0;
    double aip = 0.0;
};
AiryValue airy_eval(double x);

// Airy kernel with the confluent diagonal limit.
double airy_kernel(double xi, double eta);

// --- Fredholm determinants --------------------------------------------------

// det(I - A|_{[s, infinity)}) by Gauss-Legendre Nystrom discretization with
// square-root-symmetrized weights. Truncation point chosen from the kernel's
// diagonal tail. accuracy_warning is set when the requested order cannot
// resolve the oscillatory part.
struct TracyWidomResult {
    double value = 0.0;
    int order = 0;
    double truncation = 0.0;  // interval length actually used
    bool accuracy_warning = false;
};
TracyWidomResult tracy_widom_cdf(double s, int quad_order);

// Discrete wall kernel on node indices. The two variants differ in where the
// lattice sits relative to the wall:
//   OddLattice:  positions j*h, j = 0,1,2,... (0 is a dead node); the mirror
//                of node j is at index distance i+j.
//   EvenLattice: positions (j+1/2)*h; the mirror sits at distance i+j+1.
// Finite wall ensembles with an even node count follow EvenLattice.
enum class WallVariant { OddLattice, EvenLattice };

// Entry of the discrete wall operator; theta = 1/(delta0 * rho0) is the bulk
// occupancy at the wall. Diagonal entries take the removable-singularity
// limit; in particular the 0,0 entry of OddLattice is exactly 0.
double wall_operator_entry(double theta, std::size_t i, std::size_t j, WallVariant variant);

// P(x_min >= s / (rho0 * n_nodes)) = det(I - S0|B(s)) with
// B(s) = {0, ..., floor(s - 1/2)}.
double wall_cdf(double s, double delta0, double rho0, WallVariant variant = WallVariant::OddLattice);

// --- convergence harness ----------------------------------------------------

enum class Regime { Band, Wall, GapVoid, GapSaturated, Edge, CrossTerm };

// Equilibrium-derived quantities the regimes need; NaN marks "not provided".
struct RegimeInputs {
    double c = 0.0;
    double x0 = 0.0;          // band reference point (Band regime)
    double delta_x0 = NAN;    // 1/(c dmu(x0))
    double delta0 = NAN;      // 1/(c dmu(0))
    double beta = NAN;        // right band edge
    double B_beta = NAN;      // sqrt amplitude at beta
    double gap_lo = NAN;      // closed gap subinterval for the gap regimes
    double gap_hi = NAN;
    double window = 3.0;      // |xi| range for kernel windows
};

struct ConvergenceReport {
    std::string family;
    std::string regime;
    std::vector<int> n_values;       // positive-half node counts
    std::vector<double> sup_errors;
    double slope = 0.0;              // log-log fit
    bool pass = false;
    std::string detail;
};

// family(n) must build a WallSymmetric ensemble whose positive half has n
// nodes, with nodes on [-1/2, 1/2] and rho0 == 1 (the frame the equilibrium
// inputs are measured in). Rescalings use the full node count; regimes
// without a meaningful slope (gap regimes) report values only.
ConvergenceReport convergence_suite(const std::function<Ensemble(int)>& family,
                                    const std::string& family_name, Regime regime,
                                    const std::vector<int>& n_list, const RegimeInputs& inputs);

std::string regime_name(Regime r);

}  // namespace dope
