#pragma once

#include <cstddef>
#include <vector>

#include "dope/ensembles.hpp"
#include "dope/linalg.hpp"

namespace dope {

// Three-term recurrence of the orthonormal polynomials of a discrete measure,
// built by the Stieltjes procedure (iterated discrete inner products). The
// construction works on weights rescaled by exp(-log_scale); beta[0] carries
// the rescaled total mass, beta[n>0] are scale-free norm ratios.
//
// phi[n][i] caches the orthonormal functions phi_n(x_i) = sqrt(w_i) p_n(x_i)
// of the rescaled measure at every node; these are identical to the ones of
// the true measure, so kernels never see the scale.
struct RecurrenceTable {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> log_gamma;  // leading coefficients, true measure, log
    double log_scale = 0.0;
    int degree_max = 0;
    int precision_bits = 53;
    std::vector<std::vector<double>> phi;

    double gamma_ratio(int n) const;  // gamma_{n-1}/gamma_n = sqrt(beta[n])
};

// max_degree < number of nodes. Builds at 53 bits; if any beta turns
// non-positive or the orthonormality residual exceeds 1e-10, rebuilds the
// whole table at 256-bit scaled arithmetic. Failure there raises
// precision_escalation_error naming the degree.
RecurrenceTable compute_recurrence(const Ensemble& e, int max_degree);

// Orthonormality residual max_{m,n<=deg} |sum_x phi_m phi_n - delta_mn|.
double orthonormality_residual(const RecurrenceTable& rt, int deg);

// phi_n at a node, by forward recurrence from the table coefficients.
double orthonormal_eval(const RecurrenceTable& rt, const Ensemble& e, int n, double x);
double orthonormal_eval_at(const RecurrenceTable& rt, int n, std::size_t node_index);

enum class KernelKind { Standard, WallSymmetric, Hole };

struct KernelMatrix {
    Matrix entries;
    std::vector<double> node_values;   // nodes the matrix lives on
    KernelKind kind = KernelKind::Standard;
    std::size_t rank = 0;              // k (particles); N-k for Hole
    int precision_bits = 53;

    std::size_t size() const { return node_values.size(); }
    double at(std::size_t i, std::size_t j) const { return entries(i, j); }
    std::size_t index_of(double x) const;
    // ||K*K - K||_max
    double projection_residual() const;
    double trace_value() const { return trace(entries); }
};

// Christoffel-Darboux projection kernel K(x,y) = sum_{n<k} phi_n(x) phi_n(y).
// With self_check set (needs k < N), the quotient form is built as well and a
// disagreement beyond 1e-8 raises a numeric_error.
KernelMatrix cd_kernel(const Ensemble& e, std::size_t k, bool self_check = false);

// Same entries through the quotient form (and the derivative form on the
// diagonal); used as a self-check against the sum form. Needs k < N.
KernelMatrix cd_kernel_quotient(const Ensemble& e, std::size_t k);

// Wall kernel on the positive nodes via K_{2N,2k}(x,y) - K_{2N,2k}(x,-y).
KernelMatrix sym_kernel(const Ensemble& e);

// Same object built from polynomials in the squared variable on the positive
// half (weight x^2 w(x)); agreement with sym_kernel is a library invariant.
KernelMatrix sym_kernel_via_squares(const Ensemble& e);

// I - K on the same nodes.
KernelMatrix hole_kernel(const KernelMatrix& km);

// Odd/even split of the polynomials of an even measure: pi_{2j+1}(x) = x q_j(x^2).
struct OddSplit {
    std::vector<std::vector<double>> q_values;  // q_j at the positive nodes' squares
    std::vector<double> log_norms;              // log of 1/(2 gamma_{2j+1}^2), true measure
    double parity_residual = 0.0;
};
OddSplit split_odd(const RecurrenceTable& rt, const Ensemble& e);

}  // namespace dope
