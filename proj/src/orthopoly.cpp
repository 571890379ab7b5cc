#include "dope/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dope/bigfloat.hpp"
#include "dope/errors.hpp"

namespace dope {

namespace {

// exp(lw - scale) split so the escalated path survives ranges far beyond
// double's exponent window: exp(x) = exp(f) * 2^n with f = x - n*log(2).
BigFloat exp_scaled_big(double x) {
    const double ln2 = 0.6931471805599453094;
    double n = std::floor(x / ln2);
    double f = x - n * ln2;
    return BigFloat(std::exp(f)).ldexp2(static_cast<long long>(n));
}

struct StieltjesResult {
    std::vector<double> alpha, beta;
    std::vector<std::vector<double>> phi;
    int failed_degree = -1;  // first degree with non-positive norm, or -1
};

StieltjesResult stieltjes_double(const std::vector<double>& x, const std::vector<double>& logw_scaled,
                                 int max_degree) {
    const std::size_t n = x.size();
    StieltjesResult r;
    // sqrt(w) straight from exp(lw/2): w itself may underflow double where
    // sqrt(w) still does not, and phi only ever needs the root
    std::vector<double> rootw(n);
    for (std::size_t i = 0; i < n; ++i) rootw[i] = std::exp(0.5 * logw_scaled[i]);

    double mass = 0.0;
    for (double v : rootw) mass += v * v;
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        r.failed_degree = 0;
        return r;
    }
    r.alpha.assign(max_degree + 1, 0.0);
    r.beta.assign(max_degree + 1, 0.0);
    r.beta[0] = mass;
    r.phi.assign(max_degree + 1, std::vector<double>(n, 0.0));

    double inv = 1.0 / std::sqrt(mass);
    for (std::size_t i = 0; i < n; ++i) r.phi[0][i] = rootw[i] * inv;

    std::vector<double> u(n);
    double b_prev = 0.0;
    for (int d = 0; d <= max_degree; ++d) {
        double a = 0.0;
        for (std::size_t i = 0; i < n; ++i) a += x[i] * r.phi[d][i] * r.phi[d][i];
        r.alpha[d] = a;
        if (d == max_degree) break;
        for (std::size_t i = 0; i < n; ++i) {
            double v = (x[i] - a) * r.phi[d][i];
            if (d > 0) v -= b_prev * r.phi[d - 1][i];
            u[i] = v;
        }
        double nrm2 = 0.0;
        for (double v : u) nrm2 += v * v;
        if (!(nrm2 > 0.0) || !std::isfinite(nrm2)) {
            r.failed_degree = d + 1;
            return r;
        }
        double b = std::sqrt(nrm2);
        r.beta[d + 1] = nrm2;
        for (std::size_t i = 0; i < n; ++i) r.phi[d + 1][i] = u[i] / b;
        b_prev = b;
    }
    return r;
}

StieltjesResult stieltjes_big(const std::vector<double>& x, const std::vector<double>& logw_scaled,
                              int max_degree) {
    const std::size_t n = x.size();
    StieltjesResult r;
    std::vector<BigFloat> w(n), xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = exp_scaled_big(logw_scaled[i]);
        xs[i] = BigFloat(x[i]);
    }
    BigFloat mass;
    for (const auto& v : w) mass += v;
    if (!(mass.sign() > 0)) {
        r.failed_degree = 0;
        return r;
    }
    r.alpha.assign(max_degree + 1, 0.0);
    r.beta.assign(max_degree + 1, 0.0);
    r.beta[0] = mass.to_double();
    r.phi.assign(max_degree + 1, std::vector<double>(n, 0.0));

    std::vector<BigFloat> cur(n), prev(n), u(n);
    BigFloat root = mass.sqrt();
    for (std::size_t i = 0; i < n; ++i) cur[i] = w[i].sqrt() / root;

    BigFloat b_prev;
    for (int d = 0; d <= max_degree; ++d) {
        BigFloat a;
        for (std::size_t i = 0; i < n; ++i) a += xs[i] * cur[i] * cur[i];
        r.alpha[d] = a.to_double();
        for (std::size_t i = 0; i < n; ++i) r.phi[d][i] = cur[i].to_double();
        if (d == max_degree) break;
        for (std::size_t i = 0; i < n; ++i) {
            BigFloat v = (xs[i] - a) * cur[i];
            if (d > 0) v -= b_prev * prev[i];
            u[i] = v;
        }
        BigFloat nrm2;
        for (const auto& v : u) nrm2 += v * v;
        if (!(nrm2.sign() > 0)) {
            r.failed_degree = d + 1;
            return r;
        }
        BigFloat b = nrm2.sqrt();
        r.beta[d + 1] = nrm2.to_double();
        for (std::size_t i = 0; i < n; ++i) {
            prev[i] = cur[i];
            cur[i] = u[i] / b;
        }
        b_prev = b;
    }
    return r;
}

void fill_table(RecurrenceTable& rt, StieltjesResult&& sr, double log_scale, int bits, int max_degree) {
    rt.alpha = std::move(sr.alpha);
    rt.beta = std::move(sr.beta);
    rt.phi = std::move(sr.phi);
    rt.log_scale = log_scale;
    rt.degree_max = max_degree;
    rt.precision_bits = bits;
    rt.log_gamma.assign(max_degree + 1, 0.0);
    double acc = 0.0;
    for (int d = 0; d <= max_degree; ++d) {
        acc += std::log(rt.beta[d] > 0 ? rt.beta[d] : 1.0);
        // gamma_hat = (beta0...betad)^(-1/2); true gamma = gamma_hat * e^{scale/2}
        rt.log_gamma[d] = -0.5 * acc - 0.5 * log_scale;
    }
}

}  // namespace

double RecurrenceTable::gamma_ratio(int n) const {
    return std::sqrt(beta.at(static_cast<std::size_t>(n)));
}

double orthonormality_residual(const RecurrenceTable& rt, int deg) {
    double worst = 0.0;
    const std::size_t n = rt.phi.empty() ? 0 : rt.phi[0].size();
    for (int a = 0; a <= deg; ++a) {
        for (int b = a; b <= deg; ++b) {
            double s = 0.0;
            const double* pa = rt.phi[static_cast<std::size_t>(a)].data();
            const double* pb = rt.phi[static_cast<std::size_t>(b)].data();
            for (std::size_t i = 0; i < n; ++i) s += pa[i] * pb[i];
            worst = std::max(worst, std::fabs(s - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

RecurrenceTable compute_recurrence(const Ensemble& e, int max_degree) {
    e.validate();
    const std::size_t n = e.nodes.size();
    if (max_degree < 0 || static_cast<std::size_t>(max_degree) >= n)
        throw validation_error("compute_recurrence: degree must satisfy 0 <= degree < N");

    double scale = *std::max_element(e.weight.logw.begin(), e.weight.logw.end());
    std::vector<double> lw(n);
    for (std::size_t i = 0; i < n; ++i) lw[i] = e.weight.logw[i] - scale;

    RecurrenceTable rt;
    auto sr = stieltjes_double(e.nodes.values, lw, max_degree);
    if (sr.failed_degree < 0) {
        fill_table(rt, std::move(sr), scale, 53, max_degree);
        if (orthonormality_residual(rt, max_degree) <= 1e-10) return rt;
    }
    // deterministic fallback: redo the whole construction in 256-bit arithmetic
    auto sb = stieltjes_big(e.nodes.values, lw, max_degree);
    if (sb.failed_degree >= 0)
        throw precision_escalation_error(
            "recurrence breakdown (non-positive norm) at degree " + std::to_string(sb.failed_degree) +
                " even at 256-bit precision",
            sb.failed_degree);
    RecurrenceTable rb;
    fill_table(rb, std::move(sb), scale, 256, max_degree);
    double res = orthonormality_residual(rb, max_degree);
    if (res > 1e-10)
        throw precision_escalation_error(
            "orthonormality residual " + std::to_string(res) + " above 1e-10 at 256-bit precision " +
                "(degree " + std::to_string(max_degree) + ")",
            max_degree);
    return rb;
}

double orthonormal_eval_at(const RecurrenceTable& rt, int n, std::size_t node_index) {
    if (n < 0 || n > rt.degree_max) throw validation_error("degree out of table range");
    return rt.phi[static_cast<std::size_t>(n)][node_index];
}

double orthonormal_eval(const RecurrenceTable& rt, const Ensemble& e, int n, double x) {
    if (n < 0 || n > rt.degree_max) throw validation_error("degree out of table range");
    std::size_t idx = e.nodes.index_of(x);
    if (rt.precision_bits > 53) return rt.phi[static_cast<std::size_t>(n)][idx];
    // forward recurrence on phi directly; the weight is absorbed in phi_0 and
    // per-step exponent rescaling guards the start in deep-void nodes
    double lw = e.weight.logw[idx] - rt.log_scale;
    int e2 = 0;
    double mant = 0.5 * lw / 0.6931471805599453094;
    double flo = std::floor(mant);
    e2 = static_cast<int>(flo);
    double frac = mant - flo;
    double p0 = std::exp2(frac) / std::sqrt(rt.beta[0]);  // phi_0 * 2^{-e2}
    if (n == 0) return std::ldexp(p0, e2);
    double pm1 = 0.0, cur = p0;
    for (int d = 0; d < n; ++d) {
        double b_next = std::sqrt(rt.beta[static_cast<std::size_t>(d + 1)]);
        double b_cur = d > 0 ? std::sqrt(rt.beta[static_cast<std::size_t>(d)]) : 0.0;
        double nxt = ((x - rt.alpha[static_cast<std::size_t>(d)]) * cur - b_cur * pm1) / b_next;
        if (!std::isfinite(nxt))
            throw precision_escalation_error("orthonormal_eval overflow at degree " + std::to_string(d + 1),
                                             d + 1);
        pm1 = cur;
        cur = nxt;
        double m = std::max(std::fabs(cur), std::fabs(pm1));
        if (m > 1e150 || (m > 0.0 && m < 1e-150)) {
            int adj;
            std::frexp(m, &adj);
            cur = std::ldexp(cur, -adj);
            pm1 = std::ldexp(pm1, -adj);
            e2 += adj;
        }
    }
    return std::ldexp(cur, e2);
}

std::size_t KernelMatrix::index_of(double x) const {
    auto it = std::lower_bound(node_values.begin(), node_values.end(), x);
    if (it == node_values.end() || *it != x) throw not_a_node_error("value is not a kernel node");
    return static_cast<std::size_t>(it - node_values.begin());
}

double KernelMatrix::projection_residual() const {
    Matrix sq = matmul(entries, entries);
    return max_abs_diff(sq, entries);
}

namespace {

KernelMatrix assemble_sum_kernel(const std::vector<double>& nodes, const RecurrenceTable& rt,
                                 std::size_t k, KernelKind kind) {
    const std::size_t n = nodes.size();
    KernelMatrix km;
    km.node_values = nodes;
    km.kind = kind;
    km.rank = k;
    km.precision_bits = rt.precision_bits;
    km.entries = Matrix(n);
    for (std::size_t d = 0; d < k; ++d) {
        const double* p = rt.phi[d].data();
        for (std::size_t i = 0; i < n; ++i) {
            double pi = p[i];
            if (pi == 0.0) continue;
            for (std::size_t j = i; j < n; ++j) km.entries(i, j) += pi * p[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) km.entries(j, i) = km.entries(i, j);
    return km;
}

}  // namespace

KernelMatrix cd_kernel(const Ensemble& e, std::size_t k, bool self_check) {
    if (e.mode != EnsembleMode::Standard) throw validation_error("cd_kernel expects a Standard ensemble");
    if (k < 1 || k > e.nodes.size()) throw validation_error("cd_kernel: k out of range [1, N]");
    RecurrenceTable rt = compute_recurrence(e, static_cast<int>(k) - 1);
    KernelMatrix km = assemble_sum_kernel(e.nodes.values, rt, k, KernelKind::Standard);
    if (self_check) {
        if (k >= e.nodes.size())
            throw validation_error("cd_kernel self-check needs k < N (uses degree k)");
        KernelMatrix kq = cd_kernel_quotient(e, k);
        double diff = max_abs_diff(km.entries, kq.entries);
        if (diff > 1e-8)
            throw numeric_error("CD sum and quotient forms disagree by " + std::to_string(diff));
    }
    return km;
}

KernelMatrix cd_kernel_quotient(const Ensemble& e, std::size_t k) {
    if (k < 1 || k >= e.nodes.size())
        throw validation_error("cd_kernel_quotient needs 1 <= k < N (uses degree k)");
    RecurrenceTable rt = compute_recurrence(e, static_cast<int>(k));
    const std::size_t n = e.nodes.size();
    const auto& x = e.nodes.values;
    const auto& pk = rt.phi[k];
    const auto& pk1 = rt.phi[k - 1];
    double bk = rt.gamma_ratio(static_cast<int>(k));

    // psi_n = sqrt(w) p_n' obeys b_{n+1} psi_{n+1} = phi_n + (x - a_n) psi_n - b_n psi_{n-1}
    std::vector<double> psi_prev(n, 0.0), psi_cur(n, 0.0), psi_next(n);
    for (std::size_t d = 0; d < k; ++d) {
        double bn1 = std::sqrt(rt.beta[d + 1]);
        double bn = d > 0 ? std::sqrt(rt.beta[d]) : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double v = rt.phi[d][i] + (x[i] - rt.alpha[d]) * psi_cur[i];
            if (d > 0) v -= bn * psi_prev[i];
            psi_next[i] = v / bn1;
        }
        psi_prev = psi_cur;
        psi_cur = psi_next;
    }
    // psi_cur = psi_k, psi_prev = psi_{k-1}
    KernelMatrix km;
    km.node_values = x;
    km.kind = KernelKind::Standard;
    km.rank = k;
    km.precision_bits = rt.precision_bits;
    km.entries = Matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v;
            if (i == j)
                v = bk * (psi_cur[i] * pk1[i] - psi_prev[i] * pk[i]);
            else
                v = bk * (pk[i] * pk1[j] - pk[j] * pk1[i]) / (x[i] - x[j]);
            km.entries(i, j) = v;
            km.entries(j, i) = v;
        }
    }
    return km;
}

KernelMatrix sym_kernel(const Ensemble& e) {
    if (e.mode != EnsembleMode::WallSymmetric)
        throw validation_error("sym_kernel expects a WallSymmetric ensemble");
    if (e.k < 1) throw validation_error("sym_kernel: k must be >= 1");
    const std::size_t twok = 2 * e.k;
    RecurrenceTable rt = compute_recurrence(e, static_cast<int>(twok) - 1);
    auto pos = e.positive_indices();
    const std::size_t np = pos.size();

    KernelMatrix km;
    km.node_values.resize(np);
    for (std::size_t i = 0; i < np; ++i) km.node_values[i] = e.nodes.values[pos[i]];
    km.kind = KernelKind::WallSymmetric;
    km.rank = e.k;
    km.precision_bits = rt.precision_bits;
    km.entries = Matrix(np);
    for (std::size_t d = 0; d < twok; ++d) {
        const double* p = rt.phi[d].data();
        for (std::size_t i = 0; i < np; ++i) {
            double pi = p[pos[i]];
            for (std::size_t j = i; j < np; ++j) {
                // K(x,y) - K(x,-y)
                km.entries(i, j) += pi * (p[pos[j]] - p[e.nodes.mirror_index(pos[j])]);
            }
        }
    }
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = i + 1; j < np; ++j) km.entries(j, i) = km.entries(i, j);
    return km;
}

KernelMatrix sym_kernel_via_squares(const Ensemble& e) {
    if (e.mode != EnsembleMode::WallSymmetric)
        throw validation_error("sym_kernel_via_squares expects a WallSymmetric ensemble");
    if (e.k < 1) throw validation_error("sym_kernel_via_squares: k must be >= 1");
    auto pos = e.positive_indices();
    const std::size_t np = pos.size();
    std::vector<double> u(np), lw(np);
    for (std::size_t i = 0; i < np; ++i) {
        double x = e.nodes.values[pos[i]];
        u[i] = x * x;
        lw[i] = e.weight.logw[pos[i]] + 2.0 * std::log(x);
    }
    NodeSet un = build_custom_nodes(u);
    un.symmetric = false;
    Ensemble ue = make_ensemble(un, make_custom_weight(un, lw), e.k, EnsembleMode::Standard);
    RecurrenceTable rt = compute_recurrence(ue, static_cast<int>(e.k) - 1);

    KernelMatrix km = assemble_sum_kernel(u, rt, e.k, KernelKind::WallSymmetric);
    for (std::size_t i = 0; i < np; ++i) km.node_values[i] = e.nodes.values[pos[i]];
    return km;
}

KernelMatrix hole_kernel(const KernelMatrix& km) {
    if (km.kind == KernelKind::Hole) throw validation_error("hole_kernel of a hole kernel");
    KernelMatrix h = km;
    h.kind = KernelKind::Hole;
    h.rank = km.size() - km.rank;
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j)
            h.entries(i, j) = (i == j ? 1.0 : 0.0) - km.entries(i, j);
    return h;
}

OddSplit split_odd(const RecurrenceTable& rt, const Ensemble& e) {
    if (!e.nodes.symmetric || !e.weight.even)
        throw validation_error("split_odd needs symmetric nodes and an even weight");
    // Evenness of the measure forces alpha == 0; the size of alpha is the
    // parity residual of the Gram-Schmidt chain.
    double scale = std::max(std::fabs(e.nodes.values.front()), std::fabs(e.nodes.values.back()));
    double worst = 0.0;
    for (double a : rt.alpha) worst = std::max(worst, std::fabs(a) / scale);
    OddSplit out;
    out.parity_residual = worst;
    if (worst > 1e-10)
        throw numeric_error("parity residual " + std::to_string(worst) +
                            " exceeds 1e-10; measure is not numerically even");

    auto pos = e.positive_indices();
    const std::size_t np = pos.size();
    const int odd_count = (rt.degree_max + 1) / 2;
    out.q_values.assign(static_cast<std::size_t>(odd_count), std::vector<double>(np, 0.0));
    out.log_norms.resize(static_cast<std::size_t>(odd_count));
    for (int j = 0; j < odd_count; ++j) {
        int deg = 2 * j + 1;
        // pi_deg(x)/x at positive nodes, pi = phi / (sqrt(w_hat) gamma_hat)
        double log_gamma_hat = rt.log_gamma[static_cast<std::size_t>(deg)] + 0.5 * rt.log_scale;
        for (std::size_t i = 0; i < np; ++i) {
            double x = e.nodes.values[pos[i]];
            double lw_hat = e.weight.logw[pos[i]] - rt.log_scale;
            double logfac = -0.5 * lw_hat - log_gamma_hat;
            out.q_values[static_cast<std::size_t>(j)][i] =
                rt.phi[static_cast<std::size_t>(deg)][pos[i]] / x * std::exp(logfac);
        }
        // norm 1/(2 gamma^2) of the true measure
        out.log_norms[static_cast<std::size_t>(j)] =
            -std::log(2.0) - 2.0 * rt.log_gamma[static_cast<std::size_t>(deg)];
    }
    return out;
}

}  // namespace dope
