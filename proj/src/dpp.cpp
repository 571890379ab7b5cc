#include "dope/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dope/bigfloat.hpp"
#include "dope/errors.hpp"
#include "dope/linalg.hpp"
#include "dope/rng.hpp"

namespace dope {

double correlation_fn(const KernelMatrix& km, const std::vector<std::size_t>& sites) {
    const std::size_t m = sites.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (sites[i] >= km.size()) throw validation_error("correlation site out of range");
        for (std::size_t j = i + 1; j < m; ++j)
            if (sites[i] == sites[j]) throw validation_error("repeated correlation site");
    }
    if (m == 0) return 1.0;
    Matrix minor(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) minor(i, j) = km.at(sites[i], sites[j]);
    return det_lu(std::move(minor));
}

double correlation_fn_values(const KernelMatrix& km, const std::vector<double>& sites) {
    std::vector<std::size_t> idx(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) idx[i] = km.index_of(sites[i]);
    return correlation_fn(km, idx);
}

namespace {

ParticleConfiguration sample_one(const KernelMatrix& km, std::uint64_t seed, std::uint64_t stream) {
    const std::size_t n = km.size();
    const std::size_t k = km.rank;
    CounterRng rng(seed, stream);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = km.at(i, i);
    std::vector<std::vector<double>> cols;  // residual Cholesky columns
    cols.reserve(k);
    std::vector<char> chosen(n, 0);
    ParticleConfiguration out;
    out.seed = seed;
    out.stream = stream;
    out.indices.reserve(k);

    for (std::size_t t = 0; t < k; ++t) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!chosen[i] && diag[i] > 0.0) total += diag[i];
        double r = rng.next_u01() * total;
        std::size_t pick = n;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i] || diag[i] <= 0.0) continue;
            acc += diag[i];
            if (acc >= r) { pick = i; break; }
        }
        if (pick == n) {
            for (std::size_t i = n; i-- > 0;)
                if (!chosen[i] && diag[i] > 0.0) { pick = i; break; }
        }
        if (pick == n) throw numeric_error("sampler ran out of mass; kernel rank deficient");

        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = km.at(i, pick);
            for (const auto& prev : cols) v -= prev[i] * prev[pick];
            c[i] = v;
        }
        double piv = std::sqrt(std::max(c[pick], 1e-300));
        for (std::size_t i = 0; i < n; ++i) c[i] /= piv;
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] -= c[i] * c[i];
            if (diag[i] < 0.0) diag[i] = 0.0;
        }
        diag[pick] = 0.0;
        chosen[pick] = 1;
        cols.push_back(std::move(c));
        out.indices.push_back(pick);
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

void require_projection(const KernelMatrix& km) {
    if (km.kind == KernelKind::Hole)
        throw kernel_validity_error("sampling needs a projection kernel, not a hole kernel");
    double res = km.projection_residual();
    if (res > 1e-6)
        throw kernel_validity_error("kernel projection residual " + std::to_string(res) +
                                    " exceeds 1e-6; not a projection");
}

}  // namespace

ParticleConfiguration sample_dpp(const KernelMatrix& km, std::uint64_t seed, std::uint64_t stream) {
    require_projection(km);
    return sample_one(km, seed, stream);
}

std::vector<ParticleConfiguration> sample_batch(const KernelMatrix& km, std::size_t count,
                                                std::uint64_t seed) {
    require_projection(km);
    std::vector<ParticleConfiguration> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(km, seed, i));
    return out;
}

namespace {

BigFloat config_weight_standard(const Ensemble& e, const std::vector<std::uint32_t>& c,
                                const std::vector<double>& what) {
    BigFloat w(1.0);
    for (std::uint32_t i : c) w *= BigFloat(what[i]);
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            double d = e.nodes.values[c[b]] - e.nodes.values[c[a]];
            BigFloat bd(d);
            w *= bd * bd;
        }
    return w;
}

BigFloat config_weight_sym(const Ensemble& e, const std::vector<std::uint32_t>& c,
                           const std::vector<double>& what, const std::vector<std::size_t>& pos) {
    BigFloat w(1.0);
    for (std::uint32_t i : c) {
        double x = e.nodes.values[pos[i]];
        w *= BigFloat(x * x) * BigFloat(what[i]);
    }
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            double xa = e.nodes.values[pos[c[a]]];
            double xb = e.nodes.values[pos[c[b]]];
            BigFloat d(xb * xb - xa * xa);
            w *= d * d;
        }
    return w;
}

double binomial_count(std::size_t n, std::size_t k) {
    double v = 1.0;
    for (std::size_t i = 0; i < k; ++i) v = v * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return v;
}

}  // namespace

Enumeration enumerate_oracle(const Ensemble& e, std::size_t max_configs) {
    e.validate();
    const bool sym = e.mode == EnsembleMode::WallSymmetric;
    std::vector<std::size_t> pos = sym ? e.positive_indices() : std::vector<std::size_t>{};
    const std::size_t pool = sym ? pos.size() : e.nodes.size();
    const std::size_t k = e.k;
    if (binomial_count(pool, k) > static_cast<double>(max_configs))
        throw capacity_error("enumeration instance too large: C(" + std::to_string(pool) + "," +
                             std::to_string(k) + ") configurations");

    Enumeration en;
    en.node_values.resize(pool);
    for (std::size_t i = 0; i < pool; ++i) en.node_values[i] = e.nodes.values[sym ? pos[i] : i];

    // rescale weights once; the scale re-enters only in log_z
    double scale = *std::max_element(e.weight.logw.begin(), e.weight.logw.end());
    std::vector<double> what(pool);
    for (std::size_t i = 0; i < pool; ++i)
        what[i] = std::exp(e.weight.logw[sym ? pos[i] : i] - scale);

    std::vector<std::uint32_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = static_cast<std::uint32_t>(i);
    std::vector<BigFloat> weights;
    BigFloat z;
    bool more = true;
    if (k == 0) {
        en.configs.push_back({});
        weights.push_back(BigFloat(1.0));
        z = BigFloat(1.0);
        more = false;
    }
    while (more) {
        BigFloat w = sym ? config_weight_sym(e, cur, what, pos) : config_weight_standard(e, cur, what);
        weights.push_back(w);
        z += w;
        en.configs.push_back(cur);
        // next k-combination of {0..pool-1}
        more = false;
        for (std::size_t i = k; i-- > 0;) {
            if (cur[i] < pool - (k - i)) {
                ++cur[i];
                for (std::size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
                more = true;
                break;
            }
        }
    }
    en.probs.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) en.probs[i] = (weights[i] / z).to_double();
    en.log_z = z.log_abs() + static_cast<double>(k) * scale;
    return en;
}

double Enumeration::marginal(const std::vector<std::size_t>& sites) const {
    double p = 0.0;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        bool all = true;
        for (std::size_t s : sites) {
            if (!std::binary_search(configs[ci].begin(), configs[ci].end(), static_cast<std::uint32_t>(s))) {
                all = false;
                break;
            }
        }
        if (all) p += probs[ci];
    }
    return p;
}

std::vector<double> Enumeration::one_point() const {
    std::vector<double> p(node_values.size(), 0.0);
    for (std::size_t ci = 0; ci < configs.size(); ++ci)
        for (auto i : configs[ci]) p[i] += probs[ci];
    return p;
}

std::vector<double> Enumeration::count_dist(const std::vector<std::size_t>& window) const {
    std::vector<double> a(window.size() + 1, 0.0);
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        std::size_t cnt = 0;
        for (std::size_t s : window)
            if (std::binary_search(configs[ci].begin(), configs[ci].end(), static_cast<std::uint32_t>(s))) ++cnt;
        a[cnt] += probs[ci];
    }
    return a;
}

double Enumeration::prob_of_config(const std::vector<std::size_t>& config) const {
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        if (configs[ci].size() != config.size()) continue;
        bool eq = true;
        for (std::size_t j = 0; j < config.size(); ++j)
            if (configs[ci][j] != config[j]) { eq = false; break; }
        if (eq) return probs[ci];
    }
    return 0.0;
}

CountDistribution count_distribution(const KernelMatrix& km, const std::vector<std::size_t>& window) {
    if (window.empty()) throw validation_error("count_distribution: empty window");
    for (std::size_t s : window)
        if (s >= km.size()) throw validation_error("count_distribution: site out of range");
    Matrix sub(window.size());
    for (std::size_t i = 0; i < window.size(); ++i)
        for (std::size_t j = 0; j < window.size(); ++j) sub(i, j) = km.at(window[i], window[j]);
    auto ev = jacobi_eigenvalues(std::move(sub));
    for (double& l : ev) {
        if (l < -1e-8 || l > 1.0 + 1e-8)
            throw kernel_validity_error("restricted-kernel eigenvalue " + std::to_string(l) +
                                        " outside [0,1]");
        l = std::min(1.0, std::max(0.0, l));
    }
    // expand prod((1-l) + l t); coefficient of t^m is A_m
    std::vector<double> poly{1.0};
    for (double l : ev) {
        std::vector<double> nxt(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            nxt[i] += poly[i] * (1.0 - l);
            nxt[i + 1] += poly[i] * l;
        }
        poly = std::move(nxt);
    }
    CountDistribution cd;
    cd.window = window;
    std::size_t top = std::min(window.size(), km.rank) + 1;
    poly.resize(std::max(poly.size(), top), 0.0);
    cd.probs.assign(poly.begin(), poly.begin() + static_cast<long>(top));
    for (double& p : cd.probs) p = std::min(1.0, std::max(0.0, p));
    return cd;
}

double extremal_cdf(const KernelMatrix& km, double t, Side side, Species species) {
    const KernelMatrix* base = &km;
    KernelMatrix holed;
    if (species == Species::Hole && km.kind != KernelKind::Hole) {
        holed = hole_kernel(km);
        base = &holed;
    }
    std::vector<std::size_t> restrict_idx;
    for (std::size_t i = 0; i < base->size(); ++i) {
        double x = base->node_values[i];
        if (side == Side::Rightmost ? (x > t) : (x < t)) restrict_idx.push_back(i);
    }
    if (restrict_idx.empty()) return 1.0;
    Matrix m(restrict_idx.size());
    for (std::size_t i = 0; i < restrict_idx.size(); ++i)
        for (std::size_t j = 0; j < restrict_idx.size(); ++j)
            m(i, j) = (i == j ? 1.0 : 0.0) - base->at(restrict_idx[i], restrict_idx[j]);
    double d = det_lu(std::move(m));
    return std::min(1.0, std::max(0.0, d));
}

}  // namespace dope
