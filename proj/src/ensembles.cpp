#include "dope/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dope/errors.hpp"

namespace dope {

NodeDensity NodeDensity::constant(double a, double b, double value) {
    NodeDensity d;
    d.pieces.push_back({a, b, {value}});
    return d;
}

double NodeDensity::value(double x) const {
    for (const auto& p : pieces) {
        if (x >= p.lo && x <= p.hi) {
            double v = 0.0, xp = 1.0;
            for (double c : p.coef) {
                v += c * xp;
                xp *= x;
            }
            return v;
        }
    }
    return 0.0;
}

double NodeDensity::integral_from_lo(double x) const {
    double total = 0.0;
    for (const auto& p : pieces) {
        double hi = std::min(x, p.hi);
        if (hi <= p.lo) continue;
        // antiderivative in the power basis
        double acc_hi = 0.0, acc_lo = 0.0;
        double xh = hi, xl = p.lo;
        for (std::size_t j = 0; j < p.coef.size(); ++j) {
            acc_hi += p.coef[j] * std::pow(xh, static_cast<double>(j + 1)) / (j + 1);
            acc_lo += p.coef[j] * std::pow(xl, static_cast<double>(j + 1)) / (j + 1);
        }
        total += acc_hi - acc_lo;
    }
    return total;
}

std::size_t NodeSet::index_of(double x) const {
    auto it = std::lower_bound(values.begin(), values.end(), x);
    if (it == values.end() || *it != x)
        throw not_a_node_error("value " + std::to_string(x) + " is not a node");
    return static_cast<std::size_t>(it - values.begin());
}

bool NodeSet::contains(double x) const {
    auto it = std::lower_bound(values.begin(), values.end(), x);
    return it != values.end() && *it == x;
}

std::size_t NodeSet::mirror_index(std::size_t i) const {
    if (!symmetric) throw validation_error("mirror_index on an asymmetric node set");
    return values.size() - 1 - i;
}

double NodeSet::quantization_residual() const {
    if (density.empty()) return 0.0;
    const auto n = static_cast<double>(values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double target = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
        worst = std::max(worst, std::fabs(density.integral_from_lo(values[i]) - target));
    }
    return worst;
}

void NodeSet::validate() const {
    if (values.empty()) throw validation_error("empty node set");
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] < values[i + 1])) throw validation_error("nodes not strictly increasing");
    if (values.front() < a || values.back() > b) throw validation_error("nodes outside [a,b]");
    if (symmetric) {
        if (values.size() % 2 != 0)
            throw unsupported_variant_error("symmetric node set with 0 as a node (odd count) is not supported");
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] != -values[values.size() - 1 - i])
                throw validation_error("symmetric flag set but nodes are not mirror-exact");
    }
    if (quantization_residual() > 1e-10)
        throw validation_error("node quantization residual exceeds 1e-10 against declared density");
}

double Ensemble::particle_fraction() const {
    if (mode == EnsembleMode::Standard) return static_cast<double>(k) / static_cast<double>(nodes.size());
    return static_cast<double>(2 * k) / static_cast<double>(nodes.size());
}

std::vector<std::size_t> Ensemble::positive_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes.values[i] > 0.0) idx.push_back(i);
    return idx;
}

void Ensemble::validate() const {
    nodes.validate();
    if (weight.logw.size() != nodes.size()) throw validation_error("weight table size mismatch");
    for (double lw : weight.logw)
        if (!std::isfinite(lw)) throw validation_error("non-finite log-weight");
    if (mode == EnsembleMode::Standard) {
        if (k > nodes.size()) throw validation_error("k exceeds node count");
    } else {
        if (nodes.contains(0.0))
            throw unsupported_variant_error("wall ensembles with 0 as a node (odd variant) are not supported");
        if (!nodes.symmetric) throw validation_error("WallSymmetric ensemble needs symmetric nodes");
        if (!weight.even) throw validation_error("WallSymmetric ensemble needs an even weight");
        if (k > nodes.size() / 2) throw validation_error("k exceeds positive node count");
    }
    if (weight.even && nodes.symmetric) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (weight.logw[i] != weight.logw[nodes.size() - 1 - i])
                throw validation_error("weight marked even but table is not mirror-exact");
    }
}

NodeSet build_equispaced_nodes(long long n) {
    if (n < 1) throw validation_error("build_equispaced_nodes: N must be >= 1");
    NodeSet s;
    s.a = -0.5;
    s.b = 0.5;
    s.values.resize(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        // (2i+1-N)/(2N): one rounded division, so mirror pairs negate exactly
        s.values[static_cast<std::size_t>(i)] =
            static_cast<double>(2 * i + 1 - n) / static_cast<double>(2 * n);
    }
    s.density = NodeDensity::constant(-0.5, 0.5, 1.0);
    s.symmetric = (n % 2 == 0);
    return s;
}

NodeSet build_halfhex_line_nodes(long long k, long long R, long long m) {
    if (k < 1 || R < 1) throw validation_error("half-hexagon needs k >= 1, R >= 1");
    if (m < 1 || m > 2 * R - 1) throw validation_error("column m out of range [1, 2R-1]");
    if (m % 2 != 0)
        throw unsupported_variant_error("odd columns contain the ordinate 0 and are not supported");
    const long long count = 2 * k + std::min(m, 2 * R - m);
    NodeSet s;
    s.values.resize(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i)
        s.values[static_cast<std::size_t>(i)] = static_cast<double>(2 * i + 1 - count) / 2.0;
    s.a = -static_cast<double>(count) / 2.0;
    s.b = static_cast<double>(count) / 2.0;
    s.density = NodeDensity::constant(s.a, s.b, 1.0 / static_cast<double>(count));
    s.symmetric = true;
    return s;
}

NodeSet build_custom_nodes(std::vector<double> values) {
    NodeSet s;
    s.values = std::move(values);
    if (s.values.empty()) throw validation_error("empty node list");
    s.a = s.values.front();
    s.b = s.values.back();
    s.symmetric = s.values.size() % 2 == 0;
    if (s.symmetric) {
        for (std::size_t i = 0; i < s.values.size(); ++i)
            if (s.values[i] != -s.values[s.values.size() - 1 - i]) {
                s.symmetric = false;
                break;
            }
    }
    return s;
}

namespace {

// Fill the table for a symmetric node set from explicit values on the
// positive half so evenness holds bit-for-bit.
void mirror_fill(const NodeSet& nodes, std::vector<double>& logw) {
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n / 2; ++i) logw[i] = logw[n - 1 - i];
}

}  // namespace

WeightSpec make_uniform_weight(const NodeSet& nodes) {
    WeightSpec w;
    w.family = WeightFamily::Uniform;
    w.logw.assign(nodes.size(), 0.0);
    w.even = nodes.symmetric;
    return w;
}

WeightSpec make_hahn_weight(const NodeSet& nodes, long long P, long long Q) {
    if (P < 1 || Q < 1) throw validation_error("Hahn parameters must be >= 1");
    WeightSpec w;
    w.family = WeightFamily::Hahn;
    w.N = static_cast<long long>(nodes.size());
    w.P = P;
    w.Q = Q;
    const long long n = w.N;
    w.logw.resize(nodes.size());
    // binomial form binom(P-1+n, n) binom(Q-1+N-1-n, N-1-n); the (P-1)!(Q-1)!
    // normalization keeps V_N free of log N drift as P, Q scale with N
    for (long long i = 0; i < n; ++i) {
        w.logw[static_cast<std::size_t>(i)] =
            std::lgamma(static_cast<double>(P + i)) + std::lgamma(static_cast<double>(Q + n - 1 - i)) -
            std::lgamma(static_cast<double>(i + 1)) - std::lgamma(static_cast<double>(n - i)) -
            std::lgamma(static_cast<double>(P)) - std::lgamma(static_cast<double>(Q));
    }
    w.even = (P == Q) && nodes.symmetric;
    if (w.even) mirror_fill(nodes, w.logw);
    return w;
}

WeightSpec make_associated_hahn_weight(const NodeSet& nodes, long long P, long long Q) {
    if (P < 1 || Q < 1) throw validation_error("Associated Hahn parameters must be >= 1");
    WeightSpec w;
    w.family = WeightFamily::AssociatedHahn;
    w.N = static_cast<long long>(nodes.size());
    w.P = P;
    w.Q = Q;
    const long long n = w.N;
    w.logw.resize(nodes.size());
    for (long long i = 0; i < n; ++i) {
        w.logw[static_cast<std::size_t>(i)] =
            -(std::lgamma(static_cast<double>(i + 1)) + std::lgamma(static_cast<double>(P + i)) +
              std::lgamma(static_cast<double>(n - i)) + std::lgamma(static_cast<double>(Q + n - 1 - i)));
    }
    w.even = (P == Q) && nodes.symmetric;
    if (w.even) mirror_fill(nodes, w.logw);
    return w;
}

WeightSpec make_halfhex_weight(const NodeSet& nodes, long long k, long long R, long long m) {
    WeightSpec w;
    w.family = WeightFamily::HalfHexLine;
    w.k = k;
    w.R = R;
    w.m = m;
    w.logw.resize(nodes.size());
    const double ca = static_cast<double>(m) / 2.0 + static_cast<double>(k) - 0.5;
    const double cb = static_cast<double>(R) - static_cast<double>(m) / 2.0 + static_cast<double>(k) - 0.5;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double z = nodes.values[i];
        w.logw[i] = -(std::lgamma(ca + z + 1.0) + std::lgamma(ca - z + 1.0) +
                      std::lgamma(cb + z + 1.0) + std::lgamma(cb - z + 1.0));
    }
    w.even = true;
    mirror_fill(nodes, w.logw);
    return w;
}

WeightSpec make_custom_weight(const NodeSet& nodes, std::vector<double> logw) {
    if (logw.size() != nodes.size()) throw validation_error("custom weight table size mismatch");
    WeightSpec w;
    w.family = WeightFamily::CustomTable;
    w.logw = std::move(logw);
    w.even = nodes.symmetric;
    if (w.even) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (w.logw[i] != w.logw[nodes.size() - 1 - i]) {
                w.even = false;
                break;
            }
    }
    return w;
}

Ensemble make_ensemble(NodeSet nodes, WeightSpec weight, std::size_t k, EnsembleMode mode) {
    Ensemble e;
    e.nodes = std::move(nodes);
    e.weight = std::move(weight);
    e.k = k;
    e.mode = mode;
    e.validate();
    return e;
}

double log_weight(const Ensemble& e, double x) { return e.weight.logw[e.nodes.index_of(x)]; }

double log_weight_at(const Ensemble& e, std::size_t node_index) {
    if (node_index >= e.nodes.size()) throw validation_error("node index out of range");
    return e.weight.logw[node_index];
}

AheIdentification hexline_to_ahe(long long k, long long R, long long m) {
    if (k < 1 || R < 1 || m < 1 || m > 2 * R - 1) throw validation_error("hexline_to_ahe: parameters out of range");
    if (m % 2 != 0) throw unsupported_variant_error("odd columns are not supported");
    // columns m and 2R-m carry identical node sets and weights
    const long long mc = std::min(m, 2 * R - m);
    AheIdentification id;
    id.N = 2 * k + mc;
    id.P = R - mc + 1;
    id.Q = id.P;
    id.shift = static_cast<double>(mc) / 2.0 + static_cast<double>(k) - 0.5;
    return id;
}

std::vector<double> extract_potential(const Ensemble& e) {
    const std::size_t n = e.nodes.size();
    if (n < 2) throw validation_error("extract_potential needs at least 2 nodes");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = std::fabs(e.nodes.values[i] - e.nodes.values[j]);
            if (d == 0.0) throw validation_error("duplicate nodes");
            s += std::log(d);
        }
        v[i] = -(e.weight.logw[i] + s) / static_cast<double>(n);
    }
    return v;
}

std::string weight_table_to_csv(const NodeSet& nodes, const WeightSpec& w) {
    std::string out = "node,log_weight\n";
    char buf[80];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", nodes.values[i], w.logw[i]);
        out += buf;
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> parse_weight_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw validation_error("weight CSV: empty input");
    std::vector<double> xs, lw;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw validation_error("weight CSV: missing column");
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            lw.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw validation_error("weight CSV: unparsable row '" + line + "'");
        }
    }
    return {xs, lw};
}

}  // namespace dope
