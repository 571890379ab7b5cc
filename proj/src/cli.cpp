#include "dope/cli.hpp"

#include <cmath>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dope/acceptance.hpp"
#include "dope/asymptotics.hpp"
#include "dope/dpp.hpp"
#include "dope/equilibrium.hpp"
#include "dope/errors.hpp"
#include "dope/halfhex.hpp"
#include "dope/io.hpp"
#include "dope/orthopoly.hpp"

namespace dope {

namespace {

struct FamilyOpts {
    std::string family = "uniform";  // uniform | hahn | ahe | halfhex | csv
    long long n = 8;                 // node count (equispaced families)
    long long P = 1, Q = 1;
    long long hk = 1, hR = 2, hm = 2;  // half-hexagon line parameters
    bool sym = false;
    long long k = 1;
    std::string weights_csv;  // custom table (family = csv)
};

void add_family_flags(CLI::App* cmd, FamilyOpts& f) {
    cmd->add_option("--family", f.family, "uniform | hahn | ahe | halfhex | csv")
        ->check(CLI::IsMember({"uniform", "hahn", "ahe", "halfhex", "csv"}));
    cmd->add_option("--nodes", f.n, "node count (equispaced families)");
    cmd->add_option("--P", f.P, "first Hahn parameter");
    cmd->add_option("--Q", f.Q, "second Hahn parameter");
    cmd->add_option("--hex-k", f.hk, "half-hexagon paths");
    cmd->add_option("--hex-R", f.hR, "half-hexagon side");
    cmd->add_option("--hex-m", f.hm, "half-hexagon column (even)");
    cmd->add_flag("--sym", f.sym, "wall-symmetric mode");
    cmd->add_option("--k", f.k, "particle count");
    cmd->add_option("--weights-csv", f.weights_csv, "weight table file for --family csv");
}

Ensemble build_family(const FamilyOpts& f) {
    if (f.family == "csv") {
        auto [xs, lw] = parse_weight_csv(read_file(f.weights_csv));
        auto nodes = build_custom_nodes(std::move(xs));
        auto w = make_custom_weight(nodes, std::move(lw));
        return make_ensemble(nodes, w, static_cast<std::size_t>(f.k),
                             f.sym ? EnsembleMode::WallSymmetric : EnsembleMode::Standard);
    }
    if (f.family == "halfhex") {
        auto nodes = build_halfhex_line_nodes(f.hk, f.hR, f.hm);
        auto w = make_halfhex_weight(nodes, f.hk, f.hR, f.hm);
        return make_ensemble(nodes, w, static_cast<std::size_t>(f.k), EnsembleMode::WallSymmetric);
    }
    auto nodes = build_equispaced_nodes(f.n);
    WeightSpec w;
    if (f.family == "uniform") w = make_uniform_weight(nodes);
    else if (f.family == "hahn") w = make_hahn_weight(nodes, f.P, f.Q);
    else w = make_associated_hahn_weight(nodes, f.P, f.Q);
    return make_ensemble(nodes, w, static_cast<std::size_t>(f.k),
                         f.sym ? EnsembleMode::WallSymmetric : EnsembleMode::Standard);
}

nlohmann::json family_json(const FamilyOpts& f) {
    nlohmann::json j;
    j["family"] = f.family;
    j["nodes"] = f.n;
    j["P"] = f.P;
    j["Q"] = f.Q;
    j["hex_k"] = f.hk;
    j["hex_R"] = f.hR;
    j["hex_m"] = f.hm;
    j["sym"] = f.sym;
    j["k"] = f.k;
    if (!f.weights_csv.empty()) j["weights_csv"] = f.weights_csv;
    return j;
}

KernelMatrix build_kernel(const Ensemble& e, bool hole) {
    KernelMatrix km = e.mode == EnsembleMode::WallSymmetric ? sym_kernel(e) : cd_kernel(e, e.k);
    if (hole) km = hole_kernel(km);
    return km;
}

// Runs fn(i) for i in [0, count) over j threads; results land by index, so
// the output is independent of j.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
        std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn]() {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

int cmd_kernel(const std::vector<std::string>& argv, const FamilyOpts& f, bool hole,
               const std::string& window, const std::string& out) {
    Ensemble e = build_family(f);
    KernelMatrix km = build_kernel(e, hole);
    std::string csv = kernel_to_csv(km);
    nlohmann::json meta = kernel_metadata(km, f.family);
    write_file(out + ".csv", csv);
    std::string meta_bytes = meta.dump(2) + "\n";
    write_file(out + ".json", meta_bytes);
    RunManifest man;
    man.argv = argv;
    man.command = "kernel";
    man.params = family_json(f);
    man.params["hole"] = hole;
    man.params["out"] = out;
    man.add_output(out + ".csv", csv);
    man.add_output(out + ".json", meta_bytes);
    if (!window.empty()) {
        auto colon = window.find(':');
        if (colon == std::string::npos) throw validation_error("--window expects lo:hi node indices");
        std::size_t lo = std::stoul(window.substr(0, colon));
        std::size_t hi = std::stoul(window.substr(colon + 1));
        if (hi < lo || hi >= km.size()) throw validation_error("--window out of range");
        std::vector<std::size_t> idx;
        for (std::size_t i = lo; i <= hi; ++i) idx.push_back(i);
        auto cd = count_distribution(km, idx);
        nlohmann::json cj;
        cj["window"] = cd.window;
        cj["probabilities"] = cd.probs;
        std::string cbytes = cj.dump(2) + "\n";
        write_file(out + ".counts.json", cbytes);
        man.params["window"] = window;
        man.add_output(out + ".counts.json", cbytes);
    }
    man.write(out + ".manifest.json");
    std::cout << "kernel " << km.size() << "x" << km.size() << " rank " << km.rank << " trace "
              << fmt_double(km.trace_value()) << " -> " << out << ".csv\n";
    return 0;
}

int cmd_weights(const std::vector<std::string>& argv, const FamilyOpts& f, const std::string& out) {
    Ensemble e = build_family(f);
    std::string csv = weight_table_to_csv(e.nodes, e.weight);
    write_file(out + ".csv", csv);
    RunManifest man;
    man.argv = argv;
    man.command = "weights";
    man.params = family_json(f);
    man.params["out"] = out;
    man.add_output(out + ".csv", csv);
    man.write(out + ".manifest.json");
    std::cout << e.nodes.size() << " weights -> " << out << ".csv\n";
    return 0;
}

int cmd_sample(const std::vector<std::string>& argv, const FamilyOpts& f, std::size_t count,
               std::uint64_t seed, unsigned jobs, const std::string& out) {
    Ensemble e = build_family(f);
    KernelMatrix km = build_kernel(e, false);
    std::vector<std::vector<double>> rows(count);
    parallel_for(count, jobs, [&](std::size_t i) {
        auto s = sample_dpp(km, seed, i);
        std::vector<double> vals;
        vals.reserve(s.indices.size());
        for (auto idx : s.indices) vals.push_back(km.node_values[idx]);
        rows[i] = std::move(vals);
    });
    std::string csv = samples_to_csv(rows);
    write_file(out + ".csv", csv);
    RunManifest man;
    man.argv = argv;
    man.command = "sample";
    man.params = family_json(f);
    man.params["count"] = count;
    man.params["jobs"] = jobs;
    man.params["out"] = out;
    man.seed = seed;
    man.has_seed = true;
    man.add_output(out + ".csv", csv);
    man.write(out + ".manifest.json");
    std::cout << count << " samples -> " << out << ".csv\n";
    return 0;
}

int cmd_oracle(const std::vector<std::string>& argv, const FamilyOpts& f, const std::string& out) {
    Ensemble e = build_family(f);
    auto en = enumerate_oracle(e);
    nlohmann::json j;
    j["log_z"] = en.log_z;
    j["n_configs"] = en.configs.size();
    j["node_values"] = en.node_values;
    nlohmann::json cfgs = nlohmann::json::array();
    for (std::size_t i = 0; i < en.configs.size(); ++i)
        cfgs.push_back({{"config", en.configs[i]}, {"p", en.probs[i]}});
    j["configurations"] = cfgs;
    j["one_point"] = en.one_point();
    std::string bytes = j.dump(2) + "\n";
    write_file(out + ".json", bytes);
    RunManifest man;
    man.argv = argv;
    man.command = "oracle";
    man.params = family_json(f);
    man.params["out"] = out;
    man.add_output(out + ".json", bytes);
    man.write(out + ".manifest.json");
    std::cout << en.configs.size() << " configurations, log Z = " << fmt_double(en.log_z) << " -> "
              << out << ".json\n";
    return 0;
}

int cmd_equilibrium(const std::vector<std::string>& argv, const FamilyOpts& f, double c, std::size_t grid,
                    const std::string& out) {
    Ensemble e = build_family(f);
    auto field = build_field_from_table(e.nodes.values, extract_potential(e), e.nodes.a, e.nodes.b);
    double span = e.nodes.b - e.nodes.a;
    auto em = solve_equilibrium(field, NodeDensity::constant(e.nodes.a, e.nodes.b, 1.0 / span), c, grid);
    nlohmann::json j = equilibrium_to_json(em);
    std::string bytes = j.dump(2) + "\n";
    write_file(out + ".json", bytes);
    RunManifest man;
    man.argv = argv;
    man.command = "equilibrium";
    man.params = family_json(f);
    man.params["c"] = c;
    man.params["grid"] = grid;
    man.params["out"] = out;
    man.add_output(out + ".json", bytes);
    man.write(out + ".manifest.json");
    std::cout << "regions (l_c = " << fmt_double(em.multiplier) << ", " << em.iterations
              << " iterations):\n";
    for (const auto& r : em.regions)
        std::cout << "  [" << fmt_double(r.lo) << ", " << fmt_double(r.hi) << "] "
                  << region_kind_name(r.kind) << "\n";
    return 0;
}

int cmd_limits_tw(const std::vector<std::string>& argv, double s_lo, double s_hi, double s_step,
                  int order, const std::string& out) {
    std::string csv = "s,value,order\n";
    for (double s = s_lo; s <= s_hi + 1e-12; s += s_step) {
        auto r = tracy_widom_cdf(s, order);
        csv += fmt_double(s) + "," + fmt_double(r.value) + "," + std::to_string(order) + "\n";
        std::cout << "F(" << fmt_double(s) << ") = " << fmt_double(r.value)
                  << (r.accuracy_warning ? "  [accuracy warning]" : "") << "\n";
    }
    if (!out.empty()) {
        write_file(out + ".csv", csv);
        RunManifest man;
        man.argv = argv;
        man.command = "limits tw";
        man.params = {{"s_lo", s_lo}, {"s_hi", s_hi}, {"s_step", s_step}, {"order", order}, {"out", out}};
        man.add_output(out + ".csv", csv);
        man.write(out + ".manifest.json");
    }
    return 0;
}

int cmd_limits_wall(const std::vector<std::string>& argv, double s_lo, double s_hi, double s_step,
                    double delta0, double rho0, const std::string& variant, const std::string& out) {
    WallVariant v = variant == "even" ? WallVariant::EvenLattice : WallVariant::OddLattice;
    std::string csv = "s,value,variant\n";
    for (double s = s_lo; s <= s_hi + 1e-12; s += s_step) {
        double p = wall_cdf(s, delta0, rho0, v);
        csv += fmt_double(s) + "," + fmt_double(p) + "," + variant + "\n";
        std::cout << "P(x_min >= " << fmt_double(s) << "/(rho0 N)) = " << fmt_double(p) << "\n";
    }
    if (!out.empty()) {
        write_file(out + ".csv", csv);
        RunManifest man;
        man.argv = argv;
        man.command = "limits wall";
        man.params = {{"s_lo", s_lo},   {"s_hi", s_hi}, {"s_step", s_step}, {"delta0", delta0},
                      {"rho0", rho0},   {"variant", variant}, {"out", out}};
        man.add_output(out + ".csv", csv);
        man.write(out + ".manifest.json");
    }
    return 0;
}

int cmd_limits_converge(const std::vector<std::string>& argv, double A, double c,
                        const std::string& regime, std::vector<int> n_list, std::size_t grid,
                        const std::string& out) {
    Regime r;
    if (regime == "band") r = Regime::Band;
    else if (regime == "wall") r = Regime::Wall;
    else if (regime == "gap_void") r = Regime::GapVoid;
    else if (regime == "gap_saturated") r = Regime::GapSaturated;
    else if (regime == "edge") r = Regime::Edge;
    else if (regime == "cross_term") r = Regime::CrossTerm;
    else throw validation_error("unknown regime " + regime);

    auto nodes = build_equispaced_nodes(400);
    long long P = static_cast<long long>(std::llround(A * 400)) + 1;
    WeightSpec w = A == 0.0 ? make_associated_hahn_weight(nodes, 1, 1) : make_hahn_weight(nodes, P, P);
    auto epot = make_ensemble(nodes, w, 1, EnsembleMode::Standard);
    auto field = build_field_from_table(nodes.values, extract_potential(epot), -0.5, 0.5);
    auto em = solve_equilibrium(field, NodeDensity::constant(-0.5, 0.5, 1.0), c, grid);

    RegimeInputs in;
    in.c = c;
    in.x0 = 0.2;
    in.delta_x0 = 1.0 / (c * em.density_at(in.x0));
    in.delta0 = 1.0 / (c * em.density_at(0.0));
    double edge = em.band_right_edge(0.0);
    bool saturated = false;
    for (const auto& reg : em.regions)
        if (reg.lo >= edge - 1e-12 && reg.kind == RegionKind::Saturated) saturated = true;
    auto ef = fit_band_edge(em, edge, true, saturated);
    in.beta = ef.edge_refined;
    in.B_beta = ef.amplitude;
    in.gap_lo = edge + 0.05;
    in.gap_hi = 0.497;

    auto fam = [&](int n) {
        auto nn = build_equispaced_nodes(2 * n);
        long long PP = static_cast<long long>(std::llround(A * 2 * n)) + 1;
        WeightSpec ww = A == 0.0 ? make_associated_hahn_weight(nn, 1, 1) : make_hahn_weight(nn, PP, PP);
        return make_ensemble(nn, ww, static_cast<std::size_t>(std::lround(c * n)),
                             EnsembleMode::WallSymmetric);
    };
    auto rep = convergence_suite(fam, A == 0.0 ? "ahe11" : "hahn_A" + fmt_double(A), r, n_list, in);
    nlohmann::json j;
    j["family"] = rep.family;
    j["regime"] = rep.regime;
    j["n_values"] = rep.n_values;
    j["sup_errors"] = rep.sup_errors;
    j["slope"] = rep.slope;
    j["pass"] = rep.pass;
    j["pass_rule"] = rep.detail;
    j["delta_x0"] = in.delta_x0;
    j["delta0"] = in.delta0;
    j["beta"] = in.beta;
    j["B_beta"] = in.B_beta;
    j["c"] = c;
    std::string bytes = j.dump(2) + "\n";
    std::cout << "regime " << rep.regime << " slope " << fmt_double(rep.slope) << " errors";
    for (double e2 : rep.sup_errors) std::cout << " " << fmt_double(e2);
    std::cout << "\n";
    if (!out.empty()) {
        write_file(out + ".json", bytes);
        RunManifest man;
        man.argv = argv;
        man.command = "limits converge";
        man.params = {{"A", A}, {"c", c}, {"regime", regime}, {"n_list", n_list}, {"grid", grid},
                      {"out", out}};
        man.add_output(out + ".json", bytes);
        man.write(out + ".manifest.json");
    }
    return 0;
}

int cmd_halfhex_line(const std::vector<std::string>& argv, long long hk, long long hR, long long hm,
                     std::size_t count, std::uint64_t seed, unsigned jobs, const std::string& out) {
    HexSpec hs{hk, hR};
    Ensemble e = line_ensemble(hs, hm);
    auto km = sym_kernel(e);
    std::vector<std::vector<double>> rows(count);
    parallel_for(count, jobs, [&](std::size_t i) {
        auto s = sample_dpp(km, seed, i);
        std::vector<double> vals;
        for (auto idx : s.indices) vals.push_back(km.node_values[idx]);
        rows[i] = std::move(vals);
    });
    std::string csv = samples_to_csv(rows);
    write_file(out + ".csv", csv);
    RunManifest man;
    man.argv = argv;
    man.command = "halfhex line";
    man.params = {{"hex_k", hk}, {"hex_R", hR}, {"hex_m", hm}, {"count", count}, {"jobs", jobs},
                  {"out", out}};
    man.seed = seed;
    man.has_seed = true;
    man.add_output(out + ".csv", csv);
    man.write(out + ".manifest.json");
    std::cout << count << " line samples -> " << out << ".csv\n";
    return 0;
}

int cmd_halfhex_tile(const std::vector<std::string>& argv, long long hk, long long hR,
                     std::uint64_t sweeps, bool default_burnin, std::uint64_t seed,
                     const std::string& out) {
    HexSpec hs{hk, hR};
    std::uint64_t s = default_burnin
                          ? 10ull * static_cast<std::uint64_t>(hk) * static_cast<std::uint64_t>(hR) *
                                static_cast<std::uint64_t>(hR)
                          : sweeps;
    TilingState t = mcmc_tile(hs, s, seed);
    std::string svg = render_svg(t);
    write_file(out + ".svg", svg);
    nlohmann::json j;
    j["k"] = t.k;
    j["R"] = t.R;
    j["heights2"] = t.heights2;
    std::string bytes = j.dump() + "\n";
    write_file(out + ".json", bytes);
    RunManifest man;
    man.argv = argv;
    man.command = "halfhex tile";
    man.params = {{"hex_k", hk}, {"hex_R", hR}, {"sweeps", s}, {"out", out}};
    man.seed = seed;
    man.has_seed = true;
    man.add_output(out + ".svg", svg);
    man.add_output(out + ".json", bytes);
    man.write(out + ".manifest.json");
    std::cout << "tiling after " << s << " sweeps -> " << out << ".svg (" << tile_count(hs)
              << " tiles)\n";
    return 0;
}

int cmd_halfhex_arctic(const std::vector<std::string>& argv, long long hk, long long hR, long long hm,
                       std::size_t count, std::uint64_t seed, const std::string& out) {
    HexSpec hs{hk, hR};
    auto ap = arctic_profile(hs, hm, count, seed);
    std::string csv = "ordinate,frequency,prediction\n";
    for (std::size_t i = 0; i < ap.ordinate.size(); ++i)
        csv += fmt_double(ap.ordinate[i]) + "," + fmt_double(ap.frequency[i]) + "," +
               fmt_double(ap.predicted_edge) + "\n";
    write_file(out + ".csv", csv);
    nlohmann::json j;
    j["tau"] = ap.tau;
    j["predicted_edge"] = ap.predicted_edge;
    j["profile_half_crossing"] = ap.profile_half_crossing;
    j["count_half_crossing"] = ap.count_half_crossing;
    j["top_median"] = ap.top_median;
    j["saturated_adjacent"] = ap.saturated_adjacent;
    std::string bytes = j.dump(2) + "\n";
    write_file(out + ".json", bytes);
    RunManifest man;
    man.argv = argv;
    man.command = "halfhex arctic";
    man.params = {{"hex_k", hk}, {"hex_R", hR}, {"hex_m", hm}, {"count", count}, {"out", out}};
    man.seed = seed;
    man.has_seed = true;
    man.add_output(out + ".csv", csv);
    man.add_output(out + ".json", bytes);
    man.write(out + ".manifest.json");
    std::cout << "tau " << fmt_double(ap.tau) << ": edge estimate " << fmt_double(ap.count_half_crossing)
              << " vs ellipse " << fmt_double(ap.predicted_edge) << " ("
              << (ap.saturated_adjacent ? "saturated" : "void") << "-adjacent)\n";
    return 0;
}

int cmd_replay(const std::string& manifest_path) {
    nlohmann::json man = nlohmann::json::parse(read_file(manifest_path));
    std::vector<std::string> argv = man.at("argv").get<std::vector<std::string>>();
    int rc = dispatch(argv);
    if (rc != 0) return rc;
    bool all_ok = true;
    for (auto& [path, hash] : man.at("outputs").items()) {
        std::string now = sha256_hex(read_file(path));
        bool ok = now == hash.get<std::string>();
        std::cout << (ok ? "MATCH " : "MISMATCH ") << path << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 3;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv) {
    CLI::App app{"discrete orthogonal polynomial ensembles with a wall"};
    app.require_subcommand(1);

    FamilyOpts fam;
    bool hole = false;
    std::string out = "out";
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    double c = 0.5, A = 1.0;
    std::size_t grid = 512;
    double s_lo = 0.0, s_hi = 0.0, s_step = 1.0, delta0 = 1.5, rho0 = 1.0;
    int order = 40;
    std::string regime = "band", variant = "odd", manifest_path, suite = "all";
    std::vector<int> n_list{50, 100, 200, 400};
    long long sweeps = -1;

    std::string window;
    auto* kernel = app.add_subcommand("kernel", "build and export a correlation kernel");
    add_family_flags(kernel, fam);
    kernel->add_flag("--hole", hole, "export I - K instead");
    kernel->add_option("--window", window, "node-index window lo:hi for a count distribution");
    kernel->add_option("--out", out, "output prefix");

    auto* weights = app.add_subcommand("weights", "export a weight table as CSV");
    add_family_flags(weights, fam);
    weights->add_option("--out", out, "output prefix");

    auto* sample = app.add_subcommand("sample", "exact determinantal samples");
    add_family_flags(sample, fam);
    sample->add_option("--count", count, "number of samples");
    sample->add_option("--seed", seed, "RNG seed")->required();
    sample->add_option("--jobs", jobs, "threads across sample streams");
    sample->add_option("--out", out, "output prefix");

    auto* oracle = app.add_subcommand("oracle", "exhaustive enumeration of a small ensemble");
    add_family_flags(oracle, fam);
    oracle->add_option("--out", out, "output prefix");

    auto* equil = app.add_subcommand("equilibrium", "constrained equilibrium measure");
    add_family_flags(equil, fam);
    equil->add_option("--c", c, "particle fraction")->required();
    equil->add_option("--grid", grid, "cells");
    equil->add_option("--out", out, "output prefix");

    auto* limits = app.add_subcommand("limits", "limit kernels and laws");
    auto* tw = limits->add_subcommand("tw", "Tracy-Widom CDF");
    tw->add_option("--s", s_lo, "evaluation point (or sweep start)")->required();
    tw->add_option("--s-hi", s_hi, "sweep end (defaults to --s)");
    tw->add_option("--s-step", s_step, "sweep step");
    tw->add_option("--order", order, "quadrature order");
    tw->add_option("--out", out, "output prefix (optional)")->default_val("");
    auto* wall = limits->add_subcommand("wall", "leftmost-particle law");
    wall->add_option("--s", s_lo, "evaluation point (or sweep start)")->required();
    wall->add_option("--s-hi", s_hi, "sweep end");
    wall->add_option("--s-step", s_step, "sweep step");
    wall->add_option("--delta0", delta0, "spacing delta(0)")->required();
    wall->add_option("--rho0", rho0, "node density at 0");
    wall->add_option("--variant", variant, "odd | even lattice")
        ->check(CLI::IsMember({"odd", "even"}));
    wall->add_option("--out", out, "output prefix (optional)")->default_val("");
    auto* conv = limits->add_subcommand("converge", "finite-size convergence report");
    conv->add_option("--A", A, "Hahn parameter (0 selects the dual uniform line family)");
    conv->add_option("--c", c, "particle fraction");
    conv->add_option("--regime", regime, "band|wall|gap_void|gap_saturated|edge|cross_term");
    conv->add_option("--n", n_list, "positive-half sizes");
    conv->add_option("--grid", grid, "equilibrium grid");
    conv->add_option("--out", out, "output prefix (optional)")->default_val("");

    auto* hh = app.add_subcommand("halfhex", "half-hexagon tilings");
    auto* line = hh->add_subcommand("line", "exact line-marginal samples");
    line->add_option("--k", fam.hk)->required();
    line->add_option("--R", fam.hR)->required();
    line->add_option("--m", fam.hm)->required();
    line->add_option("--count", count);
    line->add_option("--seed", seed)->required();
    line->add_option("--jobs", jobs);
    line->add_option("--out", out);
    auto* tile = hh->add_subcommand("tile", "sample a tiling by Glauber dynamics, render SVG");
    tile->add_option("--k", fam.hk)->required();
    tile->add_option("--R", fam.hR)->required();
    tile->add_option("--sweeps", sweeps, "sweeps (default 10 k R^2)");
    tile->add_option("--seed", seed)->required();
    tile->add_option("--out", out);
    auto* arctic = hh->add_subcommand("arctic", "one-point profile and arctic-edge statistics");
    arctic->add_option("--k", fam.hk)->required();
    arctic->add_option("--R", fam.hR)->required();
    arctic->add_option("--m", fam.hm)->required();
    arctic->add_option("--count", count);
    arctic->add_option("--seed", seed)->required();
    arctic->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "run acceptance suites");
    verify->add_option("--suite", suite,
                       "all | oracle-equivalence | kernel-identities | anchors | equilibrium | "
                       "band-sine | cross-term | gap-regimes | edge-tracy-widom | wall-law | arctic | "
                       "mcmc");

    auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output hashes");
    replay->add_option("--manifest", manifest_path, "manifest path")->required();

    std::vector<const char*> cargv;
    cargv.push_back("dope");
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 64;
    }

    try {
        if (kernel->parsed()) return cmd_kernel(argv, fam, hole, window, out);
        if (weights->parsed()) return cmd_weights(argv, fam, out);
        if (sample->parsed()) return cmd_sample(argv, fam, count, seed, jobs, out);
        if (oracle->parsed()) return cmd_oracle(argv, fam, out);
        if (equil->parsed()) return cmd_equilibrium(argv, fam, c, grid, out);
        if (limits->parsed()) {
            if (tw->parsed()) {
                if (tw->count("--s-hi") == 0) s_hi = s_lo;
                return cmd_limits_tw(argv, s_lo, s_hi, s_step, order, out);
            }
            if (wall->parsed()) {
                if (wall->count("--s-hi") == 0) s_hi = s_lo;
                return cmd_limits_wall(argv, s_lo, s_hi, s_step, delta0, rho0, variant, out);
            }
            if (conv->parsed()) return cmd_limits_converge(argv, A, c, regime, n_list, grid, out);
            std::cerr << "limits needs a subcommand (tw | wall | converge)\n";
            return 64;
        }
        if (hh->parsed()) {
            if (line->parsed())
                return cmd_halfhex_line(argv, fam.hk, fam.hR, fam.hm, count, seed, jobs, out);
            if (tile->parsed())
                return cmd_halfhex_tile(argv, fam.hk, fam.hR,
                                        sweeps < 0 ? 0 : static_cast<std::uint64_t>(sweeps),
                                        tile->count("--sweeps") == 0, seed, out);
            if (arctic->parsed())
                return cmd_halfhex_arctic(argv, fam.hk, fam.hR, fam.hm, count, seed, out);
            std::cerr << "halfhex needs a subcommand (line | tile | arctic)\n";
            return 64;
        }
        if (verify->parsed()) {
            std::vector<int> ids;
            if (suite != "all") {
                for (int id : acceptance_ids()) {
                    const std::string name = acceptance_name(id);
                    if (name == suite || name.rfind(suite, 0) == 0) ids.push_back(id);
                }
                if (ids.empty()) {
                    std::cerr << "unknown suite " << suite << "\n";
                    return 64;
                }
                if (ids.size() > 1) {
                    std::cerr << "ambiguous suite prefix " << suite << "\n";
                    return 64;
                }
            }
            int failures = run_acceptance(ids, std::cout);
            return failures == 0 ? 0 : 3;
        }
        if (replay->parsed()) return cmd_replay(manifest_path);
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}

}  // namespace dope
