#include "dope/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "dope/errors.hpp"

namespace dope {

const char* kToolVersion = "0.1.0";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw validation_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open: " + path);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

namespace {

// Compact SHA-256 (FIPS 180-4), enough for manifest output hashes.
struct Sha256 {
    std::uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                          0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    unsigned char buf[64];
    std::uint64_t len = 0;
    std::size_t fill = 0;

    static constexpr std::uint32_t K[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const unsigned char* p) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            std::uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + S1 + ch + K[i] + w[i];
            std::uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = S0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }

    void update(const unsigned char* p, std::size_t n) {
        len += n;
        while (n) {
            std::size_t take = std::min(n, 64 - fill);
            std::memcpy(buf + fill, p, take);
            fill += take;
            p += take;
            n -= take;
            if (fill == 64) {
                block(buf);
                fill = 0;
            }
        }
    }

    std::string finish() {
        std::uint64_t bits = len * 8;
        unsigned char pad = 0x80;
        update(&pad, 1);
        unsigned char z = 0;
        while (fill != 56) update(&z, 1);
        unsigned char lenb[8];
        for (int i = 0; i < 8; ++i) lenb[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(lenb, 8);
        char out[65];
        for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
        return std::string(out, 64);
    }
};

constexpr std::uint32_t Sha256::K[64];

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    Sha256 s;
    s.update(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
    return s.finish();
}

std::string kernel_to_csv(const KernelMatrix& km) {
    std::string out = "K";
    for (double x : km.node_values) out += "," + fmt_double(x);
    out += "\n";
    for (std::size_t i = 0; i < km.size(); ++i) {
        out += fmt_double(km.node_values[i]);
        for (std::size_t j = 0; j < km.size(); ++j) out += "," + fmt_double(km.at(i, j));
        out += "\n";
    }
    return out;
}

nlohmann::json kernel_metadata(const KernelMatrix& km, const std::string& family) {
    nlohmann::json j;
    j["family"] = family;
    j["n_nodes"] = km.size();
    j["rank"] = km.rank;
    switch (km.kind) {
        case KernelKind::Standard: j["kind"] = "standard"; break;
        case KernelKind::WallSymmetric: j["kind"] = "wall_symmetric"; break;
        case KernelKind::Hole: j["kind"] = "hole"; break;
    }
    j["precision_bits"] = km.precision_bits;
    return j;
}

std::string samples_to_csv(const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ",";
            out += fmt_double(r[i]);
        }
        out += "\n";
    }
    return out;
}

nlohmann::json equilibrium_to_json(const EquilibriumMeasure& em) {
    nlohmann::json j;
    j["a"] = em.a;
    j["b"] = em.b;
    j["h"] = em.h;
    j["c"] = em.c;
    j["grid"] = em.grid;
    j["density"] = em.density;
    j["varderiv"] = em.varderiv;
    j["multiplier"] = em.multiplier;
    j["iterations"] = em.iterations;
    j["residual"] = em.residual;
    j["objective"] = em.objective;
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& r : em.regions) {
        regions.push_back({{"lo", r.lo}, {"hi", r.hi}, {"kind", region_kind_name(r.kind)}});
    }
    j["regions"] = regions;
    return j;
}

void RunManifest::add_output(const std::string& path, const std::string& bytes) {
    outputs.emplace_back(path, sha256_hex(bytes));
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["argv"] = argv;
    j["params"] = params;
    if (has_seed) j["seed"] = seed;
    j["tool_version"] = kToolVersion;
    nlohmann::json outs = nlohmann::json::object();
    for (const auto& [p, h] : outputs) outs[p] = h;
    j["outputs"] = outs;
    return j;
}

void RunManifest::write(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }

}  // namespace dope
