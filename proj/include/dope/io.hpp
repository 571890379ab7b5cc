#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dope/equilibrium.hpp"
#include "dope/orthopoly.hpp"

namespace dope {

// Deterministic float formatting shared by every exporter ('%.17g', '.'
// separator); identical doubles serialize to identical bytes.
std::string fmt_double(double v);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

std::string sha256_hex(const std::string& bytes);

// CSV matrix with node header row/column.
std::string kernel_to_csv(const KernelMatrix& km);
// JSON metadata sidecar for a kernel export.
nlohmann::json kernel_metadata(const KernelMatrix& km, const std::string& family);

std::string samples_to_csv(const std::vector<std::vector<double>>& rows);

nlohmann::json equilibrium_to_json(const EquilibriumMeasure& em);

// Run manifest: command, parameters, seed, tool version, output hashes.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;  // exact invocation, consumed by replay
    nlohmann::json params;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256

    void add_output(const std::string& path, const std::string& bytes);
    nlohmann::json to_json() const;
    void write(const std::string& path) const;
};

extern const char* kToolVersion;

}  // namespace dope
