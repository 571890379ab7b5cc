#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dope {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<int> acceptance_ids();
std::string acceptance_name(int id);
CriterionResult run_criterion(int id);

// Runs the listed criteria (all when empty), printing one pass/fail line
// each; returns the number of failures.
int run_acceptance(const std::vector<int>& ids, std::ostream& out);

}  // namespace dope
