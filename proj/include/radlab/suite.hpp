#pragma once

#include <string>
#include <vector>

namespace radlab {

// One acceptance experiment: a named pass/fail check with the measured
// quantities and their bounds spelled out in `detail`.
struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

// Runs experiment 1..12. Never throws: an escaping error is converted into a
// failed result carrying the message.
CriterionResult run_criterion(int index);

std::vector<CriterionResult> run_all_criteria();

// "criterion NN PASS|FAIL name: detail"
std::string to_line(const CriterionResult& r);

// Concatenated to_line output of the given experiments, in order.
std::string suite_output(const std::vector<int>& indices);

// Named bundles of experiments; throws DomainError for an unknown name.
std::vector<int> preset_criteria(const std::string& preset);
std::vector<std::string> preset_names();

}  // namespace radlab
