#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qlpoly {

struct SuiteCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Names of the compiled-in reproduction suites: mo3, ks14, ch, eq2, cheats.
std::vector<std::string> suite_names();

/// Runs one suite. Throws DomainError for an unknown name.
std::vector<SuiteCheck> run_suite(std::string_view name);

/// The fourteen dispersion-free states of ks14 in reference row order
/// (atoms a1..a13).
const std::vector<std::vector<int>>& ks14_reference_states();

}  // namespace qlpoly
