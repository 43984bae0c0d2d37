// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <cstdlib>
#include <iostream>
#include <string>

#include "mdpvol/acceptance.hpp"

int main(int argc, char** argv) {
    mdpvol::AcceptanceOptions options;
    for (int i = 1; i < argc; ++i) {
        options.criteria.push_back(std::stoi(argv[i]));
    }
    const auto report = mdpvol::run_acceptance(options);
    std::cout << mdpvol::acceptance_text(report);
    std::cout << (report.all_passed() ? "acceptance: all criteria passed" : "acceptance: some criteria failed")
              << std::endl;
    return report.all_passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
