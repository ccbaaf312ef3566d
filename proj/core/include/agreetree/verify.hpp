#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace agreetree::verify {

struct SuiteParams {
    uint64_t seed = 1;
    long long cases = 100;
    int max_n = 20;
    int threads = 1;
};

struct SuiteReport {
    std::string suite;
    long long cases_run = 0;
    bool ok = true;
    long long failed_case = -1;
    std::string counterexample;
};

std::vector<std::string> suite_names();  // cavity rooted unrooted compression rangequery mixed
bool is_suite(const std::string& name);

// Runs one property suite; case i uses the derived seed mix(seed, i) so a
// reported failure can be replayed in isolation.
SuiteReport run_suite(const std::string& name, const SuiteParams& params);

uint64_t mix_seed(uint64_t seed, uint64_t index);

}  // namespace agreetree::verify
