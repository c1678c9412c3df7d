#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ixs/diffusion.hpp"

namespace ixs {

struct CheckResult {
    int criterion = 0;
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct CheckOptions {
    std::optional<FamilyTag> family;
    double alpha = -0.5;
    double mu = 0.3;
    std::uint64_t seed = default_seed;
    long n_paths = 100000;
};

const std::vector<std::string>& check_suite_names();
int suite_criterion(const std::string& suite);

std::vector<CheckResult> run_check(const std::string& suite, const CheckOptions& opt = {});

std::string checks_csv(const std::vector<CheckResult>& results);
bool all_pass(const std::vector<CheckResult>& results);

}
