#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "ixs/checks.hpp"

using namespace ixs;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> suites;
    double budget_s;
};

std::string run_cli(const std::string& cli, const std::string& args, int& status)
{
    std::string cmd = "\"" + cli + "\" " + args;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        status = -1;
        return {};
    }
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    status = pclose(p);
    return out;
}

}

int main(int argc, char** argv)
{
    std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<Criterion> criteria{
        {1, "special-function identities", {"special"}, 10},
        {2, "transform round trips and Parseval", {"roundtrip", "parseval"}, 120},
        {3, "Yor representation equality", {"yor"}, 60},
        {4, "heat-kernel properties", {"heat"}, 180},
        {5, "resolvent identity", {"resolvent"}, 60},
        {6, "monotonicity in the family parameter", {"monotonicity"}, 60},
        {7, "Feller classifications", {"feller"}, 30},
        {8, "probabilistic cross-validation", {"bougerol", "conditional", "feynman-kac", "evolution"}, 300},
        {9, "Hartman-Watson normalization", {"hartman-watson"}, 60},
    };
    bool all_ok = true;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<CheckResult> results;
        std::string error;
        try {
            for (const auto& s : c.suites) {
                auto r = run_check(s);
                results.insert(results.end(), r.begin(), r.end());
            }
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const auto& r : results)
            std::printf("    %s %-55s measured %-12.4g tol %-8.3g %s\n", r.pass ? "ok  " : "FAIL", r.name.c_str(),
                        r.measured, r.tolerance, r.detail.c_str());
        bool ok = error.empty() && all_pass(results) && secs <= c.budget_s;
        all_ok = all_ok && ok;
        std::printf("%s criterion %d: %s (%zu checks, %.1f s, budget %.0f s)%s%s\n", ok ? "PASS" : "FAIL", c.id,
                    c.title.c_str(), results.size(), secs, c.budget_s, error.empty() ? "" : " error: ",
                    error.c_str());
        std::fflush(stdout);
    }

    auto t0 = std::chrono::steady_clock::now();
    bool same = false;
    std::string how;
    if (!cli.empty()) {
        const std::string args = "check special feller bougerol conditional --paths 20000";
        int s1 = 0, s2 = 0;
        std::string a = run_cli(cli, args, s1), b = run_cli(cli, args, s2);
        same = s1 == 0 && s2 == 0 && !a.empty() && a == b;
        how = "two CLI runs of '" + args + "', " + std::to_string(a.size()) + " bytes each";
    } else {
        CheckOptions opt;
        opt.n_paths = 20000;
        std::string a = checks_csv(run_check("bougerol", opt)), b = checks_csv(run_check("bougerol", opt));
        same = a == b;
        how = "two in-process runs of the bougerol suite";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all_ok = all_ok && same;
    std::printf("%s criterion 10: deterministic check output (%s, byte-identical: %s, %.1f s)\n", same ? "PASS" : "FAIL",
                how.c_str(), same ? "yes" : "no", secs);
    return all_ok ? 0 : 1;
}
