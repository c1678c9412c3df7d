#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ixs/checks.hpp"
#include "ixs/diffusion.hpp"
#include "ixs/expr.hpp"
#include "ixs/feller.hpp"
#include "ixs/heat.hpp"
#include "ixs/transforms.hpp"
#include "ixs/yor.hpp"

using namespace ixs;

namespace {

struct ArgError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

double number(const std::string& s)
{
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ArgError("not a number: '" + s + "'");
    return v;
}

std::vector<double> grid(const std::string& spec)
{
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ArgError("grid '" + spec + "' must be lo:hi:n");
        double lo = number(parts[0]), hi = number(parts[1]);
        double n = number(parts[2]);
        if (!(n >= 1.0) || n != std::floor(n) || !(lo <= hi)) throw ArgError("grid '" + spec + "' needs lo <= hi and integer n >= 1");
        int k = static_cast<int>(n);
        for (int i = 0; i < k; ++i) out.push_back(k == 1 ? lo : lo + (hi - lo) * i / (k - 1));
        return out;
    }
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    if (out.empty()) throw ArgError("empty grid");
    return out;
}

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ArgError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void row(const char* fmt, std::initializer_list<double> values)
    {
        std::string line;
        char buf[64];
        bool first = true;
        for (double v : values) {
            std::snprintf(buf, sizeof buf, fmt, v);
            if (!first) line += ',';
            line += buf;
            first = false;
        }
        stream() << line << '\n';
    }

private:
    std::ofstream file_;
};

struct FamilyArgs {
    std::string name = "kl";
    std::string alpha = "0", mu = "0";

    void add(CLI::App* app)
    {
        app->add_option("--family", name, "transform family: kl, iw or mf")
            ->check(CLI::IsMember({"kl", "iw", "mf"}));
        app->add_option("--alpha", alpha, "index Whittaker parameter alpha < 1/2");
        app->add_option("--mu", mu, "Mehler-Fock order 0 <= mu < 1");
    }
    TransformFamily family() const
    {
        TransformFamily f = parse_family(name, number(alpha), number(mu));
        f.validate();
        return f;
    }
};

int run_transform(const FamilyArgs& fa, const std::string& fexpr, const std::string& input, const std::string& taus,
                  const std::string& xs, const std::string& upper, const std::string& out_path)
{
    TransformFamily fam = fa.family();
    if (fexpr.empty() == input.empty()) throw ArgError("transform: give exactly one of --f or --input");
    Output out(out_path);
    std::function<double(double)> f;
    double lo = fam.lower(), hi = number(upper);
    GridFunction gf;
    if (!input.empty()) {
        gf = read_grid_csv_file(input);
        lo = std::max(lo, gf.front());
        hi = gf.back();
        f = [&gf](double y) { return gf(y); };
    } else {
        Expr e = Expr::parse(fexpr);
        f = e;
    }
    if (!(hi > lo)) throw ArgError("transform: upper limit must exceed the left endpoint");
    if (!xs.empty()) {
        TransformEngine eng(fam, lo, hi);
        SpectralTable tab = input.empty() ? eng.forward_table(f) : eng.forward_table(gf);
        out.stream() << "x,f,inverse_forward,abs_error\n";
        for (double x : grid(xs)) {
            double v = eng.inverse(tab, x), fx = f(x);
            out.row("%.15g", {x, fx, v, std::fabs(v - fx)});
        }
        return 0;
    }
    out.stream() << "tau,forward\n";
    for (double tau : grid(taus)) out.row("%.15g", {tau, forward(fam, f, tau, lo, hi)});
    return 0;
}

int run_heat(const FamilyArgs& fa, const std::string& ts, const std::string& xs, const std::string& ys, bool lebesgue,
             const std::string& out_path)
{
    TransformFamily fam = fa.family();
    auto tv = grid(ts), xv = grid(xs), yv = grid(ys);
    for (double x : xv)
        if (!fam.in_domain(x)) throw ArgError("heatkernel: x outside the family's domain");
    for (double y : yv)
        if (!fam.in_domain(y)) throw ArgError("heatkernel: y outside the family's domain");
    double tmin = *std::min_element(tv.begin(), tv.end());
    if (!(tmin > 0.0)) throw ArgError("heatkernel: t must be positive");
    SpectralEngine eng(fam, tmin);
    Output out(out_path);
    out.stream() << "t,x,y,p\n";
    for (double t : tv)
        for (double x : xv)
            for (double y : yv)
                out.row("%.15g", {t, x, y, eng.heat({fam, t, lebesgue ? Measure::WrtLebesgue : Measure::WrtR}, x, y)});
    return 0;
}

int run_yor(const FamilyArgs& fa, bool theta, const std::string& ts, const std::string& xs, bool both,
            const std::string& out_path)
{
    auto tv = grid(ts), xv = grid(xs);
    TransformFamily fam = fa.family();
    Output out(out_path);
    auto eval = [&](double t, double x, YorRepr r) { return theta ? yor_theta(t, x, r) : yor_generalized(fam, t, x, r); };
    if (both) {
        out.stream() << "t,x,spectral,elementary,rel_diff\n";
        for (double t : tv)
            for (double x : xv) {
                double s = eval(t, x, YorRepr::Spectral), e = eval(t, x, YorRepr::Elementary);
                out.row("%.15g", {t, x, s, e, std::fabs(s - e) / std::fabs(s)});
            }
    } else {
        out.stream() << "t,x,value\n";
        for (double t : tv)
            for (double x : xv) out.row("%.15g", {t, x, eval(t, x, YorRepr::Spectral)});
    }
    return 0;
}

struct SimArgs {
    std::string experiment = "fk";
    std::string t = "0.5", x0 = "1", y = "1", psi = "exp(-x)";
    long paths = 100000;
    int steps = 400;
    std::uint64_t seed = default_seed;
    std::string paths_out;
};

void mc_row(Output& out, const std::string& label, const MCEstimate& m, double ref)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.15g,%.15g,%.15g,%.15g,%ld,%d,%llu\n", label.c_str(), m.mean, m.std_error, ref,
                  m.z_score(ref), m.n_paths, m.n_steps, static_cast<unsigned long long>(m.seed));
    out.stream() << buf;
}

int run_simulate(const FamilyArgs& fa, const SimArgs& s, const std::string& out_path)
{
    if (s.paths < 2) throw ArgError("simulate: --paths must be at least 2");
    if (s.steps < 1) throw ArgError("simulate: --steps must be positive");
    double t = number(s.t), x0 = number(s.x0);
    if (!(t > 0.0)) throw ArgError("simulate: t must be positive");
    Output out(out_path);
    const char* header = "quantity,mc_mean,std_error,reference,z_score,paths,steps,seed\n";
    if (s.experiment == "bougerol") {
        BougerolCheck c = bougerol_check(t, x0, s.paths, s.steps, s.seed);
        out.stream() << header;
        mc_row(out, "bougerol_vs_elementary", c.lhs_mc, c.rhs_quad);
        mc_row(out, "bougerol_vs_spectral", c.lhs_mc, c.spectral_double);
        return 0;
    }
    if (s.experiment == "conditional") {
        ConditionalLaplaceCheck c = conditional_laplace_check(t, x0, number(s.y), s.paths, s.seed, s.steps);
        out.stream() << header;
        mc_row(out, "conditional_laplace", c.mc, c.closed);
        return 0;
    }
    if (s.experiment != "fk") throw ArgError("simulate: --experiment must be fk, bougerol or conditional");
    TransformFamily fam = fa.family();
    if (!fam.in_domain(x0)) throw ArgError("simulate: x0 outside the family's domain");
    if (!s.paths_out.empty()) {
        PathBundle b = fam.tag == FamilyTag::MehlerFock ? simulate_legendre_paths(x0, t, s.steps, 100, s.seed)
                                                        : simulate_gbm_paths(x0, t, s.steps, 100, s.seed);
        std::ofstream po(s.paths_out);
        if (!po) throw ArgError("cannot open '" + s.paths_out + "'");
        write_paths_csv(po, b);
    }
    Expr psi = Expr::parse(s.psi);
    auto run = mc_feynman_kac(fam, psi, t, x0, s.paths, s.steps, s.seed);
    SpectralEngine eng(fam, t);
    double ref = spectral_expectation(eng, psi, t, x0);
    out.stream() << header;
    mc_row(out, "feynman_kac_" + fam.name(), run.estimate, ref);
    if (run.step_warnings > 0)
        std::cerr << "warning: " << run.step_warnings << " steps had a drift increment above the stability bound\n";
    return 0;
}

struct ClassifyArgs {
    std::string op, p, q = "0", r, a, b, anchor;
};

int run_classify(const ClassifyArgs& c, const FamilyArgs& fa, bool mu_set, bool alpha_set)
{
    SLOperator op;
    std::string p_text = "p(x)";
    if (!c.op.empty()) {
        std::string spec = c.op;
        if (spec.find(':') == std::string::npos) {
            if (spec == "mf") spec += ":" + (mu_set ? fa.mu : std::string("0"));
            if (spec == "iw") spec += ":" + (alpha_set ? fa.alpha : std::string("0"));
        }
        op = builtin_operator(spec);
        p_text = spec.rfind("mf", 0) == 0 ? "(x^2-1)" : "x";
    } else {
        if (c.p.empty() || c.r.empty() || c.a.empty() || c.b.empty())
            throw ArgError("classify: give --op, or all of --p --r --a --b (and optionally --q)");
        op = operator_from_strings(c.p, c.q, c.r, number(c.a), number(c.b));
        p_text = "(" + c.p + ")";
    }
    double anchor;
    if (!c.anchor.empty()) {
        anchor = number(c.anchor);
    } else if (std::isfinite(op.a) && std::isfinite(op.b)) {
        anchor = 0.5 * (op.a + op.b);
    } else if (std::isfinite(op.a)) {
        anchor = op.a + 1.0;
    } else if (std::isfinite(op.b)) {
        anchor = op.b - 1.0;
    } else {
        anchor = 0.0;
    }
    int status = 0;
    for (Endpoint e : {Endpoint::A, Endpoint::B}) {
        BoundaryReport r = classify(op, e, anchor);
        std::string cond = r.classification == BoundaryClass::Undecided ? r.condition : boundary_condition(r, p_text);
        if (r.classification == BoundaryClass::Undecided) status = 1;
        char loc[32];
        if (std::isinf(r.location))
            std::snprintf(loc, sizeof loc, "%s", r.location > 0 ? "inf" : "-inf");
        else
            std::snprintf(loc, sizeof loc, "%.12g", r.location);
        std::cout << "endpoint " << loc << ": " << to_string(r.classification) << '\n'
                  << "  anchor " << anchor << '\n'
                  << "  scale integral: " << r.scale.describe() << '\n'
                  << "  I: " << r.I_value.describe() << '\n'
                  << "  J: " << r.J_value.describe() << '\n'
                  << "  r-mass: " << r.r_mass.describe() << '\n'
                  << "  boundary condition: " << cond << '\n';
    }
    return status;
}

int run_checks(const std::vector<std::string>& suites_in, const FamilyArgs& fa, bool family_set, bool alpha_set,
               bool mu_set, std::uint64_t seed, long paths, const std::string& out_path)
{
    std::vector<std::string> suites = suites_in;
    if (suites.size() == 1 && suites[0] == "all") suites = check_suite_names();
    CheckOptions opt;
    if (family_set) opt.family = parse_family(fa.name, 0.0, 0.0).tag;
    if (alpha_set) opt.alpha = number(fa.alpha);
    if (mu_set) opt.mu = number(fa.mu);
    opt.seed = seed;
    opt.n_paths = paths;
    if (paths < 2) throw ArgError("check: --paths must be at least 2");
    std::vector<CheckResult> all;
    for (const auto& s : suites) {
        auto r = run_check(s, opt);
        all.insert(all.end(), r.begin(), r.end());
    }
    Output out(out_path);
    out.stream() << checks_csv(all);
    return all_pass(all) ? 0 : 1;
}

}

int main(int argc, char** argv)
{
    CLI::App app{"ixs: index transforms, heat kernels, Yor integrals, diffusions and boundary classification"};
    app.require_subcommand(1);
    std::string out_path;

    FamilyArgs tf_fam;
    std::string tf_f, tf_input, tf_taus = "0.5:10:20", tf_xs, tf_upper = "60";
    auto* tf = app.add_subcommand("transform", "forward transform over a tau grid, or inverse of forward over an x grid");
    tf_fam.add(tf);
    tf->add_option("--f", tf_f, "function of x as an expression, e.g. 'x*exp(-x)'");
    tf->add_option("--input", tf_input, "two-column CSV file sampling the function");
    tf->add_option("--taus", tf_taus, "tau grid lo:hi:n or comma list");
    tf->add_option("--xs", tf_xs, "x grid; switches to inverse(forward(f)) output");
    tf->add_option("--upper", tf_upper, "upper integration limit for --f");
    tf->add_option("--out", out_path, "output CSV path (default stdout)");

    FamilyArgs hk_fam;
    std::string hk_t = "1", hk_x = "1", hk_y = "0.5:4:8";
    bool hk_leb = false;
    auto* hk = app.add_subcommand("heatkernel", "dump p(t,x,y) on a grid");
    hk_fam.add(hk);
    hk->add_option("--t", hk_t, "t grid");
    hk->add_option("--x", hk_x, "x grid");
    hk->add_option("--y", hk_y, "y grid");
    hk->add_flag("--lebesgue", hk_leb, "density with respect to dy instead of r(y)dy");
    hk->add_option("--out", out_path, "output CSV path (default stdout)");

    FamilyArgs y_fam;
    std::string y_t = "1", y_x = "1";
    bool y_both = false, y_theta = false;
    auto* yo = app.add_subcommand("yor", "generalized Yor integral surfaces");
    y_fam.add(yo);
    yo->add_flag("--theta", y_theta, "classical theta(t,x) instead of the family's generalized integral");
    yo->add_option("--t", y_t, "t grid");
    yo->add_option("--x", y_x, "x grid");
    yo->add_flag("--both", y_both, "print spectral and elementary representations");
    yo->add_option("--out", out_path, "output CSV path (default stdout)");

    FamilyArgs s_fam;
    SimArgs sim;
    auto* si = app.add_subcommand("simulate", "Monte Carlo runs with spectral or closed-form references");
    s_fam.add(si);
    si->add_option("--experiment", sim.experiment, "fk, bougerol or conditional");
    si->add_option("--t", sim.t, "horizon");
    si->add_option("--x0", sim.x0, "starting point (x for bougerol and conditional)");
    si->add_option("--y", sim.y, "bridge end point for conditional");
    si->add_option("--psi", sim.psi, "payoff expression in x for fk");
    si->add_option("--paths", sim.paths, "number of paths");
    si->add_option("--steps", sim.steps, "time steps");
    si->add_option("--seed", sim.seed, "RNG seed");
    si->add_option("--paths-out", sim.paths_out, "write up to 100 sample paths as CSV");
    si->add_option("--out", out_path, "output CSV path (default stdout)");

    FamilyArgs c_fam;
    ClassifyArgs cl;
    auto* cf = app.add_subcommand("classify", "Feller boundary classification");
    cf->add_option("--op", cl.op, "built-in operator: kl, iw[:alpha], mf[:mu]");
    cf->add_option("--alpha", c_fam.alpha, "alpha for --op iw");
    cf->add_option("--mu", c_fam.mu, "mu for --op mf");
    cf->add_option("--p", cl.p, "p(x) expression");
    cf->add_option("--q", cl.q, "q(x) expression");
    cf->add_option("--r", cl.r, "r(x) expression");
    cf->add_option("--a", cl.a, "left endpoint (may be -inf)");
    cf->add_option("--b", cl.b, "right endpoint (may be inf)");
    cf->add_option("--anchor", cl.anchor, "interior anchor point");

    FamilyArgs k_fam;
    std::vector<std::string> k_suites;
    std::uint64_t k_seed = default_seed;
    long k_paths = 100000;
    std::string suite_help = "suites: all";
    for (const auto& s : check_suite_names()) suite_help += ", " + s;
    auto* ck = app.add_subcommand("check", "run acceptance suites and print a pass/fail table");
    k_fam.add(ck);
    std::vector<std::string> allowed = check_suite_names();
    allowed.push_back("all");
    ck->add_option("suites", k_suites, suite_help)->required()->check(CLI::IsMember(allowed));
    ck->add_option("--seed", k_seed, "RNG seed");
    ck->add_option("--paths", k_paths, "Monte Carlo paths");
    ck->add_option("--out", out_path, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (tf->parsed()) return run_transform(tf_fam, tf_f, tf_input, tf_taus, tf_xs, tf_upper, out_path);
        if (hk->parsed()) return run_heat(hk_fam, hk_t, hk_x, hk_y, hk_leb, out_path);
        if (yo->parsed()) return run_yor(y_fam, y_theta, y_t, y_x, y_both, out_path);
        if (si->parsed()) return run_simulate(s_fam, sim, out_path);
        if (cf->parsed())
            return run_classify(cl, c_fam, cf->count("--mu") > 0, cf->count("--alpha") > 0);
        if (ck->parsed())
            return run_checks(k_suites, k_fam, ck->count("--family") > 0, ck->count("--alpha") > 0,
                              ck->count("--mu") > 0, k_seed, k_paths, out_path);
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
