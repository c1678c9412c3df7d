#include "ixs/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "ixs/specfun.hpp"

namespace ixs {

namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void check_sim_args(double x0, double t, int n_steps, long n_paths, double lower)
{
    if (!(x0 > lower)) throw std::domain_error("simulate: starting point outside the domain");
    if (!(t > 0.0)) throw std::domain_error("simulate: t must be positive");
    if (n_steps < 1) throw std::invalid_argument("simulate: n_steps must be at least 1");
    if (n_paths < 1) throw std::invalid_argument("simulate: n_paths must be at least 1");
}

constexpr double xi_floor = 1e-8;

double log_bessel_i_ratio(double mu, double z)
{
    if (z < 30.0) return std::log(std::cyl_bessel_i(mu, z) / std::cyl_bessel_i(0.0, z));
    double m = 4.0 * mu * mu;
    double a = 1.0, b = 1.0, ta = 1.0, tb = 1.0;
    for (int k = 1; k <= 10; ++k) {
        double odd = (2.0 * k - 1.0) * (2.0 * k - 1.0);
        ta *= -(m - odd) / (8.0 * k * z);
        tb *= -(0.0 - odd) / (8.0 * k * z);
        a += ta;
        b += tb;
    }
    return std::log(a / b);
}

double smooth_legendre_rate(double mu, double xi)
{
    if (xi < 1e-3) return mu * mu * (-1.0 / 3.0 + xi * xi / 15.0);
    double s = std::sinh(xi);
    return mu * mu * (1.0 / (s * s) - 1.0 / (xi * xi));
}

}

DiffusionSpec diffusion_spec(const TransformFamily& fam)
{
    SLOperator op = family_operator(fam);
    DiffusionSpec d;
    d.drift = [op](double x) { return op.dp(x) / op.r(x); };
    d.vol = [op](double x) { return std::sqrt(2.0 * op.p(x) / op.r(x)); };
    d.kill_rate = [op](double x) { return op.k(x); };
    d.a = op.a;
    d.b = op.b;
    d.coordinate = fam.tag == FamilyTag::MehlerFock ? Coordinate::AcoshForLegendre : Coordinate::LogForGBM;
    return d;
}

double MCEstimate::z_score(double reference) const
{
    if (std_error == 0.0) return mean == reference ? 0.0 : inf;
    return std::fabs(mean - reference) / std_error;
}

MCEstimate summarize(const std::vector<double>& samples, std::uint64_t seed, int n_steps)
{
    MCEstimate e;
    e.n_paths = static_cast<long>(samples.size());
    e.seed = seed;
    e.n_steps = n_steps;
    if (samples.empty()) return e;
    double n = static_cast<double>(samples.size());
    e.mean = pairwise_sum(samples.data(), samples.size()) / n;
    if (samples.size() > 1) {
        std::vector<double> dev(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) dev[i] = (samples[i] - e.mean) * (samples[i] - e.mean);
        double var = pairwise_sum(dev.data(), dev.size()) / (n - 1.0);
        e.std_error = std::sqrt(var / n);
    }
    return e;
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path) : gen_(splitmix64(splitmix64(seed) ^ splitmix64(~path))) {}

void gbm_path(double x0, double t, int n_steps, PathRng& rng, double* out)
{
    double sd = std::sqrt(2.0 * t / n_steps);
    double lx = std::log(x0);
    out[0] = x0;
    for (int j = 1; j <= n_steps; ++j) {
        lx += sd * rng.normal();
        out[j] = std::exp(lx);
    }
}

long legendre_path(double x0, double t, int n_steps, PathRng& rng, double* out)
{
    double dt = t / n_steps, sd = std::sqrt(2.0 * dt);
    double v1 = std::acosh(x0), v2 = 0.0;
    long warnings = 0;
    out[0] = x0;
    for (int j = 1; j <= n_steps; ++j) {
        double r = std::hypot(v1, v2);
        if (dt / std::tanh(std::max(r, xi_floor)) > 0.5) ++warnings;
        double b = r > 1e-4 ? (1.0 / std::tanh(r) - 1.0 / r) / r : 1.0 / 3.0 - r * r / 45.0;
        double z1 = rng.normal(), z2 = rng.normal();
        v1 += b * v1 * dt + sd * z1;
        v2 += b * v2 * dt + sd * z2;
        out[j] = std::cosh(std::max(std::hypot(v1, v2), xi_floor));
    }
    return warnings;
}

PathBundle simulate_gbm_paths(double x0, double t, int n_steps, long n_paths, std::uint64_t seed)
{
    check_sim_args(x0, t, n_steps, n_paths, 0.0);
    PathBundle b{t, n_steps, n_paths, 0, std::vector<double>(static_cast<size_t>(n_paths) * (n_steps + 1))};
    for (long p = 0; p < n_paths; ++p) {
        PathRng rng(seed, static_cast<std::uint64_t>(p));
        gbm_path(x0, t, n_steps, rng, b.x.data() + static_cast<size_t>(p) * (n_steps + 1));
    }
    return b;
}

PathBundle simulate_legendre_paths(double x0, double t, int n_steps, long n_paths, std::uint64_t seed)
{
    check_sim_args(x0, t, n_steps, n_paths, 1.0);
    PathBundle b{t, n_steps, n_paths, 0, std::vector<double>(static_cast<size_t>(n_paths) * (n_steps + 1))};
    for (long p = 0; p < n_paths; ++p) {
        PathRng rng(seed, static_cast<std::uint64_t>(p));
        b.step_warnings += legendre_path(x0, t, n_steps, rng, b.x.data() + static_cast<size_t>(p) * (n_steps + 1));
    }
    return b;
}

double trapezoid_functional(const double* path, int n_steps, double dt, const std::function<double(double)>& k)
{
    double s = 0.5 * (k(path[0]) + k(path[n_steps]));
    for (int j = 1; j < n_steps; ++j) s += k(path[j]);
    return s * dt;
}

double legendre_killing_functional(const double* path, int n_steps, double dt, double mu)
{
    if (mu == 0.0) return 0.0;
    double a = 0.0;
    double xi0 = std::acosh(path[0]);
    for (int j = 1; j <= n_steps; ++j) {
        double xi1 = std::acosh(path[j]);
        a -= log_bessel_i_ratio(mu, xi0 * xi1 / (2.0 * dt));
        a += 0.5 * dt * (smooth_legendre_rate(mu, xi0) + smooth_legendre_rate(mu, xi1));
        xi0 = xi1;
    }
    return a;
}

std::vector<double> additive_functional(const PathBundle& paths, const std::function<double(double)>& kill_rate)
{
    std::vector<double> a(static_cast<size_t>(paths.n_paths));
    for (long p = 0; p < paths.n_paths; ++p) a[p] = trapezoid_functional(paths.path(p), paths.n_steps, paths.dt(), kill_rate);
    return a;
}

void write_paths_csv(std::ostream& out, const PathBundle& paths, long max_paths)
{
    char buf[96];
    out << "path_id,t,x\n";
    long n = std::min(paths.n_paths, std::min<long>(max_paths, 100));
    for (long p = 0; p < n; ++p)
        for (int j = 0; j <= paths.n_steps; ++j) {
            std::snprintf(buf, sizeof buf, "%ld,%.15g,%.15g\n", p, j * paths.dt(), paths.at(p, j));
            out << buf;
        }
}

FeynmanKacRun mc_feynman_kac(const TransformFamily& fam, const std::function<double(double)>& psi, double t,
                             double x0, long n_paths, int n_steps, std::uint64_t seed, bool killing)
{
    fam.validate();
    check_sim_args(x0, t, n_steps, n_paths, fam.lower());
    DiffusionSpec d = diffusion_spec(fam);
    bool legendre = d.coordinate == Coordinate::AcoshForLegendre;
    std::vector<double> path(n_steps + 1), samples(static_cast<size_t>(n_paths));
    FeynmanKacRun run;
    double dt = t / n_steps;
    for (long p = 0; p < n_paths; ++p) {
        PathRng rng(seed, static_cast<std::uint64_t>(p));
        if (legendre)
            run.step_warnings += legendre_path(x0, t, n_steps, rng, path.data());
        else
            gbm_path(x0, t, n_steps, rng, path.data());
        double a = 0.0;
        if (killing)
            a = legendre ? legendre_killing_functional(path.data(), n_steps, dt, fam.mu)
                         : trapezoid_functional(path.data(), n_steps, dt, d.kill_rate);
        samples[p] = std::exp(-a) * psi(path[n_steps]);
    }
    run.estimate = summarize(samples, seed, n_steps);
    return run;
}

double spectral_expectation(SpectralEngine& eng, const std::function<double(double)>& psi, double t, double x0)
{
    SpaceGrid g = space_grid(eng.family(), x0, x0, t);
    eng.prefetch(g.x);
    std::vector<double> terms(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) terms[i] = g.w[i] * psi(g.x[i]) * eng.heat(t, x0, g.x[i]);
    return pairwise_sum(terms.data(), terms.size());
}

double bougerol_integral(double t, double x)
{
    if (!(t > 0.0 && x > 0.0)) throw std::domain_error("bougerol_integral: t and x must be positive");
    double ymax = std::sqrt(4.0 * t * 45.0);
    auto f = [&](double y) { return std::cos(x * std::sinh(y)) * std::exp(-y * y / (4.0 * t)); };
    QuadSpec s;
    s.rel_tol = 1e-12;
    s.abs_tol = 1e-16;
    s.max_nodes = 2000000;
    std::vector<double> parts;
    int panels = static_cast<int>(std::ceil(ymax / 0.25));
    for (int i = 0; i < panels; ++i) {
        QuadResult r = integrate(f, i * 0.25, (i + 1) * 0.25, s);
        parts.push_back(r.value);
    }
    return pairwise_sum(parts.data(), parts.size()) / std::sqrt(M_PI * t);
}

BougerolCheck bougerol_check(double t, double x, long n_paths, int n_steps, std::uint64_t seed)
{
    BougerolCheck c;
    c.rhs_quad = bougerol_integral(t, x);
    c.spectral_double = heat_mass(TransformFamily::kl(), t, x);
    c.lhs_mc = mc_feynman_kac(TransformFamily::kl(), [](double) { return 1.0; }, t, x, n_paths, n_steps, seed).estimate;
    return c;
}

double conditional_laplace_closed(double t, double x, double y)
{
    if (!(t > 0.0 && x > 0.0 && y > 0.0)) throw std::domain_error("conditional_laplace_closed: arguments must be positive");
    auto g = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        LogScaled k = bessel_k_im_scaled(tau, x, 1e-13) * bessel_k_im_scaled(tau, y, 1e-13);
        return k.scaled_value(-t * tau * tau) * tau * 0.5 * -std::expm1(-2.0 * M_PI * tau);
    };
    QuadSpec s;
    s.rel_tol = 1e-11;
    s.abs_tol = 1e-300;
    s.max_nodes = 400000;
    s.decay = {DecayKind::Gaussian, std::clamp(1.0 / std::sqrt(t), 1.0, 8.0)};
    QuadResult r = integrate(g, 0.0, inf, s);
    double d = std::log(y) - std::log(x);
    return 4.0 * std::sqrt(t) / std::pow(M_PI, 1.5) * std::exp(d * d / (4.0 * t)) * r.value;
}

ConditionalLaplaceCheck conditional_laplace_check(double t, double x, double y, long n_paths, std::uint64_t seed,
                                                  int n_steps)
{
    check_sim_args(x, t, n_steps, n_paths, 0.0);
    if (!(y > 0.0)) throw std::domain_error("conditional_laplace_check: y must be positive");
    ConditionalLaplaceCheck c;
    c.closed = conditional_laplace_closed(t, x, y);
    double dt = t / n_steps;
    double w_end = (std::log(y) - std::log(x)) / std::sqrt(2.0);
    std::vector<double> path(n_steps + 1), samples(static_cast<size_t>(n_paths));
    auto k = [](double v) { return v * v; };
    for (long p = 0; p < n_paths; ++p) {
        PathRng rng(seed, static_cast<std::uint64_t>(p));
        double w = 0.0;
        path[0] = x;
        for (int j = 1; j <= n_steps; ++j) {
            double remaining = t - (j - 1) * dt;
            double mean = w + (w_end - w) * dt / remaining;
            double var = dt * (remaining - dt) / remaining;
            w = j == n_steps ? w_end : mean + std::sqrt(var) * rng.normal();
            path[j] = x * std::exp(std::sqrt(2.0) * w);
        }
        samples[p] = std::exp(-trapezoid_functional(path.data(), n_steps, dt, k));
    }
    c.mc = summarize(samples, seed, n_steps);
    return c;
}

}
