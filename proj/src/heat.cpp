#include "ixs/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ixs/specfun.hpp"

namespace ixs {

namespace {

bool log_coordinate(const TransformFamily& fam)
{
    return fam.tag != FamilyTag::MehlerFock;
}

double to_s(const TransformFamily& fam, double x)
{
    return log_coordinate(fam) ? std::log(x) : std::acosh(x);
}

void require_domain(const TransformFamily& fam, double x, const char* what)
{
    if (!fam.in_domain(x)) throw std::domain_error(std::string(what) + ": point outside the family domain");
}

}

double SLOperator::generator(const std::function<double(double)>& u, double x, double h) const
{
    if (!(x - 2.0 * h > a && x + 2.0 * h < b)) throw std::domain_error("generator: stencil leaves the interval");
    double um = u(x - h), u0 = u(x), up = u(x + h);
    double d1 = (up - um) / (2.0 * h);
    double d2 = (up - 2.0 * u0 + um) / (h * h);
    return (p(x) * d2 + dp(x) * d1 - q(x) * u0) / r(x);
}

bool SLOperator::standing_assumptions_hold(double x) const
{
    return p(x) > 0.0 && r(x) > 0.0 && q(x) >= 0.0;
}

SLOperator family_operator(const TransformFamily& fam)
{
    fam.validate();
    SLOperator op;
    op.family = fam;
    switch (fam.tag) {
    case FamilyTag::KontorovichLebedev:
        op.p = [](double x) { return x; };
        op.dp = [](double) { return 1.0; };
        op.q = [](double x) { return x; };
        op.r = [](double x) { return 1.0 / x; };
        break;
    case FamilyTag::IndexWhittaker: {
        double al = fam.alpha;
        op.p = [](double x) { return x; };
        op.dp = [](double) { return 1.0; };
        op.q = [al](double x) { return (x - al) * (x - al) / x; };
        op.r = [](double x) { return 1.0 / x; };
        break;
    }
    case FamilyTag::MehlerFock: {
        double mu = fam.mu;
        op.p = [](double x) { return x * x - 1.0; };
        op.dp = [](double x) { return 2.0 * x; };
        op.q = [mu](double x) { return mu * mu / (x * x - 1.0); };
        op.r = [](double) { return 1.0; };
        op.a = 1.0;
        break;
    }
    }
    return op;
}

SpectralEngine::SpectralEngine(const TransformFamily& fam, double t_min, const HeatOptions& opt)
    : fam_(fam), t_min_(t_min), opt_(opt)
{
    fam_.validate();
    if (!(t_min > 0.0)) throw std::domain_error("spectral engine: t_min must be positive");
    if (!(opt.tau_panel > 0.0)) throw std::invalid_argument("spectral engine: tau_panel must be positive");
    tau_cap_ = spectral_tau_max(t_min, opt.tau_tol);
    int panels = static_cast<int>(std::ceil(tau_cap_ / opt.tau_panel));
    PanelRule pr = panel_rule(0.0, panels * opt.tau_panel, panels);
    for (size_t i = 0; i < pr.size(); ++i) {
        double tau = pr.nodes[i];
        tau_.push_back(tau);
        lambda_.push_back(eigenvalue(fam_, tau));
        shift_.push_back(index_shift(fam_, tau));
        wrho_.push_back(pr.kronrod[i] * spectral_density_scaled(fam_, tau).value());
    }
}

void SpectralEngine::check_t(double t) const
{
    if (!(t >= t_min_ * (1.0 - 1e-12))) throw std::domain_error("spectral engine: t below the engine's t_min");
}

const std::vector<double>& SpectralEngine::phi(double x)
{
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
    require_domain(fam_, x, "spectral engine");
    std::vector<double> v(tau_.size());
    for (size_t i = 0; i < tau_.size(); ++i) v[i] = eigenfunction_scaled(fam_, tau_[i], x, opt_.kernel_tol).value();
    return cache_.emplace(x, std::move(v)).first->second;
}

void SpectralEngine::prefetch(const std::vector<double>& xs)
{
    std::vector<double> missing;
    for (double x : xs)
        if (!cache_.count(x)) missing.push_back(x);
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    if (missing.size() < 8) {
        for (double x : missing) phi(x);
        return;
    }
    for (double x : missing) require_domain(fam_, x, "spectral engine");
    std::vector<std::vector<double>> cols(missing.size(), std::vector<double>(tau_.size()));
    for (size_t i = 0; i < tau_.size(); ++i) {
        auto row = eigenfunction_row_scaled(fam_, tau_[i], missing, opt_.kernel_tol);
        for (size_t j = 0; j < missing.size(); ++j) cols[j][i] = row[j];
    }
    for (size_t j = 0; j < missing.size(); ++j) cache_.emplace(missing[j], std::move(cols[j]));
}

double SpectralEngine::heat(double t, double x, double y)
{
    check_t(t);
    const auto& a = phi(x);
    const auto& b = phi(y);
    std::vector<double> terms(tau_.size());
    for (size_t i = 0; i < tau_.size(); ++i) terms[i] = wrho_[i] * std::exp(-t * lambda_[i]) * a[i] * b[i];
    return pairwise_sum(terms.data(), terms.size());
}

double SpectralEngine::heat(const HeatKernelSpec& spec, double x, double y)
{
    double v = heat(spec.t, x, y);
    return spec.measure == Measure::WrtLebesgue ? v * operator_weight(fam_, y) : v;
}

double SpectralEngine::yor(double t, double x)
{
    check_t(t);
    const auto& a = phi(x);
    std::vector<double> terms(tau_.size());
    for (size_t i = 0; i < tau_.size(); ++i) terms[i] = wrho_[i] * std::exp(shift_[i] - t * lambda_[i]) * a[i];
    return yor_weight(fam_) * pairwise_sum(terms.data(), terms.size());
}

SpaceGrid space_grid(const TransformFamily& fam, double x, double y, double horizon)
{
    require_domain(fam, x, "space_grid");
    require_domain(fam, y, "space_grid");
    if (!(horizon > 0.0)) throw std::domain_error("space_grid: horizon must be positive");
    bool lg = log_coordinate(fam);
    double sx = to_s(fam, x), sy = to_s(fam, y);
    double spread = 10.0 * std::sqrt(horizon) + 0.5;
    double lo = std::floor((std::min(sx, sy) - spread) * 4.0) * 0.25;
    double hi = std::ceil((std::max(sx, sy) + spread + (lg ? 0.0 : 2.0 * horizon)) * 4.0) * 0.25;
    if (lg) hi = std::min(hi, std::ceil(std::log(std::max(x, y) + 40.0) * 4.0) * 0.25);
    std::vector<double> br;
    if (!lg && lo <= 0.0) {
        lo = 0.0;
        br.push_back(0.0);
        for (double d = 0.25 / 1024.0 / 1024.0 / 64.0; d < 0.25; d *= 2.0) br.push_back(d);
    } else {
        br.push_back(lo);
    }
    while (br.back() < hi) br.push_back(std::round(br.back() * 4.0 + 1.0) * 0.25);
    PanelRule pr = panel_rule(br);
    SpaceGrid g;
    for (size_t i = 0; i < pr.size(); ++i) {
        double s = pr.nodes[i];
        double xi = lg ? std::exp(s) : std::cosh(s);
        if (!fam.in_domain(xi)) continue;
        g.x.push_back(xi);
        g.w.push_back(pr.kronrod[i] * (lg ? 1.0 : std::sinh(s)));
    }
    return g;
}

double heat_kernel(const TransformFamily& fam, double t, double x, double y, Measure measure)
{
    return heat_kernel(HeatKernelSpec{fam, t, measure}, x, y);
}

double heat_kernel(const HeatKernelSpec& spec, double x, double y)
{
    if (!(spec.t > 0.0)) throw std::domain_error("heat_kernel: t must be positive");
    SpectralEngine eng(spec.family, spec.t);
    return eng.heat(spec, x, y);
}

double heat_mass(SpectralEngine& eng, double t, double x)
{
    SpaceGrid g = space_grid(eng.family(), x, x, t);
    eng.prefetch(g.x);
    std::vector<double> terms(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) terms[i] = g.w[i] * eng.heat(t, x, g.x[i]);
    return pairwise_sum(terms.data(), terms.size());
}

double heat_mass(const TransformFamily& fam, double t, double x)
{
    SpectralEngine eng(fam, t);
    return heat_mass(eng, t, x);
}

double chapman_kolmogorov_residual(SpectralEngine& eng, double t, double s, double x, double y)
{
    SpaceGrid g = space_grid(eng.family(), x, y, std::max(t, s));
    eng.prefetch(g.x);
    std::vector<double> terms(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) terms[i] = g.w[i] * eng.heat(t, x, g.x[i]) * eng.heat(s, g.x[i], y);
    return std::fabs(eng.heat(t + s, x, y) - pairwise_sum(terms.data(), terms.size()));
}

double chapman_kolmogorov_residual(const TransformFamily& fam, double t, double s, double x, double y)
{
    if (!(t > 0.0 && s > 0.0)) throw std::domain_error("chapman_kolmogorov_residual: times must be positive");
    SpectralEngine eng(fam, std::min(t, s));
    return chapman_kolmogorov_residual(eng, t, s, x, y);
}

double pde_residual(SpectralEngine& eng, double t, double x, double y, double h_t, double h_x)
{
    if (!(h_t > 0.0 && h_x > 0.0)) throw std::domain_error("pde_residual: steps must be positive");
    if (!(t > 2.0 * h_t)) throw std::domain_error("pde_residual: t must exceed 2 h_t");
    SLOperator op = family_operator(eng.family());
    double dt = (eng.heat(t + h_t, x, y) - eng.heat(t - h_t, x, y)) / (2.0 * h_t);
    double gen = op.generator([&](double z) { return eng.heat(t, z, y); }, x, h_x);
    double p0 = eng.heat(t, x, y);
    return std::fabs(dt - gen) / (std::fabs(p0) + 1e-300);
}

double pde_residual(const TransformFamily& fam, double t, double x, double y, double h_t, double h_x)
{
    if (!(t > 2.0 * h_t)) throw std::domain_error("pde_residual: t must exceed 2 h_t");
    SpectralEngine eng(fam, t - h_t);
    return pde_residual(eng, t, x, y, h_t, h_x);
}

double resolvent_kernel(const TransformFamily& fam, double lambda, double x, double y)
{
    fam.validate();
    if (!(lambda < 0.0)) throw std::domain_error("resolvent_kernel: lambda must be negative");
    require_domain(fam, x, "resolvent_kernel");
    require_domain(fam, y, "resolvent_kernel");
    double lo = std::min(x, y), hi = std::max(x, y);
    switch (fam.tag) {
    case FamilyTag::KontorovichLebedev: {
        double sigma = std::sqrt(-lambda);
        return bessel_i(sigma, lo) * bessel_k(sigma, hi);
    }
    case FamilyTag::IndexWhittaker: {
        double al = fam.alpha, eta = std::sqrt(al * al - lambda);
        double c = std::exp(std::lgamma(0.5 - al + eta) - std::lgamma(1.0 + 2.0 * eta));
        return c * whittaker_m(al, eta, 2.0 * lo) * whittaker_w(al, eta, 2.0 * hi) / (2.0 * std::sqrt(x * y));
    }
    case FamilyTag::MehlerFock: {
        double nu = -0.5 + std::sqrt(0.25 - lambda);
        return std::exp(std::lgamma(nu + fam.mu + 1.0)) * legendre_p(fam.mu, nu, lo) * legendre_q(fam.mu, nu, hi);
    }
    }
    return 0.0;
}

double LaplaceCheck::rel_error() const
{
    return std::fabs(laplace - resolvent) / std::fabs(resolvent);
}

LaplaceCheck resolvent_laplace_check(const TransformFamily& fam, double lambda, double x, double y)
{
    LaplaceCheck c;
    c.resolvent = resolvent_kernel(fam, lambda, x, y);
    double d = std::fabs(to_s(fam, x) - to_s(fam, y));
    if (!(d > 0.3)) throw std::domain_error("resolvent_laplace_check: points must be separated");
    c.t0 = d * d / 80.0;
    SpectralEngine eng(fam, c.t0);
    QuadSpec spec;
    spec.rel_tol = 1e-9;
    spec.abs_tol = 1e-300;
    spec.decay = {DecayKind::Exponential, -lambda};
    c.quad = integrate([&](double t) { return std::exp(lambda * t) * eng.heat(t, x, y); }, c.t0, inf, spec);
    c.laplace = c.quad.value;
    c.head_bound = c.t0 * std::fabs(eng.heat(c.t0, x, y));
    return c;
}

double monotonicity_gap(const TransformFamily& first, const TransformFamily& second, double t, double x, double y)
{
    if (first.tag != second.tag || first.tag == FamilyTag::KontorovichLebedev)
        throw std::invalid_argument("monotonicity_gap: needs two MF or two IW families");
    if (first.tag == FamilyTag::MehlerFock && !(first.mu <= second.mu))
        throw std::invalid_argument("monotonicity_gap: MF requires mu1 <= mu2");
    if (first.tag == FamilyTag::IndexWhittaker && !(second.alpha <= first.alpha && first.alpha <= 0.0))
        throw std::invalid_argument("monotonicity_gap: IW requires alpha2 <= alpha1 <= 0");
    SpectralEngine a(first, t), b(second, t);
    return a.heat(t, x, y) - b.heat(t, x, y);
}

double mf_half_closed_form(double t, double x, double y)
{
    if (!(t > 0.0 && x > 1.0 && y > 1.0)) throw std::domain_error("mf_half_closed_form: invalid arguments");
    double xi = std::acosh(x), chi = std::acosh(y);
    double e = -0.25 * t - (xi - chi) * (xi - chi) / (4.0 * t);
    double s = 0.5 * std::exp(e) * -std::expm1(-xi * chi / t);
    return s / std::sqrt(M_PI * t * std::sinh(xi) * std::sinh(chi));
}

}
