#include "ixs/yor.hpp"

#include <algorithm>
#include <cmath>

#include "ixs/specfun.hpp"

namespace ixs {

namespace {

double log_sinh(double a)
{
    if (a > 20.0) return a - M_LN2 + std::log1p(-std::exp(-2.0 * a));
    return std::log(std::sinh(a));
}

void require_converged(const QuadResult& r, const char* what)
{
    if (!r.converged) throw NonConvergence(std::string(what) + ": quadrature did not converge");
}

QuadSpec tau_spec(double t)
{
    QuadSpec s;
    s.rel_tol = 1e-11;
    s.abs_tol = 1e-16;
    s.max_nodes = 400000;
    s.decay = {DecayKind::Gaussian, std::clamp(1.0 / std::sqrt(t), 1.0, 8.0)};
    return s;
}

double theta_spectral(double t, double x, QuadResult* info)
{
    auto g = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        LogScaled k = bessel_k_im_scaled(tau, x, 1e-13);
        double e = std::log(tau) + log_sinh(M_PI * tau) - 0.5 * M_PI * tau - 0.5 * tau * tau * t;
        return k.scaled_value(e) / (M_PI * M_PI);
    };
    QuadResult r = integrate(g, 0.0, inf, tau_spec(t));
    if (info) *info = r;
    require_converged(r, "yor_theta");
    return r.value;
}

double oscillatory_gaussian(const std::function<double(double)>& g, double omega, Oscillator kind, double t)
{
    QuadSpec s;
    s.rel_tol = 1e-13;
    s.abs_tol = 1e-18;
    s.max_nodes = 400000;
    s.decay = {DecayKind::Gaussian, std::sqrt(t)};
    QuadResult r = integrate_oscillatory(g, 0.0, inf, omega, kind, s);
    if (!std::isfinite(r.value) || r.err_estimate > 1e-9 * std::fabs(r.value))
        throw NonConvergence("oscillatory Yor integral did not converge");
    return r.value;
}

double theta_elementary(double t, double x)
{
    if (t < theta_elementary_min_t)
        throw NonConvergence("yor_theta: elementary representation is unreliable below t = 0.05");
    auto g = [&](double xi) { return std::exp(-xi * xi / (2.0 * t) - x * std::cosh(xi)) * std::sinh(xi); };
    double integral = oscillatory_gaussian(g, M_PI / t, Oscillator::Sin, t);
    return x * std::exp(M_PI * M_PI / (2.0 * t)) / std::sqrt(2.0 * M_PI * M_PI * M_PI * t) * integral;
}

double mf_elementary(double mu, double t, double x)
{
    if (t < theta_elementary_min_t)
        throw NonConvergence("yor_generalized: elementary representation is unreliable below t = 0.05");
    double a = mu + 0.5;
    auto h = [&](double xi) { return std::exp(-xi * xi / (4.0 * t) - a * std::log(x + std::cosh(xi))); };
    double omega = M_PI / (2.0 * t);
    double c = oscillatory_gaussian(h, omega, Oscillator::Cos, t);
    double s = oscillatory_gaussian([&](double xi) { return xi * h(xi); }, omega, Oscillator::Sin, t);
    double pre = std::pow(2.0 * t, -1.5) * std::tgamma(a) * std::pow(x * x - 1.0, 0.5 * mu)
        * std::exp(M_PI * M_PI / (4.0 * t) - 0.25 * t) / M_PI;
    return pre * (M_PI * c - s);
}

double generalized_spectral(const TransformFamily& fam, double t, double x, QuadResult* info)
{
    double w = yor_weight(fam);
    auto g = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        LogScaled v = eigenfunction_scaled(fam, tau, x, 1e-13) * spectral_density_scaled(fam, tau);
        return w * v.scaled_value(index_shift(fam, tau) - t * eigenvalue(fam, tau));
    };
    QuadResult r = integrate(g, 0.0, inf, tau_spec(t));
    if (info) *info = r;
    require_converged(r, "yor_generalized");
    return r.value;
}

}

double yor_theta(double t, double x, YorRepr repr, QuadResult* info)
{
    if (!(t > 0.0 && x > 0.0)) throw std::domain_error("yor_theta: t and x must be positive");
    if (repr == YorRepr::Elementary) return theta_elementary(t, x);
    return theta_spectral(t, x, info);
}

double yor_generalized(const TransformFamily& fam, double t, double x, YorRepr repr, QuadResult* info)
{
    fam.validate();
    if (!(t > 0.0)) throw std::domain_error("yor_generalized: t must be positive");
    if (!fam.in_domain(x)) throw std::domain_error("yor_generalized: x outside the family domain");
    if (repr == YorRepr::Spectral) return generalized_spectral(fam, t, x, info);
    switch (fam.tag) {
    case FamilyTag::KontorovichLebedev:
        return 2.0 * theta_elementary(2.0 * t, x);
    case FamilyTag::MehlerFock:
        return mf_elementary(fam.mu, t, x);
    case FamilyTag::IndexWhittaker:
        break;
    }
    throw UnsupportedRepresentation("yor_generalized: no elementary representation for the index Whittaker family");
}

double hartman_watson_density(double t, double x)
{
    if (!(t > 0.0 && x > 0.0)) throw std::domain_error("hartman_watson_density: t and x must be positive");
    double th = t >= 0.3 ? yor_theta(t, x, YorRepr::Elementary) : yor_theta(t, x, YorRepr::Spectral);
    return th / std::cyl_bessel_i(0.0, x);
}

HartmanWatsonMass hartman_watson_mass(double x, double t_head, double t_tail)
{
    if (!(x > 0.0)) throw std::domain_error("hartman_watson_mass: x must be positive");
    if (!(t_head > 0.0 && t_tail > t_head)) throw std::domain_error("hartman_watson_mass: need 0 < t_head < t_tail");
    HartmanWatsonMass m;
    m.t_head = t_head;
    m.t_tail = t_tail;
    double i0 = std::cyl_bessel_i(0.0, x);
    HeatOptions opt;
    opt.tau_panel = 1.0;
    SpectralEngine eng(TransformFamily::kl(), 0.5 * t_head, opt);
    auto theta = [&](double t) { return 0.5 * eng.yor(0.5 * t, x); };
    QuadSpec s;
    s.rel_tol = 1e-10;
    s.abs_tol = 1e-14;
    m.quad = integrate(theta, t_head, t_tail, s);
    require_converged(m.quad, "hartman_watson_mass");
    m.body = m.quad.value / i0;
    auto tail_integrand = [&](double tau) {
        if (tau <= 0.0) return 2.0 * M_PI * std::cyl_bessel_k(0.0, x) / (M_PI * M_PI);
        LogScaled k = bessel_k_im_scaled(tau, x, 1e-13);
        double e = log_sinh(M_PI * tau) - std::log(tau) - 0.5 * M_PI * tau - 0.5 * tau * tau * t_tail;
        return 2.0 * k.scaled_value(e) / (M_PI * M_PI);
    };
    QuadResult tr = integrate(tail_integrand, 0.0, inf, tau_spec(t_tail));
    require_converged(tr, "hartman_watson_mass tail");
    m.tail = tr.value / i0;
    m.head_bound = t_head * std::fabs(theta(t_head)) / i0;
    m.total = m.body + m.tail;
    return m;
}

double yor_pde_residual(SpectralEngine& eng, double t, double x, double h_t, double h_x)
{
    if (!(h_t > 0.0 && h_x > 0.0)) throw std::domain_error("yor_pde_residual: steps must be positive");
    if (!(t > 2.0 * h_t)) throw std::domain_error("yor_pde_residual: t must exceed 2 h_t");
    SLOperator op = family_operator(eng.family());
    double dt = (eng.yor(t + h_t, x) - eng.yor(t - h_t, x)) / (2.0 * h_t);
    double gen = op.generator([&](double z) { return eng.yor(t, z); }, x, h_x);
    return std::fabs(dt - gen) / (std::fabs(eng.yor(t, x)) + 1e-300);
}

double yor_pde_residual(const TransformFamily& fam, double t, double x, double h_t, double h_x)
{
    if (!(t > 2.0 * h_t)) throw std::domain_error("yor_pde_residual: t must exceed 2 h_t");
    SpectralEngine eng(fam, t - h_t);
    return yor_pde_residual(eng, t, x, h_t, h_x);
}

double evolution_residual(SpectralEngine& eng, double t, double s, double x)
{
    if (!(t > 0.0 && s > 0.0)) throw std::domain_error("evolution_residual: times must be positive");
    SpaceGrid g = space_grid(eng.family(), x, x, std::max(t, s));
    eng.prefetch(g.x);
    std::vector<double> terms(g.x.size());
    for (size_t i = 0; i < g.x.size(); ++i) terms[i] = g.w[i] * eng.heat(t, x, g.x[i]) * eng.yor(s, g.x[i]);
    return std::fabs(eng.yor(t + s, x) - pairwise_sum(terms.data(), terms.size()));
}

double evolution_residual(const TransformFamily& fam, double t, double s, double x)
{
    if (!(t > 0.0 && s > 0.0)) throw std::domain_error("evolution_residual: times must be positive");
    SpectralEngine eng(fam, std::min(t, s));
    return evolution_residual(eng, t, s, x);
}

}
