#include "ixs/family.hpp"

#include <cmath>
#include <stdexcept>

namespace ixs {

TransformFamily TransformFamily::kl()
{
    return {FamilyTag::KontorovichLebedev, 0.0, 0.0};
}

TransformFamily TransformFamily::iw(double alpha)
{
    TransformFamily f{FamilyTag::IndexWhittaker, alpha, 0.0};
    f.validate();
    return f;
}

TransformFamily TransformFamily::mf(double mu)
{
    TransformFamily f{FamilyTag::MehlerFock, 0.0, mu};
    f.validate();
    return f;
}

void TransformFamily::validate() const
{
    if (tag == FamilyTag::IndexWhittaker && !(alpha < 0.5)) throw std::invalid_argument("index Whittaker requires alpha < 1/2");
    if (tag == FamilyTag::MehlerFock && !(mu >= 0.0 && mu < 1.0)) throw std::invalid_argument("Mehler-Fock requires 0 <= mu < 1");
}

double TransformFamily::lower() const
{
    return tag == FamilyTag::MehlerFock ? 1.0 : 0.0;
}

bool TransformFamily::in_domain(double x) const
{
    return x > lower() && std::isfinite(x);
}

std::string TransformFamily::name() const
{
    char buf[64];
    switch (tag) {
    case FamilyTag::KontorovichLebedev:
        return "kl";
    case FamilyTag::IndexWhittaker:
        std::snprintf(buf, sizeof buf, "iw(alpha=%g)", alpha);
        return buf;
    case FamilyTag::MehlerFock:
        std::snprintf(buf, sizeof buf, "mf(mu=%g)", mu);
        return buf;
    }
    return "?";
}

TransformFamily parse_family(const std::string& name, double alpha, double mu)
{
    if (name == "kl") return TransformFamily::kl();
    if (name == "iw") return TransformFamily::iw(alpha);
    if (name == "mf") return TransformFamily::mf(mu);
    throw std::invalid_argument("unknown family '" + name + "' (expected kl, iw or mf)");
}

double eigenvalue(const TransformFamily& fam, double tau)
{
    switch (fam.tag) {
    case FamilyTag::KontorovichLebedev:
        return tau * tau;
    case FamilyTag::IndexWhittaker:
        return tau * tau + fam.alpha * fam.alpha;
    case FamilyTag::MehlerFock:
        return tau * tau + 0.25;
    }
    return 0.0;
}

double reference_weight(const TransformFamily& fam, double y)
{
    switch (fam.tag) {
    case FamilyTag::KontorovichLebedev:
        return 1.0 / y;
    case FamilyTag::IndexWhittaker:
        return 1.0 / (y * y);
    case FamilyTag::MehlerFock:
        return 1.0;
    }
    return 0.0;
}

double operator_weight(const TransformFamily& fam, double y)
{
    return fam.tag == FamilyTag::MehlerFock ? 1.0 : 1.0 / y;
}

double index_shift(const TransformFamily& fam, double tau)
{
    return fam.tag == FamilyTag::MehlerFock ? 0.0 : 0.5 * M_PI * tau;
}

namespace {

double log_sinh(double a)
{
    if (a > 20.0) return a - M_LN2 + std::log1p(-std::exp(-2.0 * a));
    return std::log(std::sinh(a));
}

}

LogScaled spectral_density_log(const TransformFamily& fam, double tau)
{
    if (tau < 0.0) throw std::domain_error("spectral density requires tau >= 0");
    if (tau == 0.0) return {};
    double lt = std::log(tau);
    switch (fam.tag) {
    case FamilyTag::KontorovichLebedev:
        return {1, std::log(2.0 / (M_PI * M_PI)) + lt + log_sinh(M_PI * tau)};
    case FamilyTag::IndexWhittaker:
        return {1, -2.0 * std::log(M_PI) + lt + log_sinh(2.0 * M_PI * tau) + log_gamma_abs2(0.5 - fam.alpha, tau)};
    case FamilyTag::MehlerFock:
        return {1, -std::log(M_PI) + lt + log_sinh(M_PI * tau) + log_gamma_abs2(0.5 + fam.mu, tau)};
    }
    return {};
}

double spectral_density(const TransformFamily& fam, double tau)
{
    return spectral_density_log(fam, tau).value();
}

LogScaled spectral_density_scaled(const TransformFamily& fam, double tau)
{
    return spectral_density_log(fam, tau).scale_exp(-2.0 * index_shift(fam, tau));
}

LogScaled kernel_scaled(const TransformFamily& fam, double tau, double y, double rel_tol, EvalInfo* info)
{
    switch (fam.tag) {
    case FamilyTag::KontorovichLebedev:
        return bessel_k_im_scaled(tau, y, rel_tol, info);
    case FamilyTag::IndexWhittaker:
        return whittaker_w_im_scaled(fam.alpha, tau, y, rel_tol, info);
    case FamilyTag::MehlerFock:
        return LogScaled::from(legendre_p_im(fam.mu, tau, y, rel_tol, info));
    }
    return {};
}

double kernel(const TransformFamily& fam, double tau, double y, double rel_tol)
{
    return kernel_scaled(fam, tau, y, rel_tol).scaled_value(-index_shift(fam, tau));
}

std::vector<double> kernel_row_scaled(const TransformFamily& fam, double tau, const std::vector<double>& ys, double rel_tol)
{
    if (fam.tag == FamilyTag::MehlerFock) return legendre_p_im_many(fam.mu, tau, ys);
    std::vector<double> row(ys.size());
    for (size_t j = 0; j < ys.size(); ++j) row[j] = kernel_scaled(fam, tau, ys[j], rel_tol).value();
    return row;
}

LogScaled eigenfunction_scaled(const TransformFamily& fam, double tau, double x, double rel_tol, EvalInfo* info)
{
    if (fam.tag == FamilyTag::IndexWhittaker)
        return whittaker_w_im_scaled(fam.alpha, tau, 2.0 * x, rel_tol, info).scale_exp(-0.5 * std::log(2.0 * x));
    return kernel_scaled(fam, tau, x, rel_tol, info);
}

std::vector<double> eigenfunction_row_scaled(const TransformFamily& fam, double tau, const std::vector<double>& xs,
                                             double rel_tol)
{
    if (fam.tag != FamilyTag::IndexWhittaker) return kernel_row_scaled(fam, tau, xs, rel_tol);
    std::vector<double> z(xs.size());
    for (size_t j = 0; j < xs.size(); ++j) z[j] = 2.0 * xs[j];
    auto row = kernel_row_scaled(fam, tau, z, rel_tol);
    for (size_t j = 0; j < xs.size(); ++j) row[j] /= std::sqrt(z[j]);
    return row;
}

double yor_weight(const TransformFamily& fam)
{
    return fam.tag == FamilyTag::IndexWhittaker ? 1.0 / std::sqrt(M_PI) : 1.0;
}

}
