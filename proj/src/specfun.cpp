#include "ixs/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/numeric/odeint.hpp>

#include "ixs/gk.hpp"
#include "ixs/quad.hpp"

namespace ixs {

using cplx = std::complex<double>;

namespace {

constexpr double half_log_2pi = 0.91893853320467274178;
const cplx I1{0.0, 1.0};

void require(bool ok, const char* msg)
{
    if (!ok) throw std::domain_error(msg);
}

struct Tracker {
    double err = 0.0;
    long nodes = 0;
    bool ok = true;
    template <class T>
    T take(const gk::Outcome<T>& o)
    {
        err += o.err;
        nodes += o.nodes;
        ok = ok && o.converged;
        return o.value;
    }
};

void report(EvalInfo* info, const Tracker& tr, double value, double rel_tol)
{
    if (!info) return;
    info->err_estimate = tr.err;
    info->nodes = tr.nodes;
    info->accurate = tr.ok && tr.err <= std::max(rel_tol * std::fabs(value), 1e-300) * 10.0;
}

double x_over_sinh(double s)
{
    if (std::fabs(s) < 0.05) {
        double s2 = s * s;
        return 1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0 - 31.0 * s2 * s2 * s2 / 15120.0;
    }
    return s / std::sinh(s);
}

double x_over_sinh_prime(double s)
{
    if (std::fabs(s) < 0.05) {
        double s2 = s * s;
        return -s / 3.0 + 7.0 * s * s2 / 90.0 - 31.0 * s * s2 * s2 / 2520.0;
    }
    double sh = std::sinh(s);
    return (sh - s * std::cosh(s)) / (sh * sh);
}

double solve_turning(double tau, double x)
{
    double s = std::acosh(tau / x) + 1.0;
    for (int i = 0; i < 200; ++i) {
        double f = x * std::sinh(s) - tau * s;
        double d = x * std::cosh(s) - tau;
        double next = s - f / d;
        if (!(next > 0.0)) next = 0.5 * s;
        if (std::fabs(next - s) < 1e-15 * s) return next;
        s = next;
    }
    return s;
}

template <class F>
double monotone_root(F&& f, double lo, double hi, double target)
{
    double flo = f(lo) - target;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid) - target;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

template <class F>
double decay_end(F&& logmag, double start, double floor)
{
    double step = 0.25;
    double s = start + step;
    for (int i = 0; i < 200; ++i) {
        if (logmag(s) < floor) return s;
        step *= 1.5;
        s += step;
    }
    return s;
}

}

cplx log_gamma(cplx z)
{
    static const double g = 7.0;
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    cplx shift{};
    while (z.real() < 0.5) {
        shift -= std::log(z);
        z += 1.0;
    }
    cplx w = z - 1.0;
    cplx a = coef[0];
    for (int k = 1; k < 9; ++k) a += coef[k] / (w + static_cast<double>(k));
    cplx t = w + g + 0.5;
    return shift + half_log_2pi + (w + 0.5) * std::log(t) - t + std::log(a);
}

double log_gamma_abs2(double a, double tau)
{
    require(a > 0.0, "gamma_abs2: a must be positive");
    return 2.0 * log_gamma(cplx(a, tau)).real();
}

double gamma_abs2(double a, double tau)
{
    return std::exp(log_gamma_abs2(a, tau));
}

LogScaled bessel_k_im_integral_scaled(double tau, double x, double rel_tol, EvalInfo* info)
{
    require(x > 0.0 && std::isfinite(x), "bessel_k_im: x must be positive");
    require(std::isfinite(tau), "bessel_k_im: tau must be finite");
    tau = std::fabs(tau);
    const double floor = std::log(rel_tol) - 25.0;
    auto expo = [&](double s) {
        double g = tau / x * x_over_sinh(s);
        g = std::min(g, 1.0);
        double sig = std::asin(g);
        double c = std::sqrt((1.0 - g) * (1.0 + g));
        return -x * std::cosh(s) * c - tau * sig + 0.5 * M_PI * tau;
    };
    Tracker tr;
    const double sub = rel_tol * 0.05;
    if (tau <= x) {
        double e0 = expo(0.0);
        double end = decay_end([&](double s) { return expo(s) - e0; }, 0.0, floor);
        auto f = [&](double s) { return std::exp(expo(s) - e0); };
        double v = tr.take(gk::adaptive<double>(f, 0.0, end, sub, 0.0, 400000, 2));
        LogScaled out{1, e0 + std::log(v)};
        report(info, tr, v, rel_tol);
        if (info) info->err_estimate *= std::exp(e0);
        return out;
    }

    double s1 = solve_turning(tau, x);
    double sc = std::acosh(tau / x);
    auto phase = [&](double s) { return tau * s - x * std::sinh(s); };
    double peak = phase(sc);
    std::vector<double> br{0.0};
    int nk = static_cast<int>(std::floor(peak / M_PI));
    for (int k = 1; k <= nk; ++k) br.push_back(monotone_root(phase, 0.0, sc, k * M_PI));
    br.push_back(sc);
    for (int k = nk; k >= 1; --k) br.push_back(monotone_root(phase, sc, s1, k * M_PI));
    br.push_back(s1);
    std::vector<double> clean;
    for (double b : br)
        if (clean.empty() || b > clean.back()) clean.push_back(b);
    clean.back() = s1;

    double envelope = std::min(1.0, std::sqrt(2.0 * M_PI / std::sqrt(tau * tau - x * x)));
    double abs_target = sub * envelope / static_cast<double>(clean.size());
    auto osc = [&](double s) { return std::cos(phase(s)); };
    std::vector<double> pieces;
    for (size_t i = 0; i + 1 < clean.size(); ++i)
        pieces.push_back(tr.take(gk::adaptive<double>(osc, clean[i], clean[i + 1], 0.0, abs_target, 100000)));
    double osc_total = 0.0;
    for (double p : pieces) osc_total += p;

    double wend = std::sqrt(decay_end([&](double s) { return expo(s); }, s1, floor) - s1);
    auto desc = [&](double w) {
        double s = s1 + w * w;
        return std::exp(expo(s)) * 2.0 * w;
    };
    double d = tr.take(gk::adaptive<double>(desc, 0.0, wend, 0.0, sub * envelope, 200000, 2));
    double v = osc_total + d;
    report(info, tr, v, rel_tol);
    return LogScaled::from(v);
}


double bessel_k_im(double tau, double x, double rel_tol, EvalInfo* info)
{
    return bessel_k_im_scaled(tau, x, rel_tol, info).scaled_value(-0.5 * M_PI * std::fabs(tau));
}

double bessel_k_im_direct(double tau, double x, double rel_tol)
{
    require(x > 0.0, "bessel_k_im_direct: x must be positive");
    double end = std::acosh(std::max(1.0, (std::log(1.0 / rel_tol) + 45.0) / x + 1.0));
    int panels = static_cast<int>(std::ceil(std::fabs(tau) * end / M_PI)) + 1;
    auto f = [&](double u) { return std::exp(-x * (std::cosh(u) - 1.0)) * std::cos(tau * u); };
    auto o = gk::adaptive<double>(f, 0.0, end, rel_tol * 0.1, 1e-300, 2000000, panels);
    return o.value * std::exp(-x);
}

double bessel_k(double nu, double x)
{
    require(x > 0.0, "bessel_k: x must be positive");
    nu = std::fabs(nu);
    auto lm = [&](double u) { return -x * (std::cosh(u) - 1.0) + nu * u; };
    double end = decay_end(lm, 0.0, -45.0 + std::max(0.0, lm(std::asinh(nu / x))));
    auto f = [&](double u) { return std::exp(-x * (std::cosh(u) - 1.0)) * std::cosh(nu * u); };
    auto o = gk::adaptive<double>(f, 0.0, end, 1e-14, 0.0, 200000, 2);
    return o.value * std::exp(-x);
}

double bessel_i(double nu, double x)
{
    require(x > 0.0, "bessel_i: x must be positive");
    require(nu >= 0.0, "bessel_i: nu must be nonnegative");
    if (x > std::max(30.0, 1.5 * nu * nu)) {
        double mu4 = 4.0 * nu * nu;
        double sum = 1.0, term = 1.0;
        for (int k = 1; k < 200; ++k) {
            double next = -term * (mu4 - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
            if (std::fabs(next) > std::fabs(term)) break;
            term = next;
            sum += term;
            if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
        }
        return std::exp(x - 0.5 * std::log(2.0 * M_PI * x)) * sum;
    }
    double q = 0.25 * x * x;
    double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
    double sum = term;
    for (int k = 0; k < 1000; ++k) {
        term *= q / ((k + 1.0) * (k + 1.0 + nu));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

namespace {

struct SeriesTables {
    std::array<double, 41> ls{}, lt{}, cs{};
    SeriesTables()
    {
        for (int k = 1; k <= 40; ++k) {
            double b = boost::math::bernoulli_b2n<double>(k);
            double f2k = boost::math::factorial<double>(2 * k);
            double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            ls[k] = sgn * std::pow(2.0, 2 * k - 1) * b / (k * f2k);
            lt[k] = -sgn * std::pow(2.0, 2 * k) * (std::pow(2.0, 2 * k - 1) - 1.0) * b / (k * f2k) / std::pow(4.0, k);
            cs[k] = sgn / f2k;
        }
        cs[0] = 1.0;
    }
};

const SeriesTables& series_tables()
{
    static const SeriesTables t;
    return t;
}

cplx vertical_series(double alpha, double tau, double x, double delta, double m)
{
    const auto& tb = series_tables();
    constexpr int n = 40;
    std::array<cplx, n + 1> e{}, g{};
    e[0] = -x - m;
    for (int k = 1; k <= n; ++k) e[k] = -x * tb.cs[k] + 2.0 * I1 * tau * tb.ls[k] - 2.0 * alpha * tb.lt[k];
    g[0] = std::exp(e[0]);
    for (int j = 1; j <= n; ++j) {
        cplx acc{};
        for (int k = 1; k <= j; ++k) acc += static_cast<double>(k) * e[k] * g[j - k];
        g[j] = acc / static_cast<double>(j);
    }
    cplx beta(-2.0 * alpha, 2.0 * tau);
    double ld = std::log(delta);
    cplx sum{};
    double d2 = delta * delta, pw = 1.0;
    for (int j = 0; j <= n; ++j) {
        cplx p = beta + (2.0 * j + 1.0);
        cplx term = g[j] * pw / p;
        sum += term;
        pw *= d2;
        if (j > 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::pow(2.0, 2.0 * alpha) * std::exp((beta + 1.0) * ld) * sum;
}

}

LogScaled whittaker_w_im_integral_scaled(double alpha, double tau, double z, double rel_tol, EvalInfo* info)
{
    require(z > 0.0 && std::isfinite(z), "whittaker_w_im: x must be positive");
    require(alpha < 0.5, "whittaker_w_im: alpha must be below 1/2");
    require(std::isfinite(tau), "whittaker_w_im: tau must be finite");
    tau = std::fabs(tau);
    if (tau == 0.0) {
        double v = whittaker_w(alpha, 0.0, z);
        if (info) *info = EvalInfo{};
        return LogScaled::from(v);
    }
    const double x = 0.5 * z;
    const double T = 2.0 * tau;
    const double sub = rel_tol * 0.05;
    double S = 0.0, sig0;
    if (T > x) {
        S = solve_turning(T, x);
        sig0 = 0.5 * M_PI;
    } else {
        sig0 = std::asin(T / x);
    }
    const double m = -x * std::cos(sig0);
    const cplx vert_factor = I1 * std::exp(cplx(0.0, -M_PI * alpha));
    Tracker tr;
    cplx J{};

    double delta = std::min({0.25, 1.0 / std::sqrt(1.0 + tau + x), sig0});
    J += vert_factor * vertical_series(alpha, tau, x, delta, m);

    if (sig0 > delta * (1.0 + 1e-12)) {
        auto f = [&](double l) {
            double v = std::exp(l);
            double lr = -x * std::cos(v) - m - 2.0 * alpha * std::log(std::tan(0.5 * v)) + l;
            return std::exp(cplx(lr, 2.0 * tau * std::log(std::sin(v))));
        };
        double a = std::log(delta), b = std::log(sig0);
        double tv = 2.0 * tau * std::fabs(std::log(std::sin(sig0) / std::sin(delta)));
        int panels = static_cast<int>(std::ceil(tv / M_PI)) + 1;
        J += vert_factor * tr.take(gk::adaptive<cplx>(f, a, b, 0.0, sub, 400000, panels));
    }

    if (S > 0.0) {
        auto psi = [&](double s) {
            return T * std::log(std::cosh(s)) - x * std::sinh(s) - 2.0 * alpha * std::atan2(1.0, std::sinh(s));
        };
        int samples = 64 + static_cast<int>(std::ceil(2.0 * T * S));
        std::vector<double> br{0.0};
        double acc = 0.0, prev = psi(0.0);
        for (int i = 1; i <= samples; ++i) {
            double s = S * i / samples;
            double cur = psi(s);
            acc += std::fabs(cur - prev);
            prev = cur;
            if (acc >= M_PI && i < samples) {
                br.push_back(s);
                acc = 0.0;
            }
        }
        br.push_back(S);
        double target = sub / static_cast<double>(br.size());
        auto f = [&](double s) { return std::exp(cplx(-m, psi(s))); };
        for (size_t i = 0; i + 1 < br.size(); ++i)
            J += tr.take(gk::adaptive<cplx>(f, br[i], br[i + 1], 0.0, target, 100000));
    }

    auto sigma_of = [&](double s, double& dsig) {
        double g = T / x * x_over_sinh(s);
        double gp = T / x * x_over_sinh_prime(s);
        if (g >= 1.0) {
            dsig = 0.0;
            return 0.5 * M_PI;
        }
        double c = std::sqrt((1.0 - g) * (1.0 + g));
        dsig = gp / c;
        return std::asin(g);
    };
    auto h = [&](cplx u) {
        return -x * std::cosh(u) + 2.0 * I1 * tau * std::log(std::sinh(u)) - 2.0 * alpha * std::log(std::tanh(0.5 * u)) +
               M_PI * tau - m;
    };
    auto desc = [&](double w) {
        double s = S + w * w;
        double dsig;
        double sig = sigma_of(s, dsig);
        cplx u(s, sig);
        return std::exp(h(u)) * cplx(1.0, dsig) * (2.0 * w);
    };
    auto desc_log = [&](double s) {
        double d;
        double sig = sigma_of(s, d);
        return h(cplx(s, sig)).real();
    };
    double send = decay_end(desc_log, S, std::log(rel_tol) - 30.0);
    double wend = std::sqrt(send - S);
    {
        int samples = 64;
        double tv = 0.0;
        cplx prev = desc(wend * 1e-3);
        for (int i = 1; i <= samples; ++i) {
            cplx cur = desc(wend * i / samples);
            if (std::abs(prev) > 0.0 && std::abs(cur) > 0.0) tv += std::fabs(std::arg(cur / prev));
            prev = cur;
        }
        int panels = static_cast<int>(std::ceil(tv / 2.0)) + 2;
        J += tr.take(gk::adaptive<cplx>(desc, 0.0, wend, 0.0, sub, 400000, panels));
    }

    cplx lg = log_gamma(cplx(0.5 - alpha, tau));
    cplx pref = -lg + I1 * tau * std::log(0.5 * x) - 0.5 * M_PI * tau;
    cplx core = std::exp(cplx(0.0, pref.imag())) * J;
    double lr = pref.real() + m + 0.5 * std::log(2.0 * x);
    double v = core.real();
    if (info) {
        double scale = std::exp(lr);
        info->err_estimate = tr.err * scale;
        info->nodes = tr.nodes;
        info->accurate = tr.ok && tr.err <= std::max(rel_tol * std::fabs(v), 1e-300) * 10.0;
    }
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::fabs(v)) + lr};
}

double whittaker_w_im(double alpha, double tau, double x, double rel_tol, EvalInfo* info)
{
    return whittaker_w_im_scaled(alpha, tau, x, rel_tol, info).scaled_value(-0.5 * M_PI * std::fabs(tau));
}

cplx whittaker_w_im_direct(double alpha, double tau, double z, double rel_tol)
{
    require(z > 0.0 && alpha < 0.5, "whittaker_w_im_direct: invalid parameters");
    double x = 0.5 * z;
    double lo = std::max(-700.0, -42.0 / (0.5 - alpha));
    double hi = std::log((60.0 + std::fabs(tau)) / x);
    cplx a1(0.5 - alpha, tau), a2(-0.5 + alpha, tau);
    auto f = [&](double l) {
        double el = std::exp(l);
        return std::exp(a1 * l + a2 * std::log(2.0 + el) - x * el);
    };
    int panels = static_cast<int>(std::ceil(std::fabs(tau) * (hi - lo) / M_PI)) + 4;
    auto o = gk::adaptive<cplx>(f, lo, hi, rel_tol * 0.1, 1e-300, 4000000, panels);
    cplx pref = std::exp(cplx(0.0, tau * std::log(0.5 * x)) - log_gamma(cplx(0.5 - alpha, tau)) - x);
    return std::sqrt(2.0 * x) * pref * o.value;
}

LogScaled bessel_k_im_series_scaled(double tau, double x)
{
    require(x > 0.0, "bessel_k_im_series_scaled: x must be positive");
    tau = std::fabs(tau);
    require(tau > 0.0, "bessel_k_im_series_scaled: tau must be positive");
    cplx lg = log_gamma(cplx(1.0, tau));
    double pt = M_PI * tau;
    double lsh = pt > 20.0 ? pt - M_LN2 + std::log1p(-std::exp(-2.0 * pt)) : std::log(std::sinh(pt));
    double lmag = std::log(M_PI) + 0.5 * pt - lsh - lg.real();
    double phase = tau * std::log(0.5 * x) - lg.imag();
    double q = 0.25 * x * x;
    cplx term = 1.0, sum = 1.0;
    for (int k = 0; k < 500; ++k) {
        term *= q / ((k + 1.0) * cplx(k + 1.0, tau));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    double v = -(std::exp(cplx(0.0, phase)) * sum).imag();
    return LogScaled::from(v).scale_exp(lmag);
}

LogScaled whittaker_w_im_series_scaled(double alpha, double tau, double z)
{
    require(z > 0.0, "whittaker_w_im_series_scaled: x must be positive");
    require(alpha < 0.5, "whittaker_w_im_series_scaled: alpha must be below 1/2");
    tau = std::fabs(tau);
    require(tau > 0.0, "whittaker_w_im_series_scaled: tau must be positive");
    cplx c = log_gamma(cplx(0.0, -2.0 * tau)) - log_gamma(cplx(0.5 - alpha, -tau)) + cplx(0.5, tau) * std::log(z) -
             0.5 * z + 0.5 * M_PI * tau;
    cplx a(0.5 - alpha, tau), b(1.0, 2.0 * tau);
    cplx term = 1.0, sum = 1.0;
    for (int k = 0; k < 1000; ++k) {
        term *= (a + double(k)) * z / ((b + double(k)) * (k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    cplx w = std::exp(cplx(0.0, c.imag())) * sum;
    return LogScaled::from(2.0 * w.real()).scale_exp(c.real());
}

LogScaled whittaker_w_im_ode_scaled(double alpha, double tau, double z)
{
    require(z > 0.0 && alpha < 0.5, "whittaker_w_im_ode_scaled: invalid parameters");
    tau = std::fabs(tau);
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 2>;
    double kappa = alpha, a = 0.5 - alpha, t2 = tau * tau;
    double zt = 2.0 * kappa + std::sqrt(4.0 * kappa * kappa + 1.0 + 4.0 * t2);
    double z1 = std::max(z, zt + 1.0);
    double z0 = std::max(z1, 30.0);
    double s = 0.0, ds = 0.0;
    for (;;) {
        double c = 1.0;
        s = 1.0;
        ds = 0.0;
        bool ok = false;
        for (int k = 0; k < 400; ++k) {
            double next = -c * ((k + a) * (k + a) + t2) / ((k + 1.0) * z0);
            if (std::fabs(next) >= std::fabs(c) && k > 0) break;
            c = next;
            s += c;
            ds -= (k + 1.0) * c / z0;
            if (std::fabs(c) < 1e-17 * std::fabs(s)) {
                ok = true;
                break;
            }
        }
        if (ok) break;
        z0 *= 2.0;
    }
    auto Q = [&](double x) { return 0.25 - kappa / x - (0.25 + t2) / (x * x); };
    State r{-0.5 + kappa / z0 + ds / s, kappa * std::log(z0) + std::log(std::fabs(s))};
    auto ric = [&](const State& y, State& dy, double x) {
        dy[0] = Q(x) - y[0] * y[0];
        dy[1] = y[0] + 0.5;
    };
    auto stepper = ode::make_controlled(1e-14, 1e-13, ode::runge_kutta_fehlberg78<State>());
    if (z0 > z1) ode::integrate_adaptive(stepper, ric, r, z0, z1, -(z0 - z1) / 20.0);
    double logscale = r[1] - 0.5 * z1;
    if (z1 == z) return LogScaled{s > 0 ? 1 : -1, logscale + 0.5 * M_PI * tau};
    State w{1.0, r[0]};
    auto lin = [&](const State& y, State& dy, double x) {
        dy[0] = y[1];
        dy[1] = Q(x) * y[0];
    };
    double x = z1;
    while (x > z) {
        double nx = std::max(z, x - 2.0);
        ode::integrate_adaptive(stepper, lin, w, x, nx, -(x - nx) / 4.0);
        x = nx;
        double m = std::max(std::fabs(w[0]), std::fabs(w[1]));
        w[0] /= m;
        w[1] /= m;
        logscale += std::log(m);
    }
    return LogScaled::from(w[0]).scale_exp(logscale + 0.5 * M_PI * tau);
}

double whittaker_m(double alpha, double eta, double z)
{
    require(z > 0.0, "whittaker_m: x must be positive");
    double a = 0.5 + eta - alpha, b = 1.0 + 2.0 * eta;
    require(a > 0.0 && b > 0.0, "whittaker_m: parameters outside supported range");
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 5000; ++k) {
        term *= (a + k) * z / ((b + k) * (k + 1.0));
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return std::exp(-0.5 * z + (eta + 0.5) * std::log(z)) * sum;
}

double whittaker_w(double alpha, double eta, double z)
{
    require(z > 0.0, "whittaker_w: x must be positive");
    eta = std::fabs(eta);
    double a = 0.5 + eta - alpha, b = 1.0 + 2.0 * eta;
    require(a > 0.0, "whittaker_w: parameters outside supported range");
    double c = b - a - 1.0;
    auto f = [&](double t) {
        if (t <= 0.0) return 0.0;
        return std::exp(-z * t + (a - 1.0) * std::log(t) + c * std::log1p(t));
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    double near = ts.integrate(f, 0.0, 1.0, 1e-14);
    double far = es.integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-14);
    double u = (near + far) / std::tgamma(a);
    return std::exp(-0.5 * z + (eta + 0.5) * std::log(z)) * u;
}

namespace {

template <class Weight>
double mehler_dirichlet(double mu, double eta, Weight&& w, double osc_rate, double rel_tol, Tracker& tr)
{
    double p = 1.0 / (mu + 0.5);
    auto body = [&](double v) {
        double vp = std::pow(v, p);
        double r = eta * vp;
        double half = 0.5 * r;
        double shr = half < 1e-8 ? 1.0 : std::sinh(half) / half;
        double core = 2.0 * std::sinh(eta - half) * 0.5 * eta * shr;
        return w(eta - r) * std::pow(core, mu - 0.5);
    };
    int panels = static_cast<int>(std::ceil(osc_rate * eta * std::max(p, 1.0) / M_PI)) + 1;
    double l1_tol = std::max(rel_tol * 1e-3, 3e-14);
    return eta * p * tr.take(gk::adaptive<double>(body, 0.0, 1.0, rel_tol * 0.05, 1e-300, 400000, panels, l1_tol));
}

}

namespace {
struct PSeries { double p, dp; };
PSeries legendre_hyp_series(double mu, double tau, double x)
{
    double z = 0.5 * (1.0 - x), t2 = tau * tau;
    double term = 1.0, sum = 1.0, dsum = 0.0;
    for (int k = 0; k < 2000; ++k) {
        double f = ((k + 0.5) * (k + 0.5) + t2) / ((k + 1.0) * (k + 1.0 + mu));
        dsum += term * f * (k + 1.0);
        term *= f * z;
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum) && k > 2) break;
    }
    double pref = std::exp(0.5 * mu * std::log((x - 1.0) / (x + 1.0)) - std::lgamma(1.0 + mu));
    return {pref * sum, pref * (mu / (x * x - 1.0) * sum - 0.5 * dsum)};
}
}
std::vector<double> legendre_p_im_many(double mu, double tau, const std::vector<double>& xs)
{
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 2>;
    tau = std::fabs(tau);
    std::vector<double> out(xs.size());
    double eta0 = 2.0 * std::asinh(std::min(0.5 / std::max(tau, 1e-300), 0.3));
    double x0 = std::cosh(eta0);
    auto stepper = ode::make_controlled(1e-15, 1e-13, ode::runge_kutta_fehlberg78<State>());
    double c = mu * mu - 0.25, t2 = tau * tau;
    auto rhs = [&](const State& v, State& dv, double e) {
        double s = std::sinh(e);
        dv[0] = v[1];
        dv[1] = (c / (s * s) - t2) * v[0];
    };
    State v{};
    double eta = 0.0;
    bool started = false;
    for (size_t i = 0; i < xs.size(); ++i) {
        double x = xs[i];
        if (!(x > 1.0)) throw std::domain_error("legendre_p_im_many: x must exceed 1");
        if (i > 0 && x < xs[i - 1]) throw std::invalid_argument("legendre_p_im_many: arguments must be increasing");
        if (x <= x0) {
            out[i] = legendre_hyp_series(mu, tau, x).p;
            continue;
        }
        if (!started) {
            auto s = legendre_hyp_series(mu, tau, x0);
            double sh = std::sinh(eta0), rs = std::sqrt(sh);
            v = {rs * s.p, 0.5 * std::cosh(eta0) / rs * s.p + rs * sh * s.dp};
            eta = eta0;
            started = true;
        }
        double target = std::acosh(x);
        if (target > eta) ode::integrate_adaptive(stepper, rhs, v, eta, target, std::min(0.1, 0.5 / (tau + 1.0)) * eta0 + 1e-3);
        eta = target;
        out[i] = v[0] / std::sqrt(std::sinh(eta));
    }
    return out;
}


double legendre_p_im(double mu, double tau, double x, double rel_tol, EvalInfo* info)
{
    require(x > 1.0 && std::isfinite(x), "legendre_p_im: x must exceed 1");
    require(mu >= 0.0 && mu < 1.0, "legendre_p_im: mu must lie in [0,1)");
    tau = std::fabs(tau);
    double eta = std::acosh(x);
    Tracker tr;
    double integral = mehler_dirichlet(mu, eta, [&](double t) { return std::cos(tau * t); }, tau, rel_tol, tr);
    double pref = std::sqrt(2.0 / M_PI) * std::exp(-mu * std::log(std::sinh(eta)) - std::lgamma(mu + 0.5));
    double v = pref * integral;
    report(info, tr, integral, rel_tol);
    if (info) info->err_estimate *= pref;
    return v;
}

double legendre_p_im_direct(double mu, double tau, double x, double rel_tol)
{
    require(x > 1.0, "legendre_p_im_direct: x must exceed 1");
    auto g = [&](double s) { return std::pow(x + std::cosh(s), -mu - 0.5); };
    QuadSpec spec;
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-300;
    spec.max_nodes = 4000000;
    spec.decay = {DecayKind::Exponential, 1.0 / (mu + 0.5)};
    double v;
    if (tau == 0.0) {
        v = integrate(g, 0.0, inf, spec).value;
    } else {
        v = integrate_oscillatory(g, 0.0, inf, std::fabs(tau), Oscillator::Cos, spec).value;
    }
    double pref = std::sqrt(2.0 / M_PI) * std::exp(std::lgamma(mu + 0.5) + 0.5 * mu * std::log(x * x - 1.0) -
                                                   log_gamma_abs2(0.5 + mu, tau));
    return pref * v;
}

double legendre_p(double mu, double nu, double x)
{
    require(x > 1.0, "legendre_p: x must exceed 1");
    require(mu >= 0.0 && mu < 1.0, "legendre_p: mu must lie in [0,1)");
    double eta = std::acosh(x);
    double k = nu + 0.5;
    Tracker tr;
    double integral = mehler_dirichlet(mu, eta, [&](double t) { return std::cosh(k * t); }, 0.0, 1e-13, tr);
    return std::sqrt(2.0 / M_PI) * std::exp(-mu * std::log(std::sinh(eta)) - std::lgamma(mu + 0.5)) * integral;
}

double legendre_q(double mu, double nu, double x)
{
    require(x > 1.0, "legendre_q: x must exceed 1");
    require(nu - mu + 1.0 > 0.0 && nu + 1.0 > 0.0, "legendre_q: parameters outside supported range");
    double r = std::sqrt(x * x - 1.0);
    auto lm = [&](double t) { return mu * t - (nu + 1.0) * std::log((x + r * std::cosh(t)) / (x + r)); };
    double end = decay_end(lm, 0.0, -48.0);
    auto f = [&](double t) { return std::cosh(mu * t) * std::exp(-(nu + 1.0) * std::log((x + r * std::cosh(t)) / (x + r))); };
    auto o = gk::adaptive<double>(f, 0.0, end, 1e-14, 0.0, 200000, 2);
    double lpref = std::lgamma(nu + 1.0) - std::lgamma(nu + mu + 1.0) - std::lgamma(nu - mu + 1.0) -
                   (nu + 1.0) * std::log(x + r);
    return std::exp(lpref) * o.value;
}

LogScaled bessel_k_im_scaled(double tau, double x, double rel_tol, EvalInfo* info)
{
    require(x > 0.0, "bessel_k_im: x must be positive");
    tau = std::fabs(tau);
    if (x <= std::max(5.0, 0.75 * tau + 2.0)) {
        if (info) *info = EvalInfo{};
        if (tau >= series_min_tau) return bessel_k_im_series_scaled(tau, x);
        double t1 = series_min_tau, t2 = 2.0 * series_min_tau;
        double k1 = bessel_k_im_series_scaled(t1, x).scaled_value(-0.5 * M_PI * t1);
        double k2 = bessel_k_im_series_scaled(t2, x).scaled_value(-0.5 * M_PI * t2);
        double k = k1 + (k2 - k1) * (tau * tau - t1 * t1) / (t2 * t2 - t1 * t1);
        return LogScaled::from(k).scale_exp(0.5 * M_PI * tau);
    }
    return bessel_k_im_integral_scaled(tau, x, rel_tol, info);
}

LogScaled whittaker_w_im_scaled(double alpha, double tau, double z, [[maybe_unused]] double rel_tol, EvalInfo* info)
{
    require(z > 0.0, "whittaker_w_im: x must be positive");
    require(alpha < 0.5, "whittaker_w_im: alpha must be below 1/2");
    tau = std::fabs(tau);
    if (z <= std::min(30.0, std::max(6.0, 1.5 * tau + 4.0))) {
        if (info) *info = EvalInfo{};
        if (tau >= series_min_tau) return whittaker_w_im_series_scaled(alpha, tau, z);
        double t1 = series_min_tau, t2 = 2.0 * series_min_tau;
        double w1 = whittaker_w_im_series_scaled(alpha, t1, z).scaled_value(-0.5 * M_PI * t1);
        double w2 = whittaker_w_im_series_scaled(alpha, t2, z).scaled_value(-0.5 * M_PI * t2);
        double w = w1 + (w2 - w1) * (tau * tau - t1 * t1) / (t2 * t2 - t1 * t1);
        return LogScaled::from(w).scale_exp(0.5 * M_PI * tau);
    }
    if (info) *info = EvalInfo{};
    return whittaker_w_im_ode_scaled(alpha, tau, z);
}

}
