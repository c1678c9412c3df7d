#include "ixs/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "ixs/gk.hpp"

namespace ixs {

namespace {

QuadResult from(const gk::Outcome<double>& o)
{
    return {o.value, o.err, o.nodes, o.converged};
}

bool satisfied(double err, double value, const QuadSpec& spec)
{
    return err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
}

QuadResult finite_gk(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec)
{
    int panels = 1;
    if (spec.oscillation && *spec.oscillation > 0.0) {
        double cycles = *spec.oscillation * (b - a) / (2.0 * M_PI);
        panels = static_cast<int>(std::clamp(std::ceil(cycles), 1.0, 4096.0));
    }
    return from(gk::adaptive<double>(f, a, b, spec.rel_tol, spec.abs_tol, spec.max_nodes, panels));
}

QuadResult marching(const std::function<double(double)>& f, double a, const QuadSpec& spec, double width,
                    bool grow)
{
    QuadResult total;
    total.converged = true;
    double lo = a;
    int quiet = 0;
    for (int seg = 0; seg < 4000; ++seg) {
        double hi = lo + width;
        QuadSpec s = spec;
        s.abs_tol = std::max(spec.abs_tol * 0.1, spec.rel_tol * std::fabs(total.value) * 0.1);
        s.max_nodes = std::max<long>(spec.max_nodes - total.nodes_used, 42);
        QuadResult r = finite_gk(f, lo, hi, s);
        total.value += r.value;
        total.err_estimate += r.err_estimate;
        total.nodes_used += r.nodes_used;
        if (!r.converged) total.converged = false;
        double small = std::max(spec.abs_tol * 0.1, spec.rel_tol * std::fabs(total.value) * 0.1);
        quiet = (std::fabs(r.value) + r.err_estimate <= small) ? quiet + 1 : 0;
        if (quiet >= 2) break;
        if (total.nodes_used >= spec.max_nodes) {
            total.converged = false;
            break;
        }
        lo = hi;
        if (grow) width *= 2.0;
    }
    if (quiet < 2) total.converged = false;
    total.converged = total.converged && satisfied(total.err_estimate, total.value, spec);
    return total;
}

template <int N>
struct LegendreTable {
    std::array<double, N> s{}, w{};
    std::array<std::array<double, N>, N> p{};
    LegendreTable()
    {
        using G = boost::math::quadrature::gauss<double, N>;
        const auto& ab = G::abscissa();
        const auto& wt = G::weights();
        int half = static_cast<int>(ab.size());
        int k = 0;
        for (int i = half - 1; i >= 0; --i) {
            if (ab[i] == 0.0) continue;
            s[k] = -ab[i];
            w[k++] = wt[i];
        }
        for (int i = 0; i < half; ++i) {
            s[k] = ab[i];
            w[k++] = wt[i];
        }
        for (int j = 0; j < N; ++j)
            for (int d = 0; d < N; ++d) p[d][j] = boost::math::legendre_p(d, s[j]);
    }
};

constexpr int filon_n = 20;

const LegendreTable<filon_n>& filon_table()
{
    static const LegendreTable<filon_n> t;
    return t;
}

struct FilonPanel {
    double value;
    double err;
    double floor;
};

FilonPanel filon_panel(const std::function<double(double)>& g, double l, double r, double omega, Oscillator kind)
{
    const auto& tb = filon_table();
    double c = 0.5 * (l + r), h = 0.5 * (r - l);
    std::array<double, filon_n> gv{};
    for (int j = 0; j < filon_n; ++j) gv[j] = g(c + h * tb.s[j]);
    std::array<double, filon_n> coef{};
    for (int d = 0; d < filon_n; ++d) {
        double acc = 0.0;
        for (int j = 0; j < filon_n; ++j) acc += tb.w[j] * gv[j] * tb.p[d][j];
        coef[d] = 0.5 * (2 * d + 1) * acc;
    }
    double kappa = omega * h;
    std::complex<double> sum{};
    std::complex<double> ik{1.0, 0.0};
    for (int d = 0; d < filon_n; ++d) {
        double jd = kappa == 0.0 ? (d == 0 ? 1.0 : 0.0) : boost::math::sph_bessel(d, kappa);
        sum += coef[d] * 2.0 * ik * jd;
        ik *= std::complex<double>(0.0, 1.0);
    }
    std::complex<double> val = h * std::exp(std::complex<double>(0.0, omega * c)) * sum;
    double tail = std::fabs(coef[filon_n - 1]) + std::fabs(coef[filon_n - 2]) + std::fabs(coef[filon_n - 3]);
    double scale = 0.0;
    for (int d = 0; d < filon_n; ++d) scale += std::fabs(coef[d]);
    double err = 2.0 * h * tail;
    double floor = 2.0 * h * 1e-14 * scale;
    return {kind == Oscillator::Cos ? val.real() : val.imag(), err, floor};
}

QuadResult filon_interval(const std::function<double(double)>& g, double a, double b, double omega, Oscillator kind,
                          double abs_target, long max_nodes)
{
    struct Item {
        double l, r;
        FilonPanel fp;
    };
    std::vector<Item> done, todo;
    int pieces = static_cast<int>(std::clamp(std::ceil(omega * (b - a) / (8.0 * M_PI)), 1.0, 100000.0));
    double w = (b - a) / pieces;
    QuadResult out;
    for (int i = 0; i < pieces; ++i) {
        double l = a + i * w, r = (i + 1 == pieces) ? b : a + (i + 1) * w;
        todo.push_back({l, r, filon_panel(g, l, r, omega, kind)});
        out.nodes_used += filon_n;
    }
    double budget = abs_target;
    while (!todo.empty()) {
        Item it = todo.back();
        todo.pop_back();
        double local = budget * (it.r - it.l) / (b - a);
        if (it.fp.err <= local || it.fp.err <= it.fp.floor || out.nodes_used + 2 * filon_n > max_nodes || it.r - it.l < 1e-12 * (b - a)) {
            done.push_back(it);
            continue;
        }
        double m = 0.5 * (it.l + it.r);
        todo.push_back({m, it.r, filon_panel(g, m, it.r, omega, kind)});
        todo.push_back({it.l, m, filon_panel(g, it.l, m, omega, kind)});
        out.nodes_used += 2 * filon_n;
    }
    std::sort(done.begin(), done.end(), [](const Item& p, const Item& q) { return p.l < q.l; });
    for (auto& it : done) {
        out.value += it.fp.value;
        out.err_estimate += it.fp.err;
    }
    double floor_total = 0.0;
    for (auto& it : done) floor_total += it.fp.floor;
    out.converged = out.err_estimate <= std::max(abs_target, floor_total) * 1.0000001;
    return out;
}

}

void validate(const QuadSpec& spec)
{
    if (!(spec.rel_tol > 0.0 && spec.rel_tol < 1.0)) throw std::invalid_argument("rel_tol must lie in (0,1)");
    if (!(spec.abs_tol >= 0.0)) throw std::invalid_argument("abs_tol must be nonnegative");
    if (spec.max_nodes < 15) throw std::invalid_argument("max_nodes must be at least 15");
    if (spec.oscillation && *spec.oscillation < 0.0) throw std::invalid_argument("oscillation must be nonnegative");
}

QuadResult integrate(const std::function<double(double)>& f, double lower, double upper, const QuadSpec& spec)
{
    validate(spec);
    if (upper == lower) return {0.0, 0.0, 0, true};
    if (upper < lower) {
        QuadResult r = integrate(f, upper, lower, spec);
        r.value = -r.value;
        return r;
    }
    if (!std::isfinite(lower)) throw std::domain_error("integrate: lower limit must be finite");
    if (std::isfinite(upper)) return finite_gk(f, lower, upper, spec);

    double omega = spec.oscillation.value_or(0.0);
    if (spec.decay.kind != DecayKind::None || omega > 0.0) {
        double width = spec.decay.kind == DecayKind::None ? 1.0 : spec.decay.scale;
        if (omega > 0.0) width = std::max(width, 8.0 * M_PI / omega);
        return marching(f, lower, spec, width, spec.decay.kind == DecayKind::None);
    }

    long count = 0;
    auto g = [&](double u) {
        ++count;
        double v = f(u);
        return std::isfinite(v) ? v : 0.0;
    };
    boost::math::quadrature::exp_sinh<double> es(12);
    double err = 0.0, l1 = 0.0;
    size_t levels = 0;
    double tol = std::max(spec.rel_tol, 1e-15);
    double v = es.integrate(g, lower, inf, tol, &err, &l1, &levels);
    QuadResult r{v, err, count, satisfied(err, v, spec) && count <= spec.max_nodes};
    return r;
}

QuadResult integrate_logspace(const std::function<LogScaled(double)>& f_log, double lower, double upper,
                              const QuadSpec& spec)
{
    double peak = -inf;
    auto probe = [&](double u) {
        LogScaled v = f_log(u);
        if (v.sign != 0 && std::isfinite(v.log_mag)) peak = std::max(peak, v.log_mag);
    };
    if (std::isfinite(upper)) {
        for (int i = 0; i <= 64; ++i) probe(lower + (upper - lower) * i / 64.0);
    } else {
        for (int i = 0; i <= 64; ++i) probe(lower + std::expm1(i * 0.1));
    }
    if (!std::isfinite(peak)) peak = 0.0;
    auto f = [&](double u) { return f_log(u).scaled_value(-peak); };
    QuadSpec s = spec;
    s.abs_tol = spec.abs_tol * std::exp(-peak);
    QuadResult r = integrate(f, lower, upper, s);
    double scale = std::exp(peak);
    r.value *= scale;
    r.err_estimate *= scale;
    return r;
}

QuadResult integrate_oscillatory(const std::function<double(double)>& g, double lower, double upper, double omega,
                                 Oscillator kind, const QuadSpec& spec)
{
    validate(spec);
    auto plain = [&](double u) { return g(u) * (kind == Oscillator::Cos ? std::cos(omega * u) : std::sin(omega * u)); };
    if (std::isfinite(upper) && omega * (upper - lower) <= 20.0) {
        QuadSpec s = spec;
        s.oscillation.reset();
        return integrate(plain, lower, upper, s);
    }
    if (std::isfinite(upper)) {
        QuadResult probe = filon_interval(g, lower, upper, omega, kind, inf, spec.max_nodes);
        double target = std::max(spec.abs_tol, spec.rel_tol * std::fabs(probe.value));
        QuadResult r = filon_interval(g, lower, upper, omega, kind, target, spec.max_nodes);
        r.converged = r.converged && satisfied(r.err_estimate, r.value, spec);
        return r;
    }

    double width = std::max(8.0 * M_PI / omega, spec.decay.kind == DecayKind::None ? 1.0 : spec.decay.scale);
    width = std::ceil(width * omega / (2.0 * M_PI)) * 2.0 * M_PI / omega;
    QuadResult total;
    total.converged = true;
    double lo = lower;
    int quiet = 0;
    double magnitude = 0.0;
    for (int seg = 0; seg < 20000; ++seg) {
        QuadResult pr = filon_interval(g, lo, lo + width, omega, kind, inf, spec.max_nodes);
        magnitude = std::max(magnitude, std::fabs(pr.value));
        double target = std::max(spec.abs_tol, spec.rel_tol * std::max(magnitude, std::fabs(total.value))) * 0.05;
        QuadResult r = filon_interval(g, lo, lo + width, omega, kind, target, spec.max_nodes);
        total.value += r.value;
        total.err_estimate += r.err_estimate;
        total.nodes_used += r.nodes_used + pr.nodes_used;
        if (!r.converged) total.converged = false;
        double gmax = 0.0;
        for (int i = 0; i <= 8; ++i) gmax = std::max(gmax, std::fabs(g(lo + width * (1.0 + i / 8.0))));
        double small = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total.value)) * 0.01;
        quiet = (gmax * width <= small) ? quiet + 1 : 0;
        lo += width;
        if (quiet >= 2) break;
        if (total.nodes_used > spec.max_nodes) {
            total.converged = false;
            break;
        }
        if (spec.decay.kind == DecayKind::None) width *= 2.0;
    }
    if (quiet < 2) total.converged = false;
    total.converged = total.converged && satisfied(total.err_estimate, total.value, spec);
    return total;
}

double spectral_tau_max(double t, double tol)
{
    if (!(t > 0.0)) throw std::domain_error("spectral_tau_max: t must be positive");
    double rhs0 = std::log(1.0 / tol);
    double tau = 30.0;
    for (int i = 0; i < 200; ++i) {
        double rhs = rhs0 + std::log1p(tau);
        double next = (M_PI + std::sqrt(M_PI * M_PI + 4.0 * t * rhs)) / (2.0 * t);
        if (std::fabs(next - tau) < 1e-12 * next) {
            tau = next;
            break;
        }
        tau = next;
    }
    return std::max(tau, 30.0);
}

PanelRule panel_rule(const std::vector<double>& breaks)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    PanelRule r;
    for (size_t p = 0; p + 1 < breaks.size(); ++p) {
        double c = 0.5 * (breaks[p] + breaks[p + 1]), h = 0.5 * (breaks[p + 1] - breaks[p]);
        for (int i = 10; i >= 1; --i) {
            r.nodes.push_back(c - h * xk[i]);
            r.kronrod.push_back(h * wk[i]);
            r.gauss.push_back(i % 2 == 1 ? h * wg[i / 2] : 0.0);
        }
        r.nodes.push_back(c);
        r.kronrod.push_back(h * wk[0]);
        r.gauss.push_back(0.0);
        for (int i = 1; i <= 10; ++i) {
            r.nodes.push_back(c + h * xk[i]);
            r.kronrod.push_back(h * wk[i]);
            r.gauss.push_back(i % 2 == 1 ? h * wg[i / 2] : 0.0);
        }
    }
    return r;
}

PanelRule panel_rule(double a, double b, int panels)
{
    std::vector<double> br(panels + 1);
    for (int i = 0; i <= panels; ++i) br[i] = a + (b - a) * i / panels;
    br[panels] = b;
    return panel_rule(br);
}

double PanelRule::apply(const std::vector<double>& values) const
{
    std::vector<double> prod(values.size());
    for (size_t i = 0; i < values.size(); ++i) prod[i] = kronrod[i] * values[i];
    return pairwise_sum(prod.data(), prod.size());
}

double PanelRule::error(const std::vector<double>& values) const
{
    double err = 0.0;
    for (size_t p = 0; p < values.size(); p += 21) {
        double d = 0.0;
        for (size_t i = p; i < p + 21 && i < values.size(); ++i) d += (kronrod[i] - gauss[i]) * values[i];
        err += std::fabs(d);
    }
    return err;
}

double pairwise_sum(const double* v, size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}
