#include "ixs/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include <boost/math/interpolators/makima.hpp>

#include "ixs/gk.hpp"

namespace ixs {

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values, Interp interp)
    : nodes_(std::move(nodes)), values_(std::move(values)), interp_(interp)
{
    if (nodes_.size() != values_.size()) throw std::invalid_argument("grid function: node/value length mismatch");
    if (nodes_.size() < 2) throw std::invalid_argument("grid function: need at least two nodes");
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i]))
            throw std::invalid_argument("grid function: non-finite node or value");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw std::invalid_argument("grid function: nodes must be strictly increasing");
    }
    if (interp_ == Interp::Cubic && nodes_.size() >= 4) {
        auto x = nodes_;
        auto y = values_;
        auto spline = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(std::move(x), std::move(y));
        spline_ = std::make_shared<const std::function<double(double)>>([spline](double t) { return (*spline)(t); });
    }
}

GridFunction GridFunction::sample(const std::function<double(double)>& f, std::vector<double> nodes, Interp interp)
{
    std::vector<double> values(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) values[i] = f(nodes[i]);
    return GridFunction(std::move(nodes), std::move(values), interp);
}

double GridFunction::operator()(double x) const
{
    if (nodes_.empty() || x < nodes_.front() || x > nodes_.back()) return 0.0;
    if (spline_) return (*spline_)(x);
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    if (it == nodes_.end()) return values_.back();
    size_t i = static_cast<size_t>(it - nodes_.begin());
    double t = (x - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

GridFunction read_grid_csv(std::istream& in, Interp interp)
{
    std::vector<double> xs, ys;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ';', ',');
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("csv line " + std::to_string(lineno) + ": expected two columns");
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        char* end1 = nullptr;
        char* end2 = nullptr;
        double x = std::strtod(a.c_str(), &end1);
        double y = std::strtod(b.c_str(), &end2);
        bool ok1 = end1 != a.c_str() && std::string(end1).find_first_not_of(" \t\r") == std::string::npos;
        bool ok2 = end2 != b.c_str() && std::string(end2).find_first_not_of(" \t\r,") == std::string::npos;
        if (!ok1 || !ok2) {
            if (xs.empty()) continue;
            throw std::invalid_argument("csv line " + std::to_string(lineno) + ": not numeric");
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    return GridFunction(std::move(xs), std::move(ys), interp);
}

GridFunction read_grid_csv_file(const std::string& path, Interp interp)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read_grid_csv(in, interp);
}

std::vector<double> domain_nodes(const TransformFamily& fam, double upper, int count, double gap)
{
    double lo = fam.lower();
    if (!(upper > lo + gap) || count < 2) throw std::invalid_argument("domain_nodes: empty range");
    std::vector<double> n(count);
    double a = std::log(gap), b = std::log(upper - lo);
    for (int i = 0; i < count; ++i) n[i] = lo + std::exp(a + (b - a) * i / (count - 1));
    n.back() = upper;
    return n;
}

namespace {

bool log_coordinate(const TransformFamily& fam)
{
    return fam.tag != FamilyTag::MehlerFock;
}

double to_s(const TransformFamily& fam, double y)
{
    return log_coordinate(fam) ? std::log(y) : std::acosh(std::max(y, 1.0));
}

double to_y(const TransformFamily& fam, double s)
{
    return log_coordinate(fam) ? std::exp(s) : std::cosh(s);
}

double jacobian(const TransformFamily& fam, double s)
{
    return log_coordinate(fam) ? std::exp(s) : std::sinh(s);
}

double oscillation_rate(const TransformFamily& fam, double tau, double y)
{
    double ye = fam.tag == FamilyTag::IndexWhittaker ? 0.5 * y : y;
    if (fam.tag == FamilyTag::MehlerFock) return std::max(tau, 1.0);
    return std::sqrt(std::max(tau * tau - ye * ye, 1.0));
}

std::vector<double> s_breaks(const TransformFamily& fam, double s_lo, double s_hi, double tau_cap)
{
    std::vector<double> br;
    br.push_back(s_lo);
    if (!log_coordinate(fam)) {
        double h0 = std::min(0.5, 3.5 / std::max(tau_cap, 1.0));
        double g = std::min(h0, s_hi - s_lo);
        std::vector<double> graded;
        for (double d = g; d > 1e-10; d *= 0.5) graded.push_back(s_lo + d);
        std::reverse(graded.begin(), graded.end());
        for (double b : graded)
            if (b > br.back() && b < s_hi) br.push_back(b);
    }
    while (br.back() < s_hi) {
        double s = br.back();
        double h = std::clamp(3.5 / oscillation_rate(fam, tau_cap, to_y(fam, s)), 0.02, 0.5);
        double next = s + h;
        if (next > s_hi - 0.25 * h) next = s_hi;
        br.push_back(next);
    }
    return br;
}

}

double default_tau_cap(const TransformFamily& fam)
{
    return fam.tag == FamilyTag::MehlerFock ? 30.0 : 18.0;
}

double SpectralTable::value(size_t i) const
{
    return fhat[i] * std::exp(-index_shift(family, tau[i]));
}

TransformEngine::TransformEngine(const TransformFamily& fam, double y_lo, double y_hi, const TransformOptions& opt)
    : fam_(fam), opt_(opt)
{
    fam_.validate();
    if (!(y_lo >= fam.lower()) || !(y_hi > y_lo)) throw std::invalid_argument("transform engine: invalid y range");
    if (!(opt.tau_panel > 0.0)) throw std::invalid_argument("transform engine: tau_panel must be positive");
    tau_cap_ = opt.tau_cap > 0.0 ? opt.tau_cap : default_tau_cap(fam);
    double s_lo = to_s(fam, std::max(y_lo, fam.lower() + 1e-300)), s_hi = to_s(fam, y_hi);
    if (log_coordinate(fam) && y_lo <= 0.0) s_lo = std::log(1e-14);
    PanelRule sr = panel_rule(s_breaks(fam, s_lo, s_hi, tau_cap_));
    for (size_t j = 0; j < sr.size(); ++j) {
        double s = sr.nodes[j];
        double y = to_y(fam, s);
        if (!fam.in_domain(y)) continue;
        double scale = reference_weight(fam, y) * jacobian(fam, s);
        y_.push_back(y);
        wk_.push_back(sr.kronrod[j] * scale);
        wg_.push_back(sr.gauss[j] * scale);
    }
    int panels = static_cast<int>(std::ceil(tau_cap_ / opt.tau_panel));
    tau_rule_ = panel_rule(0.0, panels * opt.tau_panel, panels);
    rows_.resize(tau_rule_.size());
}

void TransformEngine::ensure_panel(size_t panel)
{
    for (size_t i = panel * 21; i < (panel + 1) * 21 && i < rows_.size(); ++i) {
        if (!rows_[i].empty()) continue;
        rows_[i] = kernel_row_scaled(fam_, tau_rule_.nodes[i], y_, opt_.kernel_tol);
        evaluations_ += static_cast<long>(y_.size());
    }
}

SpectralTable TransformEngine::forward_table(const std::function<double(double)>& f)
{
    std::vector<double> fv(y_.size());
    for (size_t j = 0; j < y_.size(); ++j) fv[j] = f(y_[j]);
    SpectralTable t;
    t.family = fam_;
    t.edge_value = f(std::nextafter(fam_.lower(), inf) + (fam_.tag == FamilyTag::MehlerFock ? 1e-12 : 0.0));
    size_t npanels = tau_rule_.size() / 21;
    double norm_total = 0.0, env_total = 0.0;
    int quiet = 0;
    std::vector<double> prod(y_.size());
    for (size_t p = 0; p < npanels; ++p) {
        ensure_panel(p);
        std::vector<double> tau, w, fh, nz;
        bool all_noise = true;
        double norm_p = 0.0, env_p = 0.0;
        for (size_t i = p * 21; i < (p + 1) * 21; ++i) {
            const auto& row = rows_[i];
            double l1 = 0.0;
            for (size_t j = 0; j < y_.size(); ++j) {
                prod[j] = wk_[j] * fv[j] * row[j];
                l1 += std::fabs(prod[j]);
            }
            double v = pairwise_sum(prod.data(), prod.size());
            double noise = 1e-15 * l1;
            double rho = spectral_density_scaled(fam_, tau_rule_.nodes[i]).value();
            if (std::fabs(v) > 30.0 * noise) all_noise = false;
            norm_p += tau_rule_.kronrod[i] * v * v * rho;
            env_p += tau_rule_.kronrod[i] * std::fabs(v) * rho;
            tau.push_back(tau_rule_.nodes[i]);
            w.push_back(tau_rule_.kronrod[i]);
            fh.push_back(v);
            nz.push_back(noise);
        }
        if (all_noise && p > 0) {
            t.noise_limited = true;
            break;
        }
        t.tau.insert(t.tau.end(), tau.begin(), tau.end());
        t.weight.insert(t.weight.end(), w.begin(), w.end());
        t.fhat.insert(t.fhat.end(), fh.begin(), fh.end());
        t.noise.insert(t.noise.end(), nz.begin(), nz.end());
        t.tau_end = tau_rule_.nodes[(p + 1) * 21 - 1];
        norm_total += norm_p;
        env_total += env_p;
        bool small = norm_p <= opt_.stop_tol * norm_total && env_p <= 1e3 * opt_.stop_tol * env_total;
        quiet = small ? quiet + 1 : 0;
        if (quiet >= 2) break;
        if (p + 1 == npanels) t.truncated_by_cap = true;
    }
    if (!t.tau.empty()) t.tau_end = t.tau.back();
    return t;
}

SpectralTable TransformEngine::forward_table(const GridFunction& f)
{
    return forward_table([&f](double y) { return f(y); });
}

double TransformEngine::inverse(const SpectralTable& table, double x)
{
    if (!fam_.in_domain(x)) throw std::domain_error("inverse: x outside the family domain");
    if (table.family.tag != fam_.tag || table.family.alpha != fam_.alpha || table.family.mu != fam_.mu ||
        table.tau.size() > tau_rule_.size() || (!table.tau.empty() && table.tau.back() != tau_rule_.nodes[table.tau.size() - 1]))
        throw std::invalid_argument("inverse: table was not produced by this engine");
    auto it = columns_.find(x);
    if (it == columns_.end()) {
        std::vector<double> col(tau_rule_.size());
        for (size_t i = 0; i < col.size(); ++i) {
            double tau = tau_rule_.nodes[i];
            col[i] = (kernel_scaled(fam_, tau, x, opt_.kernel_tol) * spectral_density_scaled(fam_, tau)).value();
        }
        it = columns_.emplace(x, std::move(col)).first;
    }
    std::vector<double> terms(table.tau.size());
    for (size_t i = 0; i < terms.size(); ++i) terms[i] = table.weight[i] * table.fhat[i] * it->second[i];
    return pairwise_sum(terms.data(), terms.size());
}

double forward(const TransformFamily& fam, const std::function<double(double)>& f, double tau, double lower,
               double upper, const TransformOptions& opt, QuadResult* info)
{
    fam.validate();
    if (tau < 0.0) throw std::domain_error("forward: tau must be nonnegative");
    if (!(lower >= fam.lower()) || !(upper > lower)) throw std::invalid_argument("forward: invalid integration range");
    double s_lo = log_coordinate(fam) ? std::log(std::max(lower, 1e-14)) : std::acosh(std::max(lower, 1.0));
    double s_hi = to_s(fam, upper);
    auto g = [&](double s) {
        double y = to_y(fam, s);
        if (!fam.in_domain(y)) return 0.0;
        double fy = f(y);
        if (fy == 0.0) return 0.0;
        return fy * reference_weight(fam, y) * jacobian(fam, s) * kernel_scaled(fam, tau, y, opt.kernel_tol).value();
    };
    auto br = s_breaks(fam, s_lo, s_hi, std::max(tau, 1.0));
    gk::Outcome<double> total;
    total.converged = true;
    std::vector<double> parts;
    for (size_t i = 0; i + 1 < br.size(); ++i) {
        auto o = gk::adaptive<double>(g, br[i], br[i + 1], opt.rel_tol, 1e-300, 200000, 1, 1e-13);
        parts.push_back(o.value);
        total.err += o.err;
        total.l1 += o.l1;
        total.nodes += o.nodes;
        total.converged = total.converged && o.converged;
    }
    double v = pairwise_sum(parts.data(), parts.size());
    double unscale = std::exp(-index_shift(fam, tau));
    if (info) *info = {v * unscale, total.err * unscale, total.nodes, total.converged};
    return v * unscale;
}

double forward(const TransformFamily& fam, const GridFunction& f, double tau, const TransformOptions& opt,
               QuadResult* info)
{
    return forward(fam, [&f](double y) { return f(y); }, tau, std::max(f.front(), fam.lower()), f.back(), opt, info);
}

double inverse(const TransformFamily& fam, const std::function<double(double)>& F, double x,
               const TransformOptions& opt, QuadResult* info)
{
    fam.validate();
    if (!fam.in_domain(x)) throw std::domain_error("inverse: x outside the family domain");
    auto g = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        double Fv = F(tau);
        if (Fv == 0.0) return 0.0;
        LogScaled k = kernel_scaled(fam, tau, x, opt.kernel_tol) * spectral_density_scaled(fam, tau);
        return Fv * k.scaled_value(index_shift(fam, tau));
    };
    QuadSpec spec;
    spec.rel_tol = opt.rel_tol;
    spec.abs_tol = 1e-300;
    spec.decay = {DecayKind::Exponential, 2.0};
    QuadResult r = integrate(g, 0.0, inf, spec);
    if (info) *info = r;
    return r.value;
}

double inverse(const SpectralTable& table, double x, double kernel_tol)
{
    const auto& fam = table.family;
    if (!fam.in_domain(x)) throw std::domain_error("inverse: x outside the family domain");
    std::vector<double> terms(table.tau.size());
    for (size_t i = 0; i < table.tau.size(); ++i) {
        double tau = table.tau[i];
        LogScaled k = kernel_scaled(fam, tau, x, kernel_tol) * spectral_density_scaled(fam, tau);
        terms[i] = table.weight[i] * table.fhat[i] * k.value();
    }
    return pairwise_sum(terms.data(), terms.size());
}

double reference_norm2(const TransformFamily& fam, const std::function<double(double)>& f, double lower,
                       double upper)
{
    double s_lo = log_coordinate(fam) ? std::log(std::max(lower, 1e-14)) : std::acosh(std::max(lower, 1.0));
    double s_hi = to_s(fam, upper);
    auto g = [&](double s) {
        double y = to_y(fam, s);
        if (!fam.in_domain(y)) return 0.0;
        double fy = f(y);
        return fy * fy * reference_weight(fam, y) * jacobian(fam, s);
    };
    std::vector<double> br;
    for (int i = 0; i <= 64; ++i) br.push_back(s_lo + (s_hi - s_lo) * i / 64.0);
    std::vector<double> parts;
    for (size_t i = 0; i + 1 < br.size(); ++i)
        parts.push_back(gk::adaptive<double>(g, br[i], br[i + 1], 1e-12, 1e-300, 100000, 1, 1e-15).value);
    return pairwise_sum(parts.data(), parts.size());
}

double spectral_norm2(const SpectralTable& table, double* tail)
{
    std::vector<double> terms(table.tau.size());
    for (size_t i = 0; i < table.tau.size(); ++i)
        terms[i] = table.weight[i] * table.fhat[i] * table.fhat[i] * spectral_density_scaled(table.family, table.tau[i]).value();
    double s = pairwise_sum(terms.data(), terms.size());
    double tl = 0.0;
    if (table.family.tag == FamilyTag::MehlerFock && table.truncated_by_cap && table.tau_end > 0.0) {
        double mu = table.family.mu;
        tl = table.edge_value * table.edge_value * mu * mu / (2.0 * table.tau_end * table.tau_end);
    }
    if (tail) *tail = tl;
    return s + tl;
}

ParsevalGap parseval_gap(TransformEngine& engine, const std::function<double(double)>& f, double lower,
                         double upper)
{
    ParsevalGap g;
    g.lhs = reference_norm2(engine.family(), f, lower, upper);
    SpectralTable t = engine.forward_table(f);
    g.rhs = spectral_norm2(t, &g.tail);
    return g;
}

ParsevalGap parseval_gap(const TransformFamily& fam, const GridFunction& f, const TransformOptions& opt)
{
    TransformEngine engine(fam, std::max(f.front(), fam.lower()), f.back(), opt);
    return parseval_gap(engine, [&f](double y) { return f(y); }, std::max(f.front(), fam.lower()), f.back());
}

}
