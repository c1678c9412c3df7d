#include "ixs/feller.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "ixs/expr.hpp"
#include "ixs/gk.hpp"

namespace ixs {

namespace {

struct Shell {
    double inner, outer;
};

class ShellWalker {
public:
    ShellWalker(double e, double c, const FellerOptions& opt) : e_(e), c_(c), opt_(opt)
    {
        if (std::isfinite(e)) {
            d0_ = std::fabs(c - e);
            floor_ = opt.min_offset * std::max(1.0, std::fabs(e));
        }
        dir_ = e > c ? 1.0 : -1.0;
        scale_ = std::max(1.0, std::fabs(c));
    }

    bool next(Shell& s)
    {
        if (k_ >= opt_.max_refinements) return false;
        double inner = point(k_), outer = point(k_ + 1);
        if (std::isfinite(e_) && std::fabs(outer - e_) < floor_) return false;
        s = {inner, outer};
        ++k_;
        return true;
    }

private:
    double point(int k) const
    {
        if (k == 0) return c_;
        if (std::isfinite(e_)) return e_ - dir_ * d0_ * std::ldexp(1.0, -k);
        return c_ + dir_ * scale_ * (std::ldexp(1.0, k) - 1.0);
    }

    double e_, c_;
    FellerOptions opt_;
    double d0_ = 0.0, floor_ = 0.0, dir_ = 1.0, scale_ = 1.0;
    int k_ = 0;
};

double segment(const std::function<double(double)>& f, double a, double b)
{
    double lo = std::min(a, b), hi = std::max(a, b);
    auto o = gk::adaptive<double>(f, lo, hi, 1e-10, 1e-300, 20000, 1);
    return o.value;
}

ImproperValue nested_improper(const std::function<double(double)>& outer, const std::function<double(double)>* inner,
                              double e, double c, const FellerOptions& opt)
{
    ImproperValue v;
    v.threshold = opt.threshold;
    ShellWalker walk(e, c, opt);
    std::vector<double> inc;
    double total = 0.0, cumulative = 0.0;
    Shell s;
    while (walk.next(s)) {
        double base = cumulative;
        double si = s.inner;
        auto g = [&](double x) {
            double w = inner ? base + segment(*inner, si, x) : 1.0;
            return std::fabs(outer(x)) * w;
        };
        double piece = segment(g, s.inner, s.outer);
        if (inner) cumulative += segment(*inner, s.inner, s.outer);
        if (!std::isfinite(piece) || !std::isfinite(cumulative)) {
            v.status = Finiteness::Diverged;
            v.value = inf;
            v.refinements = static_cast<int>(inc.size()) + 1;
            return v;
        }
        total += piece;
        inc.push_back(std::fabs(piece));
        v.refinements = static_cast<int>(inc.size());
        v.value = total;
        size_t n = inc.size();
        if (n < 5) continue;
        double r1 = inc[n - 1] / inc[n - 2], r2 = inc[n - 2] / inc[n - 3], r3 = inc[n - 3] / inc[n - 4];
        bool growing = inc[n - 1] > 0.0 && inc[n - 2] > 0.0 && inc[n - 3] > 0.0;
        if (total >= opt.threshold && growing) {
            v.status = Finiteness::Diverged;
            return v;
        }
        double rmax = std::max({r1, r2, r3});
        if (inc[n - 1] == 0.0 && inc[n - 2] == 0.0) {
            v.status = Finiteness::Finite;
            return v;
        }
        if (rmax <= 0.8) {
            double tail = inc[n - 1] * rmax / (1.0 - rmax);
            if (tail <= opt.rel_tol * std::fabs(total)) {
                v.value = total + tail;
                v.status = Finiteness::Finite;
                return v;
            }
        }
        if (n >= 8 && std::min({r1, r2, r3}) >= 0.95 && growing) {
            v.status = Finiteness::Diverged;
            return v;
        }
    }
    return v;
}

}

std::string to_string(BoundaryClass c)
{
    switch (c) {
    case BoundaryClass::Regular: return "Regular";
    case BoundaryClass::Exit: return "Exit";
    case BoundaryClass::Entrance: return "Entrance";
    case BoundaryClass::Natural: return "Natural";
    case BoundaryClass::Undecided: return "Undecided";
    }
    return "Undecided";
}

std::string ImproperValue::describe() const
{
    char buf[96];
    switch (status) {
    case Finiteness::Finite:
        std::snprintf(buf, sizeof buf, "%.12g", value);
        return buf;
    case Finiteness::Diverged:
        if (!std::isfinite(value) || value >= threshold) {
            std::snprintf(buf, sizeof buf, "diverged above %.3g", threshold);
            return buf;
        }
        std::snprintf(buf, sizeof buf, "diverged (non-summable shells, partial %.4g)", value);
        return buf;
    case Finiteness::Undecided:
        break;
    }
    return "undecided";
}

ImproperValue improper_integral(const std::function<double(double)>& f, double endpoint, double anchor,
                                const FellerOptions& opt)
{
    return nested_improper(f, nullptr, endpoint, anchor, opt);
}

BoundaryReport classify(const SLOperator& op, Endpoint endpoint, double anchor, const FellerOptions& opt)
{
    if (!(anchor > op.a && anchor < op.b)) throw std::domain_error("classify: anchor must lie inside the interval");
    BoundaryReport rep;
    rep.endpoint = endpoint;
    rep.location = endpoint == Endpoint::A ? op.a : op.b;
    rep.anchor = anchor;
    std::function<double(double)> inv_p = [&](double x) { return 1.0 / op.p(x); };
    std::function<double(double)> m = [&](double x) { return (1.0 + op.q(x)) * op.r(x); };
    rep.scale = nested_improper(inv_p, nullptr, rep.location, anchor, opt);
    rep.I_value = nested_improper(inv_p, &m, rep.location, anchor, opt);
    rep.J_value = nested_improper(m, &inv_p, rep.location, anchor, opt);
    rep.r_mass = nested_improper(op.r, nullptr, rep.location, anchor, opt);
    rep.r_mass_finite = rep.r_mass.status == Finiteness::Finite;
    auto st = [](const ImproperValue& v) { return v.status; };
    if (st(rep.I_value) == Finiteness::Undecided || st(rep.J_value) == Finiteness::Undecided) {
        rep.classification = BoundaryClass::Undecided;
    } else {
        bool i_fin = st(rep.I_value) == Finiteness::Finite, j_fin = st(rep.J_value) == Finiteness::Finite;
        rep.classification = i_fin ? (j_fin ? BoundaryClass::Regular : BoundaryClass::Exit)
                                   : (j_fin ? BoundaryClass::Entrance : BoundaryClass::Natural);
    }
    if (rep.classification != BoundaryClass::Undecided) {
        bool need_mass = rep.classification == BoundaryClass::Natural;
        if (need_mass && rep.r_mass.status == Finiteness::Undecided)
            rep.condition = "undecided (r-mass near the endpoint undetermined)";
        else
            rep.condition = boundary_condition(rep);
    } else {
        rep.condition = "undecided";
    }
    return rep;
}

std::string boundary_condition(const BoundaryReport& report, const std::string& p_text)
{
    char loc[32];
    if (std::isinf(report.location))
        std::snprintf(loc, sizeof loc, "%sinf", report.location > 0 ? "" : "-");
    else
        std::snprintf(loc, sizeof loc, "%.12g", report.location);
    std::string e = std::string("x->") + loc;
    switch (report.classification) {
    case BoundaryClass::Regular:
        return "(1-alpha_e) lim_{" + e + "} u(x) + alpha_e lim_{" + e + "} " + p_text + " u'(x) = 0, alpha_e in [0,1] free";
    case BoundaryClass::Exit:
        return "lim_{" + e + "} u(x) = 0";
    case BoundaryClass::Entrance:
        return "lim_{" + e + "} " + p_text + " u'(x) = 0";
    case BoundaryClass::Natural:
        if (report.r_mass_finite) return "lim_{" + e + "} " + p_text + " u'(x) = 0";
        return "no boundary condition";
    case BoundaryClass::Undecided:
        break;
    }
    throw std::invalid_argument("boundary_condition: classification is undecided");
}

SLOperator operator_from_strings(const std::string& p, const std::string& q, const std::string& r, double a, double b)
{
    if (!(a < b)) throw std::invalid_argument("operator: need a < b");
    Expr pe = Expr::parse(p), qe = Expr::parse(q), re = Expr::parse(r);
    SLOperator op;
    op.p = pe;
    op.q = qe;
    op.r = re;
    op.dp = [pe](double x) {
        double h = 1e-6 * std::max(1.0, std::fabs(x));
        return (pe(x + h) - pe(x - h)) / (2.0 * h);
    };
    op.a = a;
    op.b = b;
    return op;
}

SLOperator builtin_operator(const std::string& spec)
{
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    double param = 0.0;
    if (colon != std::string::npos) {
        std::string v = spec.substr(colon + 1);
        char* end = nullptr;
        param = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') throw std::invalid_argument("operator: bad parameter in '" + spec + "'");
    }
    if (name == "kl") return family_operator(TransformFamily::kl());
    if (name == "iw") return family_operator(TransformFamily::iw(param));
    if (name == "mf") return family_operator(TransformFamily::mf(param));
    throw std::invalid_argument("operator: unknown built-in '" + name + "' (use kl, iw:alpha, mf:mu)");
}

}
