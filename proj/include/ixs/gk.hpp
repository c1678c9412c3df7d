#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ixs::gk {

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double err;
    double l1;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class T>
struct Outcome {
    T value{};
    double err = 0.0;
    double l1 = 0.0;
    long nodes = 0;
    bool converged = false;
};

template <class T, class F>
Panel<T> rule21(F& f, double a, double b)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    T rk = fc * wk[0];
    T rg{};
    double resabs = std::fabs(wk[0]) * magnitude(fc);
    T fv[21];
    fv[0] = fc;
    for (int i = 1; i <= 10; ++i) {
        T f1 = f(c - h * xk[i]);
        T f2 = f(c + h * xk[i]);
        fv[2 * i - 1] = f1;
        fv[2 * i] = f2;
        rk += wk[i] * (f1 + f2);
        resabs += wk[i] * (magnitude(f1) + magnitude(f2));
        if (i % 2 == 1) rg += wg[i / 2] * (f1 + f2);
    }
    T mean = rk * 0.5;
    double resasc = wk[0] * magnitude(fc - mean);
    for (int i = 1; i <= 10; ++i)
        resasc += wk[i] * (magnitude(fv[2 * i - 1] - mean) + magnitude(fv[2 * i] - mean));
    double err = magnitude(rk - rg) * std::fabs(h);
    resasc *= std::fabs(h);
    resabs *= std::fabs(h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (floor > err) err = floor;
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    return {a, b, rk * h, err, resabs};
}

template <class T, class F>
Outcome<T> adaptive(F&& f, double a, double b, double rel_tol, double abs_tol, long max_nodes, int initial_panels = 1,
                    double l1_tol = 0.0)
{
    std::priority_queue<Panel<T>> heap;
    Outcome<T> out;
    initial_panels = std::max(1, initial_panels);
    double w = (b - a) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        double lo = a + i * w, hi = (i + 1 == initial_panels) ? b : a + (i + 1) * w;
        heap.push(rule21<T>(f, lo, hi));
        out.nodes += 21;
    }
    double l1 = 0.0;
    auto totals = [&](T& v, double& e) {
        auto copy = heap;
        std::vector<Panel<T>> ps;
        while (!copy.empty()) {
            ps.push_back(copy.top());
            copy.pop();
        }
        std::sort(ps.begin(), ps.end(), [](const Panel<T>& p, const Panel<T>& q) { return p.a < q.a; });
        v = T{};
        e = 0.0;
        l1 = 0.0;
        for (auto& p : ps) {
            v += p.value;
            e += p.err;
            l1 += p.l1;
        }
    };
    T val{};
    double err = 0.0;
    for (auto copy = heap; !copy.empty(); copy.pop()) {
        val += copy.top().value;
        err += copy.top().err;
        l1 += copy.top().l1;
    }
    auto target = [&] { return std::max({abs_tol, rel_tol * magnitude(val), l1_tol * l1}); };
    while (err > target()) {
        if (out.nodes + 42 > max_nodes) break;
        Panel<T> worst = heap.top();
        double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        Panel<T> l = rule21<T>(f, worst.a, mid);
        Panel<T> r = rule21<T>(f, mid, worst.b);
        out.nodes += 42;
        val += l.value + r.value - worst.value;
        err += l.err + r.err - worst.err;
        l1 += l.l1 + r.l1 - worst.l1;
        heap.push(l);
        heap.push(r);
        if (heap.size() % 64 == 0) totals(val, err);
    }
    totals(val, err);
    out.value = val;
    out.err = err;
    out.l1 = l1;
    out.converged = err <= target();
    return out;
}

}
