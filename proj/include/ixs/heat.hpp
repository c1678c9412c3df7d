#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ixs/family.hpp"
#include "ixs/quad.hpp"

namespace ixs {

struct SLOperator {
    std::function<double(double)> p, dp, q, r;
    double a = 0.0;
    double b = inf;
    std::optional<TransformFamily> family;

    double k(double x) const { return q(x) / r(x); }
    double generator(const std::function<double(double)>& u, double x, double h) const;
    bool standing_assumptions_hold(double x) const;
};

SLOperator family_operator(const TransformFamily& fam);

enum class Measure { WrtR, WrtLebesgue };

struct HeatKernelSpec {
    TransformFamily family;
    double t = 1.0;
    Measure measure = Measure::WrtR;
};

struct HeatOptions {
    double tau_tol = 1e-16;
    double tau_panel = 0.5;
    double kernel_tol = 1e-12;
};

class SpectralEngine {
public:
    SpectralEngine(const TransformFamily& fam, double t_min, const HeatOptions& opt = {});

    double heat(double t, double x, double y);
    double heat(const HeatKernelSpec& spec, double x, double y);
    double yor(double t, double x);
    void prefetch(const std::vector<double>& xs);

    const TransformFamily& family() const { return fam_; }
    double t_min() const { return t_min_; }
    double tau_cap() const { return tau_cap_; }
    size_t tau_nodes() const { return tau_.size(); }

private:
    const std::vector<double>& phi(double x);
    void check_t(double t) const;

    TransformFamily fam_;
    double t_min_;
    HeatOptions opt_;
    double tau_cap_;
    std::vector<double> tau_, wrho_, lambda_, shift_;
    std::map<double, std::vector<double>> cache_;
};

struct SpaceGrid {
    std::vector<double> x, w;
};

SpaceGrid space_grid(const TransformFamily& fam, double x, double y, double horizon);

double heat_kernel(const TransformFamily& fam, double t, double x, double y, Measure measure = Measure::WrtR);
double heat_kernel(const HeatKernelSpec& spec, double x, double y);

double heat_mass(SpectralEngine& eng, double t, double x);
double heat_mass(const TransformFamily& fam, double t, double x);

double chapman_kolmogorov_residual(SpectralEngine& eng, double t, double s, double x, double y);
double chapman_kolmogorov_residual(const TransformFamily& fam, double t, double s, double x, double y);

double pde_residual(SpectralEngine& eng, double t, double x, double y, double h_t = 1e-3, double h_x = 1e-3);
double pde_residual(const TransformFamily& fam, double t, double x, double y, double h_t = 1e-3, double h_x = 1e-3);

double resolvent_kernel(const TransformFamily& fam, double lambda, double x, double y);

struct LaplaceCheck {
    double laplace = 0.0;
    double resolvent = 0.0;
    double t0 = 0.0;
    double head_bound = 0.0;
    QuadResult quad;
    double rel_error() const;
};

LaplaceCheck resolvent_laplace_check(const TransformFamily& fam, double lambda, double x, double y);

double monotonicity_gap(const TransformFamily& first, const TransformFamily& second, double t, double x, double y);

double mf_half_closed_form(double t, double x, double y);

}
