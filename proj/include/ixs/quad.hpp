#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ixs/logscaled.hpp"

namespace ixs {

inline constexpr double inf = std::numeric_limits<double>::infinity();

enum class DecayKind { None, Gaussian, Exponential };

struct DecayHint {
    DecayKind kind = DecayKind::None;
    double scale = 1.0;
};

struct QuadSpec {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    long max_nodes = 200000;
    DecayHint decay{};
    std::optional<double> oscillation{};
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long nodes_used = 0;
    bool converged = false;
};

void validate(const QuadSpec& spec);

QuadResult integrate(const std::function<double(double)>& f, double lower, double upper, const QuadSpec& spec = {});

QuadResult integrate_logspace(const std::function<LogScaled(double)>& f_log, double lower, double upper,
                              const QuadSpec& spec = {});

enum class Oscillator { Cos, Sin };

QuadResult integrate_oscillatory(const std::function<double(double)>& g, double lower, double upper, double omega,
                                 Oscillator kind, const QuadSpec& spec = {});

double spectral_tau_max(double t, double tol);

struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> kronrod;
    std::vector<double> gauss;
    double apply(const std::vector<double>& values) const;
    double error(const std::vector<double>& values) const;
    size_t size() const { return nodes.size(); }
};

PanelRule panel_rule(const std::vector<double>& breaks);
PanelRule panel_rule(double a, double b, int panels);

double pairwise_sum(const double* v, size_t n);

}
