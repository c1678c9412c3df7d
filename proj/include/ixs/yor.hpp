#pragma once

#include <stdexcept>

#include "ixs/family.hpp"
#include "ixs/heat.hpp"
#include "ixs/quad.hpp"

namespace ixs {

enum class YorRepr { Spectral, Elementary };

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedRepresentation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double theta_elementary_min_t = 0.05;

double yor_theta(double t, double x, YorRepr repr = YorRepr::Spectral, QuadResult* info = nullptr);

double yor_generalized(const TransformFamily& fam, double t, double x, YorRepr repr = YorRepr::Spectral,
                       QuadResult* info = nullptr);

double hartman_watson_density(double t, double x);

struct HartmanWatsonMass {
    double total = 0.0;
    double body = 0.0;
    double tail = 0.0;
    double head_bound = 0.0;
    double t_head = 0.0;
    double t_tail = 0.0;
    QuadResult quad;
};

HartmanWatsonMass hartman_watson_mass(double x, double t_head = 0.1, double t_tail = 4.0);

double yor_pde_residual(SpectralEngine& eng, double t, double x, double h_t = 1e-3, double h_x = 1e-3);
double yor_pde_residual(const TransformFamily& fam, double t, double x, double h_t = 1e-3, double h_x = 1e-3);

double evolution_residual(SpectralEngine& eng, double t, double s, double x);
double evolution_residual(const TransformFamily& fam, double t, double s, double x);

}
