#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "ixs/family.hpp"
#include "ixs/heat.hpp"

namespace ixs {

inline constexpr std::uint64_t default_seed = 20240917;

enum class Coordinate { Identity, LogForGBM, AcoshForLegendre };

struct DiffusionSpec {
    std::function<double(double)> drift, vol, kill_rate;
    double a = 0.0;
    double b = inf;
    Coordinate coordinate = Coordinate::Identity;
};

DiffusionSpec diffusion_spec(const TransformFamily& fam);

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    std::uint64_t seed = 0;
    int n_steps = 0;

    double z_score(double reference) const;
};

MCEstimate summarize(const std::vector<double>& samples, std::uint64_t seed, int n_steps);

class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path);
    double normal() { return dist_(gen_); }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> dist_;
};

struct PathBundle {
    double t = 0.0;
    int n_steps = 0;
    long n_paths = 0;
    long step_warnings = 0;
    std::vector<double> x;

    double dt() const { return t / n_steps; }
    double at(long path, int j) const { return x[static_cast<size_t>(path) * (n_steps + 1) + j]; }
    const double* path(long p) const { return x.data() + static_cast<size_t>(p) * (n_steps + 1); }
};

void gbm_path(double x0, double t, int n_steps, PathRng& rng, double* out);
long legendre_path(double x0, double t, int n_steps, PathRng& rng, double* out);

PathBundle simulate_gbm_paths(double x0, double t, int n_steps, long n_paths, std::uint64_t seed = default_seed);
PathBundle simulate_legendre_paths(double x0, double t, int n_steps, long n_paths,
                                   std::uint64_t seed = default_seed);

double trapezoid_functional(const double* path, int n_steps, double dt, const std::function<double(double)>& k);
double legendre_killing_functional(const double* path, int n_steps, double dt, double mu);
std::vector<double> additive_functional(const PathBundle& paths, const std::function<double(double)>& kill_rate);

void write_paths_csv(std::ostream& out, const PathBundle& paths, long max_paths = 100);

struct FeynmanKacRun {
    MCEstimate estimate;
    long step_warnings = 0;
};

FeynmanKacRun mc_feynman_kac(const TransformFamily& fam, const std::function<double(double)>& psi, double t,
                             double x0, long n_paths, int n_steps, std::uint64_t seed = default_seed,
                             bool killing = true);

double spectral_expectation(SpectralEngine& eng, const std::function<double(double)>& psi, double t, double x0);

double bougerol_integral(double t, double x);

struct BougerolCheck {
    MCEstimate lhs_mc;
    double rhs_quad = 0.0;
    double spectral_double = 0.0;
};

BougerolCheck bougerol_check(double t, double x, long n_paths = 100000, int n_steps = 400,
                             std::uint64_t seed = default_seed);

double conditional_laplace_closed(double t, double x, double y);

struct ConditionalLaplaceCheck {
    MCEstimate mc;
    double closed = 0.0;
};

ConditionalLaplaceCheck conditional_laplace_check(double t, double x, double y, long n_paths = 100000,
                                                  std::uint64_t seed = default_seed, int n_steps = 400);

}
