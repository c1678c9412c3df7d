#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ixs/family.hpp"
#include "ixs/quad.hpp"

namespace ixs {

enum class Interp { Cubic, Linear };

class GridFunction {
public:
    GridFunction() = default;
    GridFunction(std::vector<double> nodes, std::vector<double> values, Interp interp = Interp::Cubic);

    static GridFunction sample(const std::function<double(double)>& f, std::vector<double> nodes,
                               Interp interp = Interp::Cubic);

    double operator()(double x) const;
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    Interp interp() const { return interp_; }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }
    size_t size() const { return nodes_.size(); }

private:
    std::vector<double> nodes_, values_;
    Interp interp_ = Interp::Cubic;
    std::shared_ptr<const std::function<double(double)>> spline_;
};

GridFunction read_grid_csv(std::istream& in, Interp interp = Interp::Cubic);
GridFunction read_grid_csv_file(const std::string& path, Interp interp = Interp::Cubic);

std::vector<double> domain_nodes(const TransformFamily& fam, double upper, int count = 3000, double gap = 1e-12);

struct TransformOptions {
    double tau_cap = 0.0;
    double tau_panel = 1.0;
    double kernel_tol = 1e-12;
    double rel_tol = 1e-10;
    double stop_tol = 1e-15;
};

struct SpectralTable {
    TransformFamily family;
    std::vector<double> tau, weight, fhat, noise;
    double tau_end = 0.0;
    double edge_value = 0.0;
    bool truncated_by_cap = false;
    bool noise_limited = false;

    double value(size_t i) const;
};

class TransformEngine {
public:
    TransformEngine(const TransformFamily& fam, double y_lo, double y_hi, const TransformOptions& opt = {});

    SpectralTable forward_table(const std::function<double(double)>& f);
    SpectralTable forward_table(const GridFunction& f);
    double inverse(const SpectralTable& table, double x);

    const TransformFamily& family() const { return fam_; }
    long kernel_evaluations() const { return evaluations_; }

private:
    void ensure_panel(size_t panel);

    TransformFamily fam_;
    TransformOptions opt_;
    double tau_cap_;
    std::vector<double> y_, wk_, wg_;
    PanelRule tau_rule_;
    std::vector<std::vector<double>> rows_;
    std::map<double, std::vector<double>> columns_;
    long evaluations_ = 0;
};

double default_tau_cap(const TransformFamily& fam);

double forward(const TransformFamily& fam, const std::function<double(double)>& f, double tau, double lower,
               double upper, const TransformOptions& opt = {}, QuadResult* info = nullptr);
double forward(const TransformFamily& fam, const GridFunction& f, double tau, const TransformOptions& opt = {},
               QuadResult* info = nullptr);

double inverse(const TransformFamily& fam, const std::function<double(double)>& F, double x,
               const TransformOptions& opt = {}, QuadResult* info = nullptr);
double inverse(const SpectralTable& table, double x, double kernel_tol = 1e-12);

struct ParsevalGap {
    double lhs = 0.0;
    double rhs = 0.0;
    double tail = 0.0;
    double gap() const { return rhs - lhs; }
};

double reference_norm2(const TransformFamily& fam, const std::function<double(double)>& f, double lower,
                       double upper);
double spectral_norm2(const SpectralTable& table, double* tail = nullptr);

ParsevalGap parseval_gap(const TransformFamily& fam, const GridFunction& f, const TransformOptions& opt = {});
ParsevalGap parseval_gap(TransformEngine& engine, const std::function<double(double)>& f, double lower,
                         double upper);

}
