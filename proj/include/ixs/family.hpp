#pragma once

#include <string>
#include <vector>

#include "ixs/logscaled.hpp"
#include "ixs/specfun.hpp"

namespace ixs {

enum class FamilyTag { KontorovichLebedev, IndexWhittaker, MehlerFock };

struct TransformFamily {
    FamilyTag tag = FamilyTag::KontorovichLebedev;
    double alpha = 0.0;
    double mu = 0.0;

    static TransformFamily kl();
    static TransformFamily iw(double alpha);
    static TransformFamily mf(double mu);

    double lower() const;
    bool in_domain(double x) const;
    std::string name() const;
    void validate() const;
};

TransformFamily parse_family(const std::string& name, double alpha, double mu);

double eigenvalue(const TransformFamily& fam, double tau);

double reference_weight(const TransformFamily& fam, double y);
double operator_weight(const TransformFamily& fam, double y);

double index_shift(const TransformFamily& fam, double tau);

LogScaled spectral_density_log(const TransformFamily& fam, double tau);
double spectral_density(const TransformFamily& fam, double tau);
LogScaled spectral_density_scaled(const TransformFamily& fam, double tau);

LogScaled kernel_scaled(const TransformFamily& fam, double tau, double y, double rel_tol = default_special_tol,
                        EvalInfo* info = nullptr);
double kernel(const TransformFamily& fam, double tau, double y, double rel_tol = default_special_tol);
std::vector<double> kernel_row_scaled(const TransformFamily& fam, double tau, const std::vector<double>& ys,
                                      double rel_tol = default_special_tol);

LogScaled eigenfunction_scaled(const TransformFamily& fam, double tau, double x, double rel_tol = default_special_tol,
                               EvalInfo* info = nullptr);
std::vector<double> eigenfunction_row_scaled(const TransformFamily& fam, double tau, const std::vector<double>& xs,
                                             double rel_tol = default_special_tol);

double yor_weight(const TransformFamily& fam);

}
