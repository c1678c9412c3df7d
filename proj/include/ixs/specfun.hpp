#pragma once

#include <complex>
#include <vector>

#include "ixs/logscaled.hpp"

namespace ixs {

struct EvalInfo {
    double err_estimate = 0.0;
    long nodes = 0;
    bool accurate = true;
};

inline constexpr double default_special_tol = 1e-10;
inline constexpr double series_min_tau = 1e-3;

std::complex<double> log_gamma(std::complex<double> z);
double gamma_abs2(double a, double tau);
double log_gamma_abs2(double a, double tau);

double bessel_k_im(double tau, double x, double rel_tol = default_special_tol, EvalInfo* info = nullptr);
LogScaled bessel_k_im_scaled(double tau, double x, double rel_tol = default_special_tol, EvalInfo* info = nullptr);
LogScaled bessel_k_im_integral_scaled(double tau, double x, double rel_tol = default_special_tol,
                                      EvalInfo* info = nullptr);
double bessel_k_im_direct(double tau, double x, double rel_tol = 1e-12);

double bessel_k(double nu, double x);
double bessel_i(double nu, double x);

LogScaled bessel_k_im_series_scaled(double tau, double x);
LogScaled whittaker_w_im_series_scaled(double alpha, double tau, double z);
LogScaled whittaker_w_im_ode_scaled(double alpha, double tau, double z);

double whittaker_w_im(double alpha, double tau, double x, double rel_tol = default_special_tol,
                      EvalInfo* info = nullptr);
LogScaled whittaker_w_im_scaled(double alpha, double tau, double x, double rel_tol = default_special_tol,
                                EvalInfo* info = nullptr);
LogScaled whittaker_w_im_integral_scaled(double alpha, double tau, double x, double rel_tol = default_special_tol,
                                         EvalInfo* info = nullptr);
std::complex<double> whittaker_w_im_direct(double alpha, double tau, double x, double rel_tol = 1e-12);

double whittaker_w(double alpha, double eta, double x);
double whittaker_m(double alpha, double eta, double x);

double legendre_p_im(double mu, double tau, double x, double rel_tol = default_special_tol, EvalInfo* info = nullptr);
std::vector<double> legendre_p_im_many(double mu, double tau, const std::vector<double>& xs);
double legendre_p_im_direct(double mu, double tau, double x, double rel_tol = 1e-12);
double legendre_p(double mu, double nu, double x);
double legendre_q(double mu, double nu, double x);

}
