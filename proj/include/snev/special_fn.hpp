#pragma once

#include "snev/log_scaled.hpp"

namespace snev {

// Standard normal density, also available in log scale.
double normal_pdf(double x);
LogScaledValue normal_pdf_log(double x);

double normal_cdf(double x);

// 1 - Phi(x) with full relative accuracy for every x (no cancellation in
// the upper tail). log_normal_sf is the raw log value.
LogScaledValue normal_survival(double x);
double log_normal_sf(double x);

// Owen's T(h, a) = (1/2pi) int_0^a exp(-h^2(1+t^2)/2) / (1+t^2) dt.
// Odd in a, even in h by construction.
double owen_t(double h, double a);

// Principal branch of w e^w = x for x >= -1/e.
double lambert_w0(double x);

// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, double* nodes, double* weights);

}  // namespace snev
