#pragma once

namespace jointlife {

double norm_pdf(double x);
double norm_cdf(double x);
// Inverse of norm_cdf on (0, 1); returns -inf/+inf at 0/1.
double norm_quantile(double p);

/// P[X <= h, Y <= k] for a standard bivariate normal with correlation rho.
/// Genz's refinement of the Drezner-Wesolowsky method (Gauss-Legendre over
/// the Plackett integral), absolute error below 1e-14.
double bivariate_normal_cdf(double h, double k, double rho);

}  // namespace jointlife
