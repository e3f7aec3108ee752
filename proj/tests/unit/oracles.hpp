#pragma once

// Brute-force reference computations used to check the library. They share
// no code with it beyond the types.

#include <functional>
#include <vector>

#include "jointlife/copulas.hpp"
#include "jointlife/lifetable.hpp"

namespace oracle {

struct Rule {
  std::vector<double> x, w;  // on [0, 1]
};
Rule gauss_legendre(int n);

double simpson(const std::function<double(double)>& f, double a, double b, int panels = 2000);

// Spearman from O(n^2) rank counting.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Expected present values by enumerating the curtate lifetime K of a life
// aged x: P(K = k) = kpx q(x+k).
struct SingleValues {
  double whole = 0.0, annuity = 0.0, term = 0.0, endowment = 0.0, temporary = 0.0;
};
SingleValues enumerate_single(const std::vector<double>& q, int x, int n, double i);

// Joint values by enumerating (K_f, K_m), with P(K_f >= a, K_m >= b) read off
// the copula and the pmf recovered by finite differences.
struct JointValues {
  double joint = 0.0, last = 0.0, widow = 0.0;
};
JointValues enumerate_joint(const std::vector<double>& q_f, int x_f, const std::vector<double>& q_m, int x_m,
                            const std::function<double(double, double)>& copula, double i);

// Random closed table on ages 0..omega.
std::vector<double> random_table(int omega, std::uint64_t seed);

}  // namespace oracle
