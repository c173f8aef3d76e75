#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tzopt {

/// Least-squares fit with HC1 heteroskedasticity-robust standard errors.
struct OlsFit {
    std::vector<double> beta;
    std::vector<double> se;         // HC1 robust
    std::vector<double> residuals;  // original (unweighted) scale
    std::vector<double> hat_diag;   // leverage h_ii of the (weighted) fit
    std::size_t n = 0, p = 0;
};

/// OLS of y on the row-major n x p design X via column-scaled Householder
/// QR. Optional weights w fit the model with rows scaled by sqrt(w).
/// Throws ComputeError on rank deficiency, naming the offending column
/// when names are given, and when n <= p.
OlsFit ols_fit(const std::vector<double>& X, std::size_t n, std::size_t p,
               const std::vector<double>& y, const std::vector<double>* weights = nullptr,
               const std::vector<std::string>* col_names = nullptr);

/// Two-sided p-value of a z statistic under the normal reference.
double normal_two_sided_p(double z);

}  // namespace tzopt
