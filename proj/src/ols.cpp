#include "tzopt/ols.hpp"

#include <cmath>
#include <string>

#include "tzopt/errors.hpp"
#include "tzopt/kernels.hpp"

namespace tzopt {

namespace {

std::string column_label(std::size_t j, const std::vector<std::string>* names) {
    if (names != nullptr && j < names->size()) return "'" + (*names)[j] + "'";
    return "#" + std::to_string(j);
}

}  // namespace

double normal_two_sided_p(double z) {
    if (std::isnan(z)) return 1.0;
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

OlsFit ols_fit(const std::vector<double>& X, std::size_t n, std::size_t p,
               const std::vector<double>& y, const std::vector<double>* weights,
               const std::vector<std::string>* col_names) {
    if (n == 0 || p == 0 || X.size() != n * p || y.size() != n) {
        throw ComputeError("ols_fit: inconsistent design dimensions");
    }
    if (n <= p) {
        throw ComputeError("ols_fit: need more observations (n=" + std::to_string(n) +
                           ") than parameters (p=" + std::to_string(p) + ")");
    }

    // Scaled, weighted, column-major working copies. A is factored in
    // place; As stays pristine for the sandwich and leverages.
    std::vector<double> scale(p, 0.0);
    std::vector<double> sqw;
    if (weights != nullptr) {
        if (weights->size() != n) throw ComputeError("ols_fit: weights size mismatch");
        sqw.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!((*weights)[i] >= 0.0)) throw ComputeError("ols_fit: negative weight");
            sqw[i] = std::sqrt((*weights)[i]);
        }
    }
    std::vector<double> A(n * p), yw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = sqw.empty() ? 1.0 : sqw[i];
        yw[i] = wi * y[i];
        for (std::size_t j = 0; j < p; ++j) {
            const double v = wi * X[i * p + j];
            A[j * n + i] = v;
            const double a = std::abs(v);
            if (a > scale[j]) scale[j] = a;
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        if (scale[j] == 0.0) {
            throw ComputeError("collinear design: column " + column_label(j, col_names) +
                               " is identically zero");
        }
        const double inv = 1.0 / scale[j];
        for (std::size_t i = 0; i < n; ++i) A[j * n + i] *= inv;
    }
    const std::vector<double> As = A;

    // Householder QR; R accumulates in the upper triangle of A.
    const double rank_tol = 1e-10 * std::sqrt(static_cast<double>(n));
    for (std::size_t jj = 0; jj < p; ++jj) {
        double* col = &A[jj * n];
        double sigma = 0.0;
        for (std::size_t i = jj; i < n; ++i) sigma += col[i] * col[i];
        sigma = std::sqrt(sigma);
        if (sigma <= rank_tol) {
            throw ComputeError("collinear design: column " + column_label(jj, col_names) +
                               " is linearly dependent on earlier columns");
        }
        const double alpha = col[jj] >= 0.0 ? -sigma : sigma;
        const double v0 = col[jj] - alpha;
        double vtv = v0 * v0;
        for (std::size_t i = jj + 1; i < n; ++i) vtv += col[i] * col[i];
        col[jj] = alpha;  // R_jj
        if (vtv > 0.0) {
            const double two_over = 2.0 / vtv;
            auto reflect = [&](double* target) {
                double t = v0 * target[jj];
                for (std::size_t i = jj + 1; i < n; ++i) t += col[i] * target[i];
                t *= two_over;
                target[jj] -= t * v0;
                for (std::size_t i = jj + 1; i < n; ++i) target[i] -= t * col[i];
            };
            for (std::size_t c = jj + 1; c < p; ++c) reflect(&A[c * n]);
            reflect(yw.data());
        }
    }

    // Back-substitution for the scaled coefficients.
    std::vector<double> beta_s(p, 0.0);
    for (std::size_t j = p; j-- > 0;) {
        double acc = yw[j];
        for (std::size_t c = j + 1; c < p; ++c) acc -= A[c * n + j] * beta_s[c];
        beta_s[j] = acc / A[j * n + j];
    }

    OlsFit fit;
    fit.n = n;
    fit.p = p;
    fit.beta.resize(p);
    for (std::size_t j = 0; j < p; ++j) fit.beta[j] = beta_s[j] / scale[j];

    // Residuals in the original scale; weighted copies feed the sandwich.
    fit.residuals.resize(n);
    std::vector<double> esq(n);
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < p; ++j) pred += X[i * p + j] * fit.beta[j];
        fit.residuals[i] = y[i] - pred;
        const double ew = (sqw.empty() ? 1.0 : sqw[i]) * fit.residuals[i];
        esq[i] = ew * ew;
    }

    // Bread: (Xs'Xs)^{-1} = Rinv Rinv' from the triangular factor.
    std::vector<double> rinv(p * p, 0.0);  // row-major upper triangular
    for (std::size_t j = p; j-- > 0;) {
        rinv[j * p + j] = 1.0 / A[j * n + j];
        for (std::size_t i = j; i-- > 0;) {
            double acc = 0.0;
            for (std::size_t c = i + 1; c <= j; ++c) acc += A[c * n + i] * rinv[c * p + j];
            rinv[i * p + j] = -acc / A[i * n + i];
        }
    }
    std::vector<double> bread(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            double acc = 0.0;
            for (std::size_t c = std::max(i, j); c < p; ++c) {
                acc += rinv[i * p + c] * rinv[j * p + c];
            }
            bread[i * p + j] = acc;
        }
    }

    // HC1 sandwich in the scaled space, unscaled at the end.
    const auto& k = kernels::active();
    std::vector<double> meat(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            const double m = k.dot3(esq.data(), &As[i * n], &As[j * n], n);
            meat[i * p + j] = m;
            meat[j * p + i] = m;
        }
    }
    const double dof_adj = static_cast<double>(n) / static_cast<double>(n - p);
    fit.se.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        double vjj = 0.0;
        for (std::size_t a = 0; a < p; ++a) {
            double bm = 0.0;
            for (std::size_t b = 0; b < p; ++b) bm += bread[j * p + b] * meat[b * p + a];
            vjj += bm * bread[a * p + j];
        }
        vjj = std::max(0.0, vjj * dof_adj);
        fit.se[j] = std::sqrt(vjj) / scale[j];
    }

    // Leverages of the (weighted, scaled) fit: h_ii = xs_i' bread xs_i.
    fit.hat_diag.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double h = 0.0;
        for (std::size_t a = 0; a < p; ++a) {
            double tmp = 0.0;
            for (std::size_t b = 0; b < p; ++b) tmp += bread[a * p + b] * As[b * n + i];
            h += As[a * n + i] * tmp;
        }
        fit.hat_diag[i] = h;
    }
    return fit;
}

}  // namespace tzopt
