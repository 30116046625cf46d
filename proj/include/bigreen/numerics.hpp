#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace bigreen {

/// Bisect f on [lo, hi] (f(lo), f(hi) of opposite sign) until the bracket is
/// shorter than xtol.  Returns the midpoint of the final bracket.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double flo,
                     double xtol) {
    for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Golden-section minimisation of f on [lo, hi] to interval width xtol.
inline double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                              double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

/// Roots of a complex polynomial sum_k coeffs[k] u^k by Durand-Kerner
/// simultaneous iteration.  Leading coefficients below `drop_tol` (relative
/// to the largest coefficient) are dropped before iterating.
inline std::vector<std::complex<double>> durand_kerner(
    std::vector<std::complex<double>> coeffs, double drop_tol = 1e-13) {
    using C = std::complex<double>;
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return {};
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < drop_tol * scale) coeffs.pop_back();
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 1) return {};

    auto eval = [&](C u) {
        C acc = coeffs[n];
        for (int k = n - 1; k >= 0; --k) acc = acc * u + coeffs[k];
        return acc;
    };

    std::vector<C> roots(n);
    const C seed(0.4, 0.9);
    C pw = 1.0;
    for (int k = 0; k < n; ++k) {
        pw *= seed;
        roots[k] = pw;
    }
    for (int it = 0; it < 500; ++it) {
        double step = 0.0;
        for (int k = 0; k < n; ++k) {
            C denom = coeffs[n];
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= roots[k] - roots[j];
            if (std::abs(denom) < 1e-300) continue;
            C delta = eval(roots[k]) / denom;
            roots[k] -= delta;
            step = std::max(step, std::abs(delta));
        }
        if (step < 1e-14) break;
    }
    return roots;
}

/// Derivative-free Nelder-Mead on R^n.  Deterministic given the start
/// simplex.  Returns the best point found.
inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> start, double step, int max_iter,
                                       double ftol) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    auto order = [&]() {
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(simplex[i], simplex[j]);
                }
    };
    order();

    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fv[n] - fv[0]) < ftol) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / double(n);

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d)
                x[d] = centroid[d] + coef * (simplex[n][d] - centroid[d]);
            return x;
        };

        auto xr = blend(-1.0);
        double fr = f(xr);
        if (fr < fv[0]) {
            auto xe = blend(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            auto xc = blend(fr < fv[n] ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t d = 0; d < n; ++d)
                        simplex[i][d] = simplex[0][d] + 0.5 * (simplex[i][d] - simplex[0][d]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
        order();
    }
    return simplex[0];
}

/// Damped Newton iteration for a square system F: R^n -> R^n with a numeric
/// Jacobian; returns true when the sup-norm of F drops below tol.
inline bool newton_square(const std::function<std::vector<double>(const std::vector<double>&)>& F,
                          std::vector<double>& x, int iters = 30, double tol = 1e-13) {
    const std::size_t n = x.size();
    auto supnorm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double e : v) m = std::max(m, std::abs(e));
        return m;
    };
    std::vector<double> fx = F(x);
    double fn = supnorm(fx);
    for (int it = 0; it < iters; ++it) {
        if (fn < tol) return true;
        // numeric Jacobian
        std::vector<std::vector<double>> J(n, std::vector<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
            const double h = 1e-7 * (1.0 + std::abs(x[j]));
            auto xp = x;
            xp[j] += h;
            const auto fp = F(xp);
            for (std::size_t i = 0; i < n; ++i) J[i][j] = (fp[i] - fx[i]) / h;
        }
        // solve J d = fx by Gaussian elimination with partial pivoting
        std::vector<double> d = fx;
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(J[r][col]) > std::abs(J[piv][col])) piv = r;
            if (std::abs(J[piv][col]) < 1e-300) return false;
            std::swap(J[piv], J[col]);
            std::swap(d[piv], d[col]);
            for (std::size_t r = col + 1; r < n; ++r) {
                const double f = J[r][col] / J[col][col];
                for (std::size_t k = col; k < n; ++k) J[r][k] -= f * J[col][k];
                d[r] -= f * d[col];
            }
        }
        for (std::size_t col = n; col-- > 0;) {
            for (std::size_t k = col + 1; k < n; ++k) d[col] -= J[col][k] * d[k];
            d[col] /= J[col][col];
        }
        // damped update
        double lambda = 1.0;
        for (int half = 0; half < 6; ++half) {
            auto xt = x;
            for (std::size_t j = 0; j < n; ++j) xt[j] -= lambda * d[j];
            const auto ft = F(xt);
            const double fnt = supnorm(ft);
            if (fnt < fn) {
                x = xt;
                fx = ft;
                fn = fnt;
                break;
            }
            lambda *= 0.5;
            if (half == 5) return fn < tol;
        }
    }
    return fn < tol;
}

/// Run fn(i) for i in [0, count) over `threads` workers; results must be
/// written by index so assembly order stays deterministic.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    threads = std::min<unsigned>(threads, std::thread::hardware_concurrency() > 0
                                              ? std::thread::hardware_concurrency()
                                              : 1u);
    std::vector<std::thread> pool;
    std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=, &fn]() {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace bigreen
