#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bigreen/numerics.hpp"
#include "bigreen/region.hpp"

namespace bigreen {

/// One candidate unimodular constant e^{i theta} = omega v^2 together with
/// its omega / v^2 branch data.  `valid` is false when the chosen square-root
/// sign does not produce a unimodular omega.
struct ThetaBranch {
    UnimodularConstant theta;
    UnimodularConstant omega;
    UnimodularConstant v_squared;
    int sqrt_sign = +1;
    bool valid = false;
};

/// The degree-6 polynomial in u = e^{i theta} whose unimodular roots carry
/// the Region-2 axis solutions:
///   (u - z)(conj(z) u - 1)(u^2 - 1)^2 p^2
///     - (u - q)(conj(z) u^2 - z)^2 (q u - 1).
inline Complex fundamental_poly(Complex u, Complex z, double p, double q) {
    const Complex zb = std::conj(z);
    const Complex u2 = u * u;
    return (u - z) * (zb * u - 1.0) * (u2 - 1.0) * (u2 - 1.0) * (p * p) -
           (u - q) * (zb * u2 - z) * (zb * u2 - z) * (q * u - 1.0);
}

/// Coefficients c[0..6] of fundamental_poly as a polynomial in u (expanded
/// independently of the product form; the two are cross-checked in tests).
inline std::vector<Complex> fundamental_poly_coeffs(Complex z, double p, double q) {
    const Complex zb = std::conj(z);
    const double p2 = p * p;
    const double zz = std::norm(z);
    std::vector<Complex> c(7);
    c[6] = p2 * zb - q * zb * zb;
    c[5] = -p2 * (1.0 + zz) + (1.0 + q * q) * zb * zb;
    c[4] = p2 * (z - 2.0 * zb) + q * (2.0 * zz - zb * zb);
    c[3] = 2.0 * p2 * (1.0 + zz) - 2.0 * (1.0 + q * q) * zz;
    c[2] = p2 * (zb - 2.0 * z) + q * (2.0 * zz - z * z);
    c[1] = -p2 * (1.0 + zz) + (1.0 + q * q) * z * z;
    c[0] = p2 * z - q * z * z;
    return c;
}

/// Real form of the fundamental polynomial on the unit circle (z = x + iy):
///   p^2 sin^2(t) (x^2+y^2+1-2x cos t-2y sin t)
///     - (q^2 - 2q cos t + 1)(y cos t - x sin t)^2.
/// fundamental_poly(e^{it}) = 4 e^{3it} * real_form(t), so the two vanish
/// together on the circle.
inline double real_form(double theta, double x, double y, double p, double q) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double first = x * x + y * y + 1.0 - 2.0 * x * ct - 2.0 * y * st;
    const double proj = y * ct - x * st;
    return p * p * st * st * first - (q * q - 2.0 * q * ct + 1.0) * proj * proj;
}

/// omega and v^2 for a given e^{i theta} and square-root sign:
///   omega = (-p(u^2 - 1) +/- sqrt(p^2 u^4 - 4q u^3 + (4 - 2p^2 + 4q^2) u^2
///            - 4q u + p^2)) / (2 (q - u)),   v^2 = u / omega.
/// A non-unimodular omega yields a branch with valid = false.
inline ThetaBranch omega_v_from_theta(const UnimodularConstant& theta, double p, double q,
                                      int sign) {
    const Complex u = theta.value();
    if (std::abs(Complex(q) - u) < 1e-13)
        throw DegenerateDenominator("omega_v_from_theta: e^{i theta} coincides with q");
    const Complex u2 = u * u;
    const Complex disc =
        p * p * u2 * u2 - 4.0 * q * u2 * u + (4.0 - 2.0 * p * p + 4.0 * q * q) * u2 - 4.0 * q * u +
        p * p;
    const Complex omega = (-p * (u2 - 1.0) + double(sign) * std::sqrt(disc)) / (2.0 * (q - u));

    ThetaBranch b;
    b.theta = theta;
    b.sqrt_sign = sign;
    const double am = std::abs(omega);
    b.valid = am > 0.0 && std::abs(am - 1.0) < 1e-9;
    const Complex omega_n = am > 0.0 ? omega / am : Complex(1.0);
    b.omega = UnimodularConstant::from_value(omega_n);
    b.v_squared = UnimodularConstant::from_value(u / omega_n);
    return b;
}

namespace detail {

/// Square root with the canonical branch for v: Re > 0, ties broken by
/// Im > 0 (fixes the representative of the (alpha, beta, c) sign ambiguity;
/// std::sqrt alone is bitten by signed zeros).
inline Complex canonical_sqrt(Complex x) {
    Complex w = std::sqrt(x);
    if (w.real() < -1e-15 || (w.real() <= 1e-15 && w.imag() < 0.0)) w = -w;
    return w;
}

/// t from the defining relation gamma = t alpha + (1-t) beta combined with
/// alpha = m_gamma(c):  t = (-a conj(b) c + a - b + c) / (|a|^2 c - a conj(b) c + a - b).
inline Complex t_from_alpha_beta(Complex a, Complex b, Complex c) {
    return (-a * std::conj(b) * c + a - b + c) /
           (std::norm(a) * c - a * std::conj(b) * c + a - b);
}

/// Solve x + K conj(x) = w for x.
inline Complex solve_conjugate_linear(Complex K, Complex w) {
    const double kk = std::norm(K);
    return (w - K * std::conj(w)) / (1.0 - kk);
}

/// alpha from c m_alpha(c) = target:  alpha + (target/c * c) conj(alpha) = c + target/c.
inline Complex alpha_from_condition(Complex c, Complex target) {
    const Complex s = target / c;
    return solve_conjugate_linear(s * c, c + s);
}

/// |c|^2 in the z,p,q,u-only form (Prop. 5, first display); degenerate for
/// real z where (conj z - z) and (u^2 - 1) both vanish.
inline Complex rsq_theta_form(Complex z, double p, double q, Complex u) {
    const Complex zb = std::conj(z);
    const Complex u2 = u * u;
    const double zz = std::norm(z);
    const Complex num = (u - q) * (zb - z) * (zb * u2 - z) * (u * q - 1.0);
    const Complex d33 = zb * q * q * u2 - zz * q * u2 + zb * u2 - q * u2 - 2.0 * zb * q * u +
                        2.0 * q * u * z + q * zz - q * q * z + q - z;
    const Complex den = d33 * (u2 - 1.0);
    (void)p;
    return num / den;
}

/// |c|^2 in the omega,v form (valid for real z as well):
///   p w (zb w^2 p v^2 - zb w q v^2 - w p + z) / (w^2 p v^2 - w q v^2 - w p q + q z).
inline Complex rsq_omega_v_form(Complex z, double p, double q, Complex w, Complex v2) {
    const Complex zb = std::conj(z);
    const Complex num = p * w * (zb * w * w * p * v2 - zb * w * q * v2 - w * p + z);
    const Complex den = w * w * p * v2 - w * q * v2 - w * p * q + q * z;
    return num / den;
}

/// t in the z,p,q,u-only form (Prop. 5, second display).
inline Complex t_theta_form(Complex z, double p, double q, Complex u) {
    const Complex zb = std::conj(z);
    const double zz = std::norm(z);
    const Complex u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    const Complex Q = u4 * (zb * zb * q * q - zb * zz * q) +
                      u3 * (-zb * zb * q + zb * zz - 2.0 * zb * q * q + 2.0 * zz * q - zb + q) +
                      u2 * (3.0 * zb * q - 3.0 * q * z) +
                      u * (-2.0 * zz * q - zz * z + 2.0 * q * q * z + q * z * z - q + z) +
                      (zz * q * z - q * q * z * z);
    const Complex num =
        q * (zb * q * u2 - u2 - zb * u + u * z - q * z + 1.0) * (zb * u - 1.0) * (u - z);
    (void)p;
    return num / Q;
}

struct AxisWindowData {
    bool ok = false;
    double t = 0.0;
    double rsq = 0.0;
    bool real_branch = false;
    std::string why;
};

/// Evaluate the Proposition-7 validity windows (t in (0,1),
/// max{p^2,|z|^2} < |c|^2 < 1) for one theta/omega branch.  theta near 0 or
/// pi dispatches to the real-z forms, where the Prop.-5 expressions are 0/0.
inline AxisWindowData axis_windows(Complex z, double p, double q, const ThetaBranch& br) {
    AxisWindowData out;
    if (!br.valid) {
        out.why = "non-unimodular omega";
        return out;
    }
    const Complex u = br.theta.value();
    const Complex w = br.omega.value();
    const Complex v2 = br.v_squared.value();

    Complex rsq, t;
    if (std::abs(u.imag()) < 1e-8) {
        out.real_branch = true;
        if (std::abs(z.imag()) > 1e-8) {
            out.why = "real-theta branch with non-real z";
            return out;
        }
        const double zr = z.real();
        rsq = rsq_omega_v_form(z, p, q, w, v2);
        if (u.real() > 0.0) {
            // theta = 0: omega = -1, v = i  (Eqs. (41)-(42))
            t = q * (zr - 1.0) * (p - 1.0) / (-2.0 * p * q + p * zr - q * zr + p + q);
        } else {
            // theta = pi: omega = -1, v = 1; recover t from alpha, beta.
            if (rsq.real() <= 0.0) {
                out.why = "negative |c|^2";
                return out;
            }
            const Complex v = canonical_sqrt(v2);
            const Complex c = std::sqrt(rsq.real()) * v;
            const Complex alpha = alpha_from_condition(c, Complex(p));
            const Complex beta = alpha_from_condition(c, z / w);
            t = t_from_alpha_beta(alpha, beta, c);
        }
    } else {
        rsq = rsq_theta_form(z, p, q, u);
        t = t_theta_form(z, p, q, u);
    }

    if (std::abs(rsq.imag()) > 1e-7 || std::abs(t.imag()) > 1e-7) {
        out.why = "complex t or |c|^2";
        return out;
    }
    out.rsq = rsq.real();
    out.t = t.real();
    const double lower = std::max(p * p, std::norm(z));
    if (!(out.t > 1e-12 && out.t < 1.0 - 1e-12)) {
        out.why = "t outside (0,1)";
        return out;
    }
    if (!(out.rsq > lower + 1e-14 && out.rsq < 1.0 - 1e-12)) {
        out.why = "|c|^2 outside (max{p^2,|z|^2}, 1)";
        return out;
    }
    // The windows depend on e^{i theta} only, so they cannot separate the
    // two omega signs; pin the sign through the omega expression
    // p = (uq-1)(zb u^2 - z) / (omega (u^2-1)(zb u - 1)), i.e. omega = -1
    // on the real-z branches.
    if (out.real_branch) {
        if (std::abs(w + 1.0) > 1e-7) {
            out.why = "omega != -1 on a real-z branch";
            return out;
        }
    } else {
        const Complex zb = std::conj(z);
        const Complex expected =
            (u * q - 1.0) * (zb * u * u - z) / (p * (u * u - 1.0) * (zb * u - 1.0));
        if (std::abs(w - expected) > 1e-7) {
            out.why = "omega inconsistent with the p-expression";
            return out;
        }
    }
    out.ok = true;
    return out;
}

}  // namespace detail

/// All unimodular roots of the fundamental polynomial found by Durand-Kerner
/// iteration on the expanded coefficients (|(|u|-1)| < 1e-8).
inline std::vector<double> unimodular_fundamental_roots(Complex z, double p, double q) {
    auto roots = durand_kerner(fundamental_poly_coeffs(z, p, q));
    std::vector<double> angles;
    for (const auto& r : roots)
        if (std::abs(std::abs(r) - 1.0) < 1e-8)
            angles.push_back(UnimodularConstant::wrap_angle(std::arg(r)));
    std::sort(angles.begin(), angles.end());
    return angles;
}

/// All theta in [0, 2pi) with real_form(theta) = 0 for an axis point (0,z)
/// in Region 2, each root paired with both square-root signs of omega.
///
/// Strategy: scan a uniform grid (4096 points, doubled adaptively), bisect
/// sign-change brackets to 1e-13 and polish with Newton steps; grid minima of
/// |real_form| below 1e-10 without a sign change are refined by golden
/// section and accepted below 1e-12 (tangential roots at region boundaries).
inline std::vector<ThetaBranch> solve_theta(DiskPoint z, double p, double q) {
    if (!classify_axis(z, p, q).is(Region::Region2))
        throw NotRegion2("solve_theta: (0,z) is not a Region-2 axis point");

    const double x = z.value().real(), y = z.value().imag();
    auto f = [&](double th) { return real_form(th, x, y, p, q); };
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> roots;
    for (int n = 4096; n <= 32768 && roots.empty(); n *= 2) {
        std::vector<double> fv(n + 1);
        for (int i = 0; i <= n; ++i) fv[i] = f(two_pi * i / n);
        for (int i = 0; i < n; ++i) {
            const double a = two_pi * i / n, b = two_pi * (i + 1) / n;
            if (fv[i] == 0.0) {
                roots.push_back(a);
            } else if ((fv[i] < 0.0) != (fv[i + 1] < 0.0)) {
                double th = bisect(f, a, b, fv[i], 1e-13);
                for (int it = 0; it < 3; ++it) {  // Newton polish
                    const double h = 1e-7;
                    const double d = (f(th + h) - f(th - h)) / (2.0 * h);
                    if (std::abs(d) < 1e-30) break;
                    th -= f(th) / d;
                }
                roots.push_back(UnimodularConstant::wrap_angle(th));
            } else if (i > 0 && std::abs(fv[i]) < 1e-10 && std::abs(fv[i]) <= std::abs(fv[i - 1]) &&
                       std::abs(fv[i]) <= std::abs(fv[i + 1])) {
                auto af = [&](double th) { return std::abs(f(th)); };
                const double th = golden_minimize(af, two_pi * (i - 1) / n, b, 1e-13);
                if (std::abs(f(th)) < 1e-12) roots.push_back(UnimodularConstant::wrap_angle(th));
            }
        }
    }
    if (roots.empty()) throw NoRoot("solve_theta: no root of the real form found");

    std::sort(roots.begin(), roots.end());
    std::vector<double> uniq;
    for (double r : roots) {
        bool dup = false;
        for (double u : uniq)
            if (std::abs(r - u) < 1e-8 || std::abs(std::abs(r - u) - two_pi) < 1e-8) dup = true;
        if (!dup) uniq.push_back(r);
    }

    std::vector<ThetaBranch> out;
    for (double th : uniq)
        for (int sign : {+1, -1})
            out.push_back(omega_v_from_theta(UnimodularConstant::from_angle(th), p, q, sign));
    return out;
}

/// The unique branch whose parameters satisfy the validity windows.
inline ThetaBranch select_valid_branch(const std::vector<ThetaBranch>& candidates, DiskPoint z,
                                       double p, double q) {
    std::vector<ThetaBranch> valid;
    std::vector<std::string> reject;
    for (const auto& br : candidates) {
        auto w = detail::axis_windows(z.value(), p, q, br);
        if (w.ok)
            valid.push_back(br);
        else
            reject.push_back(w.why);
    }
    // Both sqrt signs occasionally coincide (disc ~ 0); dedupe on (theta, omega).
    std::vector<ThetaBranch> uniq;
    for (const auto& b : valid) {
        bool dup = false;
        for (const auto& u : uniq)
            if (std::abs(b.theta.value() - u.theta.value()) < 1e-7 &&
                std::abs(b.omega.value() - u.omega.value()) < 1e-7)
                dup = true;
        if (!dup) uniq.push_back(b);
    }
    if (uniq.empty()) {
        std::ostringstream os;
        os << "select_valid_branch: no branch passes the validity windows (";
        for (const auto& r : reject) os << r << "; ";
        os << ")";
        throw NoValidBranch(os.str());
    }
    if (uniq.size() > 1) {
        std::ostringstream os;
        os << "select_valid_branch: " << uniq.size() << " branches pass the windows:";
        for (const auto& b : uniq)
            os << " theta=" << b.theta.angle() << " omega=(" << b.omega.value().real() << ","
               << b.omega.value().imag() << ")";
        throw MultipleValidBranches(os.str());
    }
    return uniq.front();
}

}  // namespace bigreen
