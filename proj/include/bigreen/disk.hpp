#pragma once

#include <array>

#include "bigreen/theta.hpp"

namespace bigreen {

// Residual tolerance hierarchy: construction / certification / acceptance.
inline constexpr double kConstructionTol = 1e-11;
inline constexpr double kCertificationTol = 1e-9;
inline constexpr double kAcceptanceTol = 1e-8;

/// Parameters (alpha, beta, c, t, gamma, omega) of one extremal analytic
/// disk  phi(lambda) = (lambda m_alpha(lambda), omega lambda m_beta(lambda)),
/// with c = r v, gamma = t alpha + (1-t) beta and alpha = m_gamma(c).
struct ExtremalDiskParams {
    DiskPoint alpha;
    DiskPoint beta;
    DiskPoint c;
    double t = 0.0;
    DiskPoint gamma;
    UnimodularConstant omega;
    UnimodularConstant theta;
    double r = 0.0;
    UnimodularConstant v;
};

/// The interpolant G (unique solution of the Agler-McCarthy Pick problem)
/// together with the data of F = m_{cd} o G.  F maps the bidisk to the disk
/// and vanishes at both transformed poles; |F(eval)| realises the
/// Caratheodory lower bound.
struct CertificateFunction {
    double t = 0.0;
    UnimodularConstant tau;
    UnimodularConstant omega;
    DiskPoint c;
    DiskPoint d;

    Complex G(Complex w1, Complex w2) const {
        const Complex ob = std::conj(omega.value());
        const Complex tv = tau.value();
        return (t * w1 + (1.0 - t) * ob * w2 + tv * ob * w1 * w2) /
               (1.0 + tv * ((1.0 - t) * w1 + t * ob * w2));
    }

    Complex F(Complex w1, Complex w2) const {
        return mobius(c.value() * d.value(), G(w1, w2));
    }
};

/// phi(lambda) = (lambda m_alpha(lambda), omega lambda m_beta(lambda)).
inline BidiskPoint disk_eval(const ExtremalDiskParams& params, DiskPoint lambda) {
    const Complex l = lambda.value();
    return BidiskPoint(l * mobius(params.alpha.value(), l),
                       params.omega.value() * l * mobius(params.beta.value(), l));
}

/// Residuals of the interpolation conditions (alpha = m_gamma(c),
/// phi1(c) = p, phi2(c) = z, phi2(alpha) = m_z(q)); this is the oracle that
/// certifies a constructed disk.
inline std::array<double, 4> interpolation_residuals(const ExtremalDiskParams& params, Complex z,
                                                     double p, double q) {
    const Complex c = params.c.value();
    const Complex a = params.alpha.value();
    const Complex b = params.beta.value();
    const Complex w = params.omega.value();
    return {std::abs(c * mobius(a, c) - p), std::abs(w * c * mobius(b, c) - z),
            std::abs(w * a * mobius(b, a) - mobius(z, Complex(q))),
            std::abs(a - mobius(params.gamma.value(), c))};
}

namespace detail {

/// alpha in the omega,v-explicit form (z-elimination companion of Prop. 5);
/// kept only as a numerical cross-check against the Prop.-5 form.
inline Complex alpha_omega_v_form(Complex z, double p, double q, Complex w, Complex v, double r) {
    const Complex zb = std::conj(z);
    const Complex v2 = v * v;
    const Complex E = zb * w * w * p * v2 - zb * w * q * v2 - w * p + z;
    return (z - q) * v * r / E;
}

/// beta in the omega,v-explicit form (the S-polynomial display).
inline Complex beta_omega_v_form(Complex z, double p, double q, Complex w, Complex v, double r) {
    const Complex zb = std::conj(z);
    const double zz = std::norm(z);
    const Complex v2 = v * v, v4 = v2 * v2;
    const Complex w2 = w * w, w3 = w2 * w, w4 = w3 * w;
    const Complex S = zb * w4 * p * p * v4 - zb * w3 * p * q * v4 - zz * w3 * p * v4 -
                      zz * w3 * p * p * v2 + zz * w2 * q * v4 + 2.0 * zz * w2 * p * q * v2 -
                      zz * w * q * v2 * z - w3 * p * p * v2 + 2.0 * w2 * p * v2 * z +
                      w2 * p * p * z - w * q * v2 * z - w * p * q * z - w * p * z * z + q * z * z;
    const Complex E = zb * w2 * p * v2 - zb * w * q * v2 - w * p + z;
    return -S * r / ((zz - 1.0) * w2 * p * E * v);
}

}  // namespace detail

/// Build the extremal-disk parameters for the axis triple
/// (0,0), (p,z), (0,m_z(q)) from a validated theta branch.
///
/// r^2 and t come from the theta-only forms (omega,v forms on the real-z
/// branches where those degenerate); alpha and beta from the Prop.-5 short
/// forms, or from the defining conditions on the real-z branches.
inline ExtremalDiskParams params_from_theta(DiskPoint zp, double p, double q,
                                            const ThetaBranch& branch,
                                            double residual_tol = kConstructionTol) {
    const Complex z = zp.value();
    auto win = detail::axis_windows(z, p, q, branch);
    if (!win.ok) throw InvalidBranch("params_from_theta: " + win.why);

    const Complex u = branch.theta.value();
    const Complex w = branch.omega.value();
    const Complex v = detail::canonical_sqrt(branch.v_squared.value());
    const double r = std::sqrt(win.rsq);
    const Complex c = r * v;

    Complex alpha, beta;
    if (win.real_branch) {
        alpha = detail::alpha_from_condition(c, Complex(p));
        beta = detail::alpha_from_condition(c, z / w);
    } else {
        const Complex zb = std::conj(z);
        const double zz = std::norm(z);
        const Complex u2 = u * u, u3 = u2 * u;
        const double r2 = win.rsq;
        const Complex na = u3 * zb * q - u3 * r2 + r2 * z * u2 - u2 * zb - u * q * z + u * r2 -
                           r2 * z + z;
        const Complex da = zb * q * u2 - u2 - zb * u + z * u - q * z + 1.0;
        alpha = (v / (u * r)) * na / da;
        beta = (v / (u * r)) * (zz * u - r2 * u + r2 * z - z) / (zz - 1.0);
    }

    const double t = win.t;
    const Complex gamma = t * alpha + (1.0 - t) * beta;
    if (std::abs(alpha) >= 1.0 - kDiskBoundaryMargin ||
        std::abs(beta) >= 1.0 - kDiskBoundaryMargin ||
        std::abs(gamma) >= 1.0 - kDiskBoundaryMargin || std::abs(c) >= 1.0 - kDiskBoundaryMargin)
        throw InvalidBranch("params_from_theta: parameters escape the unit disk");

    ExtremalDiskParams params;
    params.alpha = DiskPoint(alpha);
    params.beta = DiskPoint(beta);
    params.c = DiskPoint(c);
    params.t = t;
    params.gamma = DiskPoint(gamma);
    params.omega = branch.omega;
    params.theta = branch.theta;
    params.r = r;
    params.v = UnimodularConstant::from_value(v);

    if (std::abs(alpha - mobius(gamma, c)) > 1e-10)
        throw InvalidBranch("params_from_theta: alpha != m_gamma(c)");
    auto res = interpolation_residuals(params, z, p, q);
    for (double rr : res)
        if (!(rr < residual_tol))
            throw InvalidBranch("params_from_theta: interpolation residual " +
                                std::to_string(rr));
    return params;
}

/// Preimage of a point on the disk:
///   zeta = (T1 - T2/omega) / (alpha - beta + conj(alpha) T1 - conj(beta) T2/omega),
/// re-validated by evaluating the disk at zeta.
inline DiskPoint disk_preimage(const ExtremalDiskParams& params, const BidiskPoint& target,
                               double tol = 1e-7) {
    const Complex a = params.alpha.value(), b = params.beta.value();
    const Complex T1 = target.z1.value();
    const Complex M = target.z2.value() / params.omega.value();
    const Complex den = a - b + std::conj(a) * T1 - std::conj(b) * M;
    if (std::abs(den) < 1e-13) throw NotOnDisk("disk_preimage: degenerate denominator");
    const Complex zeta = (T1 - M) / den;
    if (std::abs(zeta) >= 1.0) throw NotOnDisk("disk_preimage: preimage outside the disk");
    const BidiskPoint back = disk_eval(params, DiskPoint(zeta));
    const double res = std::abs(back.z1.value() - T1) +
                       std::abs(back.z2.value() - target.z2.value());
    if (res > tol) throw NotOnDisk("disk_preimage: residual " + std::to_string(res));
    return DiskPoint(zeta);
}

/// The Pick-problem interpolant G and F = m_{cd} o G for a disk;
/// tau = conj(alpha - beta) / (alpha - beta).
inline CertificateFunction caratheodory_certificate(const ExtremalDiskParams& params) {
    const Complex a = params.alpha.value(), b = params.beta.value();
    if (std::abs(a - b) < 1e-13)
        throw AlphaEqualsBeta("caratheodory_certificate: alpha = beta (region boundary)");
    CertificateFunction f;
    f.t = params.t;
    f.tau = UnimodularConstant::from_value(std::conj(a - b) / (a - b));
    f.omega = params.omega;
    f.c = params.c;
    f.d = DiskPoint(mobius(params.gamma.value(), params.c.value()));
    return f;
}

}  // namespace bigreen
