#pragma once

#include <limits>
#include <optional>

#include "bigreen/disk.hpp"

namespace bigreen {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Each certificate bound is widened by this slack to cover evaluation
// rounding, so lower <= value <= upper holds as stored.
inline constexpr double kCertSlack = 1e-11;

enum class CertFrame { AxisFrame, EvalFrame };

struct TwoSidedCertificate {
    double lower = kNegInf;
    double upper = kNegInf;
    double gap = 0.0;
};

/// Result of a Green-function evaluation: the log-scale value in [-inf, 0),
/// the region label, and (for Regions 1/2) the data of a two-sided
/// certificate.
struct GreenResult {
    double value = kNegInf;
    RegionLabel region{Region::Region3, std::nullopt};
    std::optional<ThetaBranch> theta_branch;
    std::optional<ExtremalDiskParams> disk_params;
    std::optional<TwoSidedCertificate> certificate;
    std::optional<CertificateFunction> lower_witness;
    std::optional<Complex> zeta;     // preimage of the evaluation point on the disk
    std::optional<Complex> frame_z;  // generating axis parameter (AxisFrame only)
    CertFrame frame = CertFrame::AxisFrame;

    bool is_pole() const { return value == kNegInf; }
};

struct HypersurfacePoint {
    BidiskPoint point;
    double green_value = 0.0;
    double membership_residual = 0.0;
    Complex lambda;
    std::size_t z_index = 0;
};

/// Sampled sheet of one hypersurface S(e^{i theta}).
struct HypersurfaceSample {
    UnimodularConstant theta;
    std::vector<Complex> z_parameters;
    std::vector<HypersurfacePoint> points;
};

namespace detail {

inline double log_abs(Complex w) { return std::log(std::abs(w)); }

/// log |m_c(zeta)| + log |m_d(zeta)| with d = m_gamma(c): the Lempert value
/// along the extremal disk.
inline double lempert_value_at(const ExtremalDiskParams& params, Complex zeta) {
    const Complex c = params.c.value();
    const Complex d = mobius(params.gamma.value(), c);
    return log_abs(mobius(c, zeta)) + log_abs(mobius(d, zeta));
}

/// Axis value of Prop. 7 (Eq. (33)); 0/0 for real z, where the Eq. (34)
/// closed form applies instead.
inline double axis_value_theta(Complex z, double q, Complex u) {
    const Complex zb = std::conj(z);
    const double zz = std::norm(z);
    const Complex u2 = u * u;
    const Complex num = (u * q - 1.0) * (zb * u2 - z) * (q - z);
    const Complex den = zb * q * q * u2 - zz * q * u2 + zb * u2 - q * u2 - 2.0 * zb * q * u +
                        2.0 * q * u * z + q * zz - q * q * z + q - z;
    return log_abs(num / den);
}

/// Real-axis closed form (Eq. (34)): the max of the two branch expressions.
inline double axis_value_real(double z, double p, double q) {
    const double e1 = std::abs(p * (q - z) / (p * q + q * z + p + q));
    const double e2 = std::abs(p * (q - z) / (-p * q - q * z + p + q));
    const double m = std::max(e1, e2);
    return m == 0.0 ? kNegInf : std::log(m);
}

/// Membership condition (the disk-membership quartic) for (T1, T2) against a
/// disk's (alpha, beta, omega); vanishes exactly on the image of the disk.
inline double membership_residual(const ExtremalDiskParams& params, Complex T1, Complex T2) {
    const Complex a = params.alpha.value(), b = params.beta.value();
    const Complex M = T2 / params.omega.value();
    const Complex A = a + T1 * std::conj(a);
    const Complex B = b + M * std::conj(b);
    const Complex expr = (T1 - M) * (T1 - M) + M * A * A + T1 * B * B - A * B * (T1 + M);
    return std::abs(expr);
}

}  // namespace detail

/// Region-1 value log max{|z1 m_{z1}(p)|, |z2 m_{z2}(q)|} with the explicit
/// extremal pair as certificate.
inline GreenResult green_region1(DiskPoint z1, DiskPoint z2, double p, double q) {
    const RegionLabel label = classify(z1, z2, p, q);
    if (!label.is(Region::Region1)) throw NotRegion1("green_region1: point is not in Region 1");

    const Complex w1 = z1.value(), w2 = z2.value();
    const double v1 = std::abs(w1 * mobius(w1, Complex(p)));
    const double v2 = std::abs(w2 * mobius(w2, Complex(q)));

    GreenResult out;
    out.region = label;
    const double m = std::max(v1, v2);
    out.value = m == 0.0 ? kNegInf : std::log(m);
    if (out.value == kNegInf) return out;

    // Lower bound: |F| with F(w) = w1 m_p(w1) (or the swapped factor);
    // upper bound: |lambda_1 lambda_2| of the interpolating disk.
    double lower, upper;
    if (label.direction == Region1Direction::SecondToFirst) {
        lower = detail::log_abs(w2 * mobius(Complex(q), w2));
        upper = detail::log_abs(mobius(w2, Complex(q))) + detail::log_abs(w2);
    } else {
        lower = detail::log_abs(w1 * mobius(Complex(p), w1));
        upper = detail::log_abs(mobius(w1, Complex(p))) + detail::log_abs(w1);
    }
    out.certificate = TwoSidedCertificate{lower - kCertSlack, upper + kCertSlack,
                                          upper - lower + 2.0 * kCertSlack};
    return out;
}

/// Closed-form Green value for real axis points (0, z), |z| < min{p/q, 1}.
inline GreenResult green_axis_real(double z, double p, double q) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw OutOfDomain("green_axis_real: pole parameters outside (0,1)");
    if (!(std::abs(z) < std::min(p / q, 1.0)))
        throw OutOfRange("green_axis_real: |z| outside the Region-2 window");
    GreenResult out;
    out.region = RegionLabel{Region::Region2, std::nullopt};
    out.value = detail::axis_value_real(z, p, q);
    return out;
}

/// Full solver path for an axis point (0, z) in Region 2: theta roots,
/// branch selection, disk construction, value, and two-sided certificate.
inline GreenResult green_axis(DiskPoint z, double p, double q) {
    const RegionLabel label = classify_axis(z, p, q);
    if (!label.is(Region::Region2)) throw NotRegion2("green_axis: (0,z) is not a Region-2 point");

    const auto branches = solve_theta(z, p, q);
    const auto branch = select_valid_branch(branches, z, p, q);
    const auto params = params_from_theta(z, p, q, branch);

    const Complex zc = z.value();
    const double value_params = detail::lempert_value_at(params, Complex(0.0));
    double value;
    if (std::abs(zc.imag()) < 1e-9)
        value = detail::axis_value_real(zc.real(), p, q);
    else
        value = detail::axis_value_theta(zc, q, branch.theta.value());
    if (std::abs(value - value_params) > 1e-10)
        throw CertificateGapExceeded("green_axis: formula value " + std::to_string(value) +
                                     " disagrees with log|c m_gamma(c)| " +
                                     std::to_string(value_params));

    GreenResult out;
    out.region = label;
    out.value = value;
    out.theta_branch = branch;
    out.disk_params = params;
    out.zeta = Complex(0.0);
    out.frame_z = zc;

    const auto fn = caratheodory_certificate(params);
    // Evaluation point (0, z) sits at lambda = 0 in the G_z frame.
    const double lower = detail::log_abs(fn.F(Complex(0.0), mobius(zc, zc)));
    const double upper = value_params;
    out.lower_witness = fn;
    out.certificate = TwoSidedCertificate{lower - kCertSlack, upper + kCertSlack,
                                          upper - lower + 2.0 * kCertSlack};
    return out;
}

/// Explicit formulas on the slices e^{i theta} = +-i (Prop. 8).  The
/// membership residual is the fundamental polynomial at +-i together with
/// the window p < |z| < min{p/q, 1} and the sign of Im z.
inline GreenResult green_axis_pm_i(DiskPoint z, double p, double q) {
    const Complex zc = z.value(), zb = std::conj(zc);
    const double y = zc.imag();
    if (std::abs(y) < 1e-12) throw NotOnSlice("green_axis_pm_i: real z");
    const Complex i_unit(0.0, 1.0);
    const Complex u = y > 0.0 ? i_unit : -i_unit;
    if (std::abs(fundamental_poly(u, zc, p, q)) > 1e-8)
        throw NotOnSlice("green_axis_pm_i: fundamental polynomial residual too large");
    if (!(p < std::abs(zc) && std::abs(zc) < std::min(p / q, 1.0)))
        throw NotOnSlice("green_axis_pm_i: |z| outside (p, min{p/q, 1})");

    const double zz = std::norm(zc);
    Complex num, den;
    if (y > 0.0) {
        num = (zb + zc) * (q - zc) * (q + i_unit);
        den = 2.0 * i_unit * zb * q - 2.0 * i_unit * q * zc + zb * q * q - 2.0 * zz * q +
              q * q * zc + zb - 2.0 * q + zc;
    } else {
        num = (zb + zc) * (q - zc) * (q - i_unit);
        den = -2.0 * i_unit * zb * q + 2.0 * i_unit * q * zc + zb * q * q - 2.0 * zz * q +
              q * q * zc + zb - 2.0 * q + zc;
    }
    GreenResult out;
    out.region = RegionLabel{Region::Region2, std::nullopt};
    out.value = detail::log_abs(num / den);
    return out;
}

namespace detail {

/// Numerator and denominator of the z-elimination closed form (the long
/// polynomials in omega, v^2, p, q, z1, z2).  V = v^2; only even powers of v
/// occur, so the sign of v is immaterial here.
inline std::pair<Complex, Complex> hypersurface_AB(Complex w, Complex V, double p, double q,
                                                   Complex z1, Complex z2) {
    const Complex w2 = w * w, w3 = w2 * w;
    const Complex V2 = V * V, V3 = V2 * V, V4 = V3 * V;
    const double p2 = p * p, p3 = p2 * p;
    const Complex z11 = z1 * z1, z22 = z2 * z2, zz = z1 * z2;

    const Complex A4 = -w2 * p2 * z11 * z2 - w3 * p2 * z1 + w3 * p * z11 + w * p * q * z11 * z2 +
                       w2 * p * q * z1 + w2 * p * zz - w2 * q * z11 - w * q * zz;
    const Complex A3 = w3 * p3 * z1 - w3 * p2 * z11 - w2 * p2 * q * z1 + w2 * p2 * zz +
                       w2 * p * q * z11 + w2 * p * z11 * z2 - p * q * z11 * z22 + w3 * p * z1 -
                       w3 * z11 - 2.0 * w * p * q * zz + w * p * z1 * z22 + w * q * z11 * z2 -
                       2.0 * w2 * zz + q * z1 * z22 + w * q * z2 - w * z22;
    const Complex A2 = -2.0 * w2 * p3 * zz + w2 * p2 * z11 * z2 + p2 * q * z11 * z22 -
                       w3 * p2 * z1 + w3 * p * z11 + 3.0 * w * p2 * q * zz -
                       2.0 * w * p2 * z1 * z22 - 4.0 * w * p * q * z11 * z2 - w2 * p * q * z1 +
                       w2 * p * zz + w2 * q * z11 - p * q * z1 * z22 - 2.0 * w * p * q * z2 +
                       2.0 * w * p * z22 + 3.0 * w * q * zz;
    const Complex A1 = w * p3 * z1 * z22 + w * p2 * q * z11 * z2 + w2 * p2 * q * z1 +
                       w2 * p2 * zz - w2 * p * q * z11 - w2 * p * z11 * z2 + p * q * z11 * z22 +
                       w * p2 * q * z2 - w * p2 * z22 - 2.0 * w * p * q * zz - q * z1 * z22;
    const Complex A0 = -p2 * q * z11 * z22 - w * p2 * q * zz + w * p * q * z11 * z2 +
                       p * q * z1 * z22;
    const Complex A = w * p * (A4 * V4 + A3 * V3 + A2 * V2 + A1 * V + A0);

    const Complex B3 = -w2 * p3 * z11 * z2 + w * p2 * q * z11 * z2 + 2.0 * w2 * p2 * zz -
                       w * p * q * zz + w2 * p * q - w2 * p * z2 - w2 * q * z1;
    const Complex B2 = -2.0 * w2 * p3 * zz + 2.0 * w2 * p2 * z11 * z2 - p2 * q * z11 * z22 -
                       w * p2 * q * zz - w * p * q * z11 * z2 - 2.0 * w2 * p2 * q +
                       2.0 * w2 * p2 * z2 + 2.0 * w2 * p * q * z1 - 2.0 * w2 * p * zz +
                       p * q * z1 * z22 + 2.0 * w * q * zz;
    const Complex B1 = p3 * q * z11 * z22 + 2.0 * w * p3 * q * zz - w * p2 * q * z11 * z2 +
                       w2 * p3 * q - w2 * p3 * z2 - w2 * p2 * q * z1 + 2.0 * w2 * p2 * zz -
                       w2 * p * z11 * z2 - p2 * q * z1 * z22 + p * q * z11 * z22 -
                       w * p * q * zz - q * z1 * z22;
    const Complex B0 = -p2 * q * z11 * z22 - w * p2 * q * zz + w * p * q * z11 * z2 +
                       p * q * z1 * z22;
    const Complex B = B3 * V3 + B2 * V2 + B1 * V + B0;

    return {A, B};
}

/// Theorem-1 value ratio:
///   N = -u p^2 z1 z2 - u p q + u p z2 + u q z1 + p^2 q z1 z2
///       + omega (p^2 q - p^2 z2 - p q z1 + p z1 z2) - q z1 z2,
///   D = omega u^2 (p^2 z1 - p) + omega^2 (u p^2 - u p z1 - p^2 q + p q z1)
///       + u (u q - u p q z1 + p q z1 z2 - q z2) + omega p q z2 (1 - p z1).
inline Complex theorem1_ratio(Complex u, Complex w, double p, double q, Complex z1, Complex z2) {
    const double p2 = p * p;
    const Complex zz = z1 * z2;
    const Complex num = -u * p2 * zz - u * p * q + u * p * z2 + u * q * z1 + p2 * q * zz +
                        w * (p2 * q - p2 * z2 - p * q * z1 + p * zz) - q * zz;
    const Complex den = w * u * u * (p2 * z1 - p) +
                        w * w * (u * p2 - u * p * z1 - p2 * q + p * q * z1) +
                        u * (u * q - u * p * q * z1 + p * q * zz - q * z2) +
                        w * p * q * z2 * (1.0 - p * z1);
    return num / den;
}

}  // namespace detail

/// Generating axis parameter z of the hypersurface through (z1, z2) for a
/// fixed theta branch (the z-elimination closed form), or nullopt when the
/// result violates |z| < min{p/q, 1} or the validity windows.
inline std::optional<DiskPoint> hypersurface_z_of_theta(DiskPoint z1, DiskPoint z2, double p,
                                                        double q, const ThetaBranch& branch) {
    auto [A, B] = detail::hypersurface_AB(branch.omega.value(), branch.v_squared.value(), p, q,
                                          z1.value(), z2.value());
    if (std::abs(B) < 1e-13)
        throw DegenerateDenominator("hypersurface_z_of_theta: vanishing denominator");
    const Complex z = A / B;
    if (!(std::abs(z) < std::min(p / q, 1.0))) return std::nullopt;
    if (!detail::axis_windows(z, p, q, branch).ok) return std::nullopt;
    return DiskPoint(z);
}

/// Closed form on S(1): nonempty exactly when the rational expression r is
/// real with -p < r < min{1, p/q}.
inline std::optional<GreenResult> green_S1(DiskPoint z1p, DiskPoint z2p, double p, double q) {
    const Complex z1 = z1p.value(), z2 = z2p.value();
    const Complex num = p * (p * z1 * z2 * z2 + q * z1 * z1 * z2 - 2.0 * p * z1 * z2 -
                             2.0 * q * z1 * z2 + p * z1 + q * z2 - z1 * z1 + 2.0 * z1 * z2 -
                             z2 * z2);
    const Complex den = p * q * z1 * z1 * z2 * z2 - 2.0 * p * q * z1 * z2 - p * z1 * z1 * z2 -
                        q * z1 * z2 * z2 + 2.0 * p * z1 * z2 + 2.0 * q * z1 * z2 + p * q -
                        p * z2 - q * z1;
    if (std::abs(den) < 1e-13) return std::nullopt;
    const Complex r = num / den;
    if (std::abs(r.imag()) > 1e-10) return std::nullopt;
    if (!(-p < r.real() && r.real() < std::min(1.0, p / q))) return std::nullopt;

    GreenResult out;
    out.region = RegionLabel{Region::Region2, std::nullopt};
    out.frame_z = Complex(r.real());
    const Complex vn = p * q * z1 * z2 - p * z1 * z2 - q * z1 * z2 - p * q + p * z2 + q * z1;
    const Complex vd = p * q * z1 * z2 - p * q - p * z1 - q * z2 + p + q;
    out.value = std::abs(vn) == 0.0 ? kNegInf : detail::log_abs(vn / vd);
    return out;
}

/// Closed form on S(-1): r real with max{-1, -p/q} < r < -p.
inline std::optional<GreenResult> green_S_minus1(DiskPoint z1p, DiskPoint z2p, double p,
                                                 double q) {
    const Complex z1 = z1p.value(), z2 = z2p.value();
    const Complex num = p * (p * z1 * z2 * z2 + q * z1 * z1 * z2 + 2.0 * p * z1 * z2 +
                             2.0 * q * z1 * z2 + p * z1 + q * z2 - z1 * z1 + 2.0 * z1 * z2 -
                             z2 * z2);
    const Complex den = p * q * z1 * z1 * z2 * z2 - 2.0 * p * q * z1 * z2 - p * z1 * z1 * z2 -
                        q * z1 * z2 * z2 - 2.0 * p * z1 * z2 - 2.0 * q * z1 * z2 + p * q -
                        p * z2 - q * z1;
    if (std::abs(den) < 1e-13) return std::nullopt;
    const Complex r = num / den;
    if (std::abs(r.imag()) > 1e-10) return std::nullopt;
    if (!(std::max(-1.0, -p / q) < r.real() && r.real() < -p)) return std::nullopt;

    GreenResult out;
    out.region = RegionLabel{Region::Region2, std::nullopt};
    out.frame_z = Complex(r.real());
    const Complex vn = p * q * z1 * z2 + p * z1 * z2 + q * z1 * z2 - p * q + p * z2 + q * z1;
    const Complex vd = p * q * z1 * z2 - p * q - p * z1 - q * z2 - p - q;
    out.value = std::abs(vn) == 0.0 ? kNegInf : detail::log_abs(vn / vd);
    return out;
}

namespace detail {

struct Region2Candidate {
    ThetaBranch branch;
    Complex gen_z;
    ExtremalDiskParams params;
    Complex zeta;
    double value = 0.0;
    double value_cert = 0.0;
    double discrepancy = 0.0;
};

/// Vet one (theta branch, generating z) pair: construct the disk, locate the
/// target on it, and require the Theorem-1 value and the Lempert value at
/// the preimage to agree to 1e-9.
inline std::optional<Region2Candidate> try_region2_candidate(Complex z1, Complex z2, double p,
                                                             double q, const ThetaBranch& branch,
                                                             Complex gen_z) {
    try {
        Region2Candidate cand;
        cand.branch = branch;
        cand.gen_z = gen_z;
        cand.params = params_from_theta(DiskPoint(gen_z), p, q, branch, kCertificationTol);
        const BidiskPoint target(z1, mobius(gen_z, z2));
        cand.zeta = disk_preimage(cand.params, target).value();
        cand.value = log_abs(theorem1_ratio(branch.theta.value(), branch.omega.value(), p, q, z1,
                                            z2));
        cand.value_cert = lempert_value_at(cand.params, cand.zeta);
        cand.discrepancy = std::abs(cand.value - cand.value_cert);
        if (cand.discrepancy > 1e-9) return std::nullopt;
        return cand;
    } catch (const Error&) {
        return std::nullopt;
    }
}

/// Fallback: solve the interpolation conditions for the eval-centred frame
/// directly (8 real unknowns) by penalised Nelder-Mead multistart.
inline std::optional<Region2Candidate> region2_multistart(Complex z1, Complex z2, double p,
                                                          double q, int restarts) {
    const Complex P1 = mobius(z1, Complex(p)), P2 = z2;  // T(p, 0)
    const Complex Q1 = z1, Q2 = mobius(z2, Complex(q));  // T(0, q)

    auto unpack = [](const std::vector<double>& x) {
        const Complex a(x[0], x[1]), b(x[2], x[3]), c(x[4], x[5]);
        const Complex w = std::polar(1.0, x[6]);
        const double t = 1.0 / (1.0 + std::exp(-x[7]));
        return std::tuple{a, b, c, w, t};
    };
    auto residual2 = [&](const std::vector<double>& x) {
        auto [a, b, c, w, t] = unpack(x);
        if (std::abs(a) >= 0.999999 || std::abs(b) >= 0.999999 || std::abs(c) >= 0.999999)
            return 1e6 + std::abs(a) + std::abs(b) + std::abs(c);
        const Complex gamma = t * a + (1.0 - t) * b;
        const Complex d = mobius(gamma, c);
        const Complex e1 = c * mobius(a, c) - P1;
        const Complex e2 = w * c * mobius(b, c) - P2;
        const Complex e3 = d * mobius(a, d) - Q1;
        const Complex e4 = w * d * mobius(b, d) - Q2;
        return std::norm(e1) + std::norm(e2) + std::norm(e3) + std::norm(e4);
    };

    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::optional<Region2Candidate> best;
    for (int run = 0; run < restarts; ++run) {
        std::vector<double> x0 = {0.7 * U(rng), 0.7 * U(rng), 0.7 * U(rng), 0.7 * U(rng),
                                  0.7 * U(rng), 0.7 * U(rng), std::numbers::pi * U(rng),
                                  1.5 * U(rng)};
        auto x = nelder_mead(residual2, x0, 0.15, 2500, 1e-26);
        x = nelder_mead(residual2, x, 0.01, 1500, 1e-30);
        if (residual2(x) > 1e-22) continue;
        auto [a, b, c, w, t] = unpack(x);
        const Complex gamma = t * a + (1.0 - t) * b;
        const Complex d = mobius(gamma, c);
        const double value = log_abs(c) + log_abs(d);
        if (!best || value < best->value) {
            Region2Candidate cand;
            ExtremalDiskParams params;
            params.alpha = DiskPoint(a);
            params.beta = DiskPoint(b);
            params.c = DiskPoint(c);
            params.t = t;
            params.gamma = DiskPoint(gamma);
            params.omega = UnimodularConstant::from_value(w);
            const Complex v = c / std::abs(c);
            params.r = std::abs(c);
            params.v = UnimodularConstant::from_value(v);
            params.theta = UnimodularConstant::from_value(w * v * v);
            cand.params = params;
            cand.branch = ThetaBranch{params.theta, params.omega,
                                      UnimodularConstant::from_value(v * v), +1, true};
            cand.gen_z = Complex(0.0);
            cand.zeta = Complex(0.0);
            cand.value = value;
            cand.value_cert = value;
            cand.discrepancy = 0.0;
            best = cand;
        }
    }
    return best;
}

}  // namespace detail

/// General Region-2 evaluation (Theorem 1): locate the hypersurface
/// S(e^{i theta}) through (z1, z2) by a one-dimensional root search in
/// theta over both omega branches, then evaluate the closed form and build
/// the full certificate from the reconstructed disk.
inline GreenResult green_region2_general(DiskPoint z1p, DiskPoint z2p, double p, double q) {
    const RegionLabel label = classify(z1p, z2p, p, q);
    if (!label.is(Region::Region2))
        throw NotRegion2("green_region2_general: point is not in Region 2");
    const Complex z1 = z1p.value(), z2 = z2p.value();

    std::vector<detail::Region2Candidate> accepted;
    auto consider = [&](const ThetaBranch& branch, Complex gen_z) {
        if (auto cand = detail::try_region2_candidate(z1, z2, p, q, branch, gen_z))
            accepted.push_back(*cand);
    };

    // S(+1) / S(-1) carry tangential theta-roots; their real-r membership
    // test is the robust route onto them.
    if (auto s1 = green_S1(z1p, z2p, p, q))
        consider(omega_v_from_theta(UnimodularConstant::from_angle(0.0), p, q, +1),
                 *s1->frame_z);
    if (auto sm1 = green_S_minus1(z1p, z2p, p, q))
        consider(omega_v_from_theta(UnimodularConstant::from_angle(std::numbers::pi), p, q, -1),
                 *sm1->frame_z);

    double min_abs_residual = std::numeric_limits<double>::infinity();
    if (accepted.empty()) {
        const double two_pi = 2.0 * std::numbers::pi;
        const int n = 4096;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (int sign : {+1, -1}) {
            auto residual = [&](double th) -> double {
                try {
                    const auto branch =
                        omega_v_from_theta(UnimodularConstant::from_angle(th), p, q, sign);
                    if (!branch.valid) return nan;
                    auto [A, B] = detail::hypersurface_AB(branch.omega.value(),
                                                          branch.v_squared.value(), p, q, z1, z2);
                    if (std::abs(B) < 1e-13) return nan;
                    const Complex z = A / B;
                    if (!(std::abs(z) < 1.0)) return nan;
                    return real_form(th, z.real(), z.imag(), p, q);
                } catch (const Error&) {
                    return nan;
                }
            };
            auto z_at = [&](double th) {
                const auto branch =
                    omega_v_from_theta(UnimodularConstant::from_angle(th), p, q, sign);
                auto [A, B] = detail::hypersurface_AB(branch.omega.value(),
                                                      branch.v_squared.value(), p, q, z1, z2);
                return std::pair{branch, A / B};
            };

            std::vector<double> fv(n + 1);
            for (int i = 0; i <= n; ++i) fv[i] = residual(two_pi * i / n);
            for (int i = 0; i < n; ++i) {
                if (std::isnan(fv[i]) || std::isnan(fv[i + 1])) continue;
                min_abs_residual = std::min(min_abs_residual, std::abs(fv[i]));
                const double a = two_pi * i / n, b = two_pi * (i + 1) / n;
                double th_root = nan;
                if (fv[i] == 0.0) {
                    th_root = a;
                } else if ((fv[i] < 0.0) != (fv[i + 1] < 0.0)) {
                    auto rf = [&](double th) {
                        double v = residual(th);
                        return std::isnan(v) ? 1e30 : v;
                    };
                    th_root = bisect(rf, a, b, fv[i], 1e-13);
                } else if (i > 0 && !std::isnan(fv[i - 1]) && std::abs(fv[i]) < 1e-9 &&
                           std::abs(fv[i]) <= std::abs(fv[i - 1]) &&
                           std::abs(fv[i]) <= std::abs(fv[i + 1])) {
                    auto af = [&](double th) {
                        double v = residual(th);
                        return std::isnan(v) ? 1e30 : std::abs(v);
                    };
                    const double th = golden_minimize(af, two_pi * (i - 1) / n, b, 1e-13);
                    if (std::abs(residual(th)) < 1e-11) th_root = th;
                }
                if (!std::isnan(th_root)) {
                    auto [branch, z] = z_at(th_root);
                    consider(branch, z);
                }
            }
        }
    }

    GreenResult out;
    out.region = label;
    if (!accepted.empty()) {
        const auto best = *std::min_element(
            accepted.begin(), accepted.end(),
            [](const auto& a, const auto& b) { return a.discrepancy < b.discrepancy; });
        out.theta_branch = best.branch;
        out.disk_params = best.params;
        out.zeta = best.zeta;
        out.frame_z = best.gen_z;
        out.frame = CertFrame::AxisFrame;
        out.value = best.value;

        const auto fn = caratheodory_certificate(best.params);
        out.lower_witness = fn;
        const double lower = detail::log_abs(fn.F(z1, mobius(best.gen_z, z2)));
        const double upper = best.value_cert;
        out.certificate = TwoSidedCertificate{lower - kCertSlack, upper + kCertSlack,
                                              upper - lower + 2.0 * kCertSlack};
        return out;
    }

    // Safety net: direct multistart solve of the interpolation conditions.
    if (auto fb = detail::region2_multistart(z1, z2, p, q, 64)) {
        out.theta_branch = fb->branch;
        out.disk_params = fb->params;
        out.zeta = fb->zeta;
        out.frame = CertFrame::EvalFrame;
        out.value = fb->value;
        const auto fn = caratheodory_certificate(fb->params);
        out.lower_witness = fn;
        const double lower =
            detail::log_abs(fn.F(mobius(z1, z1), mobius(z2, z2)));  // T(eval) = (0,0)
        out.certificate = TwoSidedCertificate{lower - kCertSlack, fb->value_cert + kCertSlack,
                                              fb->value_cert - lower + 2.0 * kCertSlack};
        return out;
    }
    throw NoHypersurfaceFound(
        "green_region2_general: no hypersurface found; min |residual| over the grid = " +
        std::to_string(min_abs_residual));
}

namespace detail {
inline GreenResult green_canonical(Complex z1, Complex z2, double p, double q, bool allow_band);
inline double green_value_closed_first(Complex z1, Complex z2, double p, double q);
}

/// Region-3 special cases: the shared-coordinate formulas for p = 0 or
/// q = 0, otherwise evaluation by continuity (average of four perturbed
/// Region-1/2 values at distance 1e-6; spread above 1e-5 is an error).
inline GreenResult green_region3(DiskPoint z1p, DiskPoint z2p, double p, double q) {
    const Complex z1 = z1p.value(), z2 = z2p.value();
    GreenResult out;
    out.region = RegionLabel{Region::Region3, std::nullopt};

    if (p < kRegionTol) {  // poles (0,0) and (0,q)
        const double m = std::max(std::abs(z1), std::abs(z2 * mobius(Complex(q), z2)));
        out.value = m == 0.0 ? kNegInf : std::log(m);
        return out;
    }
    if (q < kRegionTol) {  // poles (p,0) and (0,0)
        const double m = std::max(std::abs(z2), std::abs(z1 * mobius(Complex(p), z1)));
        out.value = m == 0.0 ? kNegInf : std::log(m);
        return out;
    }
    if (rotational_case(z1p, z2p, p, q)) {
        // the Region-1 max formula is exact on the rotational configuration
        const double m = std::max(std::abs(z1 * mobius(z1, Complex(p))),
                                  std::abs(z2 * mobius(z2, Complex(q))));
        out.value = m == 0.0 ? kNegInf : std::log(m);
        return out;
    }

    // Antipodal perturbation pairs at distance 1e-6; averaging a pair cancels
    // the first-order term, so the pair means agree to O(delta^2) wherever g
    // is continuous.  Two usable pairs = four perturbed Region-1/2 points.
    const double delta = 1e-6;
    const double rh = delta / std::numbers::sqrt2;
    const Complex dirs[4] = {Complex(delta, 0.0), Complex(0.0, delta), Complex(rh, rh),
                             Complex(rh, -rh)};
    std::vector<double> pair_means;
    for (int slot = 2; slot >= 1 && pair_means.size() < 2; --slot) {
        for (const auto& d : dirs) {
            if (pair_means.size() >= 2) break;
            double sum = 0.0;
            int got = 0;
            for (double s : {+1.0, -1.0}) {
                const Complex w1 = slot == 1 ? z1 + s * d : z1;
                const Complex w2 = slot == 2 ? z2 + s * d : z2;
                if (std::abs(w1) >= 1.0 - kDiskBoundaryMargin ||
                    std::abs(w2) >= 1.0 - kDiskBoundaryMargin)
                    continue;
                try {
                    sum += detail::green_value_closed_first(w1, w2, p, q);
                    ++got;
                } catch (const Error&) {
                    // direction stays inside Region 3; try the next pair
                }
            }
            if (got == 2) pair_means.push_back(sum / 2.0);
        }
    }
    if (pair_means.size() < 2)
        throw ContinuityFailure("green_region3: fewer than 4 usable perturbation directions");
    const auto [mn, mx] = std::minmax_element(pair_means.begin(), pair_means.end());
    if (*mx - *mn > 1e-5)
        throw ContinuityFailure("green_region3: perturbed pair means spread " +
                                std::to_string(*mx - *mn));
    double acc = 0.0;
    for (double v : pair_means) acc += v;
    out.value = acc / double(pair_means.size());
    return out;
}

namespace detail {

/// Value-only evaluation preferring closed forms (Region 1, S(+-1), the real
/// axis), falling back to the full engine.  The extremal-disk family
/// degenerates on parts of the Region-3 boundary, so the continuity
/// evaluator's perturbed points must avoid the solver path where a closed
/// form exists.
inline double green_value_closed_first(Complex z1, Complex z2, double p, double q) {
    const DiskPoint z1p(z1), z2p(z2);
    const RegionLabel label = classify(z1p, z2p, p, q);
    if (label.is(Region::Region3))
        throw NotRegion2("green_value_closed_first: Region-3 point");
    if (label.is(Region::Region1)) return green_region1(z1p, z2p, p, q).value;
    if (auto s1 = green_S1(z1p, z2p, p, q)) return s1->value;
    if (auto sm1 = green_S_minus1(z1p, z2p, p, q)) return sm1->value;
    if (std::abs(z1) < 1e-12 && std::abs(z2.imag()) < 1e-12 &&
        std::abs(z2.real()) < std::min(p / q, 1.0))
        return axis_value_real(z2.real(), p, q);
    return green_canonical(z1, z2, p, q, false).value;
}

/// Dispatcher on canonical data.  `allow_band = false` refuses Region-3 and
/// near-boundary inputs (used by the continuity evaluator to avoid
/// recursion).
inline GreenResult green_canonical(Complex z1, Complex z2, double p, double q, bool allow_band) {
    const DiskPoint z1p(z1), z2p(z2);
    const RegionLabel label = classify(z1p, z2p, p, q);

    const double band = std::min(
        std::abs(std::abs(mobius(z1, Complex(p))) - std::abs(z2)),
        std::abs(std::abs(z1) - std::abs(mobius(z2, Complex(q)))));
    const bool near_boundary = label.is(Region::Region3) || std::min({band, p, q}) < 1e-8;

    if (near_boundary && !label.is(Region::Region1)) {
        if (!allow_band) throw NotRegion2("green_canonical: point inside the Region-3 band");
        return green_region3(z1p, z2p, p, q);
    }
    if (label.is(Region::Region1)) return green_region1(z1p, z2p, p, q);
    if (std::abs(z1) < 1e-12) return green_axis(z2p, p, q);
    return green_region2_general(z1p, z2p, p, q);
}

}  // namespace detail

/// Top-level evaluation: normalize the configuration, classify, dispatch.
/// The value is automorphism-invariant, so the canonical-frame value is the
/// answer; evaluation exactly at a pole yields -inf.
inline GreenResult green(const BidiskPoint& pole_a, const BidiskPoint& pole_b,
                         const BidiskPoint& eval) {
    const auto at = [&](const BidiskPoint& pole) {
        return std::abs(eval.z1.value() - pole.z1.value()) < 1e-15 &&
               std::abs(eval.z2.value() - pole.z2.value()) < 1e-15;
    };
    if (at(pole_a) || at(pole_b)) {
        GreenResult out;
        out.value = kNegInf;
        out.region = RegionLabel{Region::Region3, std::nullopt};
        return out;
    }
    const auto norm = normalize_configuration(pole_a, pole_b, eval);
    return detail::green_canonical(norm.eval.z1.value(), norm.eval.z2.value(), norm.p, norm.q,
                                   true);
}

/// Sample the hypersurface S(e^{i theta}): n_z generating parameters along
/// the segment A(e^{i theta}), n_lambda points on each re-based disk, every
/// emitted point re-validated against the membership condition.
inline HypersurfaceSample trace_hypersurface(double theta, double p, double q, std::size_t n_z,
                                             std::size_t n_lambda) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw OutOfDomain("trace_hypersurface: pole parameters outside (0,1)");
    const auto theta_u = UnimodularConstant::from_angle(theta);
    const Complex u = theta_u.value();

    HypersurfaceSample out;
    out.theta = theta_u;

    std::vector<Complex> zs;
    if (std::abs(u.imag()) < 1e-9) {
        const bool plus = u.real() > 0.0;
        const double lo = plus ? -p : std::max(-1.0, -p / q);
        const double hi = plus ? std::min(1.0, p / q) : -p;
        for (std::size_t k = 0; k < n_z; ++k) {
            const double zr = lo + (hi - lo) * (double(k) + 0.5) / double(n_z);
            if (classify_axis(DiskPoint(zr), p, q).is(Region::Region2)) zs.push_back(Complex(zr));
        }
    } else {
        // A(e^{i theta}) lies on one of the two lines z = (a + i s kappa (a-1)) u.
        const double ct = std::cos(theta), st = std::sin(theta);
        const double kappa =
            p * std::abs(st) / std::sqrt((q - ct) * (q - ct) + (1.0 - p * p) * st * st);
        const double a_lo = (kappa * kappa - 1.0) / (kappa * kappa + 1.0);
        auto valid_z = [&](double a, int s) -> std::optional<Complex> {
            const Complex z = (Complex(a, s * kappa * (a - 1.0))) * u;
            if (std::abs(z) >= 1.0 - kDiskBoundaryMargin) return std::nullopt;
            if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) return std::nullopt;
            const Complex zb = std::conj(z);
            const Complex w_expected =
                (u * q - 1.0) * (zb * u * u - z) / (p * (u * u - 1.0) * (zb * u - 1.0));
            if (std::abs(std::abs(w_expected) - 1.0) > 1e-9) return std::nullopt;
            ThetaBranch br;
            br.theta = theta_u;
            br.omega = UnimodularConstant::from_value(w_expected / std::abs(w_expected));
            br.v_squared = UnimodularConstant::from_value(u / br.omega.value());
            br.valid = true;
            if (!detail::axis_windows(z, p, q, br).ok) return std::nullopt;
            return z;
        };
        const int scan = 1024;
        int best_sign = 0;
        double seg_lo = 0.0, seg_hi = 0.0;
        for (int s : {+1, -1}) {
            double lo_a = 2.0, hi_a = -2.0;
            for (int k = 0; k <= scan; ++k) {
                const double a = a_lo + (1.0 - a_lo) * double(k) / scan;
                if (valid_z(a, s)) {
                    lo_a = std::min(lo_a, a);
                    hi_a = std::max(hi_a, a);
                }
            }
            if (lo_a <= hi_a && (best_sign == 0 || hi_a - lo_a > seg_hi - seg_lo)) {
                best_sign = s;
                seg_lo = lo_a;
                seg_hi = hi_a;
            }
        }
        if (best_sign != 0)
            for (std::size_t k = 0; k < n_z; ++k) {
                const double a = seg_lo + (seg_hi - seg_lo) * (double(k) + 0.5) / double(n_z);
                if (auto z = valid_z(a, best_sign)) zs.push_back(*z);
            }
    }
    if (zs.empty()) throw EmptySurface("trace_hypersurface: A(e^{i theta}) is empty");

    const double golden = 0.6180339887498949;
    for (std::size_t zi = 0; zi < zs.size(); ++zi) {
        const Complex z = zs[zi];
        ThetaBranch branch;
        if (std::abs(u.imag()) < 1e-9) {
            branch = omega_v_from_theta(theta_u, p, q, u.real() > 0.0 ? +1 : -1);
            if (std::abs(branch.omega.value() + 1.0) > 1e-7)
                branch = omega_v_from_theta(theta_u, p, q, u.real() > 0.0 ? -1 : +1);
        } else {
            const Complex zb = std::conj(z);
            const Complex w_expected =
                (u * q - 1.0) * (zb * u * u - z) / (p * (u * u - 1.0) * (zb * u - 1.0));
            branch.theta = theta_u;
            branch.omega = UnimodularConstant::from_value(w_expected / std::abs(w_expected));
            branch.v_squared = UnimodularConstant::from_value(u / branch.omega.value());
            branch.valid = true;
            branch.sqrt_sign =
                std::abs(omega_v_from_theta(theta_u, p, q, +1).omega.value() -
                         branch.omega.value()) < 1e-6
                    ? +1
                    : -1;
        }
        const auto params = params_from_theta(DiskPoint(z), p, q, branch);
        out.z_parameters.push_back(z);

        for (std::size_t m = 0; m < n_lambda; ++m) {
            const double rho = 0.92 * std::sqrt((double(m) + 0.5) / double(n_lambda));
            const double phi = 2.0 * std::numbers::pi * golden * double(m);
            const DiskPoint lambda(std::polar(rho, phi));
            const BidiskPoint on_disk = disk_eval(params, lambda);
            HypersurfacePoint pt;
            pt.lambda = lambda.value();
            pt.z_index = zi;
            pt.point = BidiskPoint(on_disk.z1.value(), mobius(z, on_disk.z2.value()));
            pt.green_value = detail::lempert_value_at(params, lambda.value());
            pt.membership_residual =
                detail::membership_residual(params, on_disk.z1.value(), on_disk.z2.value());
            if (pt.membership_residual > kAcceptanceTol)
                throw CertificateGapExceeded("trace_hypersurface: membership residual " +
                                             std::to_string(pt.membership_residual));
            out.points.push_back(pt);
        }
    }
    return out;
}

}  // namespace bigreen
