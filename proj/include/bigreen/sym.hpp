#pragma once

#include "bigreen/green.hpp"

namespace bigreen {

/// A point of the symmetrized bidisk G in (sum, product) coordinates.
struct SymPoint {
    Complex s;
    Complex pr;

    friend bool operator==(const SymPoint& a, const SymPoint& b) {
        return a.s == b.s && a.pr == b.pr;
    }
};

/// pi(z1, z2) = (z1 + z2, z1 z2).
inline SymPoint symmetrize(const BidiskPoint& w) {
    return SymPoint{w.z1.value() + w.z2.value(), w.z1.value() * w.z2.value()};
}

namespace detail {

/// Roots of lambda^2 - s lambda + pr, ordered lexicographically on (Re, Im).
inline std::pair<Complex, Complex> quadratic_roots(Complex s, Complex pr) {
    Complex d = std::sqrt(s * s - 4.0 * pr);
    if ((std::conj(s) * d).real() < 0.0) d = -d;  // avoid cancellation
    const Complex r1 = 0.5 * (s + d);
    const Complex r2 = std::abs(r1) > 1e-300 ? pr / r1 : 0.5 * (s - d);
    const bool swap = r2.real() < r1.real() ||
                      (r2.real() == r1.real() && r2.imag() < r1.imag());
    return swap ? std::pair{r2, r1} : std::pair{r1, r2};
}

}  // namespace detail

inline bool in_G(const SymPoint& sp) {
    auto [r1, r2] = detail::quadratic_roots(sp.s, sp.pr);
    return std::abs(r1) < 1.0 - kDiskBoundaryMargin && std::abs(r2) < 1.0 - kDiskBoundaryMargin;
}

/// Fiber of the symmetrization map over sp, in canonical (lexicographic)
/// order; symmetrize(unsymmetrize(sp)) = sp.
inline BidiskPoint unsymmetrize(const SymPoint& sp) {
    auto [r1, r2] = detail::quadratic_roots(sp.s, sp.pr);
    if (std::abs(r1) >= 1.0 - kDiskBoundaryMargin || std::abs(r2) >= 1.0 - kDiskBoundaryMargin)
        throw NotInG("unsymmetrize: a fiber root lies outside the unit disk");
    return BidiskPoint(r1, r2);
}

/// Automorphism A_h of G induced by a disk automorphism h = phase * m_a;
/// acts through the fiber.
struct SymAutomorphism {
    Complex a;              // Moebius center
    Complex phase{1.0, 0.0};

    SymPoint apply(const SymPoint& sp) const {
        const BidiskPoint w = unsymmetrize(sp);
        const Complex h1 = phase * mobius(a, w.z1.value());
        const Complex h2 = phase * mobius(a, w.z2.value());
        return SymPoint{h1 + h2, h1 * h2};
    }
};

/// Reduce a pole of G to (p, 0) with p = |m_{p2}(p1)| >= 0 via
/// A_h with h = (|P|/P) m_{p2}.  An already-canonical pole gets the
/// identity automorphism (h = -m_0).
inline std::pair<double, SymAutomorphism> reduce_pole(const SymPoint& sp_pole) {
    if (std::abs(sp_pole.pr) == 0.0 && sp_pole.s.imag() == 0.0 && sp_pole.s.real() >= 0.0)
        return {sp_pole.s.real(), SymAutomorphism{Complex(0.0), Complex(-1.0)}};
    const BidiskPoint w = unsymmetrize(sp_pole);
    const Complex P = mobius(w.z2.value(), w.z1.value());
    SymAutomorphism h;
    h.a = w.z2.value();
    h.phase = std::abs(P) > 0.0 ? std::conj(P) / std::abs(P) : Complex(1.0);
    return {std::abs(P), h};
}

/// Residual of the Theorem-2 quartic in e^{i theta} (p = q):
///   zb p u^4 - zb u^3 - p u^3 + p u - p z + u z.
inline Complex quartic_theta_constraint(const UnimodularConstant& theta, Complex z, double p) {
    const Complex u = theta.value();
    const Complex zb = std::conj(z);
    const Complex u3 = u * u * u;
    return zb * p * u3 * u - zb * u3 - p * u3 + p * u - p * z + u * z;
}

namespace detail {

/// Generating parameter z on S(e^{i theta}) for p = q (Theorem 2a), written
/// in the symmetric coordinates s = z1 + z2, pr = z1 z2.
inline std::pair<Complex, Complex> theorem2_AB(Complex u, double p, Complex s, Complex pr) {
    const Complex u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    const double p2 = p * p;
    const Complex SS = s * s - 4.0 * pr;
    const Complex A = -u * (p2 * u4 * pr + u3 * (-p2 * pr * s - p2 * s + p * SS) +
                            u2 * (p2 * pr * pr - SS + 3.0 * p2 * pr + p * s) -
                            4.0 * p * u * pr + p * pr * s - p2 * pr * pr);
    const Complex B = u4 * (p2 - p * s) + u3 * (3.0 * p * pr - p + s) -
                      u2 * (4.0 * pr + 2.0 * p2 * pr) + u * (3.0 * p * pr - p * pr * pr + pr * s) +
                      p2 * pr * pr - p * pr * s;
    return {A, B};
}

/// Theorem-2(b) value ratio in symmetric coordinates.
inline Complex theorem2_ratio(Complex u, double p, Complex s, Complex pr) {
    const Complex u2 = u * u;
    return (p * u2 - p * pr - u2 * s + 2.0 * u * pr) / (p * u2 - p * pr - 2.0 * u + s);
}

struct Theorem2Windows {
    bool ok = false;
    double t = 0.0;
    double rsq = 0.0;
};

/// |c|^2 and t windows of Theorem 2(a).
inline Theorem2Windows theorem2_windows(Complex u, Complex z, double p) {
    Theorem2Windows out;
    const Complex u2 = u * u;
    const Complex rsq = (p * u2 * z - p * u + p * z - u * z) / (u * (p * u2 - 2.0 * u + z));
    const Complex t = (u - z) * (p - u) / (u * (p * u2 + p - 2.0 * u));
    if (std::abs(rsq.imag()) > 1e-7 || std::abs(t.imag()) > 1e-7) return out;
    out.rsq = rsq.real();
    out.t = t.real();
    const double lower = std::max(p * p, std::norm(z));
    out.ok = out.t > 1e-12 && out.t < 1.0 - 1e-12 && out.rsq > lower + 1e-14 &&
             out.rsq < 1.0 - 1e-12;
    return out;
}

/// Direct Theorem-2 search for g_{D^2}((z1,z2),(p,0),(0,p)) on Region 2.
/// The quartic residual has a real form Im(e^{-2i theta} F2), which the grid
/// search brackets; every root is vetted by rebuilding the disk.
inline std::optional<GreenResult> green_sym_direct(Complex z1, Complex z2, double p) {
    const Complex s = z1 + z2, pr = z1 * z2;

    auto z_of = [&](double th) -> std::optional<std::pair<Complex, Complex>> {
        const Complex u = std::polar(1.0, th);
        auto [A, B] = theorem2_AB(u, p, s, pr);
        if (std::abs(B) < 1e-13) return std::nullopt;
        return std::pair{u, A / B};
    };
    auto residual = [&](double th) -> double {
        auto zu = z_of(th);
        if (!zu) return std::numeric_limits<double>::quiet_NaN();
        auto [u, z] = *zu;
        if (!(std::abs(z) < 1.0)) return std::numeric_limits<double>::quiet_NaN();
        const Complex f2 = quartic_theta_constraint(UnimodularConstant::from_value(u), z, p);
        return (f2 / (u * u)).imag();
    };

    std::vector<detail::Region2Candidate> accepted;
    auto consider = [&](double th) {
        auto zu = z_of(th);
        if (!zu) return;
        auto [u, z] = *zu;
        if (!(std::abs(z) < 1.0 - kDiskBoundaryMargin)) return;
        if (!theorem2_windows(u, z, p).ok) return;
        const Complex v2 = (p - u) / (1.0 - p * u);
        const Complex w = u / v2;
        if (std::abs(std::abs(w) - 1.0) > 1e-9) return;
        ThetaBranch branch;
        branch.theta = UnimodularConstant::from_value(u);
        branch.omega = UnimodularConstant::from_value(w / std::abs(w));
        branch.v_squared = UnimodularConstant::from_value(u / branch.omega.value());
        branch.valid = true;
        try {
            Region2Candidate cand;
            cand.branch = branch;
            cand.gen_z = z;
            cand.params = params_from_theta(DiskPoint(z), p, p, branch, kCertificationTol);
            const BidiskPoint target(z1, mobius(z, z2));
            cand.zeta = disk_preimage(cand.params, target).value();
            cand.value = log_abs(theorem2_ratio(u, p, s, pr));
            cand.value_cert = lempert_value_at(cand.params, cand.zeta);
            cand.discrepancy = std::abs(cand.value - cand.value_cert);
            if (cand.discrepancy > 1e-9) return;
            accepted.push_back(cand);
        } catch (const Error&) {
        }
    };

    const int n = 4096;
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> fv(n + 1);
    for (int i = 0; i <= n; ++i) fv[i] = residual(two_pi * i / n);
    for (int i = 0; i < n && accepted.empty(); ++i) {
        if (std::isnan(fv[i]) || std::isnan(fv[i + 1])) continue;
        const double a = two_pi * i / n, b = two_pi * (i + 1) / n;
        if (fv[i] == 0.0) {
            consider(a);
        } else if ((fv[i] < 0.0) != (fv[i + 1] < 0.0)) {
            auto rf = [&](double th) {
                const double v = residual(th);
                return std::isnan(v) ? 1e30 : v;
            };
            consider(bisect(rf, a, b, fv[i], 1e-13));
        } else if (i > 0 && !std::isnan(fv[i - 1]) && std::abs(fv[i]) < 1e-9 &&
                   std::abs(fv[i]) <= std::abs(fv[i - 1]) &&
                   std::abs(fv[i]) <= std::abs(fv[i + 1])) {
            auto af = [&](double th) {
                const double v = residual(th);
                return std::isnan(v) ? 1e30 : std::abs(v);
            };
            const double th = golden_minimize(af, two_pi * (i - 1) / n, b, 1e-13);
            if (std::abs(residual(th)) < 1e-11) consider(th);
        }
    }
    if (accepted.empty()) return std::nullopt;

    const auto best = *std::min_element(
        accepted.begin(), accepted.end(),
        [](const auto& a, const auto& b) { return a.discrepancy < b.discrepancy; });
    GreenResult out;
    out.region = RegionLabel{Region::Region2, std::nullopt};
    out.value = best.value;
    out.theta_branch = best.branch;
    out.disk_params = best.params;
    out.zeta = best.zeta;
    out.frame_z = best.gen_z;
    const auto fn = caratheodory_certificate(best.params);
    out.lower_witness = fn;
    const double lower = log_abs(fn.F(z1, mobius(best.gen_z, z2)));
    out.certificate = TwoSidedCertificate{lower - kCertSlack, best.value_cert + kCertSlack,
                                          best.value_cert - lower + 2.0 * kCertSlack};
    return out;
}

}  // namespace detail

/// Green function of the symmetrized bidisk through the 2-to-1 covering:
/// g_G(pi(z1,z2), (p,0)) = g_{D^2}((z1,z2), (p,0), (0,p)).  The pole is
/// first reduced to the axis; Region 2 goes through the Theorem-2 quartic
/// with the general Region-2 engine as fallback; on the Region-3 set the
/// value is log|z1 m_p(z1)| (continuity of the Region-1 formula).
inline GreenResult green_sym(const SymPoint& eval, const SymPoint& pole) {
    if (!in_G(eval) || !in_G(pole)) throw NotInG("green_sym: argument outside G");
    if (std::abs(eval.s - pole.s) < 1e-15 && std::abs(eval.pr - pole.pr) < 1e-15) {
        GreenResult out;
        out.value = kNegInf;
        out.region = RegionLabel{Region::Region3, std::nullopt};
        return out;
    }
    auto [p, h] = reduce_pole(pole);
    if (p < 1e-12)
        throw DegeneratePole("green_sym: pole reduces to the origin of G (equal coordinates)");
    const SymPoint ev = h.apply(eval);
    const BidiskPoint w = unsymmetrize(ev);
    const Complex z1 = w.z1.value(), z2 = w.z2.value();

    const RegionLabel label = classify(w.z1, w.z2, p, p);
    if (label.is(Region::Region2)) {
        if (auto direct = detail::green_sym_direct(z1, z2, p)) return *direct;
        return green_region2_general(w.z1, w.z2, p, p);
    }
    // For p = q Region 1 collapses into Region 3; the rotational
    // configuration z2 = m_p(z1) carries the exact Region-1 formula, the
    // rest of Region 3 goes through the continuity evaluator.
    return detail::green_canonical(z1, z2, p, p, true);
}

/// Independent Caratheodory oracle: log of the Agler-Young supremum over
/// unimodular tau, evaluated on a grid and refined by golden section.
inline double agler_young_sup(const SymPoint& a, const SymPoint& b, std::size_t grid = 100000) {
    const Complex s1 = a.s, p1 = a.pr, s2 = b.s, p2 = b.pr;
    auto value = [&](double ang) {
        const Complex tau = std::polar(1.0, ang);
        const Complex num = (s2 * p1 - s1 * p2) * tau * tau + 2.0 * (p2 - p1) * tau + s1 - s2;
        const Complex den = (s1 - std::conj(s2) * p1) * tau * tau -
                            2.0 * (1.0 - p1 * std::conj(p2)) * tau + std::conj(s2) -
                            s1 * std::conj(p2);
        return std::abs(num) / std::abs(den);
    };
    const double two_pi = 2.0 * std::numbers::pi;
    double best_ang = 0.0, best = -1.0;
    for (std::size_t i = 0; i < grid; ++i) {
        const double ang = two_pi * double(i) / double(grid);
        const double v = value(ang);
        if (v > best) {
            best = v;
            best_ang = ang;
        }
    }
    const double h = two_pi / double(grid);
    auto neg = [&](double ang) { return -value(ang); };
    const double refined = golden_minimize(neg, best_ang - h, best_ang + h, 1e-10);
    best = std::max(best, value(refined));
    return best == 0.0 ? kNegInf : std::log(best);
}

}  // namespace bigreen
