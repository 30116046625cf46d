#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "bigreen/moebius.hpp"

namespace bigreen {

enum class Region { Region1 = 1, Region2 = 2, Region3 = 3 };

enum class Region1Direction { FirstToSecond, SecondToFirst, Rotational };

/// Region label for a canonical configuration; the direction flag is present
/// exactly when the label is Region1.
struct RegionLabel {
    Region region;
    std::optional<Region1Direction> direction;

    bool is(Region r) const { return region == r; }
};

/// Nodes and targets of a 3-point disk interpolation problem.
struct PickData {
    std::array<Complex, 3> nodes;
    std::array<Complex, 3> targets;
};

struct PickResult {
    std::array<std::array<Complex, 3>, 3> matrix;
    bool psd = false;
    double min_eigenvalue = 0.0;
};

inline constexpr double kPsdThreshold = -1e-11;
inline constexpr double kRegionTol = 1e-10;

namespace detail {

/// Eigenvalues of a 3x3 Hermitian matrix from the characteristic cubic
/// (trigonometric form); exact to machine precision at this size.
inline std::array<double, 3> hermitian3_eigenvalues(
    const std::array<std::array<Complex, 3>, 3>& m) {
    const double p1 = std::norm(m[0][1]) + std::norm(m[0][2]) + std::norm(m[1][2]);
    const double tr = m[0][0].real() + m[1][1].real() + m[2][2].real();
    const double qm = tr / 3.0;
    if (p1 == 0.0) return {m[0][0].real(), m[1][1].real(), m[2][2].real()};

    const double p2 = (m[0][0].real() - qm) * (m[0][0].real() - qm) +
                      (m[1][1].real() - qm) * (m[1][1].real() - qm) +
                      (m[2][2].real() - qm) * (m[2][2].real() - qm) + 2.0 * p1;
    const double pp = std::sqrt(p2 / 6.0);

    std::array<std::array<Complex, 3>, 3> b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? qm : 0.0)) / pp;

    const Complex detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                         b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                         b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = std::clamp(detb.real() / 2.0, -1.0, 1.0);

    const double phi = std::acos(r) / 3.0;
    const double e1 = qm + 2.0 * pp * std::cos(phi);
    const double e3 = qm + 2.0 * pp * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * qm - e1 - e3;
    std::array<double, 3> ev{e1, e2, e3};
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace detail

/// Pick matrix of a 3-point interpolation problem and its positive
/// semidefiniteness (threshold -1e-11 on the smallest eigenvalue).
inline PickResult pick_matrix_psd(const PickData& data) {
    for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k)
            if (std::abs(data.nodes[j] - data.nodes[k]) < 1e-12)
                throw DuplicateNodes("pick_matrix_psd: coincident interpolation nodes");

    PickResult out;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            out.matrix[j][k] = (1.0 - data.targets[j] * std::conj(data.targets[k])) /
                               (1.0 - data.nodes[j] * std::conj(data.nodes[k]));
    auto ev = detail::hermitian3_eigenvalues(out.matrix);
    out.min_eigenvalue = ev[0];
    out.psd = ev[0] >= kPsdThreshold;
    return out;
}

/// Solvability of a 3-point interpolation problem, tolerating coincident
/// nodes: merged nodes must carry identical targets, and the reduced 2-point
/// problem falls back to the Schwarz-Pick inequality.
inline bool pick_solvable(const std::array<Complex, 3>& nodes,
                          const std::array<Complex, 3>& targets) {
    std::array<int, 3> keep{};
    int n = 0;
    for (int j = 0; j < 3; ++j) {
        bool dup = false;
        for (int i = 0; i < n; ++i) {
            if (std::abs(nodes[j] - nodes[keep[i]]) < 1e-12) {
                dup = true;
                if (std::abs(targets[j] - targets[keep[i]]) > 1e-10) return false;
            }
        }
        if (!dup) keep[n++] = j;
    }
    if (n <= 1) return true;
    if (n == 2) {
        const double dt = std::abs(mobius(targets[keep[0]], targets[keep[1]]));
        const double dn = std::abs(mobius(nodes[keep[0]], nodes[keep[1]]));
        return dt <= dn + 1e-12;
    }
    return pick_matrix_psd(PickData{nodes, targets}).psd;
}

/// Rotational configuration z2 = w m_{z1}(p), m_{z2}(q) = w z1 for a single
/// unimodular w.  Both Region-3 moduli equalities hold on this set, so
/// classify labels it Region 3, but the Region-1 formula
/// log max{|z1 m_{z1}(p)|, |z2 m_{z2}(q)|} is exact there (the two arguments
/// of the max coincide); the Region-3 evaluator uses this as a fast path.
inline bool rotational_case(DiskPoint z1p, DiskPoint z2p, double p, double q) {
    const Complex z1 = z1p.value(), z2 = z2p.value();
    const Complex mp = mobius(z1, Complex(p));
    const Complex mq = mobius(z2, Complex(q));
    if (std::abs(std::abs(mp) - std::abs(z2)) >= kRegionTol) return false;
    if (std::abs(std::abs(mq) - std::abs(z1)) >= kRegionTol) return false;
    if (std::abs(mp) < kRegionTol || std::abs(z1) < kRegionTol) return false;
    const Complex w = z2 / mp;
    if (std::abs(std::abs(w) - 1.0) >= kRegionTol) return false;
    return std::abs(mq - w * z1) < kRegionTol;
}

/// Classify the canonical configuration with evaluation point (z1, z2) and
/// poles (p,0), (0,q).
///
/// Region 3 is the closed, empty-interior set where one of the moduli
/// equalities |m_{z1}(p)| = |z2|, |z1| = |m_{z2}(q)| holds or a pole weight
/// vanishes (it takes precedence; the rotational configuration is a subset
/// of it, see rotational_case).  Region 1 is detected through the two
/// 3-point Pick problems of the interpolation characterisation.
inline RegionLabel classify(DiskPoint z1, DiskPoint z2, double p, double q) {
    if (p < 0.0 || p >= 1.0 || q < 0.0 || q >= 1.0)
        throw OutOfDomain("classify: pole parameters must lie in [0,1)");

    const Complex w1 = z1.value(), w2 = z2.value();
    const double m1 = std::abs(mobius(w1, Complex(p)));
    const double m2 = std::abs(mobius(w2, Complex(q)));
    if (p < kRegionTol || q < kRegionTol || std::abs(m1 - std::abs(w2)) < kRegionTol ||
        std::abs(m2 - std::abs(w1)) < kRegionTol)
        return RegionLabel{Region::Region3, std::nullopt};

    if (pick_solvable({w1, Complex(p), Complex(0.0)}, {w2, Complex(0.0), Complex(q)}))
        return RegionLabel{Region::Region1, Region1Direction::FirstToSecond};
    if (pick_solvable({w2, Complex(0.0), Complex(q)}, {w1, Complex(p), Complex(0.0)}))
        return RegionLabel{Region::Region1, Region1Direction::SecondToFirst};

    return RegionLabel{Region::Region2, std::nullopt};
}

/// Classification of the axis configuration (0, z) with poles (p,0), (0,q):
/// Region 2 exactly on |z| < min{p/q, 1} away from the degeneracies |z| = p,
/// z = q; Region 1 on p/q <= |z| < 1 (possible only for p < q).
inline RegionLabel classify_axis(DiskPoint z, double p, double q) {
    if (p < 0.0 || p >= 1.0 || q < 0.0 || q >= 1.0)
        throw OutOfDomain("classify_axis: pole parameters must lie in [0,1)");
    const Complex w = z.value();
    if (p < kRegionTol || q < kRegionTol) return RegionLabel{Region::Region3, std::nullopt};
    if (std::abs(std::abs(w) - p) < kRegionTol) return RegionLabel{Region::Region3, std::nullopt};
    if (std::abs(w - Complex(q)) < kRegionTol) return RegionLabel{Region::Region3, std::nullopt};

    const double lim = std::min(p / q, 1.0);
    if (std::abs(std::abs(w) - lim) < kRegionTol) return RegionLabel{Region::Region3, std::nullopt};
    if (std::abs(w) < lim) return RegionLabel{Region::Region2, std::nullopt};
    return RegionLabel{Region::Region1, Region1Direction::SecondToFirst};
}

}  // namespace bigreen
