#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <variant>
#include <vector>

#include "bigreen/errors.hpp"

namespace bigreen {

using Complex = std::complex<double>;

inline constexpr double kDiskBoundaryMargin = 1e-14;
inline constexpr double kUnimodularTol = 1e-12;

/// A point of the open unit disk.  Construction enforces |value| < 1 - 1e-14;
/// everything downstream divides by (1 - |.|^2)-type quantities, so points
/// that close to the circle are rejected rather than clamped.
class DiskPoint {
  public:
    DiskPoint() : v_(0.0, 0.0) {}
    explicit DiskPoint(Complex v) : v_(v) {
        if (std::abs(v) >= 1.0 - kDiskBoundaryMargin)
            throw OutOfDomain("DiskPoint: modulus " + std::to_string(std::abs(v)) +
                              " is not strictly inside the unit disk");
    }
    DiskPoint(double re, double im) : DiskPoint(Complex(re, im)) {}
    explicit DiskPoint(double re) : DiskPoint(Complex(re, 0.0)) {}

    Complex value() const { return v_; }
    operator Complex() const { return v_; }

    friend bool operator==(const DiskPoint& a, const DiskPoint& b) { return a.v_ == b.v_; }

  private:
    Complex v_;
};

/// A complex number of modulus one, stored with its angle in [0, 2pi).
class UnimodularConstant {
  public:
    UnimodularConstant() : angle_(0.0), v_(1.0, 0.0) {}

    static UnimodularConstant from_angle(double angle) {
        UnimodularConstant u;
        u.angle_ = wrap_angle(angle);
        u.v_ = std::polar(1.0, u.angle_);
        return u;
    }

    static UnimodularConstant from_value(Complex v) {
        double m = std::abs(v);
        if (std::abs(m - 1.0) >= kUnimodularTol)
            throw OutOfDomain("UnimodularConstant: modulus " + std::to_string(m));
        UnimodularConstant u;
        u.angle_ = wrap_angle(std::arg(v));
        u.v_ = v / m;
        return u;
    }

    double angle() const { return angle_; }
    Complex value() const { return v_; }
    operator Complex() const { return v_; }

    static double wrap_angle(double a) {
        const double two_pi = 2.0 * std::numbers::pi;
        a = std::fmod(a, two_pi);
        if (a < 0.0) a += two_pi;
        return a;
    }

  private:
    double angle_;
    Complex v_;
};

/// A point of the open bidisk.
struct BidiskPoint {
    DiskPoint z1;
    DiskPoint z2;

    BidiskPoint() = default;
    BidiskPoint(DiskPoint a, DiskPoint b) : z1(a), z2(b) {}
    BidiskPoint(Complex a, Complex b) : z1(a), z2(b) {}

    friend bool operator==(const BidiskPoint& a, const BidiskPoint& b) {
        return a.z1 == b.z1 && a.z2 == b.z2;
    }
};

/// m_a(lambda) = (a - lambda) / (1 - conj(a) lambda), the disk involution
/// swapping a and 0.
inline Complex mobius(Complex a, Complex lambda) {
    return (a - lambda) / (1.0 - std::conj(a) * lambda);
}

inline DiskPoint mobius(DiskPoint a, DiskPoint lambda) {
    return DiskPoint(mobius(a.value(), lambda.value()));
}

/// Pseudo-hyperbolic distance d(a, b) = |m_a(b)|.
inline double pseudo_hyperbolic(DiskPoint a, DiskPoint b) {
    return std::abs(mobius(a.value(), b.value()));
}

/// The degree-two Blaschke factor omega * lambda * m_alpha(lambda); vanishes
/// at 0 and at alpha.
inline Complex blaschke2(Complex alpha, Complex omega, Complex lambda) {
    return omega * lambda * mobius(alpha, lambda);
}

inline DiskPoint blaschke2(DiskPoint alpha, UnimodularConstant omega, DiskPoint lambda) {
    return DiskPoint(blaschke2(alpha.value(), omega.value(), lambda.value()));
}

/// Coordinate-wise Moebius involution T(w1, w2) = (m_{z1}(w1), m_{z2}(w2))
/// centred at `base`.
inline BidiskPoint apply_T(const BidiskPoint& base, const BidiskPoint& w) {
    return BidiskPoint(mobius(base.z1, w.z1), mobius(base.z2, w.z2));
}

// --- automorphism transcripts ------------------------------------------------

struct MobiusMove {
    int slot;  // 1 or 2
    Complex a;
};
struct RotationMove {
    int slot;
    Complex phase;  // unimodular
};
struct SwapMove {};

using TranscriptMove = std::variant<MobiusMove, RotationMove, SwapMove>;

/// An ordered list of primitive bidisk automorphisms (coordinate Moebius
/// maps, coordinate rotations, coordinate swap).  Replaying the transcript
/// that normalize_configuration returns maps the two poles to (p,0), (0,q)
/// with p, q real and nonnegative.
class AutomorphismTranscript {
  public:
    void push(TranscriptMove m) { moves_.push_back(m); }
    bool empty() const { return moves_.empty(); }
    std::size_t size() const { return moves_.size(); }
    const std::vector<TranscriptMove>& moves() const { return moves_; }

    std::pair<Complex, Complex> apply(Complex w1, Complex w2) const {
        for (const auto& m : moves_) {
            if (std::holds_alternative<MobiusMove>(m)) {
                const auto& mm = std::get<MobiusMove>(m);
                if (mm.slot == 1)
                    w1 = mobius(mm.a, w1);
                else
                    w2 = mobius(mm.a, w2);
            } else if (std::holds_alternative<RotationMove>(m)) {
                const auto& rm = std::get<RotationMove>(m);
                if (rm.slot == 1)
                    w1 *= rm.phase;
                else
                    w2 *= rm.phase;
            } else {
                std::swap(w1, w2);
            }
        }
        return {w1, w2};
    }

    BidiskPoint apply(const BidiskPoint& w) const {
        auto [w1, w2] = apply(w.z1.value(), w.z2.value());
        return BidiskPoint(w1, w2);
    }

  private:
    std::vector<TranscriptMove> moves_;
};

struct NormalizedProblem {
    double p = 0.0;
    double q = 0.0;
    BidiskPoint eval;
    AutomorphismTranscript transcript;
};

/// Reduce an arbitrary two-pole configuration to the canonical one with the
/// poles at (p,0) and (0,q), p,q >= 0 real.  The residual rotation freedom is
/// fixed by rotating each coordinate so the mapped pole lands on the
/// nonnegative real axis, which makes the canonical form unique.
inline NormalizedProblem normalize_configuration(const BidiskPoint& pole_a,
                                                 const BidiskPoint& pole_b,
                                                 const BidiskPoint& eval) {
    const Complex p1 = pole_a.z1.value(), p2 = pole_a.z2.value();
    const Complex q1 = pole_b.z1.value(), q2 = pole_b.z2.value();
    if (std::abs(p1 - q1) < 1e-15 && std::abs(p2 - q2) < 1e-15)
        throw DegenerateConfiguration("normalize_configuration: coincident poles");

    NormalizedProblem out;

    // Already canonical: poles (p,0), (0,q) with p,q real nonnegative.
    if (std::abs(p2) == 0.0 && std::abs(q1) == 0.0 && p1.imag() == 0.0 && q2.imag() == 0.0 &&
        p1.real() >= 0.0 && q2.real() >= 0.0) {
        out.p = p1.real();
        out.q = q2.real();
        out.eval = eval;
        return out;
    }

    // (w1, w2) -> (m_{q1}(w1), m_{p2}(w2)) sends pole_a to (m_{q1}(p1), 0)
    // and pole_b to (0, m_{p2}(q2)); rotations then make both real >= 0.
    out.transcript.push(MobiusMove{1, q1});
    out.transcript.push(MobiusMove{2, p2});
    const Complex mp = mobius(q1, p1);
    const Complex mq = mobius(p2, q2);
    const Complex rot1 = std::abs(mp) > 0.0 ? std::conj(mp) / std::abs(mp) : Complex(1.0);
    const Complex rot2 = std::abs(mq) > 0.0 ? std::conj(mq) / std::abs(mq) : Complex(1.0);
    out.transcript.push(RotationMove{1, rot1});
    out.transcript.push(RotationMove{2, rot2});

    out.p = std::abs(mp);
    out.q = std::abs(mq);
    out.eval = out.transcript.apply(eval);
    return out;
}

}  // namespace bigreen
