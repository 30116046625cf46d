// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Every tolerance is pinned in code.

#include <chrono>
#include <cstdio>
#include <random>

#include "bigreen/green.hpp"
#include "bigreen/oracles.hpp"
#include "bigreen/sym.hpp"

using namespace bigreen;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    const char* title;
    Clock::time_point start = Clock::now();

    Criterion(int id_, const char* title_) : id(id_), title(title_) {}

    void finish(bool ok, const std::string& detail, double budget_s = 0.0) {
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (budget_s > 0.0 && secs > budget_s) ok = false;
        std::printf("[%s] criterion %2d: %s (%s; %.2f s%s)\n", ok ? "PASS" : "FAIL", id, title,
                    detail.c_str(), secs,
                    budget_s > 0.0 ? (", budget " + std::to_string(int(budget_s)) + " s").c_str()
                                   : "");
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

struct Rng {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> unit{0.0, 1.0};
    explicit Rng(std::uint64_t seed) : rng(seed) {}
    double real(double lo, double hi) { return lo + (hi - lo) * unit(rng); }
    Complex disk(double radius) {
        return std::polar(radius * std::sqrt(unit(rng)), real(0.0, 2.0 * std::numbers::pi));
    }
};

std::string worst(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst %.3e", v);
    return buf;
}

}  // namespace

// 1. Origin value vs log(pq/(p+q-pq)) on 100 random pole pairs.
static void criterion1() {
    Criterion c(1, "origin value matches log(pq/(p+q-pq)) to 1e-9");
    Rng rng(1001);
    double dev = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double p = rng.real(0.05, 0.95), q = rng.real(0.05, 0.95);
        const auto r = green(BidiskPoint(Complex(p), Complex(0.0)),
                             BidiskPoint(Complex(0.0), Complex(q)),
                             BidiskPoint(Complex(0.0), Complex(0.0)));
        dev = std::max(dev, std::abs(r.value - std::log(p * q / (p + q - p * q))));
    }
    c.finish(dev < 1e-9, worst(dev), 5.0);
}

// 2. Solver path vs real-axis closed form on 1000 samples.
static void criterion2() {
    Criterion c(2, "green_axis matches green_axis_real to 1e-9 on 1000 samples");
    Rng rng(1002);
    double dev = 0.0;
    int done = 0;
    while (done < 1000) {
        const double p = rng.real(0.1, 0.9), q = rng.real(0.1, 0.9);
        const double z = rng.real(-0.85, 0.85);
        if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
        const auto solver = green_axis(DiskPoint(z), p, q);
        dev = std::max(dev, std::abs(solver.value - green_axis_real(z, p, q).value));
        ++done;
    }
    c.finish(dev < 1e-9, worst(dev), 30.0);
}

// 3. +-i slices: theta recovery to 1e-8 and display values to 1e-9.
static void criterion3() {
    Criterion c(3, "+-i slices recover theta = +-pi/2 and the display values");
    Rng rng(1003);
    double dev_th = 0.0, dev_v = 0.0;
    int done_plus = 0, done_minus = 0;
    while (done_plus < 200 || done_minus < 200) {
        const double p = rng.real(0.15, 0.6);
        const double q = rng.real(0.2, 0.8);
        const double s = std::sqrt(-p * p + q * q + 1.0);
        const bool plus = done_plus < 200;
        const double y = plus ? rng.real(0.05, 0.9) : -rng.real(0.05, 0.9);
        const Complex z = plus ? Complex((y - 1.0) * p / s, y) : Complex(-(y + 1.0) * p / s, y);
        if (std::abs(z) >= 1.0 - 1e-12) continue;
        if (!(p + 1e-6 < std::abs(z) && std::abs(z) < std::min(p / q, 1.0) - 1e-6)) continue;
        try {
            const auto g = green_axis(DiskPoint(z), p, q);
            const auto gi = green_axis_pm_i(DiskPoint(z), p, q);
            const double target = plus ? std::numbers::pi / 2 : 3.0 * std::numbers::pi / 2;
            dev_th = std::max(dev_th, std::abs(g.theta_branch->theta.angle() - target));
            dev_v = std::max(dev_v, std::abs(g.value - gi.value));
            (plus ? done_plus : done_minus) += 1;
        } catch (const Error&) {
            continue;
        }
    }
    c.finish(dev_th < 1e-8 && dev_v < 1e-9,
             worst(dev_th) + " theta, " + worst(dev_v) + " value");
}

// 4. Certificates and oracle sandwich on 500 axis + 200 general points.
static void criterion4() {
    Criterion c(4, "certificate gaps < 1e-8 and oracle sandwich within 1e-6");
    Rng rng(1004);
    double worst_gap = 0.0, worst_sandwich = 0.0;
    int axis_done = 0, gen_done = 0, failures = 0;
    while (axis_done < 500 || gen_done < 200) {
        const double p = rng.real(0.1, 0.9), q = rng.real(0.1, 0.9);
        const bool axis = axis_done < 500;
        const Complex z1 = axis ? Complex(0.0) : rng.disk(0.85);
        const Complex z2 = rng.disk(0.85);
        try {
            if (!classify(DiskPoint(z1), DiskPoint(z2), p, q).is(Region::Region2)) continue;
            const GreenResult g = axis ? green_axis(DiskPoint(z2), p, q)
                                       : green_region2_general(DiskPoint(z1), DiskPoint(z2), p, q);
            if (!g.certificate) {
                ++failures;
                continue;
            }
            worst_gap = std::max(worst_gap, g.certificate->gap);
            const auto up = lempert_upper(DiskPoint(z1), DiskPoint(z2), p, q);
            const auto lo = caratheodory_lower(DiskPoint(z1), DiskPoint(z2), p, q);
            worst_sandwich = std::max({worst_sandwich, g.value - lo.best_value,
                                       up.best_value - g.value, lo.best_value - g.value,
                                       g.value - up.best_value});
            (axis ? axis_done : gen_done) += 1;
        } catch (const Error&) {
            ++failures;
            if (failures > 20) break;
        }
    }
    const bool ok = axis_done == 500 && gen_done == 200 && worst_gap < 1e-8 &&
                    worst_sandwich < 1e-6;
    c.finish(ok,
             worst(worst_gap) + " gap, " + worst(worst_sandwich) + " sandwich, " +
                 std::to_string(failures) + " failures",
             600.0);
}

// 5. Theorem-1 engine vs axis formula on 300 samples.
static void criterion5() {
    Criterion c(5, "general Region-2 engine matches green_axis to 1e-9 on 300 samples");
    Rng rng(1005);
    double dev = 0.0;
    int done = 0;
    while (done < 300) {
        const double p = rng.real(0.1, 0.9), q = rng.real(0.1, 0.9);
        const Complex z = rng.disk(0.85);
        try {
            if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
            if (!classify(DiskPoint(0.0, 0.0), DiskPoint(z), p, q).is(Region::Region2))
                continue;
            const auto ax = green_axis(DiskPoint(z), p, q);
            const auto gen = green_region2_general(DiskPoint(0.0, 0.0), DiskPoint(z), p, q);
            dev = std::max(dev, std::abs(ax.value - gen.value));
            ++done;
        } catch (const Error&) {
            continue;
        }
    }
    c.finish(dev < 1e-9, worst(dev));
}

// 6. Corollary-2 closed forms vs the general engine on a 100x100 real grid.
static void criterion6() {
    Criterion c(6, "S(+-1) closed forms match the engine to 1e-9 on the real grid");
    double dev = 0.0;
    int members = 0, failures = 0;
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j) {
            const double p = 0.6, q = 0.5;
            const Complex z1(-0.88 + 1.76 * i / 99.0, 0.0);
            const Complex z2(-0.88 + 1.76 * j / 99.0, 0.0);
            try {
                if (!classify(DiskPoint(z1), DiskPoint(z2), p, q).is(Region::Region2)) continue;
                const auto s1 = green_S1(DiskPoint(z1), DiskPoint(z2), p, q);
                const auto sm = green_S_minus1(DiskPoint(z1), DiskPoint(z2), p, q);
                if (!s1 && !sm) continue;
                const double closed = s1 ? s1->value : sm->value;
                if (closed == kNegInf) continue;
                const auto gen = green_region2_general(DiskPoint(z1), DiskPoint(z2), p, q);
                dev = std::max(dev, std::abs(closed - gen.value));
                ++members;
            } catch (const Error&) {
                ++failures;
            }
        }
    c.finish(dev < 1e-9 && members > 1000 && failures == 0,
             worst(dev) + ", " + std::to_string(members) + " members, " +
                 std::to_string(failures) + " failures");
}

// 7. Symmetrized bidisk vs the Agler-Young oracle.
static void criterion7() {
    Criterion c(7, "green_sym matches the Agler-Young supremum");
    Rng rng(1007);
    double dev = 0.0, dev_closed = 0.0;
    int done = 0, failures = 0;
    while (done < 500) {
        const SymPoint ev = symmetrize(BidiskPoint(rng.disk(0.8), rng.disk(0.8)));
        const SymPoint po = symmetrize(BidiskPoint(rng.disk(0.8), rng.disk(0.8)));
        try {
            const auto g = green_sym(ev, po);
            const double oracle = agler_young_sup(ev, po, 100000);
            dev = std::max(dev, std::abs(std::exp(g.value) - std::exp(oracle)));
            ++done;
        } catch (const Error&) {
            ++failures;
            if (failures > 10) break;
        }
    }
    // analytic two-point display
    for (int i = 0; i < 50; ++i) {
        const SymPoint sp = symmetrize(BidiskPoint(rng.disk(0.8), rng.disk(0.8)));
        const double oracle = agler_young_sup(SymPoint{Complex(0.0), Complex(0.0)}, sp, 100000);
        const double closed = std::log((2.0 * std::abs(sp.s - sp.pr * std::conj(sp.s)) +
                                        std::abs(sp.s * sp.s - 4.0 * sp.pr)) /
                                       (4.0 - std::norm(sp.s)));
        dev_closed = std::max(dev_closed, std::abs(std::exp(oracle) - std::exp(closed)));
    }
    c.finish(done == 500 && dev < 1e-6 && dev_closed < 1e-8,
             worst(dev) + " oracle, " + worst(dev_closed) + " two-point", 300.0);
}

// 8. Region-3 specials.
static void criterion8() {
    Criterion c(8, "Region-3 special values and continuity agreement");
    double dev_closed = 0.0, dev_cont = 0.0;
    Rng rng(1008);
    for (int i = 0; i < 40; ++i) {
        const double p = rng.real(0.15, 0.8);
        double q = rng.real(0.15, 0.8);
        if (std::abs(p - q) < 0.05) q = std::min(0.85, q + 0.1);
        // 6.1 shared-coordinate formula (exact path)
        const Complex p2 = rng.disk(0.8), q2 = rng.disk(0.8);
        const auto r61 = green(BidiskPoint(Complex(p), p2), BidiskPoint(Complex(p), q2),
                               BidiskPoint(Complex(0.0), Complex(0.0)));
        dev_closed = std::max(
            dev_closed, std::abs(r61.value - std::log(std::max(p, std::abs(p2 * q2)))));
        // 6.2 values via the axis closed form on the boundary
        dev_closed = std::max(
            dev_closed, std::abs(green_axis_real(p, p, q).value -
                                 std::log(std::abs(p * (p - q) / (2 * p * q - p - q)))));
        dev_closed = std::max(dev_closed,
                              std::abs(green_axis_real(-p, p, q).value - std::log(p)));
        // continuity evaluator agreement
        const auto ra = green(BidiskPoint(Complex(p), Complex(0.0)),
                              BidiskPoint(Complex(0.0), Complex(q)),
                              BidiskPoint(Complex(0.0), Complex(p)));
        dev_cont = std::max(ra.region.is(Region::Region3)
                                ? std::abs(ra.value - std::log(std::abs(p * (p - q) /
                                                                        (2 * p * q - p - q))))
                                : 1.0,
                            dev_cont);
        const auto rb = green(BidiskPoint(Complex(p), Complex(0.0)),
                              BidiskPoint(Complex(0.0), Complex(q)),
                              BidiskPoint(Complex(0.0), Complex(-p)));
        dev_cont = std::max(dev_cont, std::abs(rb.value - std::log(p)));
    }
    c.finish(dev_closed < 1e-9 && dev_cont < 1e-5,
             worst(dev_closed) + " closed, " + worst(dev_cont) + " continuity");
}

// 9. Structural root properties.
static void criterion9() {
    Criterion c(9, "theta-root structure and Proposition 4 on 500 samples");
    Rng rng(1009);
    double dev_closure = 0.0;
    int done = 0;
    bool prop4_ok = true;
    const double two_pi = 2.0 * std::numbers::pi;
    while (done < 500) {
        const double p = rng.real(0.1, 0.9), q = rng.real(0.1, 0.9);
        const bool want_real = done % 2 == 0;
        const Complex z = want_real ? Complex(rng.real(-0.85, 0.85), 0.0) : rng.disk(0.85);
        if (!want_real && std::abs(z.imag()) < 0.02) continue;
        if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
        try {
            // closure of roots(z) U roots(conj z) under theta -> -theta
            std::vector<double> all;
            for (const auto& b : solve_theta(DiskPoint(z), p, q)) all.push_back(b.theta.angle());
            for (const auto& b : solve_theta(DiskPoint(std::conj(z)), p, q))
                all.push_back(b.theta.angle());
            for (double th : all) {
                double best = 1e9;
                for (double other : all)
                    best = std::min(best, std::abs(std::remainder(th + other, two_pi)));
                dev_closure = std::max(dev_closure, best);
            }
            // Proposition 4: z real <=> valid branch theta in {0, pi}
            const auto br =
                select_valid_branch(solve_theta(DiskPoint(z), p, q), DiskPoint(z), p, q);
            const bool theta_real =
                std::abs(std::remainder(br.theta.angle(), std::numbers::pi)) < 1e-8;
            if (theta_real != want_real) prop4_ok = false;
            ++done;
        } catch (const Error&) {
            continue;
        }
    }
    c.finish(dev_closure < 1e-10 && prop4_ok, worst(dev_closure) + " closure");
}

// 10. Automorphism invariance on 300 samples.
static void criterion10() {
    Criterion c(10, "automorphism invariance to 1e-9 on 300 samples");
    Rng rng(1010);
    double dev = 0.0;
    int done = 0;
    while (done < 300) {
        const BidiskPoint pa(rng.disk(0.8), rng.disk(0.8));
        const BidiskPoint pb(rng.disk(0.8), rng.disk(0.8));
        const BidiskPoint ev(rng.disk(0.8), rng.disk(0.8));
        AutomorphismTranscript tr;
        tr.push(MobiusMove{1, rng.disk(0.6)});
        tr.push(MobiusMove{2, rng.disk(0.6)});
        tr.push(RotationMove{1, std::polar(1.0, rng.real(0.0, 2.0 * std::numbers::pi))});
        tr.push(RotationMove{2, std::polar(1.0, rng.real(0.0, 2.0 * std::numbers::pi))});
        if (rng.unit(rng.rng) > 0.5) tr.push(SwapMove{});
        try {
            const auto r0 = green(pa, pb, ev);
            if (r0.is_pole()) continue;
            const auto r1 = green(tr.apply(pa), tr.apply(pb), tr.apply(ev));
            dev = std::max(dev, std::abs(r0.value - r1.value));
            ++done;
        } catch (const Error&) {
            continue;
        }
    }
    c.finish(dev < 1e-9, worst(dev));
}

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
