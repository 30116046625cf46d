#include <catch_amalgamated.hpp>

#include "bigreen/theta.hpp"
#include "testutil.hpp"

using namespace bigreen;
using Catch::Approx;

namespace {
const double kPi = std::numbers::pi;

Complex slice_point_plus_i(double y, double p, double q) {
    const double s = std::sqrt(-p * p + q * q + 1.0);
    return Complex((y - 1.0) * p / s, y);
}
}  // namespace

TEST_CASE("fundamental polynomial vanishes at u = +-1 for real z", "[theta]") {
    testutil::Sampler s(41);
    for (int i = 0; i < 100; ++i) {
        const double p = s.pole(), q = s.pole();
        const Complex z(s.real(-0.9, 0.9), 0.0);
        CHECK(std::abs(fundamental_poly(Complex(1.0), z, p, q)) < 1e-14);
        CHECK(std::abs(fundamental_poly(Complex(-1.0), z, p, q)) < 1e-14);
    }
}

TEST_CASE("fundamental polynomial vanishes at u = i on the constructed slice", "[theta]") {
    const double p = 0.3, q = 0.5;
    const Complex z = slice_point_plus_i(0.4, p, q);
    CHECK(std::abs(z - Complex(-0.1671258, 0.4)) < 1e-6);  // sanity of the slice
    CHECK(std::abs(fundamental_poly(Complex(0.0, 1.0), z, p, q)) < 1e-10);
}

TEST_CASE("coefficient expansion matches the product form", "[theta]") {
    testutil::Sampler s(43);
    for (int i = 0; i < 300; ++i) {
        const Complex z = s.disk(0.9);
        const double p = s.pole(), q = s.pole();
        const Complex u(s.real(-1.5, 1.5), s.real(-1.5, 1.5));
        const auto c = fundamental_poly_coeffs(z, p, q);
        Complex acc = c[6];
        for (int k = 5; k >= 0; --k) acc = acc * u + c[k];
        CHECK(std::abs(acc - fundamental_poly(u, z, p, q)) < 1e-12);
    }
}

TEST_CASE("real form reductions at theta = 0 and pi", "[theta]") {
    testutil::Sampler s(47);
    for (int i = 0; i < 100; ++i) {
        const double p = s.pole(), q = s.pole();
        const double x = s.real(-0.9, 0.9), y = s.real(-0.9, 0.9);
        CHECK(real_form(0.0, x, y, p, q) == Approx(-(q - 1) * (q - 1) * y * y).margin(1e-14));
        CHECK(real_form(kPi, x, y, p, q) == Approx(-(q + 1) * (q + 1) * y * y).margin(1e-13));
    }
}

TEST_CASE("real form carries the fundamental polynomial on the circle", "[theta]") {
    // fundamental_poly(e^{it}) = 4 e^{3it} real_form(t)
    testutil::Sampler s(53);
    for (int i = 0; i < 200; ++i) {
        const double p = s.pole(), q = s.pole();
        const Complex z = s.disk(0.9);
        const double th = s.real(0.0, 2.0 * kPi);
        const Complex lhs = fundamental_poly(std::polar(1.0, th), z, p, q);
        const Complex rhs = 4.0 * std::polar(1.0, 3.0 * th) *
                            real_form(th, z.real(), z.imag(), p, q);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("solve_theta on real z always contains {0, pi}", "[theta]") {
    // 0 and pi are exact roots for every real z; extra crossings of the
    // second factor may appear, and the validity windows reject them.
    testutil::Sampler s(59);
    int checked = 0;
    while (checked < 100) {
        const double p = s.pole(), q = s.pole();
        const double z = s.real(-0.85, 0.85);
        if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
        const auto branches = solve_theta(DiskPoint(z), p, q);
        bool has0 = false, haspi = false;
        for (const auto& b : branches) {
            if (std::abs(b.theta.angle()) < 1e-10 ||
                std::abs(b.theta.angle() - 2.0 * kPi) < 1e-10)
                has0 = true;
            if (std::abs(b.theta.angle() - kPi) < 1e-10) haspi = true;
        }
        CHECK(has0);
        CHECK(haspi);
        REQUIRE(branches.size() >= 4);  // two roots, two sqrt signs each
        ++checked;
    }
}

TEST_CASE("solve_theta finds pi/2 on the +i slice", "[theta]") {
    const double p = 0.3, q = 0.5;
    const Complex z = slice_point_plus_i(0.4, p, q);
    const auto branches = solve_theta(DiskPoint(z), p, q);
    bool found = false;
    for (const auto& b : branches)
        if (std::abs(b.theta.angle() - kPi / 2) < 1e-9) found = true;
    CHECK(found);
    CHECK(branches.size() >= 2);
}

TEST_CASE("theta roots of z and conj(z) are negatives of each other", "[theta]") {
    testutil::Sampler s(61);
    int checked = 0;
    while (checked < 60) {
        const double p = s.pole(), q = s.pole();
        const Complex z = s.disk(0.85);
        if (std::abs(z.imag()) < 0.05) continue;
        if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
        std::vector<double> r1, r2;
        for (const auto& b : solve_theta(DiskPoint(z), p, q)) r1.push_back(b.theta.angle());
        for (const auto& b : solve_theta(DiskPoint(std::conj(z)), p, q))
            r2.push_back(b.theta.angle());
        REQUIRE(r1.size() == r2.size());
        for (double th : r1) {
            double bestdiff = 1e9;
            for (double th2 : r2)
                bestdiff = std::min(bestdiff,
                                    std::abs(std::remainder(th + th2, 2.0 * kPi)));
            CHECK(bestdiff < 1e-10);
        }
        ++checked;
    }
}

TEST_CASE("solve_theta requires Region 2", "[theta]") {
    CHECK_THROWS_AS(solve_theta(DiskPoint(0.8), 0.3, 0.6), NotRegion2);
}

TEST_CASE("Durand-Kerner unimodular roots match the grid roots", "[theta]") {
    testutil::Sampler s(67);
    int checked = 0;
    while (checked < 80) {
        const double p = s.pole(), q = s.pole();
        const Complex z = s.disk(0.85);
        if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
        std::vector<double> grid_roots;
        for (const auto& b : solve_theta(DiskPoint(z), p, q)) {
            bool dup = false;
            for (double r : grid_roots)
                if (std::abs(r - b.theta.angle()) < 1e-8) dup = true;
            if (!dup) grid_roots.push_back(b.theta.angle());
        }
        const auto dk_roots = unimodular_fundamental_roots(z, p, q);
        for (double th : dk_roots) {
            double best = 1e9;
            for (double g : grid_roots)
                best = std::min(best, std::abs(std::remainder(th - g, 2.0 * kPi)));
            CHECK(best < 1e-8);
        }
        ++checked;
    }
}

TEST_CASE("omega/v branch values match the +-i displays", "[theta]") {
    const double p = 0.3, q = 0.5;
    const double s = std::sqrt(-p * p + q * q + 1.0);
    const Complex i_unit(0.0, 1.0);

    const auto plus = omega_v_from_theta(UnimodularConstant::from_angle(kPi / 2), p, q, +1);
    const Complex omega_plus = (-p - i_unit * s) / (i_unit - q);
    CHECK(plus.valid);
    CHECK(std::abs(plus.omega.value() - omega_plus) < 1e-12);
    CHECK(std::abs(plus.omega.value() * plus.v_squared.value() - i_unit) < 1e-12);

    const auto minus = omega_v_from_theta(UnimodularConstant::from_angle(-kPi / 2), p, q, -1);
    const Complex omega_minus = (p - i_unit * s) / (i_unit + q);
    CHECK(minus.valid);
    CHECK(std::abs(minus.omega.value() - omega_minus) < 1e-12);

    // real-z branch: omega = -1 with v^2 = -1 at theta = 0
    const auto real0 = omega_v_from_theta(UnimodularConstant::from_angle(0.0), p, q, +1);
    CHECK(std::abs(real0.omega.value() + 1.0) < 1e-12);
    CHECK(std::abs(real0.v_squared.value() + 1.0) < 1e-12);
}

TEST_CASE("select_valid_branch picks theta = 0 for z = 0.2", "[theta]") {
    const DiskPoint z(0.2);
    const auto br = select_valid_branch(solve_theta(z, 0.6, 0.5), z, 0.6, 0.5);
    CHECK(br.theta.angle() == Approx(0.0).margin(1e-12));
    CHECK(std::abs(br.omega.value() + 1.0) < 1e-10);
    CHECK(std::abs(br.v_squared.value() + 1.0) < 1e-10);
}

TEST_CASE("select_valid_branch picks +-pi/2 on the +-i slices", "[theta]") {
    const double p = 0.3, q = 0.5;
    const DiskPoint zp(slice_point_plus_i(0.4, p, q));
    const auto bp = select_valid_branch(solve_theta(zp, p, q), zp, p, q);
    CHECK(bp.theta.angle() == Approx(kPi / 2).margin(1e-9));

    const double s = std::sqrt(-p * p + q * q + 1.0);
    const double y = -0.4;
    const DiskPoint zm(Complex(-(y + 1.0) * p / s, y));
    const auto bm = select_valid_branch(solve_theta(zm, p, q), zm, p, q);
    CHECK(bm.theta.angle() == Approx(3.0 * kPi / 2).margin(1e-9));
    CHECK(bm.sqrt_sign == -1);
}

TEST_CASE("z real iff the valid branch has theta in {0, pi}", "[theta]") {
    testutil::Sampler s(71);
    int real_checked = 0, complex_checked = 0;
    while (real_checked < 60 || complex_checked < 60) {
        const double p = s.pole(), q = s.pole();
        const bool want_real = real_checked < 60;
        const Complex z = want_real ? Complex(s.real(-0.85, 0.85), 0.0) : s.disk(0.85);
        if (!want_real && std::abs(z.imag()) < 0.02) continue;
        if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
        try {
            const auto br = select_valid_branch(solve_theta(DiskPoint(z), p, q), DiskPoint(z),
                                                p, q);
            const bool theta_real =
                std::abs(std::remainder(br.theta.angle(), kPi)) < 1e-8;
            CHECK(theta_real == want_real);
            CHECK(std::abs(br.omega.value() * br.v_squared.value() - br.theta.value()) < 1e-10);
            (want_real ? real_checked : complex_checked) += 1;
        } catch (const Error&) {
            continue;  // boundary-adjacent samples may fail the windows
        }
    }
}
