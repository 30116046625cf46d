#include <catch_amalgamated.hpp>

#include "bigreen/region.hpp"
#include "testutil.hpp"

using namespace bigreen;
using Catch::Approx;

namespace {

// Independent eigenvalue oracle for the tests: bisection on the
// characteristic polynomial det(M - x I), evaluated by cofactor expansion.
double min_eig_oracle(const std::array<std::array<Complex, 3>, 3>& m) {
    auto charpoly = [&](double x) {
        std::array<std::array<Complex, 3>, 3> a = m;
        for (int i = 0; i < 3; ++i) a[i][i] -= x;
        const Complex det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                            a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                            a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        return det.real();
    };
    // Gershgorin bounds
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 3; ++i) {
        double r = 0.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) r += std::abs(m[i][j]);
        lo = std::min(lo, m[i][i].real() - r);
        hi = std::max(hi, m[i][i].real() + r);
    }
    // the smallest root: char poly of a 3x3 Hermitian is -x^3 + ... so
    // charpoly(lo - 1) > 0 and it crosses at the smallest eigenvalue
    double a = lo - 1.0, b = hi + 1.0;
    for (int it = 0; it < 200; ++it) {
        // find the first sign change scanning up
        const int n = 4096;
        double prev = charpoly(a);
        for (int k = 1; k <= n; ++k) {
            const double x = a + (b - a) * k / n;
            const double fx = charpoly(x);
            if ((prev > 0.0) != (fx > 0.0)) {
                double xl = a + (b - a) * (k - 1) / n, xr = x;
                for (int j = 0; j < 100; ++j) {
                    const double mid = 0.5 * (xl + xr);
                    if ((charpoly(xl) > 0.0) != (charpoly(mid) > 0.0))
                        xr = mid;
                    else
                        xl = mid;
                }
                return 0.5 * (xl + xr);
            }
            prev = fx;
        }
        break;
    }
    return m[0][0].real();  // fully degenerate: diagonal
}

}  // namespace

TEST_CASE("pick matrix: identity interpolation is PSD", "[region]") {
    const auto r = pick_matrix_psd(PickData{{Complex(0.0), Complex(0.5), Complex(-0.5)},
                                            {Complex(0.0), Complex(0.5), Complex(-0.5)}});
    CHECK(r.psd);
    CHECK(r.min_eigenvalue >= -1e-12);
}

TEST_CASE("pick matrix: steep data violates Schwarz-Pick", "[region]") {
    const auto r = pick_matrix_psd(PickData{{Complex(0.0), Complex(0.1), Complex(0.2)},
                                            {Complex(0.0), Complex(0.9), Complex(-0.9)}});
    CHECK_FALSE(r.psd);
    CHECK(r.min_eigenvalue == Approx(min_eig_oracle(r.matrix)).margin(1e-9));
}

TEST_CASE("pick matrix eigenvalues match the bisection oracle", "[region]") {
    testutil::Sampler s(5);
    for (int i = 0; i < 200; ++i) {
        const PickData data{{s.disk(0.9), s.disk(0.9), s.disk(0.9)},
                            {s.disk(0.9), s.disk(0.9), s.disk(0.9)}};
        if (std::abs(data.nodes[0] - data.nodes[1]) < 1e-6 ||
            std::abs(data.nodes[0] - data.nodes[2]) < 1e-6 ||
            std::abs(data.nodes[1] - data.nodes[2]) < 1e-6)
            continue;
        const auto r = pick_matrix_psd(data);
        CHECK(r.min_eigenvalue == Approx(min_eig_oracle(r.matrix)).margin(1e-8));
    }
}

TEST_CASE("pick matrix rejects duplicate nodes", "[region]") {
    CHECK_THROWS_AS(pick_matrix_psd(PickData{{Complex(0.1), Complex(0.1), Complex(0.2)},
                                             {Complex(0.0), Complex(0.0), Complex(0.0)}}),
                    DuplicateNodes);
}

TEST_CASE("pick PSD agrees with classify on the spec data", "[region]") {
    const auto r = pick_matrix_psd(PickData{{Complex(0.0), Complex(0.6), Complex(0.5)},
                                            {Complex(0.1), Complex(0.0), Complex(0.05)}});
    const auto label = classify(DiskPoint(0.5), DiskPoint(0.05), 0.6, 0.1);
    CHECK(r.psd == label.is(Region::Region1));
}

TEST_CASE("classify: evaluation at a pole is Region 3", "[region]") {
    const auto label = classify(DiskPoint(0.6), DiskPoint(0.0), 0.6, 0.5);
    CHECK(label.is(Region::Region3));
}

TEST_CASE("classify: p=q puts z2=m_p(z1) in Region 3", "[region]") {
    const double p = 0.5;
    const Complex z1(0.3);
    const auto label = classify(DiskPoint(z1), DiskPoint(mobius(Complex(p), z1)), p, p);
    CHECK(label.is(Region::Region3));
}

TEST_CASE("classify: interior axis point is Region 2", "[region]") {
    const auto label = classify(DiskPoint(0.0, 0.0), DiskPoint(0.2), 0.6, 0.5);
    CHECK(label.is(Region::Region2));
}

TEST_CASE("classify_axis examples", "[region]") {
    CHECK(classify_axis(DiskPoint(0.8), 0.3, 0.6).is(Region::Region1));
    CHECK(classify_axis(DiskPoint(0.2), 0.6, 0.5).is(Region::Region2));
    CHECK(classify_axis(DiskPoint(0.5), 0.3, 0.6).is(Region::Region3));  // |z| = p/q
}

TEST_CASE("classify agrees with classify_axis on axis points", "[region]") {
    testutil::Sampler s(23);
    for (int i = 0; i < 1000; ++i) {
        const double p = s.pole(), q = s.pole();
        const Complex z = s.disk(0.9);
        const auto a = classify_axis(DiskPoint(z), p, q);
        const auto b = classify(DiskPoint(0.0, 0.0), DiskPoint(z), p, q);
        CHECK(a.region == b.region);
    }
}

TEST_CASE("classify swap symmetry", "[region]") {
    testutil::Sampler s(29);
    int r1_seen = 0;
    for (int i = 0; i < 500; ++i) {
        const double p = s.pole(), q = s.pole();
        const DiskPoint z1(s.disk(0.9)), z2(s.disk(0.9));
        const auto a = classify(z1, z2, p, q);
        const auto b = classify(z2, z1, q, p);
        CHECK(a.region == b.region);
        if (a.is(Region::Region1) && a.direction == Region1Direction::FirstToSecond) {
            ++r1_seen;
            CHECK(b.direction == Region1Direction::SecondToFirst);
        }
    }
    CHECK(r1_seen > 10);
}

TEST_CASE("Region 3 has empty interior", "[region]") {
    testutil::Sampler s(31);
    int left = 0, total = 0;
    while (total < 300) {
        const double p = s.pole(), q = s.pole();
        const Complex z1 = s.disk(0.8);
        // put |z2| on the Region-3 surface |m_{z1}(p)| = |z2|
        const double m1 = std::abs(mobius(z1, Complex(p)));
        if (m1 >= 0.95 || m1 < 0.05) continue;
        const Complex z2 = std::polar(m1, s.real(0.0, 2.0 * std::numbers::pi));
        if (!classify(DiskPoint(z1), DiskPoint(z2), p, q).is(Region::Region3)) continue;
        ++total;
        const Complex dz(1e-3 * s.real(-1.0, 1.0), 1e-3 * s.real(-1.0, 1.0));
        try {
            if (!classify(DiskPoint(z1), DiskPoint(z2 + dz), p, q).is(Region::Region3)) ++left;
        } catch (const OutOfDomain&) {
            ++left;
        }
    }
    CHECK(double(left) / total > 0.99);
}

TEST_CASE("rotational configuration", "[region]") {
    // z2 = w m_{z1}(p), m_{z2}(q) = w z1 with w = -1 and real data
    const double p = 0.5;
    const Complex z1(0.3);
    const Complex z2 = -mobius(z1, Complex(p));
    const Complex qc = mobius(z2, -z1);  // solves m_{z2}(q) = -z1
    REQUIRE(std::abs(qc.imag()) < 1e-14);
    const double q = qc.real();
    REQUIRE(q > 0.0);
    REQUIRE(q < 1.0);
    // both Region-3 moduli equalities hold, so the label is Region 3, and
    // the detector recognises the configuration
    CHECK(classify(DiskPoint(z1), DiskPoint(z2), p, q).is(Region::Region3));
    CHECK(rotational_case(DiskPoint(z1), DiskPoint(z2), p, q));
    // the rotational case forces |z1 m_{z1}(p)| = |z2 m_{z2}(q)|
    CHECK(std::abs(std::abs(z1 * mobius(z1, Complex(p))) -
                   std::abs(z2 * mobius(z2, Complex(q)))) < 1e-12);
    // a generic Region-3 point is not rotational
    CHECK_FALSE(rotational_case(DiskPoint(z1), DiskPoint(z2 * std::polar(1.0, 0.5)), p, q));
}
