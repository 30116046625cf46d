// Prints the Green function along the real axis segment of Region 2 for one
// pole configuration, with the theta branch and certificate gap per point.

#include <cstdio>

#include "bigreen/green.hpp"

using namespace bigreen;

int main(int argc, char** argv) {
    const double p = argc > 1 ? std::atof(argv[1]) : 0.6;
    const double q = argc > 2 ? std::atof(argv[2]) : 0.5;
    const int n = argc > 3 ? std::atoi(argv[3]) : 41;

    std::printf("# poles (p,0)=(%.3f,0), (0,q)=(0,%.3f)\n", p, q);
    std::printf("%10s %14s %10s %12s\n", "z", "g", "theta", "cert_gap");
    for (int i = 0; i < n; ++i) {
        const double z = -0.95 + 1.9 * i / (n - 1);
        try {
            if (!classify_axis(DiskPoint(z), p, q).is(Region::Region2)) continue;
            const auto r = green_axis(DiskPoint(z), p, q);
            std::printf("%10.4f %14.9f %10.6f %12.3e\n", z, r.value,
                        r.theta_branch->theta.angle(), r.certificate->gap);
        } catch (const Error&) {
            continue;
        }
    }
    return 0;
}
