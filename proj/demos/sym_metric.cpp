// Compares the symmetrized-bidisk Green function against the Agler-Young
// supremum on a small batch of random point pairs.

#include <cstdio>
#include <random>

#include "bigreen/sym.hpp"

using namespace bigreen;

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 12;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-0.75, 0.75);

    std::printf("%28s %28s %14s %14s %10s\n", "eval (s,p)", "pole (s,p)", "g_G", "Agler-Young",
                "|diff|");
    int done = 0;
    while (done < n) {
        const SymPoint ev = symmetrize(BidiskPoint(Complex(U(rng), U(rng)), Complex(U(rng), U(rng))));
        const SymPoint po = symmetrize(BidiskPoint(Complex(U(rng), U(rng)), Complex(U(rng), U(rng))));
        try {
            const auto g = green_sym(ev, po);
            const double oracle = agler_young_sup(ev, po);
            std::printf("(%6.3f%+.3fi,%6.3f%+.3fi) (%6.3f%+.3fi,%6.3f%+.3fi) %14.9f %14.9f %10.2e\n",
                        ev.s.real(), ev.s.imag(), ev.pr.real(), ev.pr.imag(), po.s.real(),
                        po.s.imag(), po.pr.real(), po.pr.imag(), g.value, oracle,
                        std::abs(std::exp(g.value) - std::exp(oracle)));
            ++done;
        } catch (const Error&) {
            continue;
        }
    }
    return 0;
}
