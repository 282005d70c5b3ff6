#include <cstdio>
#include <cstdlib>

#include "chiralis/suites.hpp"

using namespace chiralis;

// cohomology table of the chiral Koszul complex of Q[x, xi], D(xi) = x^m
int main(int argc, char** argv) {
    int m = argc > 1 ? std::atoi(argv[1]) : 2;
    int max_w = argc > 2 ? std::atoi(argv[2]) : 2;
    ChiralKoszul K(m);
    FsResult r = fs_suite(K, max_w, 2 * m);
    std::printf("m=%d  weight<=%d  charge<=%d  states=%ld  D^2=0:%s\n", m, max_w, 2 * m, r.states,
                r.d_squared_zero ? "yes" : "no");
    std::printf("%6s %6s %6s %8s %4s  reps\n", "weight", "charge", "degree", "cochains", "H");
    for (auto& c : r.report.cells) {
        if (c.dim == 0) continue;
        std::printf("%6d %6d %6d %8d %4d ", c.weight, c.charge, c.degree, c.cochain_dim, c.dim);
        for (auto& p : c.representatives) std::printf(" %s", K.fock().format(p).c_str());
        std::printf("\n");
    }
    for (int w = 0; w <= max_w; ++w) std::printf("total dim H at weight %d: %d\n", w, r.report.total_dim(w));
}
