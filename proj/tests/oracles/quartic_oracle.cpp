// Prints the low eigenvalues of p^2/2 + q^4/4 from a 200-state
// harmonic-oscillator basis diagonalization.
//   usage: quartic_oracle [n_max]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "oracles/quartic_diag.hpp"

int main(int argc, char** argv) {
    const int n_max = argc > 1 ? std::atoi(argv[1]) : 10;

    // basis sanity: the harmonic oscillator must come out as n + 1/2
    const auto ho = oracle::harmonic_levels_in_basis(200);
    for (int n = 0; n <= n_max; ++n)
        if (std::abs(ho[n] - (n + 0.5)) > 1e-10) {
            std::fprintf(stderr, "basis check failed at n=%d: %.17g\n", n, ho[n]);
            return 1;
        }

    const auto coarse = oracle::quartic_levels(150);
    const auto levels = oracle::quartic_levels(200);
    for (int n = 0; n <= n_max; ++n) {
        // converged in basis size
        if (std::abs(levels[n] - coarse[n]) > 1e-9 * levels[n]) {
            std::fprintf(stderr, "level %d not converged: %.17g vs %.17g\n", n, levels[n], coarse[n]);
            return 1;
        }
        std::printf("%d %.17g\n", n, levels[n]);
    }
    return 0;
}
