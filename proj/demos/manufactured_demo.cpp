// Solves a manufactured two-circle problem at several grid sizes and prints
// the error against the known solution.

#include "gcp/oracle.hpp"
#include "gcp/solver.hpp"

#include <cstdio>

int main() {
    const gcp::CircleDomain domain =
        gcp::validate_domain({{gcp::Complex(-1.25, 0.0), 1.0}, {gcp::Complex(1.25, 0.0), 1.0}});
    const gcp::Coefficient coeff{1, {0.4, -0.9}};

    std::printf("%6s %14s %14s %14s\n", "n", "psi error", "constants err", "bandlimit res");
    for (std::size_t n : {16, 32, 64, 128, 256}) {
        const gcp::ManufacturedProblem mp = gcp::manufacture(domain, coeff, 2024, 2, n);
        const gcp::Solution s = gcp::solve_gcp(mp.spec);
        const gcp::VerifyReport r = gcp::verify(mp, s);
        std::printf("%6zu %14.3e %14.3e %14.3e\n", n, r.boundary_error, r.constants_error,
                    gcp::residual_bandlimit(s.h, coeff.ell));
    }
    return 0;
}
