// Omega_eps(z, tau, 2 eps / beta) approaches theta0(z, tau)^beta linearly in eps.

#include <egamma/phase.hpp>

#include <cstdio>

using namespace egamma;

int main()
{
    const cplx tau{0.0, 1.0}, z{0.3, 0.4};
    std::printf("z = 0.3+0.4i, tau = i\n");
    std::printf("%5s %10s %22s %12s\n", "beta", "eps", "|Omega - theta0^beta|", "ratio");
    for (int beta : {-2, -1, 1, 2, 3}) {
        real previous = 0.0;
        for (real eps : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
            const real d = std::abs(semiclassical_check({beta, eps, tau}, z).deviation);
            if (previous > 0.0)
                std::printf("%5d %10.2e %22.6e %12.4f\n", beta, eps, d, previous / d);
            else
                std::printf("%5d %10.2e %22.6e %12s\n", beta, eps, d, "");
            previous = d;
        }
    }
    std::printf("ratios near 2 indicate first-order convergence\n");
    return 0;
}
