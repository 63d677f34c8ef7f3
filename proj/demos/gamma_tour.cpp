// A short tour of the elliptic gamma function: values, functional equations,
// the series form near a real period, and a rational-period factorization.

#include <egamma/identities.hpp>
#include <egamma/special.hpp>

#include <cstdio>

using namespace egamma;

namespace
{

void show(const char *label, cplx v)
{
    std::printf("  %-44s % .15f %+.15fi\n", label, v.real(), v.imag());
}

} // namespace

int main()
{
    const cplx tau{0.1, 0.7}, sigma{-0.2, 0.5}, z{0.3, 0.4};

    std::printf("Gamma(z, tau, sigma) at z = 0.3+0.4i, tau = 0.1+0.7i, sigma = -0.2+0.5i\n");
    const Evaluation g = gamma_ell_eval(z, tau, sigma);
    show("product", g.value);
    show("series", gamma_series(z, tau, sigma));
    show("Gamma((tau+sigma)/2)", gamma_ell((tau + sigma) / 2.0, tau, sigma));
    std::printf("  product terms %zu, tail bound %.2e\n\n", g.terms, g.tail_bound);

    std::printf("identity residuals at the same point\n");
    for (IdentityName name : all_identities) {
        const ResidualReport r = identity_residual(name, z, tau, sigma);
        if (r.skipped)
            std::printf("  %-20s skipped (%s)\n", std::string(to_string(name)).c_str(), r.note.c_str());
        else
            std::printf("  %-20s %.2e\n", std::string(to_string(name)).c_str(), r.residual);
    }

    std::printf("\nseries value as tau -> sqrt 2 from both sides, sigma = 0.4i, z = 0.5+0.1i\n");
    const real r2 = std::sqrt(2.0);
    const cplx zs{0.5, 0.1}, ss{0.0, 0.4};
    const cplx v0 = gamma_series(zs, r2, ss);
    show("tau = sqrt 2", v0);
    for (real eps : {1e-2, 1e-3, 1e-4}) {
        const real up = std::abs(gamma_series(zs, cplx{r2, eps}, ss) - v0);
        const real down = std::abs(gamma_series(zs, cplx{r2, -eps}, ss) - v0);
        std::printf("  eps = %.0e   |v(+eps) - v(0)| = %.3e   |v(-eps) - v(0)| = %.3e\n", eps, up, down);
    }

    std::printf("\nGamma(z, 2 tau, 3 tau) from its factorization, tau = 0.6i, z = 0.2+0.1i\n");
    const cplx t{0.0, 0.6}, zz{0.2, 0.1};
    show("direct", gamma_ell(zz, 2.0 * t, 3.0 * t));
    show("factorization", gamma_ab_factorization(zz, t, 2, 3));
    show("direct^6", std::pow(gamma_ell(zz, 2.0 * t, 3.0 * t), 6));
    show("theta-product form", gamma_ab_theta_form(zz, t, 2, 3));

    std::printf("\npsi(0) = e^{i pi/12}\n");
    show("psi(0)", psi_fn(0.0));
    show("e^{i pi/12}", expipi(1.0 / 12.0));
    return 0;
}
