// Partition function per site of the eight-vertex model in the elliptic
// gamma parametrization:
//
//   Z = theta0(sigma-u,2tau) theta0(sigma+u,2tau) Gamma(sigma-u,tau,4sigma) Gamma(sigma+u,tau,4sigma)
//       / (theta0(tau,2tau) theta0(2sigma,2tau) Gamma(3sigma-u,tau,4sigma) Gamma(3sigma+u,tau,4sigma)),
//
// and the free energy f = -ln c - ln Z.

#ifndef EGAMMA_BAXTER_HPP
#define EGAMMA_BAXTER_HPP

#include <egamma/gamma.hpp>
#include <egamma/qseries.hpp>

namespace egamma
{

struct BaxterParams {
    real c = 1.0;
    cplx u{0.0, 0.0};
    cplx tau{0.0, 1.0};
    cplx sigma{0.0, 0.25};
};

struct BaxterResult {
    Evaluation z;
    cplx free_energy;
};

inline Evaluation baxter_z_eval(const BaxterParams &p, const TruncationPolicy &policy = {})
{
    if (!(p.tau.imag() > 0.0) || !(p.sigma.imag() > 0.0))
        throw domain_error("baxter: requires Im tau > 0 and Im sigma > 0");
    const cplx tau2 = 2.0 * p.tau, sigma4 = 4.0 * p.sigma;
    auto check = [](const Evaluation &e, const char *label) {
        if (e.singular() || e.value == cplx{0.0, 0.0} || !is_finite(e.value))
            throw domain_error(std::string("baxter: singular factor ") + label);
        return e;
    };
    Evaluation num = check(theta0_eval(p.sigma - p.u, tau2, policy), "theta0(sigma-u,2tau)");
    num = detail::combine(num, check(theta0_eval(p.sigma + p.u, tau2, policy), "theta0(sigma+u,2tau)"), false, "product");
    num = detail::combine(num, check(gamma_ell_eval(p.sigma - p.u, p.tau, sigma4, policy), "Gamma(sigma-u,tau,4sigma)"),
                          false, "product");
    num = detail::combine(num, check(gamma_ell_eval(p.sigma + p.u, p.tau, sigma4, policy), "Gamma(sigma+u,tau,4sigma)"),
                          false, "product");
    Evaluation den = check(theta0_eval(p.tau, tau2, policy), "theta0(tau,2tau)");
    den = detail::combine(den, check(theta0_eval(2.0 * p.sigma, tau2, policy), "theta0(2sigma,2tau)"), false, "product");
    den = detail::combine(den,
                          check(gamma_ell_eval(3.0 * p.sigma - p.u, p.tau, sigma4, policy), "Gamma(3sigma-u,tau,4sigma)"),
                          false, "product");
    den = detail::combine(den,
                          check(gamma_ell_eval(3.0 * p.sigma + p.u, p.tau, sigma4, policy), "Gamma(3sigma+u,tau,4sigma)"),
                          false, "product");
    return detail::combine(num, den, true, "product");
}

inline cplx baxter_z(const BaxterParams &p, const TruncationPolicy &policy = {})
{
    return baxter_z_eval(p, policy).value;
}

/// Z together with f = -ln c - ln Z (principal logarithm).
inline BaxterResult baxter_free_energy(const BaxterParams &p, const TruncationPolicy &policy = {})
{
    if (!(p.c > 0.0))
        throw domain_error("baxter: requires c > 0");
    BaxterResult r;
    r.z = baxter_z_eval(p, policy);
    r.free_energy = -std::log(p.c) - std::log(r.z.value);
    return r;
}

} // namespace egamma

#endif
