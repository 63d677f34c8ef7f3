// The phase function Omega_a(z,tau,sigma) = Gamma(z+a,tau,sigma) / Gamma(z-a,tau,sigma)
// and its semiclassical limit sigma, a -> 0 with beta = 2a/sigma fixed.

#ifndef EGAMMA_PHASE_HPP
#define EGAMMA_PHASE_HPP

#include <egamma/gamma.hpp>
#include <egamma/qseries.hpp>

#include <cmath>
#include <cstdlib>

namespace egamma
{

struct PhasePoint {
    cplx a;
    cplx z;
    PeriodPair periods;
};

inline Evaluation omega_eval(const PhasePoint &p, const TruncationPolicy &policy = {})
{
    const auto num = gamma_ell_eval(p.z + p.a, p.periods, policy);
    const auto den = gamma_ell_eval(p.z - p.a, p.periods, policy);
    return detail::combine(num, den, true, "product");
}

inline cplx omega(const PhasePoint &p, const TruncationPolicy &policy = {})
{
    return omega_eval(p, policy).value;
}

/// exp(-i sum_l cos(pi l (2z - tau - sigma)) sin(2 pi l a) / (l sin(pi l tau) sin(pi l sigma))).
inline Evaluation omega_series_eval(const PhasePoint &p, const TruncationPolicy &policy = {})
{
    policy.validate();
    const cplx tau = p.periods.tau, sigma = p.periods.sigma;
    const auto up = region_classify(p.z + p.a, tau, sigma);
    const auto down = region_classify(p.z - p.a, tau, sigma);
    if (!up.series_ok || !down.series_ok)
        throw domain_error("omega_series: z +- a outside the region of absolute convergence");

    if (!p.periods.both_nonreal()) {
        const auto num = gamma_series_eval(p.z + p.a, tau, sigma, policy);
        const auto den = gamma_series_eval(p.z - p.a, tau, sigma, policy);
        return detail::combine(num, den, true, "series-real-period");
    }

    // |term| <= 4 e^{-pi l m} / (l c_tau(l) c_sigma(l)), m the smaller margin.
    const real m = std::min(up.strip_margin, down.strip_margin);
    const real decay = std::exp(-pi * m);
    const real at = std::abs(tau.imag()), as = std::abs(sigma.imag());
    auto c_of = [](real im, real j) { return 1.0 - std::exp(-2.0 * pi * j * im); };
    const cplx u = 2.0 * p.z - tau - sigma;

    Evaluation out;
    out.method = "series";
    cplx sum{0.0, 0.0};
    int violations = 0;
    std::size_t l = 1;
    for (;; ++l) {
        if (l > policy.max_terms)
            throw convergence_error("omega_series: max_terms exceeded");
        const real lr = static_cast<real>(l);
        const auto c = detail::split_cos(pi * lr * u);
        const auto s = detail::split_sin(2.0 * pi * lr * p.a);
        const auto st = detail::split_sin(pi * lr * tau);
        const auto ss = detail::split_sin(pi * lr * sigma);
        const cplx t = std::exp(c.log_scale + s.log_scale - st.log_scale - ss.log_scale) * c.factor * s.factor /
                       (st.factor * ss.factor * lr);
        const real envelope = 4.0 * std::pow(decay, lr) / (lr * c_of(at, lr) * c_of(as, lr));
        violations = std::abs(t) > envelope * (1.0 + 1e-9) ? violations + 1 : 0;
        if (violations >= envelope_patience)
            throw convergence_error("omega_series: terms exceed the geometric envelope");
        sum += t;
        const real n = lr + 1.0;
        const real tail = 4.0 * std::pow(decay, n) / (n * c_of(at, n) * c_of(as, n) * (1.0 - decay));
        if (tail < policy.tol / 2.0) {
            out.tail_bound = tail;
            break;
        }
    }
    out.terms = l;
    out.value = std::exp(-I * sum);
    return out;
}

inline cplx omega_series(const PhasePoint &p, const TruncationPolicy &policy = {})
{
    return omega_series_eval(p, policy).value;
}

/// R_a(z,tau,sigma) = i pi (Q(z+a) - Q(z-a)) in closed form.
inline cplx r_polynomial(cplx a, cplx z, cplx tau, cplx sigma)
{
    if (tau == 0.0 || sigma == 0.0)
        throw domain_error("r_polynomial: zero period");
    return pi * I * a / (3.0 * tau * sigma) *
           (6.0 * z * z - 6.0 * (tau + sigma - 1.0) * z + 2.0 * a * a + tau * tau + sigma * sigma + 3.0 * tau * sigma -
            3.0 * tau - 3.0 * sigma + 1.0);
}

/// lim_{eps -> 0} R_eps(z, tau, 2 eps / beta).
inline cplx r0_polynomial(cplx z, cplx tau, int beta)
{
    if (tau == 0.0)
        throw domain_error("r0_polynomial: zero period");
    return pi * I * static_cast<real>(beta) * (z * z / tau - z + z / tau + tau / 6.0 - 0.5 + 1.0 / (6.0 * tau));
}

/// r(z,tau) = sum_{j>=1} cos(2 pi j z) / sin^2(pi j tau).
inline Evaluation r_series_eval(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (!(tau.imag() > 0.0))
        throw domain_error("r_series: requires Im tau > 0");
    if (!(std::abs(z.imag()) < tau.imag()))
        throw domain_error("r_series: requires |Im z| < Im tau");
    // |term| <= 4 e^{-2 pi j (Im tau - |Im z|)} / c(j)^2
    const real decay = std::exp(-2.0 * pi * (tau.imag() - std::abs(z.imag())));
    const real c1 = 1.0 - std::exp(-2.0 * pi * tau.imag());
    Evaluation out;
    out.method = "series";
    cplx sum{0.0, 0.0};
    std::size_t j = 1;
    for (;; ++j) {
        if (j > policy.max_terms)
            throw convergence_error("r_series: max_terms exceeded");
        const real jr = static_cast<real>(j);
        const auto c = detail::split_cos(2.0 * pi * jr * z);
        const auto s = detail::split_sin(pi * jr * tau);
        sum += std::exp(c.log_scale - 2.0 * s.log_scale) * c.factor / (s.factor * s.factor);
        const real tail = 4.0 * std::pow(decay, jr + 1.0) / (c1 * c1 * (1.0 - decay));
        if (tail < policy.tol * std::max(1.0, std::abs(sum))) {
            out.tail_bound = tail;
            break;
        }
    }
    out.terms = j;
    out.value = sum;
    return out;
}

inline cplx r_series(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    return r_series_eval(z, tau, policy).value;
}

namespace detail
{

inline cplx int_power(cplx base, int e)
{
    cplx out{1.0, 0.0};
    for (int i = 0; i < std::abs(e); ++i)
        out *= base;
    return e < 0 ? 1.0 / out : out;
}

} // namespace detail

struct SemiclassicalParams {
    int beta = 1;
    real eps = 1e-3;
    cplx tau{0.0, 1.0};
};

struct SemiclassicalResult {
    cplx omega_val;
    cplx theta_pow;
    cplx deviation;
};

/// The point (a, sigma) = (i eps sgn(beta), 2 i eps / |beta|) on the
/// semiclassical curve 2a/sigma = beta.
inline std::pair<cplx, cplx> semiclassical_point(int beta, real eps)
{
    if (beta == 0)
        return {0.0, cplx{0.0, eps}};
    const real sign = beta > 0 ? 1.0 : -1.0;
    return {cplx{0.0, sign * eps}, cplx{0.0, 2.0 * eps / std::abs(beta)}};
}

/// Omega_eps(z, tau, 2 eps / beta) against theta0(z,tau)^beta.
inline SemiclassicalResult semiclassical_check(const SemiclassicalParams &params, cplx z,
                                               const TruncationPolicy &policy = {})
{
    if (!(params.eps > 0.0))
        throw domain_error("semiclassical_check: eps must be positive");
    if (!(params.tau.imag() > 0.0) || !(z.imag() > 0.0) || !(z.imag() < params.tau.imag()))
        throw domain_error("semiclassical_check: requires 0 < Im z < Im tau");
    SemiclassicalResult out;
    out.theta_pow = detail::int_power(theta0(z, params.tau, policy), params.beta);
    if (params.beta == 0) {
        out.omega_val = 1.0;
    } else {
        const auto [a, sigma] = semiclassical_point(params.beta, params.eps);
        out.omega_val = omega_series(PhasePoint{a, z, PeriodPair(params.tau, sigma)}, policy);
    }
    out.deviation = out.omega_val - out.theta_pow;
    return out;
}

} // namespace egamma

#endif
