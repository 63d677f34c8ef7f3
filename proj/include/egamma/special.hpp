// Degenerations and special values of the elliptic gamma function:
// the dilogarithm and the function
//
//   psi(t) = exp(t ln(1 - e^{-2 pi i t}) - Li_2(e^{-2 pi i t}) / (2 pi i)),
//
// equal periods, rationally related periods, the Jackson q-gamma
// function and its elliptic normalization.

#ifndef EGAMMA_SPECIAL_HPP
#define EGAMMA_SPECIAL_HPP

#include <egamma/gamma.hpp>
#include <egamma/qseries.hpp>

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace egamma
{

/// Li_2(x) = sum_{j>=1} x^j / j^2 on the closed unit disk.
inline Evaluation dilog_eval(cplx x, const TruncationPolicy &policy = {})
{
    policy.validate();
    const real ax = std::abs(x);
    if (ax > 1.0)
        throw domain_error("dilog: |x| > 1 is outside the series domain");
    Evaluation out;
    if (x == cplx{1.0, 0.0}) {
        out.method = "closed-form";
        out.value = pi * pi / 6.0;
        return out;
    }
    out.method = "series";
    // Tail after J: min of the geometric bound and the Abel bound
    // 2 / ((J+1)^2 |1 - x|), the latter valid on the whole closed disk.
    const real abel = 2.0 / std::abs(1.0 - x);
    cplx sum{0.0, 0.0}, xj{1.0, 0.0};
    std::size_t j = 1;
    for (;; ++j) {
        if (j > policy.max_terms)
            throw convergence_error("dilog: max_terms exceeded");
        xj *= x;
        const real jr = static_cast<real>(j);
        sum += xj / (jr * jr);
        const real n = jr + 1.0;
        real tail = abel / (n * n);
        if (ax < 1.0)
            tail = std::min(tail, std::pow(ax, n) / (n * n * (1.0 - ax)));
        if (tail < policy.tol || xj == cplx{0.0, 0.0}) {
            out.tail_bound = tail;
            break;
        }
    }
    out.terms = j;
    out.value = sum;
    return out;
}

inline cplx dilog(cplx x, const TruncationPolicy &policy = {})
{
    return dilog_eval(x, policy).value;
}

struct PsiPolicy {
    real series_tol = 1e-15;
    int quadrature_nodes = 64;
    /// The direct formula is used for Im t < -continuation_strip.
    real continuation_strip = 0.5;

    void validate() const
    {
        if (!(series_tol > 0.0))
            throw domain_error("PsiPolicy: series_tol must be positive");
        if (quadrature_nodes < 32)
            throw domain_error("PsiPolicy: quadrature_nodes must be at least 32");
        if (!(continuation_strip >= 0.0))
            throw domain_error("PsiPolicy: continuation_strip must be non-negative");
    }
};

namespace detail
{

// log psi(t) for Im t < 0 from the defining series.
inline cplx log_psi_direct(cplx t, real tol)
{
    const cplx w = std::exp(-2.0 * pi * I * t);
    const real aw = std::abs(w);
    cplx log1mw{0.0, 0.0}, li2{0.0, 0.0}, wj{1.0, 0.0};
    for (int j = 1; j < 100000; ++j) {
        wj *= w;
        const real jr = j;
        log1mw -= wj / jr;
        li2 += wj / (jr * jr);
        if (std::pow(aw, jr + 1.0) * (std::abs(t) + 1.0) / ((jr + 1.0) * (1.0 - aw)) < tol)
            break;
    }
    return t * log1mw - li2 / (2.0 * pi * I);
}

// s / (e^{2 pi i s} - 1), regular at s = 0.
inline cplx psi_integrand(cplx s)
{
    const cplx w = 2.0 * pi * I * s;
    if (std::abs(w) < 1e-4)
        return (1.0 - w / 2.0 + w * w / 12.0) / (2.0 * pi * I);
    if (s.imag() < 0.0) {
        const cplx e = std::exp(-w);
        return s * e / (1.0 - e);
    }
    return s / (std::exp(w) - 1.0);
}

// Integral of psi_integrand along the segment [a, b] by tanh-sinh
// quadrature, halving the step until successive values agree.
inline cplx tanh_sinh_segment(cplx a, cplx b, int nodes, real tol)
{
    const cplx half = (b - a) / 2.0, mid = (a + b) / 2.0;
    const real u_max = 3.2;
    real h = 2.0 * u_max / nodes;
    auto node = [&](real u) {
        const real s = (pi / 2.0) * std::sinh(u);
        const real x = std::tanh(s);
        const real c = std::cosh(s);
        const real w = (pi / 2.0) * std::cosh(u) / (c * c);
        // 1 - |x| computed without cancellation
        const real one_minus = 1.0 / (std::exp(std::abs(s)) * c);
        if (one_minus <= 0.0)
            return cplx{0.0, 0.0};
        return w * psi_integrand(mid + half * x);
    };
    cplx sum{0.0, 0.0};
    for (int k = -nodes / 2; k <= nodes / 2; ++k)
        sum += node(k * h);
    cplx estimate = sum * h * half;
    for (int level = 0; level < 12; ++level) {
        h /= 2.0;
        const int count = static_cast<int>(std::lround(u_max / h));
        for (int k = -count + 1; k < count; k += 2)
            sum += node(k * h);
        const cplx next = sum * h * half;
        if (std::abs(next - estimate) < tol * std::max(1.0, std::abs(next)))
            return next;
        estimate = next;
    }
    throw convergence_error("psi: quadrature did not converge");
}

} // namespace detail

/// Pole/zero classification of psi at t: zero of order n at t = n,
/// pole of order n at t = -n.
inline std::pair<Singularity, int> psi_singularity(cplx t)
{
    const real n = std::round(t.real());
    if (n != 0.0 && std::abs(t - n) < lattice_radius)
        return n > 0 ? std::pair{Singularity::zero, static_cast<int>(n)}
                     : std::pair{Singularity::pole, static_cast<int>(-n)};
    return {Singularity::none, 0};
}

/// log psi(t). Below the strip the defining series is used. Otherwise
///   log psi(t) = log psi(t0) + 2 pi i int_{t0}^{t} s ds / (e^{2 pi i s} - 1)
/// along a vertical path from t0 below the strip, detouring through
/// Re s = n +- 1/2 when the path would pass within 1/4 of a pole n != 0.
inline cplx log_psi(cplx t, const PsiPolicy &policy = {})
{
    policy.validate();
    if (t.imag() < -policy.continuation_strip)
        return detail::log_psi_direct(t, policy.series_tol);
    if (psi_singularity(t).first != Singularity::none)
        throw domain_error("log_psi: t is a zero or pole of psi");

    const real bottom = -(policy.continuation_strip + 0.5);
    real column = t.real();
    const real n = std::round(t.real());
    const bool detour = t.imag() > 0.0 && n != 0.0 && std::abs(t.real() - n) < 0.25;
    if (detour)
        column = n + (t.real() >= n ? 0.5 : -0.5);

    const cplx t0{column, bottom};
    cplx integral = detail::tanh_sinh_segment(t0, cplx{column, t.imag()}, policy.quadrature_nodes, policy.series_tol);
    if (detour)
        integral += detail::tanh_sinh_segment(cplx{column, t.imag()}, t, policy.quadrature_nodes, policy.series_tol);
    return detail::log_psi_direct(t0, policy.series_tol) + 2.0 * pi * I * integral;
}

inline Evaluation psi_eval(cplx t, const PsiPolicy &policy = {})
{
    Evaluation out;
    const auto [kind, order] = psi_singularity(t);
    if (kind != Singularity::none) {
        out.method = "flag";
        out.singularity = kind;
        out.order = order;
        out.value = kind == Singularity::zero ? cplx{0.0, 0.0} : cplx{std::numeric_limits<real>::infinity(), 0.0};
        return out;
    }
    out.method = t.imag() < -policy.continuation_strip ? "series" : "quadrature";
    out.value = std::exp(log_psi(t, policy));
    return out;
}

inline cplx psi_fn(cplx t, const PsiPolicy &policy = {})
{
    return psi_eval(t, policy).value;
}

/// |log psi(t)| <= (2|t| + pi/12) e^{-2 pi |Im t|} once e^{-2 pi |Im t|} <= 1/2.
inline real psi_log_bound(cplx t)
{
    return (2.0 * std::abs(t) + pi / 12.0) * std::exp(-2.0 * pi * std::abs(t.imag()));
}

/// Gamma(z,tau,tau) = e^{-i pi Q(z;tau,tau)} / theta0(z/tau,-1/tau)
///                    * prod_{k>=0} psi((k+1+z)/tau) / psi((k-z)/tau).
inline Evaluation gamma_equal_periods_eval(cplx z, cplx tau, int k_max = 60, const TruncationPolicy &policy = {},
                                           const PsiPolicy &psi_policy = {})
{
    policy.validate();
    if (!(tau.imag() > 0.0))
        throw domain_error("gamma_equal_periods: requires Im tau > 0");
    if (k_max < 0)
        throw domain_error("gamma_equal_periods: k_max must be non-negative");
    {
        const real m = std::round(z.imag() / tau.imag());
        const cplx w = z - m * tau;
        if (std::abs(w - std::round(w.real())) < lattice_radius)
            throw domain_error("gamma_equal_periods: z lies on the lattice Z + tau Z");
    }

    // Tail over k > k_max from the psi estimate.
    real tail = 0.0;
    for (int k = k_max + 1;; ++k) {
        const cplx a = (static_cast<real>(k) + 1.0 + z) / tau, b = (static_cast<real>(k) - z) / tau;
        if (a.imag() > -0.2 || b.imag() > -0.2) {
            tail = std::numeric_limits<real>::infinity();
            break;
        }
        const real t = psi_log_bound(a) + psi_log_bound(b);
        tail += t;
        if (t < 1e-30 * std::max(tail, 1e-300) || t == 0.0)
            break;
    }
    if (!(tail < policy.tol))
        throw convergence_error("gamma_equal_periods: psi tail bound exceeds tol; raise k_max");

    cplx log_prod{0.0, 0.0};
    for (int k = 0; k <= k_max; ++k) {
        const real kr = k;
        log_prod += log_psi((kr + 1.0 + z) / tau, psi_policy) - log_psi((kr - z) / tau, psi_policy);
    }
    Evaluation out;
    out.method = "equal-period-psi";
    out.terms = static_cast<std::size_t>(k_max) + 1;
    out.tail_bound = tail;
    out.value = std::exp(log_prod - pi * I * q_polynomial(z, tau, tau)) / theta0(z / tau, -1.0 / tau, policy);
    return out;
}

inline cplx gamma_equal_periods(cplx z, cplx tau, int k_max = 60, const TruncationPolicy &policy = {})
{
    return gamma_equal_periods_eval(z, tau, k_max, policy).value;
}

/// Gamma(z, s tau0, s tau0) e^{i pi Q(z; s tau0, s tau0)} for each s.
inline std::vector<std::pair<real, cplx>> corollary_asymptotic(cplx z, cplx tau0, const std::vector<real> &s_sequence,
                                                               const TruncationPolicy &policy = {})
{
    if (!(tau0.imag() > 0.0))
        throw domain_error("corollary_asymptotic: requires Im tau0 > 0");
    const real v = z.imag() / tau0.imag();
    const real u = z.real() - v * tau0.real();
    if (!(u > -1.0 && u < 0.0))
        throw domain_error("corollary_asymptotic: z = u + v tau0 requires -1 < u < 0");
    std::vector<std::pair<real, cplx>> out;
    for (real s : s_sequence) {
        if (!(s > 0.0))
            throw domain_error("corollary_asymptotic: scale factors must be positive");
        const cplx tau = s * tau0;
        out.emplace_back(s, gamma_ell(z, tau, tau, policy) * expipi(q_polynomial(z, tau, tau)));
    }
    return out;
}

/// Number of (r,s) >= 0 with j = a r + b s.
inline long n_ab(long j, long a, long b)
{
    if (j < 0 || a < 1 || b < 1)
        throw domain_error("n_ab: requires j >= 0 and a, b >= 1");
    long count = 0;
    for (long r = 0; r * a <= j; ++r)
        if ((j - r * a) % b == 0)
            ++count;
    return count;
}

/// alpha_k for k in [0, ab): k + 1 - ab if k = a r + b s with r, s >= 0,
/// otherwise k + 1. The two-branch dichotomy for ab - k is verified while
/// building the table.
inline std::vector<long> alpha_exponents(long a, long b)
{
    if (a < 1 || b < 1 || std::gcd(a, b) != 1)
        throw domain_error("alpha_exponents: requires coprime positive a, b");
    const long ab = a * b;
    std::vector<long> alpha(static_cast<std::size_t>(ab));
    for (long k = 0; k < ab; ++k) {
        const bool representable = n_ab(k, a, b) > 0;
        // ab - k = a(i+1) + b(j+1) with i, j >= 0
        const long rest = ab - k - a - b;
        const bool complement = rest >= 0 && n_ab(rest, a, b) > 0;
        if (representable == complement)
            throw std::logic_error("alpha_exponents: representability dichotomy failed");
        alpha[static_cast<std::size_t>(k)] = representable ? k + 1 - ab : k + 1;
    }
    return alpha;
}

struct BetaGamma {
    long beta;
    long gamma;
};

/// beta_{k,s}: ways ab(s+1) - k = a(i+1) + b(j+1); gamma_{k,s}: ways ab s + k = a i + b j.
inline BetaGamma beta_gamma_counts(long a, long b, long k, long s)
{
    const long ab = a * b;
    const long rest = ab * (s + 1) - k - a - b;
    return {rest >= 0 ? n_ab(rest, a, b) : 0, n_ab(ab * s + k, a, b)};
}

/// prod_{r<b} prod_{s<a} Gamma(z + (a r + b s) tau, ab tau, ab tau).
inline Evaluation gamma_ab_factorization_eval(cplx z, cplx tau, long a, long b, const TruncationPolicy &policy = {})
{
    if (!(tau.imag() > 0.0))
        throw domain_error("gamma_ab_factorization: requires Im tau > 0");
    if (a < 1 || b < 1)
        throw domain_error("gamma_ab_factorization: a, b must be positive");
    const cplx big = static_cast<real>(a * b) * tau;
    Evaluation out;
    out.value = 1.0;
    for (long r = 0; r < b; ++r)
        for (long s = 0; s < a; ++s)
            out = detail::combine(out, gamma_ell_eval(z + static_cast<real>(a * r + b * s) * tau, big, big, policy),
                                  false, "factorization");
    return out;
}

inline cplx gamma_ab_factorization(cplx z, cplx tau, long a, long b, const TruncationPolicy &policy = {})
{
    return gamma_ab_factorization_eval(z, tau, a, b, policy).value;
}

/// Gamma(z,tau,tau) prod_{k<ab} theta0(z + k tau, ab tau)^{alpha_k}, which
/// equals Gamma(z, a tau, b tau)^{ab}.
inline Evaluation gamma_ab_theta_form_eval(cplx z, cplx tau, long a, long b, const TruncationPolicy &policy = {})
{
    if (!(tau.imag() > 0.0))
        throw domain_error("gamma_ab_theta_form: requires Im tau > 0");
    const auto alpha = alpha_exponents(a, b);
    const long ab = a * b;
    const cplx big = static_cast<real>(ab) * tau;
    Evaluation out = gamma_ell_eval(z, tau, tau, policy);
    for (long k = 0; k < ab; ++k) {
        const long e = alpha[static_cast<std::size_t>(k)];
        if (e == 0)
            continue;
        const auto th = theta0_eval(z + static_cast<real>(k) * tau, big, policy);
        for (long i = 0; i < (e < 0 ? -e : e); ++i)
            out = detail::combine(out, th, e < 0, "theta-form");
    }
    return out;
}

inline cplx gamma_ab_theta_form(cplx z, cplx tau, long a, long b, const TruncationPolicy &policy = {})
{
    return gamma_ab_theta_form_eval(z, tau, a, b, policy).value;
}

/// Jackson's q-gamma function (1 - r)^{1-s} (r;r) / (r^s;r), r = e^{2 pi i sigma},
/// with the principal logarithm of 1 - r.
inline Evaluation gamma_trig_eval(cplx s, cplx sigma, const TruncationPolicy &policy = {})
{
    if (!(sigma.imag() > 0.0))
        throw domain_error("gamma_trig: requires Im sigma > 0");
    const cplx r = expi2pi(sigma);
    const auto num = detail::qpoch_direct(r, r, policy);
    const auto den = detail::qpoch_direct(expi2pi(sigma * s), r, policy);
    auto out = detail::combine(num, den, true, "product");
    out.value = std::exp((1.0 - s) * std::log(1.0 - r)) * num.value / den.value;
    return out;
}

inline cplx gamma_trig(cplx s, cplx sigma, const TruncationPolicy &policy = {})
{
    return gamma_trig_eval(s, sigma, policy).value;
}

/// (r;r)/(q;q) theta0(sigma,tau)^{1-s} Gamma(sigma s, tau, sigma), principal power.
inline cplx gamma_bar(cplx s, cplx tau, cplx sigma, const TruncationPolicy &policy = {})
{
    if (!(tau.imag() > 0.0) || !(sigma.imag() > 0.0))
        throw domain_error("gamma_bar: requires Im tau > 0 and Im sigma > 0");
    const auto th = theta0_eval(sigma, tau, policy);
    if (th.singular() || th.value == cplx{0.0, 0.0})
        throw domain_error("gamma_bar: theta0(sigma,tau) vanishes");
    const cplx q = expi2pi(tau), r = expi2pi(sigma);
    return qpoch(r, r, policy) / qpoch(q, q, policy) * std::exp((1.0 - s) * std::log(th.value)) *
           gamma_ell(sigma * s, tau, sigma, policy);
}

} // namespace egamma

#endif
