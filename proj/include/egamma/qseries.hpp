// q-Pochhammer symbols, Jacobi's odd theta function, theta_0 and the
// Dedekind eta function.
//
//   (x;q)   = prod_{j>=0} (1 - x q^j)
//   (x;q,r) = prod_{j,k>=0} (1 - x q^j r^k)
//   theta_0(z,tau) = (x;q)(q/x;q),   x = e^{2 pi i z}, q = e^{2 pi i tau}
//
// Products with |q| > 1 (or |r| > 1) are defined through
//   (x;q^{-1}) = 1/(qx;q),  (x;q^{-1},r) = 1/(qx;q,r),  (x;q,r^{-1}) = 1/(rx;q,r)
// so the truncated kernels only ever run with nomes inside the unit disk.
//
// Truncation: a direct product stops at the first index J where every
// remaining factor 1-y has |y| <= 1/2 and sum |y| < tol/4. Since
// |log(1-y)| <= 2|y| on that disk, the logarithm of the neglected tail is
// bounded by tol/2; this bound is what Evaluation::tail_bound reports.

#ifndef EGAMMA_QSERIES_HPP
#define EGAMMA_QSERIES_HPP

#include <egamma/core.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace egamma
{

/// A nome q = e^{2 pi i tau} together with the period it came from.
struct Nome {
    cplx value;
    cplx source_period{0.0, 0.0};

    static Nome from_period(cplx tau) { return Nome{expi2pi(tau), tau}; }
    static Nome from_value(cplx q) { return Nome{q, cplx{0.0, 0.0}}; }

    bool direct() const { return std::abs(value) < 1.0; }
    bool reflected() const { return std::abs(value) > 1.0; }
};

namespace detail
{

inline bool on_unit_circle(cplx q)
{
    return std::abs(std::abs(q) - 1.0) <= 4.0 * std::numeric_limits<real>::epsilon();
}

inline bool factor_vanishes(cplx y)
{
    return std::abs(1.0 - y) <= 8.0 * std::numeric_limits<real>::epsilon() * std::max(1.0, std::abs(y));
}

inline Evaluation invert(Evaluation e)
{
    e.value = 1.0 / e.value;
    if (e.singularity == Singularity::zero)
        e.singularity = Singularity::pole;
    else if (e.singularity == Singularity::pole)
        e.singularity = Singularity::zero;
    return e;
}

// Multiplies two evaluations, combining diagnostics.
inline Evaluation combine(const Evaluation &a, const Evaluation &b, bool divide, std::string method)
{
    Evaluation out;
    out.method = std::move(method);
    out.value = divide ? a.value / b.value : a.value * b.value;
    out.terms = a.terms + b.terms;
    out.tail_bound = a.tail_bound + b.tail_bound;
    out.unverified_envelope = a.unverified_envelope || b.unverified_envelope;
    int order = 0;
    auto account = [&order](const Evaluation &e, int sign) {
        if (e.singularity == Singularity::zero)
            order += sign * e.order;
        else if (e.singularity == Singularity::pole)
            order -= sign * e.order;
    };
    account(a, 1);
    account(b, divide ? -1 : 1);
    if (order > 0) {
        out.singularity = Singularity::zero;
        out.order = order;
    } else if (order < 0) {
        out.singularity = Singularity::pole;
        out.order = -order;
    }
    return out;
}

// (x;q) for |q| < 1.
inline Evaluation qpoch_direct(cplx x, cplx q, const TruncationPolicy &policy)
{
    Evaluation out;
    out.method = "product";
    const real aq = std::abs(q);
    const real ax = std::abs(x);
    cplx prod{1.0, 0.0};
    cplx y = x;
    int zeros = 0;
    std::size_t j = 0;
    for (;; ++j) {
        const real ay = ax * std::pow(aq, static_cast<real>(j));
        const real tail = ay / (1.0 - aq);
        if (ay <= 0.5 && tail < policy.tol / 4.0) {
            out.tail_bound = 2.0 * tail;
            break;
        }
        if (j >= policy.max_terms)
            throw convergence_error("qpoch: max_terms exceeded before the tail bound dropped below tol");
        if (factor_vanishes(y))
            ++zeros;
        else
            prod *= (1.0 - y);
        y *= q;
    }
    out.terms = j;
    out.value = zeros > 0 ? cplx{0.0, 0.0} : prod;
    if (zeros > 0) {
        out.singularity = Singularity::zero;
        out.order = zeros;
    }
    return out;
}

// (x;q,r) for |q|,|r| < 1, iterating over anti-diagonals j+k = d.
inline Evaluation qpoch2_direct(cplx x, cplx q, cplx r, const TruncationPolicy &policy)
{
    Evaluation out;
    out.method = "double-product";
    const real m = std::max(std::abs(q), std::abs(r));
    const real ax = std::abs(x);
    std::vector<cplx> qp{cplx{1.0, 0.0}}, rp{cplx{1.0, 0.0}};
    cplx prod{1.0, 0.0};
    int zeros = 0;
    std::size_t factors = 0;
    for (std::size_t d = 0;; ++d) {
        // Tail over all anti-diagonals >= d.
        const real md = std::pow(m, static_cast<real>(d));
        const real tail = ax * md * ((d + 1.0) - d * m) / ((1.0 - m) * (1.0 - m));
        if (ax * md <= 0.5 && tail < policy.tol / 4.0) {
            out.tail_bound = 2.0 * tail;
            break;
        }
        if (factors + d + 1 > policy.max_terms)
            throw convergence_error("qpoch2: max_terms exceeded before the tail bound dropped below tol");
        if (d > 0) {
            qp.push_back(qp.back() * q);
            rp.push_back(rp.back() * r);
        }
        for (std::size_t j = 0; j <= d; ++j) {
            const cplx y = x * qp[j] * rp[d - j];
            if (factor_vanishes(y))
                ++zeros;
            else
                prod *= (1.0 - y);
        }
        factors += d + 1;
    }
    out.terms = factors;
    out.value = zeros > 0 ? cplx{0.0, 0.0} : prod;
    if (zeros > 0) {
        out.singularity = Singularity::zero;
        out.order = zeros;
    }
    return out;
}

} // namespace detail

/// (x;q) with the reflected extension for |q| > 1.
inline Evaluation qpoch_eval(cplx x, const Nome &q, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (detail::on_unit_circle(q.value))
        throw domain_error("qpoch: |q| = 1 is outside the domain");
    if (q.direct())
        return detail::qpoch_direct(x, q.value, policy);
    const cplx qi = 1.0 / q.value;
    auto e = detail::invert(detail::qpoch_direct(x * qi, qi, policy));
    e.method = "reflected-product";
    return e;
}

inline cplx qpoch(cplx x, const Nome &q, const TruncationPolicy &policy = {})
{
    return qpoch_eval(x, q, policy).value;
}

inline cplx qpoch(cplx x, cplx q, const TruncationPolicy &policy = {})
{
    return qpoch_eval(x, Nome::from_value(q), policy).value;
}

/// (x;q,r) with the reflected extensions for |q| > 1 and/or |r| > 1.
inline Evaluation qpoch2_eval(cplx x, const Nome &q, const Nome &r, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (detail::on_unit_circle(q.value) || detail::on_unit_circle(r.value))
        throw domain_error("qpoch2: |q| = 1 or |r| = 1 is outside the domain");
    const bool qd = q.direct(), rd = r.direct();
    if (qd && rd)
        return detail::qpoch2_direct(x, q.value, r.value, policy);
    if (!qd && !rd) {
        const cplx qi = 1.0 / q.value, ri = 1.0 / r.value;
        auto e = detail::qpoch2_direct(x * qi * ri, qi, ri, policy);
        e.method = "reflected-double-product";
        return e;
    }
    if (!qd) {
        const cplx qi = 1.0 / q.value;
        auto e = detail::invert(detail::qpoch2_direct(x * qi, qi, r.value, policy));
        e.method = "reflected-double-product";
        return e;
    }
    const cplx ri = 1.0 / r.value;
    auto e = detail::invert(detail::qpoch2_direct(x * ri, q.value, ri, policy));
    e.method = "reflected-double-product";
    return e;
}

inline cplx qpoch2(cplx x, cplx q, cplx r, const TruncationPolicy &policy = {})
{
    return qpoch2_eval(x, Nome::from_value(q), Nome::from_value(r), policy).value;
}

/// exp(-sum_{j>=1} x^j / (j (1 - q^j))), valid for |x| < 1, |q| < 1.
inline Evaluation qpoch_series_eval(cplx x, cplx q, const TruncationPolicy &policy = {})
{
    policy.validate();
    const real ax = std::abs(x), aq = std::abs(q);
    if (!(ax < 1.0) || !(aq < 1.0))
        throw domain_error("qpoch_series: requires |x| < 1 and |q| < 1");
    Evaluation out;
    out.method = "series";
    cplx sum{0.0, 0.0};
    cplx xj{1.0, 0.0}, qj{1.0, 0.0};
    std::size_t j = 1;
    for (;; ++j) {
        if (j > policy.max_terms)
            throw convergence_error("qpoch_series: max_terms exceeded");
        xj *= x;
        qj *= q;
        sum += xj / (static_cast<real>(j) * (1.0 - qj));
        const real tail = std::pow(ax, j + 1.0) / ((j + 1.0) * (1.0 - aq) * (1.0 - ax));
        if (tail < policy.tol / 2.0) {
            out.tail_bound = tail;
            break;
        }
    }
    out.terms = j;
    out.value = std::exp(-sum);
    return out;
}

inline cplx qpoch_series(cplx x, cplx q, const TruncationPolicy &policy = {})
{
    return qpoch_series_eval(x, q, policy).value;
}

/// Jacobi's odd theta function
///   theta(z,tau) = -sum_{j in Z} e^{i pi tau (j+1/2)^2 + 2 pi i (j+1/2)(z+1/2)}.
inline Evaluation theta_eval(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (!(tau.imag() > 0.0))
        throw domain_error("theta: requires Im tau > 0");
    Evaluation out;
    out.method = "series";
    const real b = tau.imag();
    const real c = std::abs(z.imag());
    const cplx w = z + 0.5;
    cplx sum{0.0, 0.0};
    real max_term = 0.0;
    std::size_t k = 0;
    for (;; ++k) {
        if (k > policy.max_terms)
            throw convergence_error("theta: max_terms exceeded");
        const real n = k + 0.5;
        // Paired terms j and -1-j give 2 cos(2 pi n (z+1/2)) e^{i pi tau n^2}.
        const cplx term = 2.0 * expipi(tau * n * n) * std::cos(2.0 * pi * n * w);
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        // Bound on the remaining pairs: |term_m| <= 2 e^{-pi b m^2 + 2 pi m c}.
        const real m = n + 1.0;
        if (pi * b * (2.0 * m + 1.0) > 2.0 * pi * c + 1.0) {
            const real first = 2.0 * std::exp(-pi * b * m * m + 2.0 * pi * m * c);
            const real ratio = std::exp(-pi * b * (2.0 * m + 1.0) + 2.0 * pi * c);
            const real tail = first / (1.0 - ratio);
            const real scale = std::max(std::abs(sum), std::numeric_limits<real>::epsilon() * max_term);
            if (tail < policy.tol * scale / 4.0 || tail < std::numeric_limits<real>::min()) {
                out.tail_bound = tail;
                break;
            }
        }
    }
    out.terms = 2 * (k + 1);
    out.value = -sum;
    return out;
}

inline cplx theta(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    return theta_eval(z, tau, policy).value;
}

/// theta_0(z,tau) = (x;q)(q/x;q), extended to Im tau < 0 by
/// theta_0(z,tau) = 1/theta_0(z - tau, -tau).
inline Evaluation theta0_eval(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (tau.imag() == 0.0)
        throw domain_error("theta0: tau must not be real");
    if (tau.imag() < 0.0) {
        auto e = detail::invert(theta0_eval(z - tau, -tau, policy));
        e.method = "reflected-product";
        return e;
    }
    // 1-periodic in z: reduce the real part.
    const cplx zr{z.real() - std::floor(z.real()), z.imag()};
    const cplx x = expi2pi(zr), q = expi2pi(tau);
    const auto a = detail::qpoch_direct(x, q, policy);
    const auto b = detail::qpoch_direct(q / x, q, policy);
    return detail::combine(a, b, false, "product");
}

inline cplx theta0(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    return theta0_eval(z, tau, policy).value;
}

namespace detail
{

// sin(w) = e^{log_scale} * factor with |factor| <= 1, avoiding overflow.
struct TrigSplit {
    cplx log_scale;
    cplx factor;
};

inline TrigSplit split_sin(cplx w)
{
    if (w.imag() >= 0.0)
        return {-I * w, (std::exp(2.0 * I * w) - 1.0) / (2.0 * I)};
    return {I * w, (1.0 - std::exp(-2.0 * I * w)) / (2.0 * I)};
}

inline TrigSplit split_cos(cplx w)
{
    if (w.imag() >= 0.0)
        return {-I * w, (std::exp(2.0 * I * w) + 1.0) / 2.0};
    return {I * w, (1.0 + std::exp(-2.0 * I * w)) / 2.0};
}

} // namespace detail

/// theta_0 through its logarithmic Fourier series, valid in the strip
/// 0 < Im z < Im tau.
inline Evaluation theta0_series_eval(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (!(tau.imag() > 0.0) || !(z.imag() > 0.0) || !(z.imag() < tau.imag()))
        throw domain_error("theta0_series: requires 0 < Im z < Im tau");
    Evaluation out;
    out.method = "series";
    const cplx u = 2.0 * z - tau;
    const real margin = tau.imag() - std::abs(u.imag());
    const real c_tau = 1.0 - std::exp(-2.0 * pi * tau.imag());
    const real decay = std::exp(-pi * margin);
    cplx sum{0.0, 0.0};
    std::size_t j = 1;
    for (;; ++j) {
        if (j > policy.max_terms)
            throw convergence_error("theta0_series: max_terms exceeded");
        const auto cs = detail::split_cos(pi * static_cast<real>(j) * u);
        const auto sn = detail::split_sin(pi * static_cast<real>(j) * tau);
        const cplx term = std::exp(cs.log_scale - sn.log_scale) * cs.factor / (sn.factor * static_cast<real>(j));
        const real envelope = 2.0 * std::pow(decay, static_cast<real>(j)) / (j * c_tau);
        if (std::abs(term) > 1.0001 * envelope + 1e-300)
            throw convergence_error("theta0_series: term exceeded its monotone envelope");
        sum += term;
        const real tail = 2.0 * std::pow(decay, j + 1.0) / ((j + 1.0) * c_tau * (1.0 - decay));
        if (tail < policy.tol / 2.0) {
            out.tail_bound = tail;
            break;
        }
    }
    out.terms = j;
    out.value = std::exp(-I * sum);
    return out;
}

inline cplx theta0_series(cplx z, cplx tau, const TruncationPolicy &policy = {})
{
    return theta0_series_eval(z, tau, policy).value;
}

/// eta(tau) = e^{i pi tau / 12} (q;q).
inline Evaluation dedekind_eta_eval(cplx tau, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (!(tau.imag() > 0.0))
        throw domain_error("dedekind_eta: requires Im tau > 0");
    const cplx q = expi2pi(tau);
    auto e = detail::qpoch_direct(q, q, policy);
    e.value *= expipi(tau / 12.0);
    return e;
}

inline cplx dedekind_eta(cplx tau, const TruncationPolicy &policy = {})
{
    return dedekind_eta_eval(tau, policy).value;
}

} // namespace egamma

#endif
