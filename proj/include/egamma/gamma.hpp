// The elliptic gamma function
//
//   Gamma(z,tau,sigma) = (qr/x;q,r) / (x;q,r),   x = e^{2 pi i z}
//
// evaluated by the double product (with the lower half-plane extension
// Gamma(z,-tau,sigma) = 1/Gamma(z+tau,tau,sigma)) or by the summation
// formula
//
//   Gamma = exp(-(i/2) sum_j sin(pi j(2z-tau-sigma)) / (j sin(pi j tau) sin(pi j sigma)))
//
// which also converges for one real period of good Diophantine type.

#ifndef EGAMMA_GAMMA_HPP
#define EGAMMA_GAMMA_HPP

#include <egamma/core.hpp>
#include <egamma/diophantine.hpp>
#include <egamma/qseries.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace egamma
{

enum class PeriodClass { upper, lower, real };

inline PeriodClass classify_period(cplx p)
{
    if (p.imag() > 0.0)
        return PeriodClass::upper;
    if (p.imag() < 0.0)
        return PeriodClass::lower;
    return PeriodClass::real;
}

inline std::string to_string(PeriodClass c)
{
    switch (c) {
    case PeriodClass::upper:
        return "upper";
    case PeriodClass::lower:
        return "lower";
    case PeriodClass::real:
        return "real";
    }
    return "real";
}

struct PeriodPair {
    cplx tau;
    cplx sigma;
    PeriodClass tau_class;
    PeriodClass sigma_class;

    PeriodPair(cplx t, cplx s) : tau(t), sigma(s), tau_class(classify_period(t)), sigma_class(classify_period(s)) {}

    bool both_nonreal() const { return tau_class != PeriodClass::real && sigma_class != PeriodClass::real; }
    PeriodPair swapped() const { return {sigma, tau}; }
};

struct RegionVerdict {
    bool product_ok = false;
    bool series_ok = false;
    real strip_margin = 0.0;
};

/// Points closer than this to the zero/pole lattice are flagged.
inline constexpr real lattice_radius = 1e-12;

namespace detail
{

// Number of (j,k) >= 0 with z + j tau + k sigma within `radius` of an
// integer. Requires Im tau, Im sigma > 0.
inline int lattice_hits(cplx z, cplx tau, cplx sigma, real radius)
{
    if (z.imag() > radius)
        return 0;
    const real a = tau.imag(), b = sigma.imag();
    int hits = 0;
    for (long j = 0; j * a <= -z.imag() + radius; ++j) {
        const real rest = -z.imag() - j * a;
        const long k0 = std::lround(rest / b);
        for (long k = std::max(0L, k0 - 1); k <= k0 + 1; ++k) {
            const cplx w = z + static_cast<real>(j) * tau + static_cast<real>(k) * sigma;
            if (std::abs(w - std::round(w.real())) < radius)
                ++hits;
        }
    }
    return hits;
}

inline cplx reduce_real(cplx z)
{
    return {z.real() - std::floor(z.real()), z.imag()};
}

} // namespace detail

/// Gamma(z,tau,sigma) for non-real periods.
inline Evaluation gamma_ell_eval(cplx z, cplx tau, cplx sigma, const TruncationPolicy &policy = {})
{
    policy.validate();
    if (tau.imag() == 0.0 || sigma.imag() == 0.0)
        throw domain_error("gamma_ell: real period; use gamma_series");
    if (tau.imag() < 0.0) {
        auto e = detail::invert(gamma_ell_eval(z - tau, -tau, sigma, policy));
        e.method = "reflected-product";
        return e;
    }
    if (sigma.imag() < 0.0) {
        auto e = detail::invert(gamma_ell_eval(z - sigma, tau, -sigma, policy));
        e.method = "reflected-product";
        return e;
    }

    Evaluation out;
    out.method = "product";
    const int poles = detail::lattice_hits(z, tau, sigma, lattice_radius);
    const int zeros = detail::lattice_hits(tau + sigma - z, tau, sigma, lattice_radius);
    if (poles > 0) {
        out.value = cplx{std::numeric_limits<real>::infinity(), 0.0};
        out.singularity = Singularity::pole;
        out.order = poles;
        return out;
    }
    if (zeros > 0) {
        out.value = cplx{0.0, 0.0};
        out.singularity = Singularity::zero;
        out.order = zeros;
        return out;
    }
    const cplx x = expi2pi(detail::reduce_real(z));
    const cplx q = expi2pi(tau), r = expi2pi(sigma);
    const auto num = detail::qpoch2_direct(q * r / x, q, r, policy);
    const auto den = detail::qpoch2_direct(x, q, r, policy);
    return detail::combine(num, den, true, "product");
}

inline Evaluation gamma_ell_eval(cplx z, const PeriodPair &p, const TruncationPolicy &policy = {})
{
    return gamma_ell_eval(z, p.tau, p.sigma, policy);
}

inline cplx gamma_ell(cplx z, cplx tau, cplx sigma, const TruncationPolicy &policy = {})
{
    return gamma_ell_eval(z, tau, sigma, policy).value;
}

inline cplx gamma_ell(cplx z, const PeriodPair &p, const TruncationPolicy &policy = {})
{
    return gamma_ell_eval(z, p.tau, p.sigma, policy).value;
}

inline RegionVerdict region_classify(cplx z, cplx tau, cplx sigma)
{
    RegionVerdict v;
    const PeriodPair p(tau, sigma);
    v.strip_margin = std::abs(tau.imag()) + std::abs(sigma.imag()) - std::abs((2.0 * z - tau - sigma).imag());
    v.product_ok = p.both_nonreal();
    if (p.tau_class == PeriodClass::real && p.sigma_class == PeriodClass::real)
        v.series_ok = false;
    else if (p.both_nonreal())
        v.series_ok = v.strip_margin > 0.0;
    else {
        const real t = p.tau_class == PeriodClass::real ? tau.real() : sigma.real();
        v.series_ok = v.strip_margin > 0.0 && diophantine_check(t).verdict != DiophantineVerdict::rational;
    }
    return v;
}

inline RegionVerdict region_classify(cplx z, const PeriodPair &p)
{
    return region_classify(z, p.tau, p.sigma);
}

/// Consecutive envelope violations tolerated before giving up.
inline constexpr int envelope_patience = 50;

/// Gamma through the summation formula.
inline Evaluation gamma_series_eval(cplx z, cplx tau, cplx sigma, const TruncationPolicy &policy = {})
{
    policy.validate();
    const RegionVerdict region = region_classify(z, tau, sigma);
    if (!region.series_ok)
        throw domain_error("gamma_series: point outside the region of absolute convergence");
    const PeriodPair p(tau, sigma);
    const real m = region.strip_margin;
    const cplx u = 2.0 * z - tau - sigma;
    const real decay = std::exp(-pi * m);

    Evaluation out;
    cplx sum{0.0, 0.0};

    auto term_at = [&](std::size_t j) {
        const real pj = pi * static_cast<real>(j);
        const auto a = detail::split_sin(pj * u);
        const auto b = detail::split_sin(pj * tau);
        const auto c = detail::split_sin(pj * sigma);
        return std::exp(a.log_scale - b.log_scale - c.log_scale) * a.factor /
               (b.factor * c.factor * static_cast<real>(j));
    };

    if (p.both_nonreal()) {
        out.method = "series";
        const real at = std::abs(tau.imag()), as = std::abs(sigma.imag());
        auto c_of = [](real im, real j) { return 1.0 - std::exp(-2.0 * pi * j * im); };
        int violations = 0;
        std::size_t j = 1;
        for (;; ++j) {
            if (j > policy.max_terms)
                throw convergence_error("gamma_series: max_terms exceeded");
            const cplx t = term_at(j);
            const real jr = static_cast<real>(j);
            const real envelope = 4.0 * std::pow(decay, jr) / (jr * c_of(at, jr) * c_of(as, jr));
            violations = std::abs(t) > envelope * (1.0 + 1e-9) ? violations + 1 : 0;
            if (violations >= envelope_patience)
                throw convergence_error("gamma_series: terms exceed the geometric envelope");
            sum += t;
            const real n = jr + 1.0;
            const real tail = 4.0 * std::pow(decay, n) / (n * c_of(at, n) * c_of(as, n) * (1.0 - decay));
            if (0.5 * tail < policy.tol / 2.0) {
                out.tail_bound = 0.5 * tail;
                break;
            }
        }
        out.terms = j;
    } else {
        // One real period: envelope K j^{alpha-1} e^{-pi j m}.
        out.method = "series-real-period";
        const real t_real = p.tau_class == PeriodClass::real ? tau.real() : sigma.real();
        const auto report = diophantine_check(t_real);
        out.unverified_envelope = report.verdict != DiophantineVerdict::in_X_likely;
        const real alpha = report.alpha_estimate + 0.5;
        auto shape = [&](real j) { return std::pow(j, alpha - 1.0) * std::pow(decay, j); };

        constexpr std::size_t calibration = 8;
        real k_cal = 0.0, k_eff = 0.0;
        int violations = 0;
        std::size_t j = 1;
        for (;; ++j) {
            if (j > policy.max_terms)
                throw convergence_error("gamma_series: max_terms exceeded");
            const cplx t = term_at(j);
            const real jr = static_cast<real>(j);
            const real ratio = std::abs(t) / shape(jr);
            if (j <= calibration) {
                k_cal = std::max(k_cal, 2.0 * ratio);
                k_eff = k_cal;
            } else {
                violations = ratio > k_cal ? violations + 1 : 0;
                if (violations >= envelope_patience)
                    throw convergence_error("gamma_series: terms exceed the Diophantine envelope");
                k_eff = std::max(k_eff, ratio);
            }
            sum += t;
            if (j < calibration)
                continue;
            // Past the peak the envelope ratio is decreasing, bounding the tail geometrically.
            const real n = jr + 1.0;
            const real rho = std::pow((n + 1.0) / n, alpha - 1.0) * decay;
            if (rho < 1.0 && n >= (alpha - 1.0) / (pi * m)) {
                const real tail = k_eff * shape(n) / (1.0 - rho);
                if (0.5 * tail < policy.tol / 2.0) {
                    out.tail_bound = 0.5 * tail;
                    break;
                }
            }
        }
        out.terms = j;
    }
    out.value = std::exp(-0.5 * I * sum);
    return out;
}

inline Evaluation gamma_series_eval(cplx z, const PeriodPair &p, const TruncationPolicy &policy = {})
{
    return gamma_series_eval(z, p.tau, p.sigma, policy);
}

inline cplx gamma_series(cplx z, cplx tau, cplx sigma, const TruncationPolicy &policy = {})
{
    return gamma_series_eval(z, tau, sigma, policy).value;
}

inline cplx gamma_series(cplx z, const PeriodPair &p, const TruncationPolicy &policy = {})
{
    return gamma_series_eval(z, p.tau, p.sigma, policy).value;
}

/// gamma_series at tau = tau_real + i eps for each eps in the sequence.
inline std::vector<std::pair<real, cplx>> wall_crossing_scan(cplx z, real tau_real, cplx sigma,
                                                             const std::vector<real> &eps_sequence,
                                                             const TruncationPolicy &policy = {})
{
    if (diophantine_check(tau_real).verdict == DiophantineVerdict::rational)
        throw domain_error("wall_crossing_scan: tau is rational");
    if (!(std::abs((2.0 * z - sigma).imag()) < std::abs(sigma.imag())))
        throw domain_error("wall_crossing_scan: requires |Im(2z - sigma)| < |Im sigma|");
    std::vector<std::pair<real, cplx>> out;
    out.reserve(eps_sequence.size());
    for (real eps : eps_sequence)
        out.emplace_back(eps, gamma_series(z, cplx{tau_real, eps}, sigma, policy));
    return out;
}

/// Q(z;tau,sigma) over any field type (complex numbers or exact rational
/// functions).
template <class T>
T q_polynomial(const T &z, const T &tau, const T &sigma)
{
    const T one(1);
    const T ts = tau * sigma;
    const T s = tau + sigma - one;
    return z * z * z / (T(3) * ts) - s * z * z / (T(2) * ts) +
           (tau * tau + sigma * sigma + T(3) * ts - T(3) * tau - T(3) * sigma + one) * z / (T(6) * ts) +
           s * (one / tau + one / sigma - one) / T(12);
}

/// P(z,tau,sigma) = -z^2/(tau sigma) + z(1/tau + 1/sigma) - sigma/(6 tau) - tau/(6 sigma) - 1/2.
template <class T>
T p_polynomial(const T &z, const T &tau, const T &sigma)
{
    const T one(1);
    return -(z * z) / (tau * sigma) + z * (one / tau + one / sigma) - sigma / (T(6) * tau) - tau / (T(6) * sigma) -
           one / T(2);
}

inline cplx q_polynomial(cplx z, cplx tau, cplx sigma)
{
    if (tau == 0.0 || sigma == 0.0)
        throw domain_error("q_polynomial: zero period");
    return q_polynomial<cplx>(z, tau, sigma);
}

inline cplx p_polynomial(cplx z, cplx tau, cplx sigma)
{
    if (tau == 0.0 || sigma == 0.0)
        throw domain_error("p_polynomial: zero period");
    return p_polynomial<cplx>(z, tau, sigma);
}

struct Window {
    real re_lo, re_hi, im_lo, im_hi;

    bool contains(cplx z) const
    {
        return z.real() >= re_lo && z.real() < re_hi && z.imag() >= im_lo && z.imag() < im_hi;
    }
};

struct LatticePoint {
    cplx z;
    int j;
    int k;
    long l;
};

struct ZeroPoleCensus {
    std::vector<LatticePoint> zeros;
    std::vector<LatticePoint> poles;
};

/// Zeros (j+1)tau + (k+1)sigma + l and poles -j tau - k sigma + l inside the window.
inline ZeroPoleCensus zeros_poles(cplx tau, cplx sigma, const Window &w, int max_index)
{
    if (!(tau.imag() > 0.0) || !(sigma.imag() > 0.0))
        throw domain_error("zeros_poles: requires Im tau > 0 and Im sigma > 0");
    ZeroPoleCensus out;
    auto collect = [&w](cplx base, int j, int k, std::vector<LatticePoint> &into) {
        const long lo = static_cast<long>(std::ceil(w.re_lo - base.real())) - 1;
        const long hi = static_cast<long>(std::floor(w.re_hi - base.real())) + 1;
        for (long l = lo; l <= hi; ++l) {
            const cplx z = base + static_cast<real>(l);
            if (w.contains(z))
                into.push_back({z, j, k, l});
        }
    };
    for (int j = 0; j <= max_index; ++j) {
        for (int k = 0; k <= max_index; ++k) {
            const real jr = j, kr = k;
            collect((jr + 1.0) * tau + (kr + 1.0) * sigma, j, k, out.zeros);
            collect(-jr * tau - kr * sigma, j, k, out.poles);
        }
    }
    return out;
}

/// Winding number of f around the window boundary, traced counterclockwise
/// with phase unwrapping; sampling doubles until every phase step is small.
template <class F>
int winding_number(F &&f, const Window &w, int samples_per_side = 64)
{
    const cplx corners[4] = {{w.re_lo, w.im_lo}, {w.re_hi, w.im_lo}, {w.re_hi, w.im_hi}, {w.re_lo, w.im_hi}};
    for (int n = samples_per_side; n <= (1 << 15); n *= 2) {
        real total = 0.0;
        bool fine = true;
        cplx prev = f(corners[0]);
        for (int side = 0; side < 4 && fine; ++side) {
            const cplx a = corners[side], b = corners[(side + 1) % 4];
            for (int i = 1; i <= n; ++i) {
                const cplx cur = f(a + (b - a) * (static_cast<real>(i) / n));
                const real step = std::arg(cur / prev);
                if (std::abs(step) > pi / 4.0) {
                    fine = false;
                    break;
                }
                total += step;
                prev = cur;
            }
        }
        if (fine)
            return static_cast<int>(std::lround(total / (2.0 * pi)));
    }
    throw convergence_error("winding_number: phase could not be resolved on the boundary");
}

} // namespace egamma

#endif
