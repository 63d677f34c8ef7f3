// Diophantine quality of a real period, used to gate and bound the
// elliptic gamma series when one period lies on the real axis.
//
// The best approximations p/j of tau are its continued fraction
// convergents, so min_k |j tau - k| over j <= j_max is read off the
// convergent denominators. The double is expanded exactly as a rational
// number; a convergent whose gap is below the rounding level of the input
// is treated as an exact hit.

#ifndef EGAMMA_DIOPHANTINE_HPP
#define EGAMMA_DIOPHANTINE_HPP

#include <egamma/core.hpp>

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace egamma
{

enum class DiophantineVerdict { in_X_likely, rational, inconclusive };

inline std::string to_string(DiophantineVerdict v)
{
    switch (v) {
    case DiophantineVerdict::in_X_likely:
        return "in_X_likely";
    case DiophantineVerdict::rational:
        return "rational";
    case DiophantineVerdict::inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

struct DiophantineReport {
    real tau = 0.0;
    real alpha_estimate = 1.0;
    /// (j, min_k |j tau - k|) at each convergent denominator j <= j_max.
    std::vector<std::pair<long long, real>> min_gap_seq;
    std::vector<long long> partial_quotients;
    DiophantineVerdict verdict = DiophantineVerdict::inconclusive;
};

/// Exponents alpha below this are reported as likely members of X.
inline constexpr real diophantine_alpha_cutoff = 2.0;

inline DiophantineReport diophantine_check(real tau, long long j_max = 100000)
{
    if (j_max < 10)
        throw domain_error("diophantine_check: j_max must be at least 10");
    if (!std::isfinite(tau))
        throw domain_error("diophantine_check: tau must be finite");

    DiophantineReport rep;
    rep.tau = tau;
    const mpq_class exact(tau);
    const real eps = std::numeric_limits<real>::epsilon();

    // Convergent recurrences h_n = a_n h_{n-1} + h_{n-2}, k_n likewise.
    mpz_class h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
    mpq_class rest = exact;
    bool rational = false;
    real alpha = 1.0;
    bool saw_large = false;

    for (int step = 0; step < 200; ++step) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        const mpz_class h = a * h_prev + h_prev2;
        const mpz_class k = a * k_prev + k_prev2;
        if (k > mpz_class(std::to_string(j_max)))
            break;
        rep.partial_quotients.push_back(a.get_si());
        const mpq_class gap_q = abs(mpq_class(k) * exact - mpq_class(h));
        const real gap = gap_q.get_d();
        const long long j = k.get_si();
        rep.min_gap_seq.emplace_back(j, gap);

        if (gap == 0.0 || gap < 8.0 * static_cast<real>(j) * eps * std::max(1.0, std::abs(tau))) {
            rational = true;
            break;
        }
        if (j >= 10) {
            alpha = std::max(alpha, -std::log(gap) / std::log(static_cast<real>(j)));
            saw_large = true;
        }

        const mpq_class frac = rest - mpq_class(a);
        if (frac == 0) {
            rational = true;
            break;
        }
        rest = 1 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }

    rep.alpha_estimate = alpha;
    if (rational)
        rep.verdict = DiophantineVerdict::rational;
    else if (saw_large && alpha < diophantine_alpha_cutoff)
        rep.verdict = DiophantineVerdict::in_X_likely;
    else
        rep.verdict = DiophantineVerdict::inconclusive;
    return rep;
}

} // namespace egamma

#endif
