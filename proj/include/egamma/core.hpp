// Common numeric types, truncation policy, errors and evaluation records
// shared by the q-series, elliptic gamma, special value and phase modules.

#ifndef EGAMMA_CORE_HPP
#define EGAMMA_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace egamma
{

using real = double;
using cplx = std::complex<double>;

inline constexpr real pi = std::numbers::pi_v<real>;
inline constexpr cplx I{0.0, 1.0};

/// Raised when an argument lies outside the domain of an operation.
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Raised when a series or product fails to reach the requested tolerance
/// within the term budget, or when a convergence envelope is violated.
class convergence_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class TailMode { geometric, none };

/// Truncation control for every product and series in the library.
struct TruncationPolicy {
    real tol = 1e-12;
    std::size_t max_terms = 1'000'000;
    TailMode tail_bound_mode = TailMode::geometric;

    void validate() const
    {
        if (!(tol > 0.0))
            throw domain_error("TruncationPolicy: tol must be positive");
        if (max_terms == 0)
            throw domain_error("TruncationPolicy: max_terms must be positive");
    }
};

enum class Singularity { none, zero, pole };

/// A value together with how it was obtained.
struct Evaluation {
    cplx value{1.0, 0.0};
    std::string method;
    std::size_t terms = 0;
    real tail_bound = 0.0;
    Singularity singularity = Singularity::none;
    int order = 0;
    bool unverified_envelope = false;

    bool singular() const { return singularity != Singularity::none; }
};

// e^{2 pi i w}
inline cplx expi2pi(cplx w)
{
    return std::exp(cplx{-2.0 * pi * w.imag(), 2.0 * pi * w.real()});
}

// e^{pi i w}
inline cplx expipi(cplx w)
{
    return std::exp(cplx{-pi * w.imag(), pi * w.real()});
}

inline bool is_finite(cplx c)
{
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

/// Mixed absolute/relative residual used by all identity checks:
/// |lhs - rhs| / max(1, |rhs|).
inline real mixed_residual(cplx lhs, cplx rhs)
{
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

} // namespace egamma

#endif
