// Shared helpers for the unit tests: seeded sampling and residual matchers.

#ifndef EGAMMA_TESTS_SUPPORT_HPP
#define EGAMMA_TESTS_SUPPORT_HPP

#include <catch_amalgamated.hpp>

#include <egamma/core.hpp>

#include <random>
#include <sstream>
#include <string>

namespace egamma::testing
{

class Sampler
{
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    real uniform(real lo, real hi) { return std::uniform_real_distribution<real>(lo, hi)(rng_); }

    cplx disk(real radius)
    {
        const real r = radius * std::sqrt(uniform(0.0, 1.0));
        const real t = uniform(0.0, 2.0 * pi);
        return std::polar(r, t);
    }

    cplx period(real im_lo, real im_hi) { return {uniform(-0.5, 0.5), uniform(im_lo, im_hi)}; }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

inline std::string str(cplx c)
{
    std::ostringstream os;
    os.precision(17);
    os << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
    return os.str();
}

inline real relative(cplx a, cplx b)
{
    return std::abs(a - b) / std::abs(b);
}

} // namespace egamma::testing

#define CHECK_CLOSE(a, b, tol)                                                                                   \
    do {                                                                                                       \
        const auto egamma_a_ = (a);                                                                            \
        const auto egamma_b_ = (b);                                                                            \
        INFO(#a " = " << ::egamma::testing::str(egamma_a_) << ", " #b " = " << ::egamma::testing::str(egamma_b_)); \
        CHECK(::egamma::mixed_residual(egamma_a_, egamma_b_) < (tol));                                          \
    } while (0)

#endif
