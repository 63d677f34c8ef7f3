#include "support.hpp"

#include <egamma/gamma.hpp>
#include <egamma/identities.hpp>

using namespace egamma;
using egamma::testing::Sampler;

namespace
{

const TruncationPolicy fine{1e-15};

// z in [0,1) x (0.1, 0.9) Im(tau + sigma)
cplx sample_z(Sampler &s, cplx tau, cplx sigma)
{
    const real h = (tau + sigma).imag();
    return {s.uniform(0.0, 1.0), s.uniform(0.1 * h, 0.9 * h)};
}

// Periods for the modular relations: tau, sigma, and every derived period
// keep |Im| >= 0.15.
std::pair<cplx, cplx> modular_periods(Sampler &s)
{
    for (;;) {
        const cplx tau = s.period(0.4, 1.2), sigma = s.period(0.4, 1.2);
        const cplx derived[] = {tau / sigma, -1.0 / sigma, -1.0 / tau, -sigma / tau, tau + sigma};
        bool ok = true;
        for (cplx d : derived)
            ok = ok && std::abs(d.imag()) >= 0.15;
        if (ok)
            return {tau, sigma};
    }
}

} // namespace

TEST_CASE("gamma_ell examples", "[gamma][eval]")
{
    const cplx tau{0.0, 0.5}, sigma{0.0, 0.3};
    CHECK_CLOSE(gamma_ell((tau + sigma) / 2.0, tau, sigma), (cplx{1.0, 0.0}), 1e-13);
    const cplx z{0.17, 0.05};
    CHECK_CLOSE(gamma_ell(z + 1.0, tau, sigma), gamma_ell(z, tau, sigma), 1e-13);
    CHECK_CLOSE(gamma_ell(cplx{0.2, 0.1}, cplx{0.4, 0.6}, cplx{0.1, 0.5}, fine),
                (cplx{0.85276560759827675046, 0.5332604337884411969}), 1e-14);
    CHECK_CLOSE(gamma_ell(z, PeriodPair(tau, sigma)), gamma_ell(z, sigma, tau), 1e-13);
}

TEST_CASE("gamma_ell domain and flags", "[gamma][eval]")
{
    const cplx tau{0.0, 0.5}, sigma{0.0, 0.3};
    CHECK_THROWS_AS(gamma_ell(0.2, 0.5, sigma), domain_error);

    const auto pole = gamma_ell_eval(0.0, tau, sigma);
    CHECK(pole.singularity == Singularity::pole);
    CHECK(pole.order == 1);
    CHECK(gamma_ell_eval(-tau - 2.0 * sigma + 3.0, tau, sigma).singularity == Singularity::pole);

    const auto zero = gamma_ell_eval(tau + sigma, tau, sigma);
    CHECK(zero.singularity == Singularity::zero);
    CHECK(gamma_ell_eval(2.0 * tau + sigma - 1.0, tau, sigma).singularity == Singularity::zero);

    // Commensurate periods give a double pole at -tau - ... coincidences.
    const auto dbl = gamma_ell_eval(cplx{0.0, -1.0}, cplx{0.0, 0.5}, cplx{0.0, 1.0});
    CHECK(dbl.order == 2);

    // Just outside the flagging radius the value is finite.
    CHECK_FALSE(gamma_ell_eval(cplx{1e-9, 0.0}, tau, sigma).singular());
}

TEST_CASE("PeriodPair classification", "[gamma]")
{
    const PeriodPair p(cplx{0.3, -0.2}, 1.5);
    CHECK(p.tau_class == PeriodClass::lower);
    CHECK(p.sigma_class == PeriodClass::real);
    CHECK_FALSE(p.both_nonreal());
    CHECK(PeriodPair(I, I).tau_class == PeriodClass::upper);
}

TEST_CASE("diophantine_check", "[gamma][diophantine]")
{
    const auto half = diophantine_check(1.5);
    CHECK(half.verdict == DiophantineVerdict::rational);
    REQUIRE_FALSE(half.min_gap_seq.empty());
    CHECK(half.min_gap_seq.back().first == 2);
    CHECK(half.min_gap_seq.back().second == 0.0);

    CHECK(diophantine_check(0.1).verdict == DiophantineVerdict::rational);
    CHECK(diophantine_check(2.375).verdict == DiophantineVerdict::rational);

    const real golden = (1.0 + std::sqrt(5.0)) / 2.0;
    const auto g = diophantine_check(golden);
    CHECK(g.verdict == DiophantineVerdict::in_X_likely);
    CHECK(g.alpha_estimate <= 1.4);
    for (std::size_t i = 0; i < g.partial_quotients.size(); ++i)
        CHECK(g.partial_quotients[i] == 1);

    const auto r2 = diophantine_check(std::sqrt(2.0));
    CHECK(r2.verdict == DiophantineVerdict::in_X_likely);
    CHECK(r2.partial_quotients.front() == 1);
    for (std::size_t i = 1; i < r2.partial_quotients.size(); ++i)
        CHECK(r2.partial_quotients[i] == 2);
    for (const auto &[j, gap] : r2.min_gap_seq)
        CHECK(gap * static_cast<real>(j) > 0.3);

    CHECK_THROWS_AS(diophantine_check(0.5, 5), domain_error);
}

TEST_CASE("region_classify", "[gamma][region]")
{
    const auto c = region_classify(I, I, I);
    CHECK(c.strip_margin == 2.0);
    CHECK(c.series_ok);
    CHECK(c.product_ok);

    const auto b = region_classify(2.0 * I, I, I);
    CHECK(b.strip_margin == 0.0);
    CHECK_FALSE(b.series_ok);

    const real r2 = std::sqrt(2.0);
    const cplx sigma{0.0, 0.4};
    // z = 0.5 sits on the boundary |Im(2z - sigma)| = |Im sigma| of the strict inequality.
    const auto edge = region_classify(0.5, r2, sigma);
    CHECK(edge.strip_margin == Catch::Approx(0.0).margin(1e-15));
    CHECK_FALSE(edge.series_ok);
    const auto inside = region_classify(cplx{0.5, 0.05}, r2, sigma);
    CHECK(inside.series_ok);
    CHECK_FALSE(inside.product_ok);

    CHECK_FALSE(region_classify(cplx{0.5, 0.05}, 1.5, sigma).series_ok);
    CHECK_FALSE(region_classify(0.1, 1.5, r2).series_ok);
}

TEST_CASE("gamma_series examples", "[gamma][series]")
{
    const cplx tau{0.0, 0.5}, sigma{0.0, 0.3};
    CHECK(gamma_series((tau + sigma) / 2.0, tau, sigma) == cplx{1.0, 0.0});
    CHECK_CLOSE(gamma_series(cplx{0.2, 0.1}, tau, sigma), gamma_ell(cplx{0.2, 0.1}, tau, sigma), 1e-11);
    CHECK_THROWS_AS(gamma_series(2.0 * (tau + sigma), tau, sigma), domain_error);

    const auto e = gamma_series_eval(cplx{0.2, 0.1}, tau, sigma);
    CHECK(e.method == "series");
    CHECK(e.tail_bound < 1e-12);
}

TEST_CASE("gamma_series with a real period", "[gamma][series][wall]")
{
    const real r2 = std::sqrt(2.0);
    const cplx z{0.5, 0.05}, sigma{0.0, 0.4};
    const auto e = gamma_series_eval(z, r2, sigma);
    CHECK(e.method == "series-real-period");
    CHECK_FALSE(e.unverified_envelope);
    CHECK(is_finite(e.value));

    // Cauchy behaviour as the period approaches the real axis.
    const cplx v0 = e.value;
    real last = 1.0;
    for (real eps : {1e-2, 1e-3, 1e-4}) {
        const real d = std::abs(gamma_series(z, cplx{r2, eps}, sigma) - v0);
        CHECK(d < last);
        last = d;
    }
    CHECK(last < 1e-3);

    // Same value with the roles of the periods exchanged.
    CHECK_CLOSE(gamma_series(z, sigma, r2), v0, 1e-12);
}

TEST_CASE("gamma_series against an oversampled partial sum", "[gamma][series][wall]")
{
    const real r2 = std::sqrt(2.0);
    const cplx sigma{0.0, 0.5};
    const cplx z = sigma / 2.0 + 0.25;
    using lcplx = std::complex<long double>;
    const long double lpi = 3.141592653589793238462643383279502884L;
    const lcplx u = 2.0L * lcplx(z) - lcplx(r2) - lcplx(sigma);
    lcplx sum = 0;
    for (int j = 1; j <= 10000; ++j) {
        const lcplx den = static_cast<long double>(j) * std::sin(lpi * j * lcplx(r2)) * std::sin(lpi * j * lcplx(sigma));
        if (std::abs(den) > 1e4000L)
            break;
        sum += std::sin(lpi * j * u) / den;
    }
    const lcplx ref = std::exp(-0.5L * lcplx(0, 1) * sum);
    CHECK_CLOSE(gamma_series(z, r2, sigma, fine), cplx(ref), 1e-13);
}

TEST_CASE("wall_crossing_scan", "[gamma][wall]")
{
    const real r2 = std::sqrt(2.0);
    const cplx z{0.3, 0.1}, sigma{0.0, 0.5};
    const std::vector<real> eps{1e-2, -1e-2, 1e-3, -1e-3, 0.0};
    const auto scan = wall_crossing_scan(z, r2, sigma, eps);
    REQUIRE(scan.size() == eps.size());
    const cplx v0 = scan.back().second;
    CHECK(std::abs(scan[2].second - v0) < std::abs(scan[0].second - v0));
    CHECK(std::abs(scan[3].second - v0) < std::abs(scan[1].second - v0));

    CHECK_THROWS_AS(wall_crossing_scan(z, 1.5, sigma, eps), domain_error);
    CHECK_THROWS_AS(wall_crossing_scan(cplx{0.3, 0.6}, r2, sigma, eps), domain_error);
}

TEST_CASE("q and p polynomials", "[gamma][modular]")
{
    const cplx tau{0.0, 0.5}, sigma{0.0, 0.3};
    CHECK(std::abs(q_polynomial((tau + sigma - 1.0) / 2.0, tau, sigma)) < 1e-14);
    CHECK_CLOSE(q_polynomial(0.2, tau, sigma), q_polynomial(0.2, sigma, tau), 1e-15);
    CHECK_CLOSE(q_polynomial(0.1, I, 2.0 * I), (cplx{0.539, -0.0425}), 1e-15);

    CHECK_CLOSE(p_polynomial(0.3, I, 2.0 * I), p_polynomial(0.3, 2.0 * I, I), 1e-15);
    CHECK_CLOSE(p_polynomial(0.0, I, I), -5.0 / 6.0, 1e-15);

    // Q(z+tau;tau,sigma,rho) - Q(z;tau,sigma,rho) = P(z;sigma,rho) with
    // Q(z;tau,sigma,rho) = Q(-z/rho;-tau/rho,-sigma/rho) and rho = -1.
    const cplx z = 0.2, t{0.0, 0.6}, s{0.0, 0.4};
    const cplx rho = -1.0;
    auto q3 = [&](cplx w) { return q_polynomial(-w / rho, -t / rho, -s / rho); };
    CHECK_CLOSE(q3(z + t) - q3(z), p_polynomial(z, s, rho), 1e-13);
    CHECK_CLOSE(q_polynomial(z - 1.0, t, s) - q_polynomial(z, t, s), p_polynomial(z, t, s), 1e-13);

    CHECK_THROWS_AS(q_polynomial(0.1, 0.0, I), domain_error);
    CHECK_THROWS_AS(p_polynomial(0.1, I, 0.0), domain_error);
}

TEST_CASE("zero and pole census", "[gamma][zeros]")
{
    const cplx tau{0.0, 0.5}, sigma{0.0, 0.3};
    const auto c = zeros_poles(tau, sigma, Window{-0.5, 0.5, -1.0, 1.0}, 4);
    auto has = [](const std::vector<LatticePoint> &v, cplx z) {
        for (const auto &p : v)
            if (std::abs(p.z - z) < 1e-14)
                return true;
        return false;
    };
    CHECK(has(c.poles, 0.0));
    CHECK(has(c.zeros, tau + sigma));
    CHECK_FALSE(has(c.zeros, 0.0));
    CHECK_THROWS_AS(zeros_poles(-tau, sigma, Window{0, 1, 0, 1}, 2), domain_error);
}

TEST_CASE("census matches the argument principle", "[gamma][zeros][property]")
{
    auto count = [](cplx tau, cplx sigma, const Window &w) {
        const auto c = zeros_poles(tau, sigma, w, 40);
        const int expected = static_cast<int>(c.zeros.size()) - static_cast<int>(c.poles.size());
        const int wind = winding_number([&](cplx z) { return gamma_ell(z, tau, sigma); }, w);
        return std::pair{expected, wind};
    };

    {
        const auto [expected, wind] = count(cplx{0.0, 0.5}, cplx{0.0, 0.3}, Window{-0.3, 0.7, 0.1, 1.2});
        CHECK(expected == 2);
        CHECK(wind == expected);
    }

    Sampler s(99);
    int checked = 0;
    while (checked < 5) {
        const cplx tau = s.period(0.3, 0.8), sigma = s.period(0.3, 0.8);
        const real x0 = s.uniform(-1.0, 0.0), y0 = s.uniform(-1.2, 0.2);
        const Window w{x0, x0 + 1.0, y0, y0 + 1.4};
        // Keep the boundary at least 0.02 from every lattice point.
        const auto c = zeros_poles(tau, sigma, Window{x0 - 0.1, x0 + 1.1, y0 - 0.1, y0 + 1.5}, 40);
        bool clear = true;
        for (const auto *v : {&c.zeros, &c.poles})
            for (const auto &p : *v)
                clear = clear && std::abs(p.z.real() - w.re_lo) > 0.02 && std::abs(p.z.real() - w.re_hi) > 0.02 &&
                        std::abs(p.z.imag() - w.im_lo) > 0.02 && std::abs(p.z.imag() - w.im_hi) > 0.02;
        if (!clear)
            continue;
        const auto [expected, wind] = count(tau, sigma, w);
        INFO("tau=" << egamma::testing::str(tau) << " sigma=" << egamma::testing::str(sigma));
        CHECK(wind == expected);
        ++checked;
    }
}

TEST_CASE("identity residual examples", "[gamma][identities]")
{
    const auto a = identity_residual(IdentityName::shift_sigma, cplx{0.2, 0.1}, cplx{0.0, 0.6}, cplx{0.0, 0.4});
    CHECK(a.residual < 1e-10);
    CHECK(a.name == "shift_sigma");

    const auto b = identity_residual(IdentityName::mod_tau_plus_sigma, cplx{0.15, 0.1}, cplx{0.0, 0.5},
                                     cplx{0.0, 0.3});
    CHECK(b.residual < 1e-10);

    const auto c = identity_residual(IdentityName::reflect_full, cplx{0.2, 0.2}, cplx{0.0, 0.7}, cplx{0.0, 0.4});
    CHECK(c.residual < 1e-10);

    const auto skipped = identity_residual(IdentityName::symmetry, 0.0, cplx{0.0, 0.7}, cplx{0.0, 0.4});
    CHECK(skipped.skipped);
    CHECK(skipped.passed(1e-10));

    try {
        identity_residual(IdentityName::mod_sl3_third, 0.1, cplx{0.0, 0.5}, cplx{0.0, 0.3});
        FAIL("expected a domain error");
    } catch (const domain_error &e) {
        CHECK(std::string(e.what()).find("Gamma(z/sigma,tau/sigma,-1/sigma)") != std::string::npos);
    }

    CHECK(identity_from_string("mod_sl3_fourth") == IdentityName::mod_sl3_fourth);
    CHECK_FALSE(identity_from_string("nope").has_value());
}

TEST_CASE("characterization and elementary identities", "[gamma][identities][property]")
{
    Sampler s(2024);
    for (int i = 0; i < 100; ++i) {
        const cplx tau = s.period(0.3, 1.5), sigma = s.period(0.3, 1.5);
        const cplx z = sample_z(s, tau, sigma);
        for (auto name : {IdentityName::char_theorem, IdentityName::shift_sigma, IdentityName::shift_tau,
                          IdentityName::symmetry, IdentityName::periodicity, IdentityName::reflect_sigma,
                          IdentityName::reflect_tau, IdentityName::reflect_full}) {
            const auto r = identity_residual(name, z, tau, sigma);
            INFO(r.name << " z=" << egamma::testing::str(z));
            CHECK(r.residual < 1e-10);
        }
    }
}

TEST_CASE("modular three-term relations", "[gamma][identities][modular][property]")
{
    Sampler s(4);
    for (int i = 0; i < 50; ++i) {
        const auto [tau, sigma] = modular_periods(s);
        const cplx z = sample_z(s, tau, sigma);
        for (auto name : {IdentityName::mod_tau_plus_1, IdentityName::mod_tau_plus_sigma, IdentityName::mod_sl3_third,
                          IdentityName::mod_sl3_fourth}) {
            const auto r = identity_residual(name, z, tau, sigma);
            INFO(r.name << " z=" << egamma::testing::str(z) << " tau=" << egamma::testing::str(tau)
                        << " sigma=" << egamma::testing::str(sigma));
            CHECK(r.residual < 1e-9);
        }
    }
}

TEST_CASE("extended range laws", "[gamma][extended][property]")
{
    Sampler s(6);
    for (int i = 0; i < 50; ++i) {
        const cplx tau = s.period(0.3, 1.5), sigma = s.period(0.3, 1.5);
        const cplx z = sample_z(s, tau, sigma);
        CHECK_CLOSE(gamma_ell(z, -tau, sigma) * gamma_ell(z + tau, tau, sigma), (cplx{1.0, 0.0}), 1e-10);
        CHECK_CLOSE(gamma_ell(z, tau, -sigma) * gamma_ell(z + sigma, tau, sigma), (cplx{1.0, 0.0}), 1e-10);
        // Both periods reflected: the reflections compose.
        CHECK_CLOSE(gamma_ell(z, -tau, -sigma), gamma_ell(z + tau + sigma, tau, sigma), 1e-10);
    }
}

TEST_CASE("series and product agree", "[gamma][series][property]")
{
    Sampler s(8);
    for (int i = 0; i < 100; ++i) {
        const cplx tau = s.period(0.3, 1.5), sigma = s.period(0.3, 1.5);
        const cplx z = sample_z(s, tau, sigma);
        CHECK_CLOSE(gamma_series(z, tau, sigma), gamma_ell(z, tau, sigma), 1e-10);
    }
}

TEST_CASE("series sign relations", "[gamma][series][property]")
{
    Sampler s(10);
    int checked = 0;
    while (checked < 30) {
        const cplx tau = s.period(0.3, 1.5), sigma = s.period(0.3, 1.5);
        const cplx z = sample_z(s, tau, sigma);
        if (!region_classify(z, -tau, sigma).series_ok || !region_classify(sigma - z, tau, sigma).series_ok)
            continue;
        CHECK_CLOSE(gamma_series(z, -tau, sigma), gamma_series(sigma - z, tau, sigma), 1e-10);
        CHECK_CLOSE(gamma_series(z, -tau, sigma), gamma_ell(z, -tau, sigma), 1e-10);
        ++checked;
    }
}
