#include "support.hpp"

#include <egamma/baxter.hpp>
#include <egamma/suites.hpp>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <sys/wait.h>

using namespace egamma;
using nlohmann::json;

namespace
{

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string &args)
{
    const std::string cmd = std::string(EGAMMA_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

cplx value_of(const json &j) { return {j["value"]["re"].get<double>(), j["value"]["im"].get<double>()}; }

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string line; std::getline(ss, line);)
        out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');)
        out.push_back(f);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

TEST_CASE("Baxter partition function", "[cli][baxter]")
{
    const cplx tau{0.0, 0.8}, sigma{0.0, 0.25};
    CHECK_CLOSE(baxter_z({1.0, 0.1, tau, sigma}), baxter_z({1.0, -0.1, tau, sigma}), 1e-13);

    // mpmath, factor by factor at u = 0
    CHECK_CLOSE(baxter_z({1.0, 0.0, tau, sigma}), cplx(1.04694186462043069974), 1e-12);
    const cplx factored = std::pow(theta0(sigma, 2.0 * tau), 2) * std::pow(gamma_ell(sigma, tau, 4.0 * sigma), 2) /
                          (theta0(tau, 2.0 * tau) * theta0(2.0 * sigma, 2.0 * tau) *
                           std::pow(gamma_ell(3.0 * sigma, tau, 4.0 * sigma), 2));
    CHECK_CLOSE(baxter_z({1.0, 0.0, tau, sigma}), factored, 1e-13);

    const auto r = baxter_free_energy({1.0, cplx{0.2, 0.03}, tau, sigma});
    CHECK_CLOSE(r.free_energy, -std::log(r.z.value), 1e-15);
    const auto r2 = baxter_free_energy({2.5, cplx{0.2, 0.03}, tau, sigma});
    CHECK_CLOSE(r2.free_energy, -std::log(2.5) - std::log(r2.z.value), 1e-15);

    CHECK_THROWS_AS(baxter_free_energy({0.0, 0.1, tau, sigma}), domain_error);
    CHECK_THROWS_AS(baxter_z({1.0, 0.1, -tau, sigma}), domain_error);
    // u = sigma puts theta0(sigma - u, 2 tau) on its zero
    try {
        baxter_z({1.0, sigma, tau, sigma});
        FAIL("expected a domain error");
    } catch (const domain_error &e) {
        CHECK(std::string(e.what()).find("theta0(sigma-u,2tau)") != std::string::npos);
    }
}

TEST_CASE("Baxter evenness at random points", "[cli][baxter][property]")
{
    testing::Sampler s(41);
    for (int i = 0; i < 20; ++i) {
        const cplx tau{s.uniform(-0.2, 0.2), s.uniform(0.6, 1.2)};
        const cplx sigma{s.uniform(-0.1, 0.1), s.uniform(0.15, 0.35)};
        const cplx u{s.uniform(-0.4, 0.4), s.uniform(-0.05, 0.05)};
        CHECK_CLOSE(baxter_z({1.0, u, tau, sigma}), baxter_z({1.0, -u, tau, sigma}), 1e-10);
    }
}

TEST_CASE("suites are deterministic and sample-indexed", "[cli][suites]")
{
    suites::SuiteConfig cfg;
    cfg.samples = 5;
    cfg.seed = 3;
    cfg.tol = 1e-10;
    const auto a = suites::run_suite("gamma-basic", cfg);
    const auto b = suites::run_suite("gamma-basic", cfg);
    REQUIRE(a.records.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a.records[i].index == i);
        CHECK(a.records[i].worst.residual == b.records[i].worst.residual);
        CHECK(a.records[i].worst.point == b.records[i].worst.point);
    }
    CHECK(a.passed());

    cfg.samples = 0;
    CHECK_THROWS_AS(suites::run_suite("gamma-basic", cfg), domain_error);
    cfg.samples = 1;
    CHECK_THROWS_AS(suites::run_suite("no-such-suite", cfg), domain_error);

    // a tolerance below round-off must fail
    cfg.samples = 3;
    cfg.tol = 1e-30;
    CHECK_FALSE(suites::run_suite("theta-basic", cfg).passed());
}

TEST_CASE("every suite passes at its default tolerance", "[cli][suites]")
{
    for (const auto &info : suites::suite_catalog()) {
        suites::SuiteConfig cfg;
        cfg.samples = 10;
        cfg.tol = suites::default_tol(info.name);
        const auto r = suites::run_suite(info.name, cfg);
        INFO(info.name << " max residual " << r.max_residual());
        CHECK(r.passed());
        CHECK_FALSE(r.records.empty());
    }
}

TEST_CASE("cli eval", "[cli][eval]")
{
    const Run r = run("eval gamma --z 0.25+0.15i --tau 0.5i --sigma 0.3i");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    // mpmath product oracle
    CHECK_CLOSE(value_of(j), cplx(0.82380860944963034637, 0.43176244329796333377), 1e-13);
    for (const char *key : {"value", "method", "terms_used", "tail_bound", "tol", "seed"})
        CHECK(j.contains(key));
    CHECK(j["method"] == "product");

    const json center = json::parse(run("eval gamma --z center --tau 0.5i --sigma 0.3i").out);
    CHECK(value_of(center) == cplx(1.0, 0.0));

    const json th = json::parse(run("eval theta --z 0 --tau i").out);
    CHECK(std::abs(value_of(th)) < 1e-15);

    const json psi0 = json::parse(run("eval psi --t 0").out);
    CHECK_CLOSE(value_of(psi0), expipi(1.0 / 12.0), 1e-14);

    for (const char *cmd : {"eval gamma-series --z 0.2+0.1i --tau 0.5i --sigma 0.3i", "eval theta0 --z 0.3 --tau i",
                            "eval eta --tau i", "eval omega --a 0.1 --z 0.3+0.4i --tau i --sigma 0.8i",
                            "eval dilog --x 0.5", "eval q-poly --z 0.1 --tau i --sigma 2i",
                            "eval gamma-trig --s 0.5 --sigma i"}) {
        INFO(cmd);
        const Run x = run(cmd);
        CHECK(x.status == 0);
        CHECK(json::parse(x.out).contains("value"));
    }
    const json eta = json::parse(run("eval eta --tau i").out);
    CHECK_CLOSE(value_of(eta), dedekind_eta(I), 1e-14);
    const json dl = json::parse(run("eval dilog --x 0.5 --tol 1e-16").out);
    CHECK_CLOSE(value_of(dl), cplx(pi * pi / 12.0 - std::pow(std::log(2.0), 2) / 2.0), 1e-14);
}

TEST_CASE("cli complex literals", "[cli][eval]")
{
    auto tau_of = [](const std::string &lit) {
        const json j = json::parse(run("eval q-poly --precision 17 --z 0.1 --sigma i --tau " + lit).out);
        return cplx(j["inputs"]["tau"]["re"].get<double>(), j["inputs"]["tau"]["im"].get<double>());
    };
    CHECK(tau_of("i") == cplx(0.0, 1.0));
    CHECK(tau_of("0.5i") == cplx(0.0, 0.5));
    CHECK(tau_of("0.25+1.5i") == cplx(0.25, 1.5));
    CHECK(tau_of("-0.25-i") == cplx(-0.25, -1.0));
    CHECK(tau_of("1e-1+2e+0i") == cplx(0.1, 2.0));
    CHECK(tau_of("sqrt2") == cplx(std::sqrt(2.0)));
    CHECK(tau_of("golden") == cplx((1.0 + std::sqrt(5.0)) / 2.0));
    CHECK(run("eval q-poly --z 0.1 --sigma i --tau 1+").status == 2);
    CHECK(run("eval q-poly --z 0.1 --sigma i --tau 1+2j").status == 2);
    CHECK(run("eval q-poly --z 0.1 --sigma i --tau center").status == 2);
    CHECK(run("eval theta0 --z 0.1 --tau 0.5").status == 2);
}

TEST_CASE("cli csv output", "[cli][csv]")
{
    const Run r = run("eval gamma --z 0.25+0.15i --tau 0.5i --sigma 0.3i --format csv");
    REQUIRE(r.status == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    const auto header = split(ls[0]);
    CHECK(std::find(header.begin(), header.end(), "value_re") != header.end());
    CHECK(std::find(header.begin(), header.end(), "value_im") != header.end());
    CHECK(header.size() == split(ls[1]).size());
}

TEST_CASE("cli check", "[cli][check]")
{
    CHECK(run("check modular-three-term --samples 50 --tol 1e-9").status == 0);

    const Run c = run("check cocycle-exact");
    REQUIRE(c.status == 0);
    const json cj = json::parse(c.out);
    REQUIRE_FALSE(cj["records"].empty());
    for (const auto &rec : cj["records"])
        CHECK(rec["status"] == "exact");

    const Run a = run("check gamma-basic --samples 1 --seed 7");
    const Run b = run("check gamma-basic --samples 1 --seed 7");
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    const json aj = json::parse(a.out);
    CHECK(aj["records"].size() == 1);
    CHECK(aj["seed"] == 7);
    CHECK(run("check gamma-basic --samples 1 --seed 8").out != a.out);

    // exit 1 on assertion failure, with failing records listed
    const Run f = run("check theta-basic --samples 3 --tol 1e-30");
    CHECK(f.status == 1);
    CHECK(json::parse(f.out)["records"][0]["status"] == "fail");

    CHECK(run("check no-such-suite").status == 2);
    CHECK(run("check gamma-basic --samples 0").status == 2);
    CHECK(run("check gamma-basic --tol -1").status == 2);
}

TEST_CASE("cli list", "[cli][list]")
{
    const Run r = run("--list");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j.size() == 10);
    for (const auto &s : j)
        CHECK_FALSE(s["statement"].get<std::string>().empty());
}

TEST_CASE("cli scans", "[cli][scan]")
{
    const Run w = run("scan wall-crossing --tau sqrt2 --eps 1e-2,1e-3,1e-4");
    REQUIRE(w.status == 0);
    const auto wl = lines(w.out);
    REQUIRE(wl.size() == 8); // header + 7 rows
    // distance to the eps = 0 value shrinks on both sides
    const auto d = [&](int row) { return std::stod(split(wl[row])[5]); };
    CHECK(d(3) < d(1));
    CHECK(d(5) < d(3));
    CHECK(d(4) < d(2));
    CHECK(d(6) < d(4));

    const Run sc = run("scan semiclassical --beta 2 --eps 1e-2,5e-3");
    REQUIRE(sc.status == 0);
    const auto sl = lines(sc.out);
    REQUIRE(sl.size() == 3);
    const real ratio = std::stod(split(sl[1])[6]) / std::stod(split(sl[2])[6]);
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.4);

    const Run bx = run("scan baxter --u-grid 0:0.4:9");
    REQUIRE(bx.status == 0);
    CHECK(lines(bx.out).size() == 11);

    const auto sym = lines(run("scan baxter --u-grid -0.4:0.4:8").out);
    REQUIRE(sym.size() == 10);
    for (int k = 1; k <= 4; ++k) {
        const auto lo = split(sym[k]), hi = split(sym[10 - k]);
        CHECK(std::stod(lo[0]) == -std::stod(hi[0]));
        CHECK(std::abs(std::stod(lo[2]) - std::stod(hi[2])) < 1e-12);
    }

    // u = sigma is singular; the error is reported in-row and the scan continues
    const Run bad = run("scan baxter --tau 0.8i --sigma 0.25i --u-grid 0:0.5i:2");
    REQUIRE(bad.status == 0);
    const auto bl = lines(bad.out);
    REQUIRE(bl.size() == 4);
    CHECK(bl[2].find("singular factor theta0(sigma-u,2tau)") != std::string::npos);
    CHECK(split(bl[1]).back().empty());
    CHECK(split(bl[3]).back().empty());

    const Run cor = run("scan corollary --s 1,0.5");
    CHECK(cor.status == 0);
    CHECK(lines(cor.out).size() == 3);
}

TEST_CASE("cli baxter and cocycle verify", "[cli][baxter][cocycle]")
{
    const Run b = run("baxter --u 0.1 --tau 0.8i --sigma 0.25i");
    REQUIRE(b.status == 0);
    const json bj = json::parse(b.out);
    const cplx z = value_of(bj);
    CHECK_CLOSE(z, baxter_z({1.0, 0.1, cplx{0.0, 0.8}, cplx{0.0, 0.25}}), 1e-13);
    CHECK(std::abs(bj["free_energy"]["re"].get<double>() + std::log(std::abs(z))) < 1e-13);
    CHECK(run("baxter --u 0.25i --tau 0.8i --sigma 0.25i").status == 2);
    CHECK(run("baxter --c 0").status == 2);

    const Run v = run("cocycle verify");
    CHECK(v.status == 0);
    const json vj = json::parse(v.out);
    int mod_z = 0;
    for (const auto &rec : vj["records"]) {
        CHECK(rec["status"] != "failed");
        mod_z += rec["status"] == "mod-Z";
    }
    CHECK(mod_z == 2);
}

TEST_CASE("cli determinism and usage errors", "[cli]")
{
    for (const char *cmd : {"check phase --samples 3 --seed 11", "check phase --samples 3 --seed 11 --format csv",
                            "scan wall-crossing", "cocycle verify --format csv"})
        CHECK(run(cmd).out == run(cmd).out);
    CHECK(run("").status == 2);
    CHECK(run("bogus").status == 2);
    CHECK(run("eval").status == 2);
    CHECK(run("eval nope --z 1").status == 2);
    CHECK(run("eval gamma --z 0.1").status == 2);
    CHECK(run("eval gamma --z 0.1 --tau i --sigma i --format xml").status == 2);
    CHECK(run("--help").status == 0);
}

TEST_CASE("cli precision", "[cli]")
{
    const json j = json::parse(run("eval eta --tau i --precision 4").out);
    CHECK(j["value"]["re"].get<double>() == 0.7682);
}
