// egamma: point evaluation, identity suites, scans, Baxter free energy and
// cocycle verification. Exit status: 0 pass, 1 assertion failure, 2 domain
// or usage error.

#include <egamma/suites.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using namespace egamma;
using nlohmann::ordered_json;

namespace
{

struct Options {
    std::optional<real> tol;
    std::uint64_t seed = 1;
    int samples = 20;
    std::string format = "json";
    std::size_t max_terms = 1'000'000;
    int precision = 15;
};

class Output
{
public:
    explicit Output(const Options &o) : opt_(o) {}

    real round(real v) const
    {
        if (!std::isfinite(v))
            return v;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", opt_.precision, v);
        return std::strtod(buf, nullptr);
    }

    ordered_json num(real v) const
    {
        if (!std::isfinite(v))
            return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
        return round(v);
    }

    ordered_json complex(cplx c) const { return {{"re", num(c.real())}, {"im", num(c.imag())}}; }

    std::string text(real v) const
    {
        if (!std::isfinite(v))
            return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", opt_.precision, v);
        return buf;
    }

private:
    const Options &opt_;
};

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void csv_row(const std::vector<std::string> &fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
        std::cout << (i ? "," : "") << csv_field(fields[i]);
    std::cout << "\n";
}

std::string to_string(Singularity s)
{
    switch (s) {
    case Singularity::none:
        return "none";
    case Singularity::zero:
        return "zero";
    case Singularity::pole:
        return "pole";
    }
    return "none";
}

// Complex literal a+bi, a, bi, i, -i, or a keyword.
cplx parse_complex(const std::string &text, std::optional<cplx> center = std::nullopt)
{
    if (text == "sqrt2")
        return std::sqrt(2.0);
    if (text == "golden")
        return (1.0 + std::sqrt(5.0)) / 2.0;
    if (text == "center") {
        if (!center)
            throw domain_error("keyword 'center' is only valid for z");
        return *center;
    }
    auto bad = [&] { return domain_error("malformed complex literal '" + text + "' (expected a+bi)"); };
    if (text.empty())
        throw bad();
    auto imag_part = [&](const std::string &s) -> real {
        // s ends with 'i'; s minus 'i' is a signed coefficient or just a sign
        const std::string coef = s.substr(0, s.size() - 1);
        if (coef.empty() || coef == "+")
            return 1.0;
        if (coef == "-")
            return -1.0;
        char *end = nullptr;
        const real v = std::strtod(coef.c_str(), &end);
        if (end != coef.c_str() + coef.size())
            throw bad();
        return v;
    };
    if (text.back() != 'i') {
        char *end = nullptr;
        const real v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size())
            throw bad();
        return v;
    }
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = text.size() - 1; k > 0; --k)
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos)
        return {0.0, imag_part(text)};
    const std::string re = text.substr(0, split);
    char *end = nullptr;
    const real a = std::strtod(re.c_str(), &end);
    if (end != re.c_str() + re.size())
        throw bad();
    return {a, imag_part(text.substr(split))};
}

std::vector<real> parse_list(const std::string &text)
{
    std::vector<real> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char *end = nullptr;
        const real v = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size())
            throw domain_error("malformed number list '" + text + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw domain_error("empty number list");
    return out;
}

TruncationPolicy policy_of(const Options &o)
{
    TruncationPolicy p;
    if (o.tol)
        p.tol = *o.tol;
    p.max_terms = o.max_terms;
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string function;
    std::string z, tau, sigma, a, x, t, s;
};

int cmd_eval(const EvalArgs &args, const Options &opt)
{
    const TruncationPolicy policy = policy_of(opt);
    const Output out(opt);
    auto need = [&](const std::string &v, const char *flag) {
        if (v.empty())
            throw domain_error("eval " + args.function + ": missing --" + flag);
        return v;
    };
    std::vector<std::pair<std::string, cplx>> inputs;
    auto input = [&](const std::string &v, const char *flag, std::optional<cplx> center = std::nullopt) {
        const cplx c = parse_complex(need(v, flag), center);
        inputs.emplace_back(flag, c);
        return c;
    };
    auto periods = [&]() {
        const cplx tau = parse_complex(need(args.tau, "tau"));
        const cplx sigma = parse_complex(need(args.sigma, "sigma"));
        return std::pair{tau, sigma};
    };

    Evaluation e;
    const std::string &f = args.function;
    if (f == "gamma" || f == "gamma-series" || f == "q-poly") {
        const auto [tau, sigma] = periods();
        const cplx z = input(args.z, "z", (tau + sigma) / 2.0);
        inputs.emplace_back("tau", tau);
        inputs.emplace_back("sigma", sigma);
        if (f == "gamma")
            e = gamma_ell_eval(z, tau, sigma, policy);
        else if (f == "gamma-series")
            e = gamma_series_eval(z, tau, sigma, policy);
        else {
            e.value = q_polynomial(z, tau, sigma);
            e.method = "closed-form";
        }
    } else if (f == "theta" || f == "theta0") {
        const cplx z = input(args.z, "z");
        const cplx tau = input(args.tau, "tau");
        e = f == "theta" ? theta_eval(z, tau, policy) : theta0_eval(z, tau, policy);
    } else if (f == "eta") {
        e = dedekind_eta_eval(input(args.tau, "tau"), policy);
    } else if (f == "omega") {
        const cplx a = input(args.a, "a");
        const auto [tau, sigma] = periods();
        const cplx z = input(args.z, "z", (tau + sigma) / 2.0);
        inputs.emplace_back("tau", tau);
        inputs.emplace_back("sigma", sigma);
        e = omega_eval(PhasePoint{a, z, PeriodPair(tau, sigma)}, policy);
    } else if (f == "psi") {
        e = psi_eval(input(args.t, "t"));
    } else if (f == "dilog") {
        e = dilog_eval(input(args.x, "x"), policy);
    } else if (f == "gamma-trig") {
        const cplx s = input(args.s, "s");
        e = gamma_trig_eval(s, input(args.sigma, "sigma"), policy);
    } else {
        throw domain_error("unknown function '" + f + "'");
    }

    if (opt.format == "csv") {
        std::vector<std::string> header{"function"}, row{f};
        for (const auto &[k, v] : inputs) {
            header.insert(header.end(), {k + "_re", k + "_im"});
            row.insert(row.end(), {out.text(v.real()), out.text(v.imag())});
        }
        header.insert(header.end(),
                      {"value_re", "value_im", "method", "terms_used", "tail_bound", "singularity", "order", "tol", "seed"});
        row.insert(row.end(), {out.text(e.value.real()), out.text(e.value.imag()), e.method, std::to_string(e.terms),
                               out.text(e.tail_bound), to_string(e.singularity), std::to_string(e.order),
                               out.text(policy.tol), std::to_string(opt.seed)});
        csv_row(header);
        csv_row(row);
    } else {
        ordered_json j;
        j["function"] = f;
        ordered_json in = ordered_json::object();
        for (const auto &[k, v] : inputs)
            in[k] = out.complex(v);
        j["inputs"] = in;
        j["value"] = out.complex(e.value);
        j["method"] = e.method;
        j["terms_used"] = e.terms;
        j["tail_bound"] = out.num(e.tail_bound);
        j["singularity"] = to_string(e.singularity);
        j["order"] = e.order;
        j["unverified_envelope"] = e.unverified_envelope;
        j["tol"] = out.num(policy.tol);
        j["seed"] = opt.seed;
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// check

int emit_suite(const suites::SuiteResult &r, const Options &opt)
{
    const Output out(opt);
    if (opt.format == "csv") {
        csv_row({"suite", "index", "check", "point", "residual", "threshold", "status", "note"});
        for (const auto &rec : r.records)
            csv_row({r.suite, std::to_string(rec.index), rec.worst.check, rec.worst.point, out.text(rec.worst.residual),
                     out.text(rec.worst.threshold), rec.status, rec.worst.note});
    } else {
        ordered_json j;
        j["suite"] = r.suite;
        j["tol"] = out.num(r.config.tol);
        j["seed"] = r.config.seed;
        j["samples"] = r.config.samples;
        j["passed"] = r.passed();
        j["max_residual"] = out.num(r.max_residual());
        ordered_json records = ordered_json::array();
        for (const auto &rec : r.records) {
            ordered_json x;
            x["index"] = rec.index;
            x["check"] = rec.worst.check;
            x["point"] = rec.worst.point;
            x["residual"] = out.num(rec.worst.residual);
            x["threshold"] = out.num(rec.worst.threshold);
            x["status"] = rec.status;
            if (!rec.worst.note.empty())
                x["note"] = rec.worst.note;
            records.push_back(x);
        }
        j["records"] = records;
        std::cout << j.dump(2) << "\n";
    }
    for (const auto &rec : r.records)
        if (rec.status == "fail" || rec.status == "failed")
            std::cerr << "FAIL " << r.suite << " sample " << rec.index << " " << rec.worst.check << " at "
                      << rec.worst.point << ": residual " << out.text(rec.worst.residual) << " >= "
                      << out.text(rec.worst.threshold) << "\n";
    return r.passed() ? 0 : 1;
}

int cmd_check(const std::string &suite, const Options &opt)
{
    suites::SuiteConfig cfg;
    cfg.samples = opt.samples;
    cfg.seed = opt.seed;
    cfg.tol = opt.tol ? *opt.tol : suites::default_tol(suite);
    cfg.policy.max_terms = opt.max_terms;
    if (suite != "cocycle-exact")
        suites::suite_checks(suite); // validates the name
    return emit_suite(suites::run_suite(suite, cfg), opt);
}

// ---------------------------------------------------------------------------
// scan

struct ScanArgs {
    std::string name;
    std::string z, tau, sigma, eps, s, u_grid, c = "1";
    int beta = 1;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void emit_table(const Table &t, const Options &opt)
{
    if (opt.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto &r : t.rows) {
            ordered_json x;
            for (std::size_t k = 0; k < t.header.size(); ++k)
                x[t.header[k]] = r[k];
            rows.push_back(x);
        }
        std::cout << rows.dump(2) << "\n";
        return;
    }
    csv_row(t.header);
    for (const auto &r : t.rows)
        csv_row(r);
}

int cmd_scan(const ScanArgs &args, const Options &opt)
{
    const TruncationPolicy policy = policy_of(opt);
    const Output out(opt);
    Table t;
    auto cells = [&](cplx v) { return std::vector<std::string>{out.text(v.real()), out.text(v.imag())}; };
    auto append = [](std::vector<std::string> &row, const std::vector<std::string> &more) {
        row.insert(row.end(), more.begin(), more.end());
    };

    if (args.name == "wall-crossing") {
        const real tau_real = parse_complex(args.tau.empty() ? "sqrt2" : args.tau).real();
        const cplx sigma = parse_complex(args.sigma.empty() ? "0.4i" : args.sigma);
        const cplx z = parse_complex(args.z.empty() ? "0.5+0.1i" : args.z, (tau_real + sigma) / 2.0);
        std::vector<real> grid;
        for (real e : parse_list(args.eps.empty() ? "1e-2,1e-3,1e-4" : args.eps))
            grid.insert(grid.end(), {e, -e});
        grid.push_back(0.0);
        std::optional<cplx> v0;
        try {
            v0 = wall_crossing_scan(z, tau_real, sigma, {0.0}, policy).front().second;
        } catch (const std::exception &) {
        }
        t.header = {"eps", "tau_re", "tau_im", "value_re", "value_im", "dist_to_limit", "error"};
        for (real e : grid) {
            std::vector<std::string> row{out.text(e), out.text(tau_real), out.text(e)};
            try {
                const cplx v = wall_crossing_scan(z, tau_real, sigma, {e}, policy).front().second;
                append(row, cells(v));
                row.push_back(v0 ? out.text(std::abs(v - *v0)) : "");
                row.push_back("");
            } catch (const std::exception &ex) {
                append(row, {"", "", "", ex.what()});
            }
            t.rows.push_back(row);
        }
    } else if (args.name == "semiclassical") {
        const cplx tau = parse_complex(args.tau.empty() ? "i" : args.tau);
        const cplx z = parse_complex(args.z.empty() ? "0.3+0.4i" : args.z);
        t.header = {"beta", "eps", "omega_re", "omega_im", "theta_pow_re", "theta_pow_im", "deviation", "error"};
        for (real e : parse_list(args.eps.empty() ? "1e-2,5e-3,2.5e-3" : args.eps)) {
            std::vector<std::string> row{std::to_string(args.beta), out.text(e)};
            try {
                const auto r = semiclassical_check({args.beta, e, tau}, z, policy);
                append(row, cells(r.omega_val));
                append(row, cells(r.theta_pow));
                append(row, {out.text(std::abs(r.deviation)), ""});
            } catch (const std::exception &ex) {
                append(row, {"", "", "", "", "", ex.what()});
            }
            t.rows.push_back(row);
        }
    } else if (args.name == "baxter") {
        const cplx tau = parse_complex(args.tau.empty() ? "0.8i" : args.tau);
        const cplx sigma = parse_complex(args.sigma.empty() ? "0.25i" : args.sigma);
        const real c = parse_complex(args.c).real();
        const std::string grid = args.u_grid.empty() ? "-0.4:0.4:8" : args.u_grid;
        std::vector<std::string> parts;
        std::stringstream ss(grid);
        for (std::string item; std::getline(ss, item, ':');)
            parts.push_back(item);
        if (parts.size() != 3)
            throw domain_error("--u-grid expects start:stop:intervals");
        const cplx lo = parse_complex(parts[0]), hi = parse_complex(parts[1]);
        const int n = std::stoi(parts[2]);
        if (n < 1)
            throw domain_error("--u-grid needs at least one interval");
        t.header = {"u_re", "u_im", "Z_re", "Z_im", "f_re", "f_im", "error"};
        for (int k = 0; k <= n; ++k) {
            const cplx u = lo + (hi - lo) * static_cast<real>(k) / static_cast<real>(n);
            std::vector<std::string> row = cells(u);
            try {
                const auto r = baxter_free_energy({c, u, tau, sigma}, policy);
                append(row, cells(r.z.value));
                append(row, cells(r.free_energy));
                row.push_back("");
            } catch (const std::exception &ex) {
                append(row, {"", "", "", "", ex.what()});
            }
            t.rows.push_back(row);
        }
    } else if (args.name == "corollary") {
        const cplx tau0 = parse_complex(args.tau.empty() ? "i" : args.tau);
        const cplx z = parse_complex(args.z.empty() ? "-0.5+0.3i" : args.z);
        t.header = {"s", "value_re", "value_im", "error"};
        for (real s : parse_list(args.s.empty() ? "1,0.5,0.25,0.125" : args.s)) {
            std::vector<std::string> row{out.text(s)};
            try {
                append(row, cells(corollary_asymptotic(z, tau0, {s}, policy).front().second));
                row.push_back("");
            } catch (const std::exception &ex) {
                append(row, {"", "", ex.what()});
            }
            t.rows.push_back(row);
        }
    } else {
        throw domain_error("unknown scan '" + args.name + "'");
    }
    emit_table(t, opt);
    return 0;
}

// ---------------------------------------------------------------------------
// baxter, cocycle, list

int cmd_baxter(const ScanArgs &args, const Options &opt)
{
    const TruncationPolicy policy = policy_of(opt);
    const Output out(opt);
    BaxterParams p;
    p.c = parse_complex(args.c).real();
    p.u = parse_complex(args.z.empty() ? "0" : args.z);
    p.tau = parse_complex(args.tau.empty() ? "0.8i" : args.tau);
    p.sigma = parse_complex(args.sigma.empty() ? "0.25i" : args.sigma);
    const auto r = baxter_free_energy(p, policy);
    if (opt.format == "csv") {
        csv_row({"c", "u_re", "u_im", "tau_re", "tau_im", "sigma_re", "sigma_im", "Z_re", "Z_im", "f_re", "f_im", "method",
                 "terms_used", "tail_bound", "tol", "seed"});
        csv_row({out.text(p.c), out.text(p.u.real()), out.text(p.u.imag()), out.text(p.tau.real()),
                 out.text(p.tau.imag()), out.text(p.sigma.real()), out.text(p.sigma.imag()), out.text(r.z.value.real()),
                 out.text(r.z.value.imag()), out.text(r.free_energy.real()), out.text(r.free_energy.imag()), r.z.method,
                 std::to_string(r.z.terms), out.text(r.z.tail_bound), out.text(policy.tol), std::to_string(opt.seed)});
        return 0;
    }
    ordered_json j;
    j["inputs"] = {{"c", out.num(p.c)}, {"u", out.complex(p.u)}, {"tau", out.complex(p.tau)}, {"sigma", out.complex(p.sigma)}};
    j["value"] = out.complex(r.z.value);
    j["free_energy"] = out.complex(r.free_energy);
    j["method"] = r.z.method;
    j["terms_used"] = r.z.terms;
    j["tail_bound"] = out.num(r.z.tail_bound);
    j["tol"] = out.num(policy.tol);
    j["seed"] = opt.seed;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_cocycle_verify(const Options &opt)
{
    suites::SuiteConfig cfg;
    cfg.seed = opt.seed;
    cfg.samples = opt.samples;
    suites::SuiteResult r = suites::run_cocycle_suite(cfg);
    r.suite = "cocycle-verify";
    const auto psi = cocycle::psi_relation_report();
    for (const auto &rec : psi.records) {
        suites::SuiteRecord x;
        x.index = r.records.size();
        x.worst = {rec.name, "", rec.status == "failed" ? 1.0 : 0.0, 0.5, false, rec.difference};
        x.status = rec.status;
        r.records.push_back(x);
    }
    emit_suite(r, opt);
    const bool failed = std::any_of(r.records.begin(), r.records.end(), [](const auto &x) { return x.status == "failed"; });
    return failed ? 1 : 0;
}

int cmd_list(const Options &opt)
{
    if (opt.format == "csv") {
        csv_row({"suite", "statement", "default_tol"});
        for (const auto &s : suites::suite_catalog())
            csv_row({s.name, s.statement, Output(opt).text(suites::default_tol(s.name))});
        return 0;
    }
    ordered_json j = ordered_json::array();
    for (const auto &s : suites::suite_catalog())
        j.push_back({{"suite", s.name}, {"statement", s.statement}, {"default_tol", suites::default_tol(s.name)}});
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Elliptic gamma function toolkit"};
    app.require_subcommand(0, 1);
    Options opt;
    bool list = false;
    real tol = 0.0;
    app.add_flag("--list", list, "List the check suites and the statements they verify");
    auto *tol_opt = app.add_option("--tol", tol, "Tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", opt.seed, "Random seed");
    app.add_option("--samples", opt.samples, "Number of seeded samples")->check(CLI::PositiveNumber);
    auto *format_opt = app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--max-terms", opt.max_terms, "Term budget for products and series")->check(CLI::PositiveNumber);
    app.add_option("--precision", opt.precision, "Significant digits in output")->check(CLI::Range(1, 17));
    app.fallthrough();

    EvalArgs eval;
    auto *eval_cmd = app.add_subcommand("eval", "Evaluate a function at a point");
    eval_cmd->add_option("function", eval.function, "Function name")
        ->required()
        ->check(CLI::IsMember(
            {"gamma", "gamma-series", "theta", "theta0", "eta", "omega", "psi", "dilog", "q-poly", "gamma-trig"}));
    eval_cmd->add_option("--z", eval.z, "Argument z (a+bi or 'center')");
    eval_cmd->add_option("--tau", eval.tau, "Period tau");
    eval_cmd->add_option("--sigma", eval.sigma, "Period sigma");
    eval_cmd->add_option("--a", eval.a, "Phase parameter a");
    eval_cmd->add_option("--x", eval.x, "Argument of dilog");
    eval_cmd->add_option("--t", eval.t, "Argument of psi");
    eval_cmd->add_option("--s", eval.s, "Argument of gamma-trig");

    std::string suite;
    auto *check_cmd = app.add_subcommand("check", "Run an identity suite");
    check_cmd->add_option("suite", suite, "Suite name (see --list)")->required();

    ScanArgs scan;
    auto *scan_cmd = app.add_subcommand("scan", "Scan over a grid, one CSV row per point");
    scan_cmd->add_option("scan", scan.name, "wall-crossing, semiclassical, baxter or corollary")
        ->required()
        ->check(CLI::IsMember({"wall-crossing", "semiclassical", "baxter", "corollary"}));
    scan_cmd->add_option("--z", scan.z, "Argument z");
    scan_cmd->add_option("--tau", scan.tau, "Period tau (real part for wall-crossing)");
    scan_cmd->add_option("--sigma", scan.sigma, "Period sigma");
    scan_cmd->add_option("--eps", scan.eps, "Comma-separated eps values");
    scan_cmd->add_option("--s", scan.s, "Comma-separated scale factors");
    scan_cmd->add_option("--beta", scan.beta, "Semiclassical beta");
    scan_cmd->add_option("--u-grid", scan.u_grid, "start:stop:intervals");
    scan_cmd->add_option("--c", scan.c, "Baxter c > 0");

    ScanArgs bax;
    auto *baxter_cmd = app.add_subcommand("baxter", "Baxter partition function and free energy");
    baxter_cmd->add_option("--u", bax.z, "Spectral parameter u");
    baxter_cmd->add_option("--tau", bax.tau, "Period tau");
    baxter_cmd->add_option("--sigma", bax.sigma, "Period sigma");
    baxter_cmd->add_option("--c", bax.c, "c > 0");

    auto *cocycle_cmd = app.add_subcommand("cocycle", "Exact cocycle computations");
    cocycle_cmd->require_subcommand(1);
    auto *verify_cmd = cocycle_cmd->add_subcommand("verify", "Verify the cocycle relations exactly");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }
    if (*tol_opt)
        opt.tol = tol;
    if (*scan_cmd && !*format_opt)
        opt.format = "csv";

    try {
        if (list)
            return cmd_list(opt);
        if (*eval_cmd)
            return cmd_eval(eval, opt);
        if (*check_cmd)
            return cmd_check(suite, opt);
        if (*scan_cmd)
            return cmd_scan(scan, opt);
        if (*baxter_cmd)
            return cmd_baxter(bax, opt);
        if (*verify_cmd)
            return cmd_cocycle_verify(opt);
        std::cerr << app.help();
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
