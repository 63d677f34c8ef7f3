#include "support.hpp"

#include <egamma/cocycle.hpp>

using namespace egamma;
using namespace egamma::cocycle;
using egamma::testing::Sampler;

namespace
{

const RatFunc z = RatFunc::z(), x1 = RatFunc::x(1), x2 = RatFunc::x(2), x3 = RatFunc::x(3);

RatFunc q(long p, long r = 1) { return RatFunc::rational(p, r); }

GroupElem random_translation(Sampler &s, int bound = 3)
{
    return translation({s.integer(-bound, bound), s.integer(-bound, bound), s.integer(-bound, bound)});
}

std::vector<std::pair<cplx, cplx>> periods(const Atom &a, const std::array<cplx, 3> &x)
{
    std::vector<std::pair<cplx, cplx>> out;
    std::visit(
        [&](const auto &y) {
            const cplx ux = GammaAtom::form(y.u, x);
            if constexpr (std::is_same_v<std::decay_t<decltype(y)>, GammaAtom>)
                out.emplace_back(GammaAtom::form(y.v, x) / ux, GammaAtom::form(y.w, x) / ux);
            else
                out.emplace_back(GammaAtom::form(y.v, x) / ux, cplx{0.0, 1.0});
        },
        a);
    return out;
}

// A point with every period ratio of the given atoms comfortably non-real.
std::pair<cplx, std::array<cplx, 3>> generic_point(Sampler &s, const std::vector<Atom> &atoms)
{
    for (;;) {
        const std::array<cplx, 3> x{s.disk(1.0), s.disk(1.0), s.disk(1.0)};
        const cplx zz = s.disk(0.2);
        bool ok = true;
        for (const auto &a : atoms)
            for (const auto &[p1, p2] : periods(a, x))
                ok = ok && std::abs(p1.imag()) > 0.15 && std::abs(p2.imag()) > 0.15 && std::abs(p1) < 4.0 &&
                     std::abs(p2) < 4.0;
        if (ok)
            return {zz, x};
    }
}

} // namespace

TEST_CASE("RatFunc canonical form", "[cocycle][ratfunc]")
{
    CHECK(x1 / x1 == RatFunc(1));
    CHECK((x1 * x1 - x2 * x2) / (x1 - x2) == x1 + x2);
    CHECK((z * x3 + x2 * x3) / (x3 * x1) == (z + x2) / x1);
    CHECK(q(1, 2) + q(1, 3) == q(5, 6));
    CHECK((z / x3 - z / (-x3)) == q(2) * z / x3);
    CHECK((z / x1).homogeneous_degree() == 0);
    CHECK((z * z / x1).homogeneous_degree() == 1);
    CHECK_FALSE((z / x1 + q(1)).integer_constant());
    CHECK((x2 / x1 - (x2 - x1) / x1).integer_constant());
    CHECK_THROWS_AS(RatFunc(1) / (z + x1), domain_error);

    const RatFunc f = (z * z - x2 * x3) / (x1 * (x2 - x3));
    const std::array<cplx, 3> x{cplx(0.3, 0.2), cplx(-0.4, 0.7), cplx(0.9, -0.1)};
    const cplx zz{0.15, -0.05};
    CHECK_CLOSE(f.evaluate(zz, x), (zz * zz - x[1] * x[2]) / (x[0] * (x[1] - x[2])), 1e-14);
}

TEST_CASE("MClass equality is up to integer constants", "[cocycle][ratfunc]")
{
    CHECK(MClass(z / x1 + q(3)) == MClass(z / x1));
    CHECK_FALSE(MClass(z / x1 + q(1, 2)) == MClass(z / x1));
    CHECK(MClass(z / x1) * MClass(-z / x1) == MClass(RatFunc(0)));
    CHECK(MClass(z / x3).inverse() == MClass(-z / x3));
    CHECK_THROWS_AS(MClass(z), domain_error);
    CHECK(RatPoly(z * z / (x1 * x3) + z / x3).degree() == 2);
    CHECK(RatPoly(z * z / (x1 * x3) + z / x3).in_m());
    CHECK_FALSE(RatPoly(z * z / x3).in_m());
}

TEST_CASE("group law and action", "[cocycle][group]")
{
    Sampler s(101);
    std::mt19937_64 rng(101);
    SECTION("inverse and identity")
    {
        for (int k = 0; k < 50; ++k) {
            const GroupElem g = random_element(rng);
            CHECK(g * group_inv(g) == GroupElem{});
            CHECK(group_inv(g) * g == GroupElem{});
        }
        CHECK_THROWS_AS(GroupElem(Mat3{Vec3{2, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}, {0, 0, 0}), domain_error);
    }
    SECTION("defining relations as group elements")
    {
        CHECK((word(t(1)) * word(t(2))).evaluate() == (word(t(2)) * word(t(1))).evaluate());
        CHECK((word(e(1, 2)) * word(t(1))).evaluate() == (word(t(1)) * word(t(2), -1) * word(e(1, 2))).evaluate());
    }
    SECTION("action on functions")
    {
        const RatFunc f = z / x3;
        CHECK(act(GroupElem{}, f) == f);
        CHECK(act(t(2).element(), z / x1) == (z - x2) / x1);
        const RatFunc g = (z * z - x1 * x2) / (x3 * (x1 + x2));
        for (int k = 0; k < 20; ++k) {
            const GroupElem a = random_element(rng), b = random_element(rng);
            CHECK(act(a * b, f) == act(a, act(b, f)));
            CHECK(act(a * b, g) == act(a, act(b, g)));
        }
    }
    SECTION("action matches the point action")
    {
        const RatFunc f = (z * z - x1 * x2) / (x3 * (x1 + x2));
        const std::array<cplx, 3> x{cplx(0.3, 0.2), cplx(-0.4, 0.7), cplx(0.9, -0.1)};
        const cplx zz{0.15, -0.05};
        for (int k = 0; k < 10; ++k) {
            const GroupElem g = random_element(rng, 3);
            const auto [zi, xi] = act_point(group_inv(g), zz, x);
            CHECK_CLOSE(act(g, f).evaluate(zz, x), f.evaluate(zi, xi), 1e-9);
        }
    }
    SECTION("words reduce freely")
    {
        const Word w = word(e(1, 2)) * word(e(1, 2), -1) * word(t(3));
        CHECK(w.size() == 1);
        CHECK(w == word(t(3)));
        CHECK((w * w.inverse()).empty());
    }
}

TEST_CASE("presentation of G", "[cocycle][presentation]")
{
    const PresentationReport rep = verify_presentation();
    CHECK(rep.all_hold());
    CHECK(rep.checks.size() == 34);
    CHECK((word(e(1, 3)) * word(e(3, 1), -1) * word(e(1, 3))).pow(4).evaluate() == GroupElem{});
    CHECK((word(e(1, 2)) * word(e(2, 3))).evaluate() ==
          (word(e(1, 3)) * word(e(2, 3)) * word(e(1, 2))).evaluate());

    // e12 and e31 do not commute: E12 E31 = 0, E31 E12 = E32.
    CHECK_FALSE((word(e(1, 2)) * word(e(3, 1))).evaluate() == (word(e(3, 1)) * word(e(1, 2))).evaluate());
    const PresentationReport literal = verify_presentation(true);
    CHECK_FALSE(literal.all_hold());
    bool flagged = false;
    for (const auto &c : literal.failures())
        flagged = flagged || c.name == "[e12,e31]";
    CHECK(flagged);
}

TEST_CASE("u on generators", "[cocycle][u]")
{
    CHECK(cocycle_u_poly(t(1)).kind == UDescriptor::Kind::one);
    CHECK(cocycle_u_poly(t(3)).kind == UDescriptor::Kind::one);
    CHECK(cocycle_u_poly(e(2, 1)).str() == "1");
    const UDescriptor u32 = cocycle_u_poly(e(3, 2));
    REQUIRE(u32.arguments.size() == 3);
    CHECK(u32.arguments[0] == z / x1);
    CHECK(u32.arguments[1] == (x2 - x3) / x1);
    CHECK(u32.arguments[2] == x3 / x1);
    const UDescriptor u12 = cocycle_u_poly(e(1, 2));
    CHECK(u12.kind == UDescriptor::Kind::gamma);
    CHECK(u12.exponent == -1);
    CHECK(u12.arguments[0] == (z - x2) / x3);
    CHECK(u12.arguments[1] == (x1 - x2) / x3);
    CHECK(u12.arguments[2] == -x1 / x3);
    const UDescriptor ut2 = cocycle_u_poly(t(2));
    CHECK(ut2.kind == UDescriptor::Kind::theta);
    CHECK(ut2.arguments[0] == (z - x2) / x1);
    CHECK(ut2.arguments[1] == x3 / x1);
}

TEST_CASE("phi on translations", "[cocycle][phi]")
{
    const GroupElem id = translation({0, 0, 0});
    CHECK(phi_z3(id, t(2).element()) == MClass(RatFunc(0)));
    CHECK(phi_z3(t(3).element(), id) == MClass(RatFunc(0)));
    CHECK(phi_z3(t(3).element(), t(2).element()).rep() ==
          q(1, 2) * (q(2) * z / x1 + q(1) - q(2) * x3 / x1 - q(2) * x2 / x1));
    CHECK_THROWS_AS(phi_z3(e(1, 2).element(), id), domain_error);

    Sampler s(7);
    for (int k = 0; k < 50; ++k) {
        const GroupElem g1 = random_translation(s), g2 = random_translation(s), g3 = random_translation(s);
        INFO(to_string(g1.n) << to_string(g2.n) << to_string(g3.n));
        const RatFunc d = coboundary_phi(g1, g2, g3);
        CHECK(d.integer_constant());
        CHECK(MClass(d) == MClass(RatFunc(0)));
        CHECK(phi_z3(g1, g2).rep().homogeneous_degree() == 0);
    }
}

TEST_CASE("first Chern class", "[cocycle][c1]")
{
    CHECK(chern_c1(t(1).element(), t(3).element(), t(2).element()) == 1);
    CHECK(chern_c1(translation({2, 0, 0}), translation({0, 0, 3}), translation({0, -1, 0})) == -6);
    CHECK(chern_c1(translation({0, 5, 1}), translation({3, 1, 2}), translation({1, 2, 3})) == 0);
    Sampler s(11);
    for (int k = 0; k < 20; ++k) {
        const GroupElem g1 = random_translation(s), g2 = random_translation(s), g3 = random_translation(s);
        CHECK(chern_c1(g1, g2, g3) == g1.n[0] * g2.n[2] * g3.n[1]);
    }
}

TEST_CASE("L tables", "[cocycle][L]")
{
    const Report rep = verify_L_tables();
    CHECK(rep.records.size() == 7);
    for (const auto &r : rep.records) {
        INFO(r.name << " " << r.difference);
        CHECK(r.status == "exact");
    }
    const RatFunc X = x1 - x3;
    const RatFunc sum = l_value("L_{1,3}^{3,2}") + q_polynomial((z - x1 + x3) / X, (x2 - x1) / X, x3 / X);
    CHECK((sum * q(1, 2)).integer_constant());
    CHECK(l_value("L_{3}^{2}") == -l_value("L_{2}^{3}"));
    CHECK(l_value("L_{3,2}^{1,2}") == -l_value("L_{1,2}^{3,2}"));
    CHECK(l_value("L_{2,1}^{3}").zero());
    for (const auto &[name, v] : l_table_explicit()) {
        INFO(name);
        CHECK(v.homogeneous_degree() == 0);
    }
}

TEST_CASE("psi on words", "[cocycle][psi]")
{
    SECTION("trivial words")
    {
        const PsiResult p = psi_on_word(Word{});
        CHECK(p.relation());
        CHECK(p.value() == MClass(RatFunc(0)));
        const PsiResult tt = psi_on_word(word(t(1)) * word(t(2)) * word(t(1), -1) * word(t(2), -1));
        CHECK(tt.value() == MClass(l_value("L_{2}^{1}") * q(1, 2)));
    }
    SECTION("the e13 e32 relation")
    {
        const Word r = word(e(1, 3)) * word(e(3, 2)) * (word(e(1, 2)) * word(e(3, 2)) * word(e(1, 3))).inverse();
        const PsiResult p = psi_on_word(r);
        REQUIRE(p.resolved());
        CHECK(p.value() == MClass(l_value("L_{1,3}^{3,2}") * q(1, 2)));
    }
    SECTION("non-relations stay unevaluated")
    {
        const PsiResult p = psi_on_word(word(e(1, 2)) * word(t(2)));
        CHECK_FALSE(p.relation());
        CHECK_FALSE(p.resolved());
        CHECK_THROWS_AS(p.value(), domain_error);
    }
    SECTION("every relation against its L value")
    {
        const Report rep = psi_relation_report();
        CHECK_FALSE(rep.any_failed());
        std::vector<std::string> mod_z;
        for (const auto &r : rep.records)
            if (r.status == "mod-Z")
                mod_z.push_back(r.name);
        REQUIRE(mod_z.size() == 2);
        CHECK(mod_z[0].find("L_{1,2}^{1}") != std::string::npos);
        CHECK(mod_z[1].find("L_{1,3}^{2}") != std::string::npos);
    }
    SECTION("exponents are homogeneous of degree 0")
    {
        for (const auto &r : l_relations()) {
            INFO(r.name);
            const RatFunc &f = psi_on_word(r.relator).product.exponent();
            CHECK((f.zero() || f.homogeneous_degree() == 0));
        }
    }
}

TEST_CASE("atom normal forms agree numerically", "[cocycle][numeric]")
{
    Sampler s(29);
    const std::vector<Word> words{
        word(e(1, 2)) * word(t(2)) * word(e(3, 2), -1),
        word(e(3, 2)) * word(e(1, 3), -1) * word(e(1, 2)) * word(t(2), -1),
        word(t(2)) * word(e(2, 1)) * word(e(3, 2)) * word(t(2)),
    };
    for (const auto &w : words) {
        const PsiResult p = psi_on_word(w);
        REQUIRE_FALSE(p.relation());
        for (int k = 0; k < 3; ++k) {
            const auto [zz, x] = generic_point(s, p.raw_atoms);
            INFO(w.str());
            CHECK_CLOSE(p.product.evaluate(zz, x), psi_numeric(p, zz, x), 1e-9);
        }
    }
    SECTION("three-term relation")
    {
        AtomProduct p;
        p.add_three_term({1, 0, 0}, {0, 1, 0}, {0, 0, 1});
        const std::array<cplx, 3> x{cplx(1.0, 0.0), cplx(0.2, 0.9), cplx(-0.3, 0.7)};
        CHECK_CLOSE(p.evaluate(cplx(0.1, 0.05), x), cplx(1.0), 1e-9);
    }
}

TEST_CASE("numeric bridge on relations", "[cocycle][numeric]")
{
    Sampler s(31);
    int checked = 0;
    for (const auto &r : l_relations()) {
        const PsiResult p = psi_on_word(r.relator);
        if (p.raw_atoms.empty())
            continue;
        REQUIRE(p.resolved());
        for (int k = 0; k < 10; ++k) {
            const auto [zz, x] = generic_point(s, p.raw_atoms);
            INFO(r.name);
            const cplx exact = expi2pi(p.product.exponent().evaluate(zz, x));
            CHECK_CLOSE(psi_numeric(p, zz, x), exact, 1e-9);
        }
        ++checked;
    }
    CHECK(checked >= 8);
}

TEST_CASE("D4 subgroup", "[cocycle][d4]")
{
    const D4Data d = d4_data();
    CHECK(d.a.A == Mat3{Vec3{-1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 0, 1}});
    CHECK(d.b.A == Mat3{Vec3{0, 0, -1}, Vec3{0, 1, 0}, Vec3{1, 0, 0}});
    CHECK(group_pow(d.b, 4) == GroupElem{});
    CHECK(group_pow(d.a, 2) == GroupElem{});
    CHECK(d.b * d.a * d.b == d.a);
    CHECK(d4_elements().size() == 8);

    SECTION("projector")
    {
        const RatFunc f = z * z / (x1 * x3);
        CHECK(d4_projector(f + act(d.a, f)) == d4_projector(f) + act(d.a, d4_projector(f)));
        const RatFunc h = z / x3 + z * z / (x1 * x3);
        const RatFunc anti = h - act(d.a, h);
        CHECK((anti + act(d.a, anti)).zero());
        CHECK(d4_projector(anti).zero());
        CHECK(d4_projector(q(3, 4)) == q(3, 4));
    }
    SECTION("lift relations")
    {
        const Report rep = d4_lift_relations();
        for (const auto &r : rep.records) {
            INFO(r.name << " " << r.difference);
            CHECK(r.exact());
        }
        const D4Relations rel = d4_relation_exponents();
        CHECK(rel.a2.integer_constant());
        CHECK(rel.b4.integer_constant());
        CHECK((rel.bab_ainv - q(1, 4)).integer_constant());
    }
    SECTION("obstruction")
    {
        CHECK(d4_obstruction() == mpq_class(1, 4));
    }
}

TEST_CASE("exact report", "[cocycle][report]")
{
    const Report rep = exact_report();
    CHECK(rep.all_exact());
    CHECK(rep.records.size() > 60);
}
