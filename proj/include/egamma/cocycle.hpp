// Exact verification of the cocycle attached to the elliptic gamma function
// on G = SL(3,Z) x| Z^3.
//
// Exponents are stored as f with the factor written exp(2 pi i f); a factor
// exp(pi i L) is therefore stored as L/2.

#ifndef EGAMMA_COCYCLE_HPP
#define EGAMMA_COCYCLE_HPP

#include <egamma/cocycle/atoms.hpp>
#include <egamma/cocycle/group.hpp>
#include <egamma/cocycle/poly.hpp>

#include <functional>
#include <variant>

namespace egamma::cocycle
{

// ---------------------------------------------------------------------------
// Values of the 1-cochain u on generators

struct UDescriptor {
    enum class Kind { one, gamma, theta };
    Generator gen;
    Kind kind = Kind::one;
    int exponent = 1;
    std::vector<RatFunc> arguments;
    std::variant<std::monostate, GammaAtom, ThetaAtom> atom;

    std::string str() const
    {
        if (kind == Kind::one)
            return "1";
        std::string s = kind == Kind::gamma ? "Gamma(" : "theta0(";
        for (std::size_t i = 0; i < arguments.size(); ++i)
            s += (i ? ", " : "") + arguments[i].str();
        s += ")";
        if (exponent != 1)
            s += "^" + std::to_string(exponent);
        return s;
    }
};

inline UDescriptor cocycle_u_poly(const Generator &g)
{
    UDescriptor d;
    d.gen = g;
    auto ratio = [](const Vec3 &l, bool with_z, const Vec3 &u) {
        const RatFunc num = with_z ? RatFunc::shifted_z(l) : RatFunc::linear_x(l);
        return num / RatFunc::linear_x(u);
    };
    if (g == e(1, 2)) {
        const GammaAtom a{{0, -1, 0}, {0, 0, 1}, {1, -1, 0}, {-1, 0, 0}, -1};
        d.kind = UDescriptor::Kind::gamma;
        d.exponent = -1;
        d.arguments = {ratio(a.l, true, a.u), ratio(a.v, false, a.u), ratio(a.w, false, a.u)};
        d.atom = a;
    } else if (g == e(3, 2)) {
        const GammaAtom a{{0, 0, 0}, {1, 0, 0}, {0, 1, -1}, {0, 0, 1}, 1};
        d.kind = UDescriptor::Kind::gamma;
        d.arguments = {ratio(a.l, true, a.u), ratio(a.v, false, a.u), ratio(a.w, false, a.u)};
        d.atom = a;
    } else if (g == t(2)) {
        const ThetaAtom a{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}, 1};
        d.kind = UDescriptor::Kind::theta;
        d.arguments = {ratio(a.l, true, a.u), ratio(a.v, false, a.u)};
        d.atom = a;
    }
    return d;
}

// ---------------------------------------------------------------------------
// psi on words

using Atom = std::variant<GammaAtom, ThetaAtom>;

/// The atoms of psi(x_1 ... x_k) = prod_j rho(x_1 ... x_{j-1}) u(x_j), with
/// u(x^{-1}) = rho(x^{-1}) u(x)^{-1}; also returns the image of the word in G.
inline std::pair<std::vector<Atom>, GroupElem> word_atoms(const Word &w)
{
    std::vector<Atom> out;
    GroupElem prefix;
    auto push = [&](const UDescriptor &d, const GroupElem &g, int sign) {
        if (const auto *a = std::get_if<GammaAtom>(&d.atom)) {
            GammaAtom b = a->transported(g);
            b.exp *= sign;
            out.emplace_back(b);
        } else if (const auto *a = std::get_if<ThetaAtom>(&d.atom)) {
            ThetaAtom b = a->transported(g);
            b.exp *= sign;
            out.emplace_back(b);
        }
    };
    for (const auto &l : w.letters()) {
        const UDescriptor d = cocycle_u_poly(l.gen);
        const GroupElem y = l.gen.element();
        if (l.exp == 1) {
            push(d, prefix, 1);
            prefix = prefix * y;
        } else {
            prefix = prefix * group_inv(y);
            push(d, prefix, -1);
        }
    }
    return {out, prefix};
}

struct PsiResult {
    GroupElem image;
    AtomProduct product;
    std::vector<Atom> raw_atoms;

    bool relation() const { return image == GroupElem{}; }
    bool resolved() const { return product.atom_free(); }
    /// The class exp(2 pi i f); only defined once every atom has cancelled.
    MClass value() const
    {
        if (!resolved())
            throw domain_error("psi: atoms did not cancel");
        return MClass(product.exponent());
    }
};

/// psi of a word. For relations the atoms are normalized and eliminated
/// through three-term relations; other words return their normalized atoms.
inline PsiResult psi_on_word(const Word &w, int max_depth = 2)
{
    PsiResult r;
    auto [atoms, image] = word_atoms(w);
    r.image = image;
    r.raw_atoms = atoms;
    for (const auto &a : atoms)
        std::visit([&](const auto &x) { r.product.add(x); }, a);
    if (r.relation() && !r.product.gammas().empty())
        r.product = eliminate_gammas(r.product, max_depth);
    return r;
}

/// Product of the raw atoms of the word at a numeric point.
inline cplx psi_numeric(const PsiResult &r, cplx z, const std::array<cplx, 3> &x, const TruncationPolicy &policy = {})
{
    cplx out{1.0, 0.0};
    for (const auto &a : r.raw_atoms)
        out *= std::visit([&](const auto &y) { return y.evaluate(z, x, policy); }, a);
    return out;
}

// ---------------------------------------------------------------------------
// Restriction to the translation subgroup

inline Vec3 translation_vector(const GroupElem &g)
{
    if (!g.translation())
        throw domain_error("phi_z3: argument is not a translation");
    return g.n;
}

inline GroupElem translation(const Vec3 &n) { return GroupElem(identity_matrix(), n); }

/// phi(g, h) on Z^3 with g = (l, m, n), h = (l', m', n'):
/// f = (n m'(2z/x1 + 1) - m' n(n+1) x3/x1 - n m'(m' + 1 + 2m) x2/x1)/2.
inline MClass phi_z3(const GroupElem &g, const GroupElem &h)
{
    const Vec3 a = translation_vector(g), b = translation_vector(h);
    const long m = a[1], n = a[2], mp = b[1];
    const RatFunc x1 = RatFunc::x(1);
    const RatFunc f = RatFunc(n * mp) * (RatFunc(2) * RatFunc::z() / x1 + RatFunc(1)) -
                      RatFunc(mp * n * (n + 1)) * RatFunc::x(3) / x1 -
                      RatFunc(n * mp * (mp + 1 + 2 * m)) * RatFunc::x(2) / x1;
    return MClass(f * RatFunc::rational(1, 2));
}

/// (delta phi)(g1, g2, g3) = rho(g1) phi(g2, g3) - phi(g1 g2, g3) + phi(g1, g2 g3) - phi(g1, g2).
inline RatFunc coboundary_phi(const GroupElem &g1, const GroupElem &g2, const GroupElem &g3)
{
    return act(g1, phi_z3(g2, g3).rep()) - phi_z3(g1 * g2, g3).rep() + phi_z3(g1, g2 * g3).rep() -
           phi_z3(g1, g2).rep();
}

/// The integer w with c1(phi)(g1, g2, g3) = 2 pi i w.
inline long chern_c1(const GroupElem &g1, const GroupElem &g2, const GroupElem &g3)
{
    const RatFunc w = -coboundary_phi(g1, g2, g3);
    if (!w.integer_constant())
        throw std::logic_error("chern_c1: result is not an integer: " + w.str());
    return w.constant_value().get_num().get_si();
}

// ---------------------------------------------------------------------------
// Verification reports

struct CheckRecord {
    std::string name;
    std::string status; // "exact", "mod-Z", "failed"
    std::string difference;

    bool exact() const { return status == "exact"; }
};

struct Report {
    std::vector<CheckRecord> records;

    bool all_exact() const
    {
        return std::all_of(records.begin(), records.end(), [](const CheckRecord &r) { return r.exact(); });
    }
    bool any_failed() const
    {
        return std::any_of(records.begin(), records.end(), [](const CheckRecord &r) { return r.status == "failed"; });
    }
    void append(const Report &o) { records.insert(records.end(), o.records.begin(), o.records.end()); }
};

/// Compares two exponents given on the L scale (factor exp(pi i L)).
inline CheckRecord compare_l_scale(const std::string &name, const RatFunc &a, const RatFunc &b)
{
    const RatFunc d = a - b;
    const RatFunc half = d * RatFunc::rational(1, 2);
    if (half.integer_constant())
        return {name, "exact", ""};
    if (d.integer_constant())
        return {name, "mod-Z", d.str()};
    return {name, "failed", d.str()};
}

// ---------------------------------------------------------------------------
// L tables

namespace detail
{

struct Symbols {
    RatFunc z = RatFunc::z(), x1 = RatFunc::x(1), x2 = RatFunc::x(2), x3 = RatFunc::x(3);
};

inline RatFunc F(const RatFunc &a, const RatFunc &b) { return f_polynomial(a, b); }
inline RatFunc Q(const RatFunc &a, const RatFunc &b, const RatFunc &c) { return q_polynomial(a, b, c); }
inline RatFunc c(long p, long q = 1) { return RatFunc::rational(p, q); }

} // namespace detail

/// The nonzero values L of the cocycle on relations, phi = exp(pi i L), as
/// explicit rational functions.
inline std::map<std::string, RatFunc> l_table_explicit()
{
    using detail::c;
    const detail::Symbols s;
    const auto &[z, x1, x2, x3] = s;
    std::map<std::string, RatFunc> t;
    t["L_{1,2}^{2}"] =
        x2 * (c(6) * z * z - c(6) * (x3 + c(2) * x2) * z + x2 * x1 - x1 * x1 + c(6) * x2 * x2 + c(6) * x2 * x3 + x3 * x3) /
        (c(6) * x3 * x1 * (x2 - x1));
    t["L_{1,2}^{1}"] = (c(-6) * z * z + c(6) * (x1 + x3 + c(2) * x2) * z - x3 * x3 - c(6) * x2 * x1 + c(3) * x1 * x3 -
                        c(6) * x2 * x3 - c(6) * x2 * x2 - x1 * x1) /
                       (c(6) * x1 * x3);
    t["L_{1,3}^{2}"] = (c(6) * z * z - c(6) * (x3 + c(2) * x2) * z + c(6) * x2 * x3 + c(5) * x1 * x1 + c(6) * x2 * x2 +
                        x3 * x3 - c(5) * x1 * x3) /
                       (c(6) * (x3 - x1) * x1);
    t["L_{2}^{3}"] = (c(2) * z - c(2) * x2 - c(2) * x3 + x1) / x1;
    t["L_{1,3}^{3,2}"] = (c(2) * z - x2) * (c(2) * z * z - c(2) * z * x2 - x1 * x1 + x1 * x3 - x3 * x3 + x2 * x1) /
                         (c(12) * (x3 - x1) * x3 * (x2 - x1));
    t["L_{3,1}^{1,2}"] = (c(2) * z - x2) * (c(2) * z * z - c(2) * z * x2 + x2 * x3 - x1 * x1 + x1 * x3 - x3 * x3) /
                         (c(12) * x1 * (x2 - x3) * (x3 - x1));
    t["L_{1,2}^{3,2}"] = x2 * (c(2) * z - x2) *
                         (c(2) * z * z - c(2) * z * x2 + x2 * x3 - x3 * x3 - x1 * x1 + x2 * x1) /
                         (c(12) * x1 * (x2 - x1) * x3 * (x2 - x3));
    return t;
}

/// The same values written through F and Q.
inline std::map<std::string, RatFunc> l_table_fq()
{
    using detail::c;
    using detail::F;
    using detail::Q;
    const detail::Symbols s;
    const auto &[z, x1, x2, x3] = s;
    std::map<std::string, RatFunc> t;
    t["L_{1,2}^{2}"] = c(-2) * (z - x2) / x3 + c(1) + F((z - x2) / x1, x3 / x1) - F((z - x1) / (x1 - x2), x3 / (x1 - x2));
    t["L_{1,2}^{1}"] = c(2) * (z - x2) / x3 + c(1) - F((z - x2) / x1, x3 / x1);
    t["L_{1,3}^{2}"] = -F((z - x2) / (x1 - x3), x1 / (x1 - x3));
    t["L_{2}^{3}"] = c(2) * (z - x2 - x3) / x1 + c(1);
    t["L_{1,3}^{3,2}"] = -Q((z - x1 + x3) / (x1 - x3), (x2 - x1) / (x1 - x3), x3 / (x1 - x3));
    t["L_{3,1}^{1,2}"] = Q((z - x1) / x1, (x2 - x3) / x1, (x3 - x1) / x1);
    t["L_{1,2}^{3,2}"] =
        Q((z - x1) / x1, (x2 - x3) / x1, (x3 - x1) / x1) + Q((z - x1 + x3) / (x1 - x3), x3 / (x1 - x3), (x2 - x1) / (x1 - x3));
    return t;
}

/// L value by name; the antisymmetric partners are L_{3,2}^{1,2} = -L_{1,2}^{3,2}
/// and L_{3}^{2} = -L_{2}^{3}; every other value is zero.
inline RatFunc l_value(const std::string &name)
{
    static const auto table = l_table_explicit();
    if (const auto it = table.find(name); it != table.end())
        return it->second;
    if (name == "L_{3,2}^{1,2}")
        return -table.at("L_{1,2}^{3,2}");
    if (name == "L_{3}^{2}")
        return -table.at("L_{2}^{3}");
    return RatFunc(0);
}

/// A relator word with the name of its L value.
struct LRelation {
    std::string name;
    std::string l_name;
    Word relator;
};

inline std::string l_name(const Generator &a, const Generator &b)
{
    auto idx = [](const Generator &g) {
        return g.kind == Generator::Kind::t ? std::to_string(g.i)
                                            : std::to_string(g.i) + "," + std::to_string(g.j);
    };
    return "L_{" + idx(a) + "}^{" + idx(b) + "}";
}

/// The relations of the presentation of G, each labeled with its L value:
/// [e_ij, e_kl] -> L_{i,j}^{k,l}, e_ij e_jk = e_ik e_jk e_ij -> L_{i,j}^{j,k},
/// [t_j, t_i] -> L_{i}^{j}, [e_ij, t_k] -> L_{i,j}^{k}, t_j e_ij t_i = t_i e_ij -> L_{i,j}^{i}.
inline std::vector<LRelation> l_relations()
{
    std::vector<LRelation> out;
    auto commutator = [](const Word &a, const Word &b) { return a * b * a.inverse() * b.inverse(); };
    const auto gens = all_generators();
    for (const auto &a : gens)
        for (const auto &b : gens)
            if (a.kind == Generator::Kind::e && b.kind == Generator::Kind::e && a != b && a.j != b.i && a.i != b.j)
                out.push_back({"[" + a.name() + "," + b.name() + "]", l_name(a, b), commutator(word(a), word(b))});
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                if (i == j || j == k || i == k)
                    continue;
                const Word rhs = word(e(i, k)) * word(e(j, k)) * word(e(i, j));
                out.push_back({e(i, j).name() + " " + e(j, k).name() + " = " + rhs.str(), l_name(e(i, j), e(j, k)),
                               word(e(i, j)) * word(e(j, k)) * rhs.inverse()});
            }
    out.push_back({"(e13 e31^-1 e13)^4", "L_{order4}", (word(e(1, 3)) * word(e(3, 1), -1) * word(e(1, 3))).pow(4)});
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            if (i != j)
                out.push_back({"[" + t(j).name() + "," + t(i).name() + "]", l_name(t(i), t(j)),
                               commutator(word(t(j)), word(t(i)))});
    for (const auto &g : gens) {
        if (g.kind != Generator::Kind::e)
            continue;
        for (int k = 1; k <= 3; ++k)
            if (k != g.i)
                out.push_back({"[" + g.name() + "," + t(k).name() + "]", l_name(g, t(k)), commutator(word(g), word(t(k)))});
        const Word lhs = word(t(g.j)) * word(g) * word(t(g.i));
        const Word rhs = word(t(g.i)) * word(g);
        out.push_back({lhs.str() + " = " + rhs.str(), l_name(g, t(g.i)), lhs * rhs.inverse()});
    }
    return out;
}

/// Explicit forms against F/Q forms, equality mod 2Z on the L scale.
inline Report verify_L_tables()
{
    Report rep;
    const auto ex = l_table_explicit();
    const auto fq = l_table_fq();
    for (const auto &[name, v] : ex)
        rep.records.push_back(compare_l_scale(name + " explicit = F/Q form", v, fq.at(name)));
    return rep;
}

/// psi of every relation against its L value, plus the antisymmetry checks.
inline Report psi_relation_report()
{
    Report rep;
    for (const auto &r : l_relations()) {
        const PsiResult p = psi_on_word(r.relator);
        if (!p.relation()) {
            rep.records.push_back({"psi " + r.name, "failed", "not a relation"});
            continue;
        }
        if (!p.resolved()) {
            rep.records.push_back({"psi " + r.name, "failed", "atoms did not cancel"});
            continue;
        }
        const std::string label = r.l_name == "L_{order4}" ? "0" : r.l_name;
        const RatFunc l = r.l_name == "L_{order4}" ? RatFunc(0) : l_value(r.l_name);
        rep.records.push_back(compare_l_scale("psi " + r.name + " = exp(pi i " + label + ")",
                                              RatFunc(2) * p.product.exponent(), l));
    }
    const auto ab = psi_on_word(word(e(1, 2)) * word(e(3, 2)) * word(e(1, 2), -1) * word(e(3, 2), -1));
    const auto ba = psi_on_word(word(e(3, 2)) * word(e(1, 2)) * word(e(3, 2), -1) * word(e(1, 2), -1));
    rep.records.push_back(compare_l_scale("L_{3,2}^{1,2} = -L_{1,2}^{3,2}", RatFunc(2) * ba.product.exponent(),
                                          RatFunc(-2) * ab.product.exponent()));
    const auto t23 = psi_on_word(word(t(3)) * word(t(2)) * word(t(3), -1) * word(t(2), -1));
    const auto t32 = psi_on_word(word(t(2)) * word(t(3)) * word(t(2), -1) * word(t(3), -1));
    rep.records.push_back(compare_l_scale("L_{3}^{2} = -L_{2}^{3}", RatFunc(2) * t32.product.exponent(),
                                          RatFunc(-2) * t23.product.exponent()));
    return rep;
}

// ---------------------------------------------------------------------------
// D4 subgroup

struct D4Data {
    Word wa, wb;
    GroupElem a, b;
    RatFunc fa; // prefactor exponent of the lift of a
};

/// a = (e21^-1 e12 e21^-1)^2 : x -> (-x1, -x2, x3), b = e31 e13^-1 e31 : x -> (-x3, x2, x1),
/// with lift exp(2 pi i fa) psi(a-word) of a and psi(b-word) of b.
inline D4Data d4_data()
{
    D4Data d;
    d.wa = (word(e(2, 1), -1) * word(e(1, 2)) * word(e(2, 1), -1)).pow(2);
    d.wb = word(e(3, 1)) * word(e(1, 3), -1) * word(e(3, 1));
    d.a = d.wa.evaluate();
    d.b = d.wb.evaluate();
    const detail::Symbols s;
    const auto &[z, x1, x2, x3] = s;
    d.fa = RatFunc::rational(1, 4) * (z * z / (x1 * x3) - RatFunc(2) * z / x3 + RatFunc(1) + x1 / (RatFunc(6) * x3) +
                                      x3 / (RatFunc(6) * x1));
    return d;
}

inline std::vector<GroupElem> d4_elements()
{
    const D4Data d = d4_data();
    std::vector<GroupElem> out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j)
            out.push_back(group_pow(d.b, i) * group_pow(d.a, j));
    return out;
}

/// P f = (1/8) sum_{g in D4} rho(g) f.
inline RatFunc d4_projector(const RatFunc &f)
{
    RatFunc out(0);
    for (const auto &g : d4_elements())
        out += act(g, f);
    return out * RatFunc::rational(1, 8);
}

struct D4Relations {
    RatFunc a2;       // exponent of (lift a)^2
    RatFunc b4;       // exponent of (lift b)^4
    RatFunc bab_ainv; // exponent of (lift b)(lift a)(lift b)(lift a)^-1
    bool words_ok = false;
};

inline RatFunc psi_exponent(const Word &w)
{
    const PsiResult p = psi_on_word(w);
    if (!p.relation())
        throw domain_error("psi_exponent: word is not a relation");
    if (!p.resolved())
        throw convergence_error("psi_exponent: atoms did not cancel for " + w.str());
    return p.product.exponent();
}

inline D4Relations d4_relation_exponents()
{
    const D4Data d = d4_data();
    D4Relations r;
    r.words_ok = d.a.A == Mat3{Vec3{-1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 0, 1}} &&
                 d.b.A == Mat3{Vec3{0, 0, -1}, Vec3{0, 1, 0}, Vec3{1, 0, 0}} && is_zero(d.a.n) && is_zero(d.b.n);
    r.a2 = d.fa + act(d.a, d.fa) + psi_exponent(d.wa * d.wa);
    r.b4 = psi_exponent(d.wb.pow(4));
    r.bab_ainv = act(d.b, d.fa) - d.fa + psi_exponent(d.wb * d.wa * d.wb * d.wa.inverse());
    return r;
}

inline Report d4_lift_relations()
{
    const D4Relations r = d4_relation_exponents();
    Report rep;
    rep.records.push_back({"D4 generators a, b", r.words_ok ? "exact" : "failed", ""});
    auto rec = [](const std::string &name, const RatFunc &f, const RatFunc &target) {
        const RatFunc d = f - target;
        return CheckRecord{name, d.integer_constant() ? "exact" : "failed", d.integer_constant() ? "" : d.str()};
    };
    rep.records.push_back(rec("lift a^2 = 1", r.a2, RatFunc(0)));
    rep.records.push_back(rec("lift b^4 = 1", r.b4, RatFunc(0)));
    rep.records.push_back(rec("lift b a b = i a", r.bab_ainv, RatFunc::rational(1, 4)));
    return rep;
}

/// The constant P(e3) - P(e2)/2 reduced into [0, 1/2), where e2, e3 are the
/// exponents of the b^4 and b a b a^-1 relations. A splitting of the
/// extension over D4 would force it to vanish.
inline mpq_class d4_obstruction()
{
    const D4Relations r = d4_relation_exponents();
    const RatFunc v = d4_projector(r.bab_ainv) - d4_projector(r.b4) * RatFunc::rational(1, 2);
    if (!v.constant())
        throw std::logic_error("d4_obstruction: projection is not constant: " + v.str());
    mpq_class c = v.constant_value() * 2;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
    c -= fl;
    c /= 2;
    c.canonicalize();
    return c;
}

/// Presentation, L tables, delta phi and c1 on the given triples, and the
/// D4 relations, as one report.
inline Report exact_report(std::uint64_t seed = 2024, int triples = 20)
{
    Report rep;
    const PresentationReport pres = verify_presentation();
    for (const auto &c : pres.checks)
        rep.records.push_back({"relation " + c.name, c.holds ? "exact" : "failed", c.holds ? "" : c.relator});
    rep.append(verify_L_tables());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coord(-3, 3);
    auto random_translation = [&] { return translation({coord(rng), coord(rng), coord(rng)}); };
    for (int k = 0; k < triples; ++k) {
        const GroupElem g1 = random_translation(), g2 = random_translation(), g3 = random_translation();
        const long expected = g1.n[0] * g2.n[2] * g3.n[1];
        const long w = chern_c1(g1, g2, g3);
        rep.records.push_back({"c1 " + to_string(g1.n) + to_string(g2.n) + to_string(g3.n),
                               w == expected ? "exact" : "failed",
                               w == expected ? "" : std::to_string(w - expected)});
    }
    rep.append(d4_lift_relations());
    const mpq_class ob = d4_obstruction();
    rep.records.push_back({"D4 obstruction = 1/4 mod 1/2", ob == mpq_class(1, 4) ? "exact" : "failed", ob.get_str()});
    return rep;
}

} // namespace egamma::cocycle

#endif
