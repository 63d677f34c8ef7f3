// The group SL(3,Z) x| Z^3 acting on (z, x) in C x C^3 by
// (A, n)(z, x) = (z + n . x, A x), its generators e_ij and t_i, and words
// in those generators.

#ifndef EGAMMA_COCYCLE_GROUP_HPP
#define EGAMMA_COCYCLE_GROUP_HPP

#include <egamma/cocycle/poly.hpp>

#include <random>
#include <string>
#include <vector>

namespace egamma::cocycle
{

using Mat3 = std::array<Vec3, 3>;

inline Mat3 identity_matrix() { return {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}; }

inline Mat3 operator*(const Mat3 &a, const Mat3 &b)
{
    Mat3 c{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Vec3 operator*(const Mat3 &a, const Vec3 &v)
{
    Vec3 out{0, 0, 0};
    for (std::size_t i = 0; i < 3; ++i)
        out[i] = dot(a[i], v);
    return out;
}

inline Mat3 transpose(const Mat3 &a)
{
    Mat3 t{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            t[i][j] = a[j][i];
    return t;
}

inline long determinant(const Mat3 &a) { return det3(a[0], a[1], a[2]); }

/// Inverse of a determinant-one integer matrix (the adjugate).
inline Mat3 inverse(const Mat3 &a)
{
    if (determinant(a) != 1)
        throw domain_error("inverse: determinant is not 1");
    const Vec3 c0 = cross(a[1], a[2]), c1 = cross(a[2], a[0]), c2 = cross(a[0], a[1]);
    return transpose(Mat3{c0, c1, c2});
}

struct GroupElem {
    Mat3 A = identity_matrix();
    Vec3 n{0, 0, 0};

    GroupElem() = default;
    GroupElem(const Mat3 &a, const Vec3 &v) : A(a), n(v)
    {
        if (determinant(A) != 1)
            throw domain_error("GroupElem: determinant is not 1");
    }

    bool translation() const { return A == identity_matrix(); }

    friend bool operator==(const GroupElem &, const GroupElem &) = default;
};

/// (A, n)(B, m) = (AB, m + B^T n), so that the action is a homomorphism.
inline GroupElem group_mul(const GroupElem &g, const GroupElem &h)
{
    return GroupElem(g.A * h.A, h.n + transpose(h.A) * g.n);
}

inline GroupElem group_inv(const GroupElem &g)
{
    const Mat3 ai = inverse(g.A);
    return GroupElem(ai, -(transpose(ai) * g.n));
}

inline GroupElem operator*(const GroupElem &g, const GroupElem &h) { return group_mul(g, h); }

inline GroupElem group_pow(const GroupElem &g, int e)
{
    GroupElem out;
    const GroupElem step = e < 0 ? group_inv(g) : g;
    for (int i = 0; i < std::abs(e); ++i)
        out = out * step;
    return out;
}

/// g (z, x) = (z + n . x, A x) at a numeric point.
inline std::pair<cplx, std::array<cplx, 3>> act_point(const GroupElem &g, cplx z, const std::array<cplx, 3> &x)
{
    std::array<cplx, 3> ax{};
    cplx shift{0.0, 0.0};
    for (std::size_t i = 0; i < 3; ++i) {
        shift += static_cast<real>(g.n[i]) * x[i];
        for (std::size_t j = 0; j < 3; ++j)
            ax[i] += static_cast<real>(g.A[i][j]) * x[j];
    }
    return {z + shift, ax};
}

/// rho(g) f = f(g^{-1} .), with g^{-1}(z, x) = (z - n . A^{-1} x, A^{-1} x).
inline RatFunc act(const GroupElem &g, const RatFunc &f)
{
    const GroupElem gi = group_inv(g);
    return f.substitute(gi.n, gi.A);
}

inline MClass act(const GroupElem &g, const MClass &m) { return MClass(act(g, m.rep())); }

/// Transport of a linear form c . x under rho(g): c -> A^{-T} c.
inline Vec3 transport_form(const GroupElem &g, const Vec3 &c) { return transpose(inverse(g.A)) * c; }

/// Transport of z + l . x under rho(g).
inline Vec3 transport_shift(const GroupElem &g, const Vec3 &l) { return transpose(inverse(g.A)) * (l - g.n); }

struct Generator {
    enum class Kind { e, t } kind = Kind::t;
    int i = 1;
    int j = 0;

    static Generator elementary(int i, int j)
    {
        if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
            throw domain_error("elementary generator needs 1 <= i != j <= 3");
        return {Kind::e, i, j};
    }
    static Generator translation(int i)
    {
        if (i < 1 || i > 3)
            throw domain_error("translation generator needs 1 <= i <= 3");
        return {Kind::t, i, 0};
    }

    GroupElem element() const
    {
        if (kind == Kind::t) {
            Vec3 n{0, 0, 0};
            n[static_cast<std::size_t>(i - 1)] = 1;
            return GroupElem(identity_matrix(), n);
        }
        Mat3 a = identity_matrix();
        a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = 1;
        return GroupElem(a, Vec3{0, 0, 0});
    }

    std::string name() const
    {
        return kind == Kind::t ? "t" + std::to_string(i) : "e" + std::to_string(i) + std::to_string(j);
    }

    friend bool operator==(const Generator &, const Generator &) = default;
    friend auto operator<=>(const Generator &, const Generator &) = default;
};

inline Generator e(int i, int j) { return Generator::elementary(i, j); }
inline Generator t(int i) { return Generator::translation(i); }

inline std::vector<Generator> all_generators()
{
    std::vector<Generator> out;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            if (i != j)
                out.push_back(e(i, j));
    for (int i = 1; i <= 3; ++i)
        out.push_back(t(i));
    return out;
}

struct Letter {
    Generator gen;
    int exp = 1;

    Letter inverse() const { return {gen, -exp}; }
    friend bool operator==(const Letter &, const Letter &) = default;
};

/// A freely reduced word in the generators.
class Word
{
public:
    Word() = default;
    Word(std::initializer_list<Letter> letters)
    {
        for (const auto &l : letters)
            push(l);
    }

    static Word of(const Generator &g, int e = 1)
    {
        Word w;
        for (int k = 0; k < std::abs(e); ++k)
            w.push({g, e < 0 ? -1 : 1});
        return w;
    }

    void push(const Letter &l)
    {
        if (l.exp != 1 && l.exp != -1)
            throw domain_error("Word: letter exponents are +-1");
        if (!letters_.empty() && letters_.back() == l.inverse())
            letters_.pop_back();
        else
            letters_.push_back(l);
    }

    const std::vector<Letter> &letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }
    std::size_t size() const { return letters_.size(); }

    Word inverse() const
    {
        Word w;
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            w.push(it->inverse());
        return w;
    }

    friend Word operator*(Word a, const Word &b)
    {
        for (const auto &l : b.letters_)
            a.push(l);
        return a;
    }

    Word pow(int e) const
    {
        Word out;
        const Word step = e < 0 ? inverse() : *this;
        for (int k = 0; k < std::abs(e); ++k)
            out = out * step;
        return out;
    }

    GroupElem evaluate() const
    {
        GroupElem g;
        for (const auto &l : letters_)
            g = g * (l.exp == 1 ? l.gen.element() : group_inv(l.gen.element()));
        return g;
    }

    std::string str() const
    {
        if (letters_.empty())
            return "1";
        std::string s;
        for (const auto &l : letters_) {
            if (!s.empty())
                s += " ";
            s += l.gen.name();
            if (l.exp == -1)
                s += "^-1";
        }
        return s;
    }

    friend bool operator==(const Word &, const Word &) = default;

private:
    std::vector<Letter> letters_;
};

inline Word word(const Generator &g, int e = 1) { return Word::of(g, e); }

/// A seeded random element, built as a random word in the generators.
inline GroupElem random_element(std::mt19937_64 &rng, int length = 6)
{
    const auto gens = all_generators();
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> sign(0, 1);
    GroupElem g;
    for (int k = 0; k < length; ++k) {
        const GroupElem h = gens[pick(rng)].element();
        g = g * (sign(rng) ? h : group_inv(h));
    }
    return g;
}

/// One relation of the presentation, as the relator word r (r = 1 in G).
struct Relation {
    std::string name;
    std::string family;
    Word relator;
};

/// The relation list of the presentation. Commutation of e_ij and e_kl is
/// taken for j != k and i != l; with `literal_commutation` the condition
/// i != k, j != l is used instead, which admits non-commuting pairs.
inline std::vector<Relation> presentation_relations(bool literal_commutation = false)
{
    std::vector<Relation> out;
    auto commutator = [](const Word &a, const Word &b) { return a * b * a.inverse() * b.inverse(); };
    const auto gens = all_generators();
    for (const auto &a : gens)
        for (const auto &b : gens) {
            if (a.kind != Generator::Kind::e || b.kind != Generator::Kind::e || !(a < b))
                continue;
            const bool ok = literal_commutation ? (a.i != b.i && a.j != b.j) : (a.j != b.i && a.i != b.j);
            if (ok)
                out.push_back({"[" + a.name() + "," + b.name() + "]", "e-commute", commutator(word(a), word(b))});
        }
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k) {
                if (i == j || j == k || i == k)
                    continue;
                const Word lhs = word(e(i, j)) * word(e(j, k));
                const Word rhs = word(e(i, k)) * word(e(j, k)) * word(e(i, j));
                out.push_back({e(i, j).name() + " " + e(j, k).name() + " = " + rhs.str(), "e-triple",
                               lhs * rhs.inverse()});
            }
    out.push_back({"(e13 e31^-1 e13)^4", "e-order4", (word(e(1, 3)) * word(e(3, 1), -1) * word(e(1, 3))).pow(4)});
    for (int i = 1; i <= 3; ++i)
        for (int j = i + 1; j <= 3; ++j)
            out.push_back({"[" + t(i).name() + "," + t(j).name() + "]", "t-commute", commutator(word(t(i)), word(t(j)))});
    for (const auto &g : gens) {
        if (g.kind != Generator::Kind::e)
            continue;
        for (int k = 1; k <= 3; ++k)
            if (k != g.i)
                out.push_back({"[" + g.name() + "," + t(k).name() + "]", "e-t-commute", commutator(word(g), word(t(k)))});
        const Word lhs = word(t(g.j)) * word(g) * word(t(g.i));
        const Word rhs = word(t(g.i)) * word(g);
        out.push_back({lhs.str() + " = " + rhs.str(), "e-t-shift", lhs * rhs.inverse()});
    }
    return out;
}

struct RelationCheck {
    std::string name;
    std::string relator;
    bool holds = false;
};

struct PresentationReport {
    std::vector<RelationCheck> checks;
    bool all_hold() const
    {
        for (const auto &c : checks)
            if (!c.holds)
                return false;
        return true;
    }
    std::vector<RelationCheck> failures() const
    {
        std::vector<RelationCheck> out;
        for (const auto &c : checks)
            if (!c.holds)
                out.push_back(c);
        return out;
    }
};

/// Evaluates every relator as a matrix/vector identity in G.
inline PresentationReport verify_presentation(bool literal_commutation = false)
{
    PresentationReport rep;
    for (const auto &r : presentation_relations(literal_commutation))
        rep.checks.push_back({r.name, r.relator.str(), r.relator.evaluate() == GroupElem{}});
    return rep;
}

} // namespace egamma::cocycle

#endif
