// Products of elliptic gamma and theta functions evaluated at ratios of
// integral linear forms, with exact normal forms.
//
// A gamma atom (l; u | v, w) stands for Gamma((z + l.x)/(u.x), v.x/u.x, w.x/u.x)
// and a theta atom (l; u | v) for theta0((z + l.x)/(u.x), v.x/u.x). An
// AtomProduct is exp(2 pi i f) times a product of atoms, with f an exact
// rational function. Normalization rewrites every atom into a canonical
// representative using the functional equations, accumulating the elementary
// factors into f. The three-term relation then eliminates the remaining gamma
// atoms by solving an integer linear system.

#ifndef EGAMMA_COCYCLE_ATOMS_HPP
#define EGAMMA_COCYCLE_ATOMS_HPP

#include <egamma/cocycle/group.hpp>
#include <egamma/gamma.hpp>
#include <egamma/qseries.hpp>

#include <algorithm>
#include <set>

namespace egamma::cocycle
{

/// F(z, tau) = z^2/tau + z(1/tau - 1) + tau/6 + 1/2 + 1/(6 tau), the exponent
/// in theta0(z/tau, -1/tau) = e^{i pi F} theta0(z, tau).
template <class T>
T f_polynomial(const T &z, const T &tau)
{
    const T one(1);
    return z * z / tau + z * (one / tau - one) + tau / T(6) + one / T(2) + one / (T(6) * tau);
}

struct GammaAtom {
    Vec3 l, u, v, w;
    int exp = 1;

    cplx evaluate(cplx z, const std::array<cplx, 3> &x, const TruncationPolicy &policy = {}) const
    {
        const cplx ux = form(u, x);
        const cplx g = gamma_ell((z + form(l, x)) / ux, form(v, x) / ux, form(w, x) / ux, policy);
        return std::pow(g, exp);
    }

    static cplx form(const Vec3 &c, const std::array<cplx, 3> &x)
    {
        return static_cast<real>(c[0]) * x[0] + static_cast<real>(c[1]) * x[1] + static_cast<real>(c[2]) * x[2];
    }

    GammaAtom transported(const GroupElem &g) const
    {
        return {transport_shift(g, l), transport_form(g, u), transport_form(g, v), transport_form(g, w), exp};
    }
};

struct ThetaAtom {
    Vec3 l, u, v;
    int exp = 1;

    cplx evaluate(cplx z, const std::array<cplx, 3> &x, const TruncationPolicy &policy = {}) const
    {
        const cplx ux = GammaAtom::form(u, x);
        return std::pow(theta0((z + GammaAtom::form(l, x)) / ux, GammaAtom::form(v, x) / ux, policy), exp);
    }

    ThetaAtom transported(const GroupElem &g) const
    {
        return {transport_shift(g, l), transport_form(g, u), transport_form(g, v), exp};
    }
};

namespace detail
{

inline long floordiv(long a, long b)
{
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

/// Coordinates of v in the unimodular basis (b1, b2, b3).
inline Vec3 coordinates(const Vec3 &b1, const Vec3 &b2, const Vec3 &b3, const Vec3 &v)
{
    const long d = det3(b1, b2, b3);
    if (d != 1 && d != -1)
        throw domain_error("coordinates: basis is not unimodular");
    return {det3(v, b2, b3) * d, det3(b1, v, b3) * d, det3(b1, b2, v) * d};
}

/// A basis (c1, c2, c3) of Z^3 with c1 x c2 = n and n . c3 = 1, for primitive n.
inline std::array<Vec3, 3> theta_basis(const Vec3 &n)
{
    Mat3 U = identity_matrix();
    Vec3 r = n;
    auto colop = [&](std::size_t i, std::size_t j, long k) {
        r[i] += k * r[j];
        for (auto &row : U)
            row[i] += k * row[j];
    };
    auto swap = [&](std::size_t i, std::size_t j) {
        std::swap(r[i], r[j]);
        for (auto &row : U)
            std::swap(row[i], row[j]);
    };
    for (;;) {
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < 3; ++i)
            if (r[i] != 0)
                nz.push_back(i);
        if (nz.empty())
            throw domain_error("theta_basis: zero normal");
        if (nz.size() == 1 && r[2] != 0)
            break;
        if (nz.size() == 1) {
            swap(nz[0], 2);
            continue;
        }
        const std::size_t p = *std::min_element(nz.begin(), nz.end(), [&](std::size_t a, std::size_t b) {
            return std::pair(std::labs(r[a]), a) < std::pair(std::labs(r[b]), b);
        });
        for (std::size_t i : nz)
            if (i != p)
                colop(i, p, -floordiv(r[i], r[p]));
    }
    if (r[2] < 0) {
        for (auto &row : U)
            row[2] = -row[2];
        r[2] = -r[2];
    }
    if (r[2] != 1)
        throw domain_error("theta_basis: normal is not primitive");
    const Vec3 c1{U[0][0], U[1][0], U[2][0]};
    Vec3 c2{U[0][1], U[1][1], U[2][1]};
    const Vec3 c3{U[0][2], U[1][2], U[2][2]};
    if (cross(c1, c2) != n)
        c2 = -c2;
    return {c1, c2, c3};
}

inline Vec3 reduce_mod(const Vec3 &v, const Vec3 &u)
{
    std::size_t p = 0;
    while (u[p] == 0)
        ++p;
    return v - floordiv(v[p], u[p]) * u;
}

} // namespace detail

using ThetaKey = std::pair<Vec3, long>;
using GammaKey = std::array<Vec3, 3>;

inline std::string to_string(const ThetaKey &k) { return "theta[" + to_string(k.first) + "," + std::to_string(k.second) + "]"; }
inline std::string to_string(const GammaKey &k)
{
    return "gamma[" + to_string(k[0]) + "|" + to_string(k[1]) + "," + to_string(k[2]) + "]";
}

/// exp(2 pi i f) times a product of canonical atoms.
class AtomProduct
{
public:
    /// With track_exponent false, f is not accumulated (used for bookkeeping
    /// of atoms only).
    explicit AtomProduct(bool track_exponent = true) : track_(track_exponent) {}

    const RatFunc &exponent() const { return f_; }
    const std::map<ThetaKey, long> &thetas() const { return theta_; }
    const std::map<GammaKey, long> &gammas() const { return gamma_; }
    bool tracks_exponent() const { return track_; }

    bool atom_free() const { return theta_.empty() && gamma_.empty(); }

    void add_exponent(const RatFunc &f)
    {
        if (track_)
            f_ += f;
    }

    void add(const ThetaAtom &a) { add_theta(a.l, a.u, a.v, a.exp); }
    void add(const GammaAtom &a) { add_gamma(a.l, a.u, a.v, a.w, a.exp); }

    void add_scaled(const AtomProduct &o, long c)
    {
        if (track_)
            f_ += RatFunc(c) * o.f_;
        for (const auto &[k, e] : o.theta_)
            bump(theta_, k, c * e);
        for (const auto &[k, e] : o.gamma_)
            bump(gamma_, k, c * e);
    }

    /// Adds the canonical form of (l; u | v)^e.
    void add_theta(Vec3 l, Vec3 u, Vec3 v, long e)
    {
        Vec3 n = cross(u, v);
        long sign = e;
        if (!leading_positive(n)) {
            sign = -sign;
            u = -u;
            n = -n;
        }
        const auto [c1, c2, c3] = detail::theta_basis(n);
        auto coords = [&](const Vec3 &w) {
            const Vec3 c = detail::coordinates(c1, c2, c3, w);
            if (c[2] != 0)
                throw domain_error("add_theta: form outside the plane");
            return std::array<long, 2>{c[0], c[1]};
        };
        auto U = coords(u), V = coords(v);
        while (U[1] != 0) {
            long best = 0;
            long best_abs = -1;
            const long k0 = -detail::floordiv(V[1], U[1]);
            for (long k = k0 - 1; k <= k0 + 1; ++k) {
                const long a = std::labs(V[1] + k * U[1]);
                if (best_abs < 0 || a < best_abs) {
                    best_abs = a;
                    best = k;
                }
            }
            V = {V[0] + best * U[0], V[1] + best * U[1]};
            v = v + best * u;
            // (l; u | v) = -e^{-i pi F(Z/U, V/U)} (l; v | -u)
            if (track_)
                f_ += RatFunc(sign) * (RatFunc::rational(1, 2) -
                                       f_polynomial(zform(l) / xform(u), xform(v) / xform(u)) / RatFunc(2));
            const Vec3 nu = v, nv = -u;
            u = nu;
            v = nv;
            U = {V[0], V[1]};
            V = coords(v);
        }
        if (U[0] == -1) {
            // (l; u | v) = -e^{2 pi i Z/U} (l; -u | -v)
            if (track_)
                f_ += RatFunc(sign) * (RatFunc::rational(1, 2) + zform(l) / xform(u));
            u = -u;
            v = -v;
        }
        const Vec3 c = detail::coordinates(c1, c2, c3, l);
        l = l - c[0] * c1;
        long b = c[1];
        // (l' + c2; c1 | c2) = -e^{-2 pi i Z'/U} (l'; c1 | c2)
        while (b > 0) {
            l = l - c2;
            if (track_)
                f_ += RatFunc(sign) * (RatFunc::rational(1, 2) - zform(l) / xform(c1));
            --b;
        }
        while (b < 0) {
            if (track_)
                f_ += RatFunc(sign) * (RatFunc::rational(1, 2) + zform(l) / xform(c1));
            l = l + c2;
            ++b;
        }
        bump(theta_, ThetaKey{n, c[2]}, sign);
    }

    /// Adds the canonical form of (l; u | v, w)^e.
    void add_gamma(Vec3 l, Vec3 u, Vec3 v, Vec3 w, long e)
    {
        if (!leading_positive(u)) {
            u = -u;
            e = -e;
        }
        for (int guard = 0;; ++guard) {
            if (guard > 64)
                throw convergence_error("add_gamma: normalization did not settle");
            const Vec3 c = detail::coordinates(u, v, w, l);
            l = l - c[0] * u;
            // (l + v; u | v, w) = theta(l; u | w) (l; u | v, w)
            for (long b = c[1]; b > 0; --b) {
                l = l - v;
                add_theta(l, u, w, e);
            }
            for (long b = c[1]; b < 0; ++b) {
                add_theta(l, u, w, -e);
                l = l + v;
            }
            for (long b = c[2]; b > 0; --b) {
                l = l - w;
                add_theta(l, u, v, e);
            }
            for (long b = c[2]; b < 0; ++b) {
                add_theta(l, u, v, -e);
                l = l + w;
            }
            v = detail::reduce_mod(v, u);
            w = detail::reduce_mod(w, u);
            // (0; u | v, w) = 1/(-v; u | -v, w)
            if (detail::reduce_mod(-v, u) < v) {
                l = -v;
                v = -v;
                e = -e;
                continue;
            }
            if (detail::reduce_mod(-w, u) < w) {
                l = -w;
                w = -w;
                e = -e;
                continue;
            }
            break;
        }
        if (w < v)
            std::swap(v, w);
        bump(gamma_, GammaKey{u, v, w}, e);
    }

    /// Adds the three-term relation
    /// (0; s | t, -x) (-s; t | -x, -s)^{-1} (0; x | t, s)^{-1} = e^{i pi Q(z/X; T/X, S/X)}
    /// in the form 1 = e^{-i pi Q} (...), scaled by c.
    void add_three_term(const Vec3 &x, const Vec3 &t, const Vec3 &s, long c = 1)
    {
        AtomProduct p(track_);
        p.add_gamma({0, 0, 0}, s, t, -x, 1);
        p.add_gamma(-s, t, -x, -s, -1);
        p.add_gamma({0, 0, 0}, x, t, s, -1);
        if (track_) {
            const RatFunc X = xform(x);
            p.f_ -= q_polynomial(RatFunc::z() / X, xform(t) / X, xform(s) / X) / RatFunc(2);
        }
        add_scaled(p, c);
    }

    /// Numeric value of exp(2 pi i f) times the remaining canonical atoms.
    cplx evaluate(cplx z, const std::array<cplx, 3> &x, const TruncationPolicy &policy = {}) const
    {
        cplx out = expi2pi(f_.evaluate(z, x));
        for (const auto &[k, e] : theta_) {
            const auto b = detail::theta_basis(k.first);
            out *= ThetaAtom{k.second * b[2], b[0], b[1], static_cast<int>(e)}.evaluate(z, x, policy);
        }
        for (const auto &[k, e] : gamma_)
            out *= GammaAtom{{0, 0, 0}, k[0], k[1], k[2], static_cast<int>(e)}.evaluate(z, x, policy);
        return out;
    }

private:
    static RatFunc zform(const Vec3 &l) { return RatFunc::shifted_z(l); }
    static RatFunc xform(const Vec3 &c) { return RatFunc::linear_x(c); }

    template <class K>
    static void bump(std::map<K, long> &m, const K &k, long e)
    {
        if (e == 0)
            return;
        auto it = m.find(k);
        if (it == m.end()) {
            m.emplace(k, e);
        } else if ((it->second += e) == 0) {
            m.erase(it);
        }
    }

    bool track_ = true;
    RatFunc f_;
    std::map<ThetaKey, long> theta_;
    std::map<GammaKey, long> gamma_;
};

namespace detail
{

inline std::set<Vec3> sums_and_differences(const std::set<Vec3> &pool)
{
    std::set<Vec3> out = pool;
    for (auto a = pool.begin(); a != pool.end(); ++a)
        for (auto b = std::next(a); b != pool.end(); ++b)
            for (const Vec3 &c : {*a + *b, *a - *b}) {
                if (is_zero(c))
                    continue;
                out.insert(leading_positive(c) ? c : -c);
            }
    return out;
}

/// Solves M c = rhs over Q; free variables are set to zero. Returns nothing
/// when the system is inconsistent.
inline std::optional<std::vector<mpq_class>> solve_rational(std::vector<std::vector<mpq_class>> m,
                                                            std::vector<mpq_class> rhs)
{
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t p = r;
        while (p < rows && m[p][col] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(m[p], m[r]);
        std::swap(rhs[p], rhs[r]);
        const mpq_class inv = 1 / m[r][col];
        for (std::size_t j = col; j < cols; ++j)
            m[r][j] *= inv;
        rhs[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][col] == 0)
                continue;
            const mpq_class k = m[i][col];
            for (std::size_t j = col; j < cols; ++j)
                m[i][j] -= k * m[r][j];
            rhs[i] -= k * rhs[r];
        }
        pivots.push_back(col);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (rhs[i] != 0)
            return std::nullopt;
    std::vector<mpq_class> sol(cols, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        sol[pivots[i]] = rhs[i];
    return sol;
}

} // namespace detail

/// Eliminates the gamma atoms of p with integer combinations of three-term
/// relations among unimodular triples drawn from the atoms' first forms and
/// their sums and differences (up to `max_depth` rounds). Throws
/// convergence_error if no integer combination is found.
inline AtomProduct eliminate_gammas(const AtomProduct &p, int max_depth = 2)
{
    if (p.gammas().empty())
        return p;
    std::set<Vec3> base;
    for (const auto &[k, e] : p.gammas())
        base.insert(k[0]);
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::set<Vec3> pool = base;
        for (int d = 0; d < depth; ++d)
            pool = detail::sums_and_differences(pool);
        const std::vector<Vec3> pv(pool.begin(), pool.end());

        std::vector<std::array<Vec3, 3>> instances;
        std::vector<std::map<GammaKey, long>> instance_gammas;
        std::set<std::vector<std::pair<GammaKey, long>>> seen;
        for (std::size_t a = 0; a < pv.size(); ++a)
            for (std::size_t b = a + 1; b < pv.size(); ++b)
                for (std::size_t c = b + 1; c < pv.size(); ++c) {
                    const long d = det3(pv[a], pv[b], pv[c]);
                    if (d != 1 && d != -1)
                        continue;
                    std::array<Vec3, 3> perm{pv[a], pv[b], pv[c]};
                    std::sort(perm.begin(), perm.end());
                    do {
                        AtomProduct q(false);
                        q.add_three_term(perm[0], perm[1], perm[2]);
                        std::vector<std::pair<GammaKey, long>> key(q.gammas().begin(), q.gammas().end());
                        if (seen.insert(key).second) {
                            instances.push_back(perm);
                            instance_gammas.push_back(q.gammas());
                        }
                    } while (std::next_permutation(perm.begin(), perm.end()));
                }

        std::set<GammaKey> keys;
        for (const auto &[k, e] : p.gammas())
            keys.insert(k);
        for (const auto &g : instance_gammas)
            for (const auto &[k, e] : g)
                keys.insert(k);
        std::vector<std::vector<mpq_class>> m;
        std::vector<mpq_class> rhs;
        for (const auto &k : keys) {
            std::vector<mpq_class> row(instances.size(), 0);
            for (std::size_t i = 0; i < instances.size(); ++i) {
                const auto it = instance_gammas[i].find(k);
                if (it != instance_gammas[i].end())
                    row[i] = it->second;
            }
            m.push_back(std::move(row));
            const auto it = p.gammas().find(k);
            rhs.push_back(it == p.gammas().end() ? 0 : -it->second);
        }
        const auto sol = detail::solve_rational(std::move(m), std::move(rhs));
        if (!sol)
            continue;
        bool integral = true;
        for (const auto &c : *sol)
            integral = integral && c.get_den() == 1;
        if (!integral)
            continue;
        AtomProduct out = p;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            const mpz_class c = (*sol)[i].get_num();
            if (c != 0)
                out.add_three_term(instances[i][0], instances[i][1], instances[i][2], c.get_si());
        }
        if (!out.gammas().empty())
            throw std::logic_error("eliminate_gammas: residual gamma atoms");
        return out;
    }
    throw convergence_error("eliminate_gammas: no integer three-term combination found");
}

} // namespace egamma::cocycle

#endif
