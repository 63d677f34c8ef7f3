// Exact rational functions in (z, x1, x2, x3) whose denominators are products
// of integer linear forms in x. Every rational function met in the cocycle
// computations has this shape: the periods are linear forms, and the
// polynomials Q, P and F only divide by periods.

#ifndef EGAMMA_COCYCLE_POLY_HPP
#define EGAMMA_COCYCLE_POLY_HPP

#include <egamma/core.hpp>

#include <gmpxx.h>

#include <array>
#include <complex>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace egamma::cocycle
{

using Vec3 = std::array<long, 3>;

inline Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator-(const Vec3 &a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator*(long k, const Vec3 &a) { return {k * a[0], k * a[1], k * a[2]}; }
inline long dot(const Vec3 &a, const Vec3 &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline long det3(const Vec3 &a, const Vec3 &b, const Vec3 &c) { return dot(cross(a, b), c); }
inline bool is_zero(const Vec3 &a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

/// First nonzero entry positive (the zero vector counts as positive).
inline bool leading_positive(const Vec3 &a)
{
    for (long t : a)
        if (t != 0)
            return t > 0;
    return true;
}

inline std::string to_string(const Vec3 &a)
{
    return "(" + std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]) + ")";
}

/// Exponents of z, x1, x2, x3.
using Mono = std::array<int, 4>;

class Poly
{
public:
    Poly() = default;
    Poly(long c) : Poly(mpq_class(c)) {}
    Poly(const mpq_class &c)
    {
        if (c != 0)
            terms_[Mono{0, 0, 0, 0}] = c;
    }

    static Poly variable(int index)
    {
        Poly p;
        Mono m{0, 0, 0, 0};
        m[static_cast<std::size_t>(index)] = 1;
        p.terms_[m] = 1;
        return p;
    }

    /// c0 z + l . x
    static Poly linear(long zcoef, const Vec3 &l)
    {
        Poly p;
        if (zcoef != 0)
            p.terms_[Mono{1, 0, 0, 0}] = zcoef;
        for (int i = 0; i < 3; ++i)
            if (l[static_cast<std::size_t>(i)] != 0) {
                Mono m{0, 0, 0, 0};
                m[static_cast<std::size_t>(i + 1)] = 1;
                p.terms_[m] = l[static_cast<std::size_t>(i)];
            }
        return p;
    }

    const std::map<Mono, mpq_class> &terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }

    bool constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Mono{0, 0, 0, 0}); }

    mpq_class constant_term() const
    {
        auto it = terms_.find(Mono{0, 0, 0, 0});
        return it == terms_.end() ? mpq_class(0) : it->second;
    }

    int z_degree() const
    {
        int d = -1;
        for (const auto &[m, c] : terms_)
            d = std::max(d, m[0]);
        return d;
    }

    /// Common total degree of all terms, if any.
    std::optional<int> homogeneous_degree() const
    {
        std::optional<int> d;
        for (const auto &[m, c] : terms_) {
            const int t = m[0] + m[1] + m[2] + m[3];
            if (d && *d != t)
                return std::nullopt;
            d = t;
        }
        return d;
    }

    /// Coefficient of z^k as a z-free polynomial.
    Poly z_coefficient(int k) const
    {
        Poly out;
        for (const auto &[m, c] : terms_)
            if (m[0] == k)
                out.terms_[Mono{0, m[1], m[2], m[3]}] = c;
        return out;
    }

    Poly &operator+=(const Poly &o)
    {
        for (const auto &[m, c] : o.terms_)
            accumulate(m, c);
        return *this;
    }
    Poly &operator-=(const Poly &o)
    {
        for (const auto &[m, c] : o.terms_)
            accumulate(m, -c);
        return *this;
    }
    Poly &operator*=(const mpq_class &k)
    {
        if (k == 0)
            terms_.clear();
        else
            for (auto &[m, c] : terms_)
                c *= k;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
    friend Poly operator-(Poly a)
    {
        a *= mpq_class(-1);
        return a;
    }
    friend Poly operator*(Poly a, const mpq_class &k) { return a *= k; }

    friend Poly operator*(const Poly &a, const Poly &b)
    {
        Poly out;
        for (const auto &[ma, ca] : a.terms_)
            for (const auto &[mb, cb] : b.terms_) {
                Mono m;
                for (std::size_t i = 0; i < 4; ++i)
                    m[i] = ma[i] + mb[i];
                out.accumulate(m, ca * cb);
            }
        return out;
    }

    friend bool operator==(const Poly &a, const Poly &b) { return a.terms_ == b.terms_; }

    Poly pow(int e) const
    {
        Poly out(1);
        for (int i = 0; i < e; ++i)
            out = out * *this;
        return out;
    }

    /// Exact quotient by the z-free linear form l . x, if it divides.
    std::optional<Poly> divide_linear(const Vec3 &l) const
    {
        std::size_t p = 0;
        while (l[p] == 0)
            ++p;
        const std::size_t var = p + 1;
        // lex order with the pivot variable first: the leading term of l is l_p x_p
        auto key = [var](const Mono &m) {
            std::array<int, 4> k{m[var], 0, 0, 0};
            std::size_t j = 1;
            for (std::size_t i = 0; i < 4; ++i)
                if (i != var)
                    k[j++] = m[i];
            return k;
        };
        std::map<std::array<int, 4>, std::pair<Mono, mpq_class>> rem;
        for (const auto &[m, c] : terms_)
            rem.emplace(key(m), std::make_pair(m, c));
        const Poly divisor = linear(0, l);
        Poly quotient;
        while (!rem.empty()) {
            auto it = std::prev(rem.end());
            const Mono m = it->second.first;
            const mpq_class c = it->second.second;
            if (m[var] == 0)
                return std::nullopt;
            Mono qm = m;
            qm[var] -= 1;
            const mpq_class qc = c / mpq_class(l[p]);
            quotient.accumulate(qm, qc);
            for (const auto &[dm, dc] : divisor.terms_) {
                Mono t;
                for (std::size_t i = 0; i < 4; ++i)
                    t[i] = qm[i] + dm[i];
                const auto k = key(t);
                auto r = rem.find(k);
                const mpq_class delta = -qc * dc;
                if (r == rem.end())
                    rem.emplace(k, std::make_pair(t, delta));
                else if ((r->second.second += delta) == 0)
                    rem.erase(r);
            }
        }
        return quotient;
    }

    /// f(z + a . x, B x): z -> z + a . x and x_i -> sum_j B_ij x_j.
    Poly substitute(const Vec3 &a, const std::array<Vec3, 3> &B) const
    {
        std::array<Poly, 4> images{linear(1, a), linear(0, B[0]), linear(0, B[1]), linear(0, B[2])};
        std::array<std::vector<Poly>, 4> powers;
        for (std::size_t i = 0; i < 4; ++i)
            powers[i].push_back(Poly(1));
        auto power = [&](std::size_t i, int e) -> const Poly & {
            while (static_cast<int>(powers[i].size()) <= e)
                powers[i].push_back(powers[i].back() * images[i]);
            return powers[i][static_cast<std::size_t>(e)];
        };
        Poly out;
        for (const auto &[m, c] : terms_) {
            Poly t(c);
            for (std::size_t i = 0; i < 4; ++i)
                if (m[i] > 0)
                    t = t * power(i, m[i]);
            out += t;
        }
        return out;
    }

    cplx evaluate(cplx z, const std::array<cplx, 3> &x) const
    {
        cplx out{0.0, 0.0};
        for (const auto &[m, c] : terms_) {
            cplx t = c.get_d();
            t *= std::pow(z, m[0]) * std::pow(x[0], m[1]) * std::pow(x[1], m[2]) * std::pow(x[2], m[3]);
            out += t;
        }
        return out;
    }

    std::string str() const
    {
        if (terms_.empty())
            return "0";
        static const char *names[4] = {"z", "x1", "x2", "x3"};
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto &[m, c] = *it;
            mpq_class a = abs(c);
            if (!first)
                os << (c < 0 ? " - " : " + ");
            else if (c < 0)
                os << "-";
            first = false;
            const bool unit = m == Mono{0, 0, 0, 0};
            if (a != 1 || unit)
                os << a.get_str() << (unit ? "" : "*");
            bool lead = true;
            for (std::size_t i = 0; i < 4; ++i)
                if (m[i] > 0) {
                    os << (lead ? "" : "*") << names[i];
                    if (m[i] > 1)
                        os << "^" << m[i];
                    lead = false;
                }
        }
        return os.str();
    }

private:
    void accumulate(const Mono &m, const mpq_class &c)
    {
        if (c == 0)
            return;
        auto it = terms_.find(m);
        if (it == terms_.end())
            terms_.emplace(m, c);
        else if ((it->second += c) == 0)
            terms_.erase(it);
    }

    std::map<Mono, mpq_class> terms_;
};

/// Primitive form with positive leading entry, and the scalar k with v = k * form.
inline std::pair<Vec3, long> normalize_linear(const Vec3 &v)
{
    long g = std::gcd(std::gcd(std::labs(v[0]), std::labs(v[1])), std::labs(v[2]));
    if (g == 0)
        throw domain_error("zero linear form");
    if (!leading_positive(v))
        g = -g;
    return {Vec3{v[0] / g, v[1] / g, v[2] / g}, g};
}

/// Product of powers of primitive linear forms in x (exponents may be negative).
using LinearFactors = std::map<Vec3, int>;

/// num / prod l^k, reduced: no denominator form divides the numerator.
class RatFunc
{
public:
    RatFunc() = default;
    RatFunc(long c) : num_(c), factored_(Factored{mpq_class(c), {}}) {}
    RatFunc(const mpq_class &c) : num_(c), factored_(Factored{c, {}}) {}
    explicit RatFunc(Poly p) : num_(std::move(p)) { normalize(); }

    static RatFunc z() { return RatFunc(Poly::variable(0)); }
    static RatFunc x(int i) { return linear_x(Vec3{i == 1, i == 2, i == 3}); }

    /// The linear form l . x.
    static RatFunc linear_x(const Vec3 &l)
    {
        if (is_zero(l))
            return RatFunc(0);
        const auto [form, k] = normalize_linear(l);
        RatFunc out;
        out.num_ = Poly::linear(0, l);
        out.factored_ = Factored{mpq_class(k), LinearFactors{{form, 1}}};
        return out;
    }

    /// z + l . x
    static RatFunc shifted_z(const Vec3 &l) { return RatFunc(Poly::linear(1, l)); }

    static RatFunc rational(long p, long q) { return RatFunc(mpq_class(p, q)); }

    const Poly &numerator() const { return num_; }
    const LinearFactors &denominator() const { return den_; }

    Poly denominator_poly() const
    {
        Poly d(1);
        for (const auto &[l, k] : den_)
            d = d * Poly::linear(0, l).pow(k);
        return d;
    }

    bool zero() const { return num_.zero(); }
    bool constant() const { return den_.empty() && num_.constant(); }
    mpq_class constant_value() const { return num_.constant_term(); }

    bool integer_constant() const
    {
        if (!constant())
            return false;
        const mpq_class c = num_.constant_term();
        return c.get_den() == 1;
    }

    std::optional<int> homogeneous_degree() const
    {
        const auto d = num_.homogeneous_degree();
        if (!d)
            return num_.zero() ? std::optional<int>(0) : std::nullopt;
        int dd = 0;
        for (const auto &[l, k] : den_)
            dd += k;
        return *d - dd;
    }

    int z_degree() const { return num_.z_degree(); }

    /// Coefficient of z^k, a rational function of x alone.
    RatFunc z_coefficient(int k) const
    {
        RatFunc out;
        out.num_ = num_.z_coefficient(k);
        out.den_ = den_;
        out.normalize();
        return out;
    }

    RatFunc &operator+=(const RatFunc &o) { return *this = add(*this, o, false); }
    RatFunc &operator-=(const RatFunc &o) { return *this = add(*this, o, true); }
    RatFunc &operator*=(const RatFunc &o) { return *this = *this * o; }
    RatFunc &operator/=(const RatFunc &o) { return *this = *this / o; }

    friend RatFunc operator+(const RatFunc &a, const RatFunc &b) { return add(a, b, false); }
    friend RatFunc operator-(const RatFunc &a, const RatFunc &b) { return add(a, b, true); }
    friend RatFunc operator-(const RatFunc &a) { return RatFunc(-1) * a; }

    friend RatFunc operator*(const RatFunc &a, const RatFunc &b)
    {
        RatFunc out;
        out.num_ = a.num_ * b.num_;
        out.den_ = a.den_;
        for (const auto &[l, k] : b.den_)
            out.den_[l] += k;
        if (a.factored_ && b.factored_) {
            Factored f{a.factored_->scale * b.factored_->scale, a.factored_->factors};
            for (const auto &[l, k] : b.factored_->factors)
                f.factors[l] += k;
            out.factored_ = f;
        }
        out.normalize();
        return out;
    }

    /// Division by a rational function whose numerator is a constant times a
    /// product of linear forms in x.
    friend RatFunc operator/(const RatFunc &a, const RatFunc &b)
    {
        const auto f = b.factorization();
        if (!f)
            throw domain_error("RatFunc: division by a numerator that is not a product of linear forms in x");
        if (f->scale == 0)
            throw domain_error("RatFunc: division by zero");
        RatFunc out;
        out.num_ = a.num_ * Poly(mpq_class(1) / f->scale);
        for (const auto &[l, k] : b.den_)
            out.num_ = out.num_ * Poly::linear(0, l).pow(k);
        out.den_ = a.den_;
        for (const auto &[l, k] : f->factors)
            out.den_[l] += k;
        if (a.factored_) {
            Factored g{a.factored_->scale / f->scale, a.factored_->factors};
            for (const auto &[l, k] : b.den_)
                g.factors[l] += k;
            out.factored_ = g;
        }
        out.normalize();
        return out;
    }

    friend bool operator==(const RatFunc &a, const RatFunc &b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    /// f(g^{-1}(z,x)) for the substitution z -> z + a . x, x -> B x.
    RatFunc substitute(const Vec3 &a, const std::array<Vec3, 3> &B) const
    {
        RatFunc out;
        out.num_ = num_.substitute(a, B);
        for (const auto &[l, k] : den_) {
            // l . (B x) = (B^T l) . x
            Vec3 img{0, 0, 0};
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    img[j] += l[i] * B[i][j];
            const auto [form, s] = normalize_linear(img);
            out.den_[form] += k;
            mpq_class sk = 1;
            for (int e = 0; e < k; ++e)
                sk *= s;
            out.num_ *= mpq_class(1) / sk;
        }
        out.normalize();
        return out;
    }

    cplx evaluate(cplx z, const std::array<cplx, 3> &x) const
    {
        cplx d{1.0, 0.0};
        for (const auto &[l, k] : den_)
            d *= std::pow(static_cast<real>(l[0]) * x[0] + static_cast<real>(l[1]) * x[1] +
                              static_cast<real>(l[2]) * x[2],
                          k);
        return num_.evaluate(z, x) / d;
    }

    std::string str() const
    {
        if (den_.empty())
            return num_.str();
        std::ostringstream os;
        os << "(" << num_.str() << ")/(";
        bool first = true;
        for (const auto &[l, k] : den_) {
            os << (first ? "" : "*") << "(" << Poly::linear(0, l).str() << ")";
            if (k > 1)
                os << "^" << k;
            first = false;
        }
        os << ")";
        return os.str();
    }

private:
    struct Factored {
        mpq_class scale;
        LinearFactors factors;
    };

    std::optional<Factored> factorization() const { return factored_; }

    static RatFunc add(const RatFunc &a, const RatFunc &b, bool subtract)
    {
        LinearFactors lcm = a.den_;
        for (const auto &[l, k] : b.den_)
            lcm[l] = std::max(lcm[l], k);
        auto lift = [&](const RatFunc &f) {
            Poly p = f.num_;
            for (const auto &[l, k] : lcm) {
                auto it = f.den_.find(l);
                const int have = it == f.den_.end() ? 0 : it->second;
                if (k > have)
                    p = p * Poly::linear(0, l).pow(k - have);
            }
            return p;
        };
        RatFunc out;
        out.num_ = subtract ? lift(a) - lift(b) : lift(a) + lift(b);
        out.den_ = lcm;
        out.normalize();
        return out;
    }

    // factored_, when set, records num_ = scale * prod l^k with k > 0.
    void normalize()
    {
        for (auto it = den_.begin(); it != den_.end();)
            it = it->second == 0 ? den_.erase(it) : std::next(it);
        if (num_.zero()) {
            den_.clear();
            factored_ = Factored{mpq_class(0), {}};
            return;
        }
        for (auto it = den_.begin(); it != den_.end();) {
            while (it->second > 0) {
                auto q = num_.divide_linear(it->first);
                if (!q)
                    break;
                num_ = std::move(*q);
                --it->second;
                if (factored_) {
                    auto f = factored_->factors.find(it->first);
                    if (f == factored_->factors.end())
                        factored_.reset();
                    else if (--f->second == 0)
                        factored_->factors.erase(f);
                }
            }
            it = it->second == 0 ? den_.erase(it) : std::next(it);
        }
        if (!factored_)
            detect_factorization();
    }

    void detect_factorization()
    {
        if (num_.constant()) {
            factored_ = Factored{num_.constant_term(), {}};
            return;
        }
        if (num_.homogeneous_degree() != 1 || num_.z_degree() != 0)
            return;
        mpq_class lc[3] = {0, 0, 0};
        for (const auto &[m, c] : num_.terms())
            for (std::size_t i = 1; i < 4; ++i)
                if (m[i] == 1)
                    lc[i - 1] = c;
        mpz_class den = 1;
        for (auto &c : lc)
            den = lcm(den, mpz_class(c.get_den()));
        Vec3 l{0, 0, 0};
        for (std::size_t i = 0; i < 3; ++i)
            l[i] = mpz_class(lc[i] * den).get_si();
        const auto [form, k] = normalize_linear(l);
        factored_ = Factored{mpq_class(k) / mpq_class(den), LinearFactors{{form, 1}}};
    }

    Poly num_;
    LinearFactors den_;
    std::optional<Factored> factored_;
};

/// A polynomial in z with coefficients in Q(x1, x2, x3).
class RatPoly
{
public:
    RatPoly() = default;
    explicit RatPoly(RatFunc f) : f_(std::move(f)) {}

    const RatFunc &value() const { return f_; }
    int degree() const { return f_.z_degree(); }

    std::vector<RatFunc> coefficients() const
    {
        std::vector<RatFunc> out;
        for (int k = 0; k <= degree(); ++k)
            out.push_back(f_.z_coefficient(k));
        return out;
    }

    /// Homogeneous of total degree 0 in (z, x1, x2, x3).
    bool in_m() const
    {
        const auto d = f_.homogeneous_degree();
        return d && *d == 0;
    }

private:
    RatFunc f_;
};

/// exp(2 pi i f) in M; equality is equality of f up to an integer constant.
class MClass
{
public:
    MClass() = default;
    explicit MClass(RatFunc f) : rep_(std::move(f))
    {
        if (!RatPoly(rep_).in_m())
            throw domain_error("MClass: exponent is not homogeneous of degree 0: " + rep_.str());
    }

    const RatFunc &rep() const { return rep_; }

    friend MClass operator*(const MClass &a, const MClass &b) { return MClass(a.rep_ + b.rep_); }
    MClass inverse() const { return MClass(-rep_); }

    friend bool operator==(const MClass &a, const MClass &b) { return (a.rep_ - b.rep_).integer_constant(); }

    cplx evaluate(cplx z, const std::array<cplx, 3> &x) const { return expi2pi(rep_.evaluate(z, x)); }

private:
    RatFunc rep_;
};

} // namespace egamma::cocycle

#endif
