#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nilforge/exterior.hpp"
#include "nilforge/rational.hpp"

namespace nilforge {

using IntMat = std::vector<std::vector<mpz_class>>;
using RatVec = std::vector<Rational>;

inline IntMat int_identity(int n) {
    IntMat m(n, std::vector<mpz_class>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IntMat int_mul(const IntMat& a, const IntMat& b) {
    int n = static_cast<int>(a.size()), p = static_cast<int>(b[0].size()),
        q = static_cast<int>(b.size());
    IntMat out(n, std::vector<mpz_class>(p, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < q; ++k)
            if (a[i][k] != 0)
                for (int j = 0; j < p; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline mpz_class int_det(IntMat m) {
    // fraction-free Gaussian elimination (Bareiss)
    int n = static_cast<int>(m.size());
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

/// Smith normal form: unimodular u, v with u * a * v = d diagonal,
/// d[i] | d[i+1]. Deterministic pivot selection (smallest nonzero magnitude,
/// first position on ties).
struct SmithForm {
    IntMat u, d, v;
};

inline SmithForm smith_normal_form(IntMat a) {
    int rows = static_cast<int>(a.size());
    int cols = static_cast<int>(a[0].size());
    IntMat u = int_identity(rows);
    IntMat v = int_identity(cols);
    auto row_op = [&](int i, int j, const mpz_class& f) {  // row_i -= f * row_j
        for (int c = 0; c < cols; ++c) a[i][c] -= f * a[j][c];
        for (int c = 0; c < rows; ++c) u[i][c] -= f * u[j][c];
    };
    auto col_op = [&](int i, int j, const mpz_class& f) {  // col_i -= f * col_j
        for (int r = 0; r < rows; ++r) a[r][i] -= f * a[r][j];
        for (int r = 0; r < cols; ++r) v[r][i] -= f * v[r][j];
    };
    auto row_swap = [&](int i, int j) {
        std::swap(a[i], a[j]);
        std::swap(u[i], u[j]);
    };
    auto col_swap = [&](int i, int j) {
        for (int r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
        for (int r = 0; r < cols; ++r) std::swap(v[r][i], v[r][j]);
    };
    int t = 0;
    int limit = std::min(rows, cols);
    while (t < limit) {
        // pick pivot of smallest nonzero magnitude in the trailing block
        int pi = -1, pj = -1;
        mpz_class best = 0;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                if (a[i][j] == 0) continue;
                mpz_class mag = abs(a[i][j]);
                if (pi < 0 || mag < best) {
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        if (pi != t) row_swap(t, pi);
        if (pj != t) col_swap(t, pj);
        bool dirty = false;
        for (int i = t + 1; i < rows; ++i) {
            if (a[i][t] == 0) continue;
            mpz_class f;
            mpz_fdiv_q(f.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
            row_op(i, t, f);
            if (a[i][t] != 0) dirty = true;
        }
        for (int j = t + 1; j < cols; ++j) {
            if (a[t][j] == 0) continue;
            mpz_class f;
            mpz_fdiv_q(f.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
            col_op(j, t, f);
            if (a[t][j] != 0) dirty = true;
        }
        if (dirty) continue;  // remainders left; re-pick a smaller pivot
        // enforce divisibility of the trailing block by the pivot
        bool divisible = true;
        for (int i = t + 1; i < rows && divisible; ++i)
            for (int j = t + 1; j < cols && divisible; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    row_op(t, i, mpz_class(-1));  // fold row i into the pivot row
                    divisible = false;
                }
        if (!divisible) continue;
        if (a[t][t] < 0) {
            for (int c = 0; c < cols; ++c) a[t][c] = -a[t][c];
            for (int c = 0; c < rows; ++c) u[t][c] = -u[t][c];
        }
        ++t;
    }
    return SmithForm{std::move(u), std::move(a), std::move(v)};
}

class LatticeError : public std::runtime_error {
public:
    explicit LatticeError(const std::string& what) : std::runtime_error(what) {}
};

/// Affine map x -> A x + b of finite order on the torus R^m / L, with L given
/// by an integer basis (one lattice vector per row).
struct AffineTorusAction {
    IntMat linear;
    RatVec translation;  // empty means zero
    IntMat lattice;      // rows are lattice basis vectors
    int order = 1;
};

namespace detail {

inline std::vector<std::vector<Rational>> rational_inverse(const IntMat& m) {
    int n = static_cast<int>(m.size());
    std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = Rational(m[i][j]);
        aug[i][n + i] = Rational(1);
    }
    for (int c = 0, r = 0; c < n && r < n; ++c) {
        int pr = -1;
        for (int i = r; i < n; ++i)
            if (!aug[i][c].is_zero()) {
                pr = i;
                break;
            }
        if (pr < 0) throw LatticeError("lattice basis is singular");
        std::swap(aug[r], aug[pr]);
        Rational inv = aug[r][c].inverse();
        for (auto& x : aug[r]) x = inv * x;
        for (int i = 0; i < n; ++i) {
            if (i == r || aug[i][c].is_zero()) continue;
            Rational f = aug[i][c];
            for (int j = 0; j < 2 * n; ++j) aug[i][j] -= f * aug[r][j];
        }
        ++r;
    }
    std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
    return out;
}

inline Rational frac(const Rational& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.numerator().get_mpz_t(), x.denominator().get_mpz_t());
    return x - Rational(q);
}

}  // namespace detail

/// Conjugates the action into lattice coordinates: u -> B u + c on R^m / Z^m.
/// Throws when A does not stabilize the lattice or the order is wrong.
struct LatticeCoordsAction {
    IntMat b;
    RatVec c;
};

inline LatticeCoordsAction to_lattice_coords(const AffineTorusAction& act) {
    int m = static_cast<int>(act.linear.size());
    // column-basis matrix C: C[i][j] = i-th component of j-th lattice vector
    IntMat cmat(m, std::vector<mpz_class>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) cmat[i][j] = act.lattice[j][i];
    auto cinv = detail::rational_inverse(cmat);
    IntMat b(m, std::vector<mpz_class>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Rational entry;
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l)
                    entry += cinv[i][k] * Rational(act.linear[k][l]) * Rational(cmat[l][j]);
            if (entry.denominator() != 1)
                throw LatticeError("linear part does not map the lattice into itself");
            b[i][j] = entry.numerator();
        }
    RatVec c(m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            if (k < static_cast<int>(act.translation.size()))
                c[i] += cinv[i][k] * act.translation[k];
    return LatticeCoordsAction{std::move(b), std::move(c)};
}

/// Checks the declared order: the affine map iterated `order` times is the
/// identity on the torus, and no smaller positive power is.
inline bool action_order_is_exact(const AffineTorusAction& act) {
    LatticeCoordsAction lc = to_lattice_coords(act);
    int m = static_cast<int>(lc.b.size());
    IntMat power = int_identity(m);
    RatVec shift(m);
    for (int k = 1; k <= act.order; ++k) {
        RatVec next(m);
        for (int i = 0; i < m; ++i) {
            next[i] = lc.c[i];
            for (int j = 0; j < m; ++j)
                if (lc.b[i][j] != 0) next[i] += Rational(lc.b[i][j]) * shift[j];
        }
        shift = std::move(next);
        power = int_mul(lc.b, power);
        bool is_id = power == int_identity(m);
        for (const Rational& s : shift)
            if (!detail::frac(s).is_zero()) is_id = false;
        if (is_id != (k == act.order)) return false;
    }
    return true;
}

/// All isolated fixed points on the torus, as canonical representatives
/// (lattice coordinates reduced to [0,1)^m, mapped back), sorted.
inline std::vector<RatVec> fixed_points(const AffineTorusAction& act) {
    LatticeCoordsAction lc = to_lattice_coords(act);
    int m = static_cast<int>(lc.b.size());
    IntMat bmi = lc.b;
    for (int i = 0; i < m; ++i) bmi[i][i] -= 1;
    if (int_det(bmi) == 0) throw LatticeError("non-isolated fixed set: det(A - I) = 0");
    SmithForm snf = smith_normal_form(bmi);
    // solve D w = U(-c) + k componentwise
    RatVec t(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (snf.u[i][j] != 0) t[i] += Rational(snf.u[i][j]) * (-lc.c[j]);
    std::vector<long> counts(m);
    for (int i = 0; i < m; ++i) counts[i] = std::abs(static_cast<long>(snf.d[i][i].get_si()));
    std::vector<RatVec> points;
    std::vector<long> idx(m, 0);
    while (true) {
        RatVec w(m);
        for (int i = 0; i < m; ++i)
            w[i] = (t[i] + Rational(idx[i])) / Rational(snf.d[i][i]);
        RatVec u(m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                if (snf.v[i][j] != 0) u[i] += Rational(snf.v[i][j]) * w[j];
            u[i] = detail::frac(u[i]);
        }
        RatVec x(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (act.lattice[j][i] != 0) x[i] += Rational(act.lattice[j][i]) * u[j];
        points.push_back(std::move(x));
        int pos = m - 1;
        while (pos >= 0 && idx[pos] == counts[pos] - 1) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int q = pos + 1; q < m; ++q) idx[q] = 0;
    }
    std::sort(points.begin(), points.end(), [](const RatVec& a, const RatVec& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    });
    return points;
}

/// Whether p and q name the same torus point (difference in the lattice).
inline bool lattice_equivalent(const AffineTorusAction& act, const RatVec& p, const RatVec& q) {
    int m = static_cast<int>(act.lattice.size());
    IntMat cmat(m, std::vector<mpz_class>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) cmat[i][j] = act.lattice[j][i];
    auto cinv = detail::rational_inverse(cmat);
    for (int i = 0; i < m; ++i) {
        Rational diff;
        for (int k = 0; k < m; ++k) diff += cinv[i][k] * (p[k] - q[k]);
        if (diff.denominator() != 1) return false;
    }
    return true;
}

/// chi(X/Pi) = chi(X)/n + sum_p (1 - 1/|Pi_p|), exactly.
inline Rational orbifold_euler(long chi_x, int n, const std::vector<int>& isotropy_orders) {
    if (n < 1) throw LatticeError("group order must be positive");
    Rational out = Rational(chi_x) / Rational(n);
    for (int o : isotropy_orders) {
        if (o < 1 || n % o != 0)
            throw LatticeError("isotropy order " + std::to_string(o) + " does not divide " +
                               std::to_string(n));
        out += Rational(1) - Rational(1, o);
    }
    return out;
}

// ---------------------------------------------------------------------------
// polynomial group laws
// ---------------------------------------------------------------------------

/// Sparse polynomial with rational coefficients over a fixed variable count.
class Polynomial {
public:
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    int nvars() const { return nvars_; }
    const std::map<std::vector<int>, Rational>& terms() const { return terms_; }

    void add_term(std::vector<int> exps, const Rational& c) {
        if (static_cast<int>(exps.size()) != nvars_) throw LatticeError("exponent arity mismatch");
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(std::move(exps), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Rational eval(const RatVec& point) const {
        Rational out;
        for (const auto& [exps, c] : terms_) {
            Rational term = c;
            for (int v = 0; v < nvars_; ++v)
                for (int e = 0; e < exps[v]; ++e) term *= point[v];
            out += term;
        }
        return out;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

private:
    int nvars_;
    std::map<std::vector<int>, Rational> terms_;
};

/// Coordinate-wise multiplication rule m(p, q) on R^m; component polynomials
/// take the 2m variables (p_1..p_m, q_1..q_m).
struct GroupLaw {
    int m = 0;
    std::vector<Polynomial> components;
    std::optional<IntMat> equivariance;  // linear map rho to test m(Rp,Rq) = R m(p,q)
    struct Congruence {
        long modulus = 0;
        int i = 0;  // coordinate indices with x_i = x_j (mod modulus)
        int j = 0;
    };
    std::optional<Congruence> congruence;

    RatVec multiply(const RatVec& p, const RatVec& q) const {
        RatVec point;
        point.reserve(2 * m);
        point.insert(point.end(), p.begin(), p.end());
        point.insert(point.end(), q.begin(), q.end());
        RatVec out(m);
        for (int i = 0; i < m; ++i) out[i] = components[i].eval(point);
        return out;
    }
};

struct GroupLawReport {
    struct Failure {
        std::string check;
        std::vector<RatVec> tuple;
    };
    int samples = 0;
    std::vector<Failure> failures;
    bool ok() const { return failures.empty(); }
};

namespace detail {

inline RatVec apply_int_matrix(const IntMat& m, const RatVec& x) {
    int n = static_cast<int>(m.size());
    RatVec out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m[i][j] != 0) out[i] += Rational(m[i][j]) * x[j];
    return out;
}

/// Solves m(p, q) = 0 for q coordinate-by-coordinate; valid for
/// unitriangular laws (component i = p_i + q_i + terms in earlier q's).
inline std::optional<RatVec> right_inverse(const GroupLaw& law, const RatVec& p) {
    RatVec q(law.m);
    for (int i = 0; i < law.m; ++i) {
        q[i] = Rational(0);
        RatVec probe = law.multiply(p, q);
        q[i] = -probe[i];
    }
    RatVec check = law.multiply(p, q);
    for (const Rational& v : check)
        if (!v.is_zero()) return std::nullopt;
    return q;
}

}  // namespace detail

/// Randomized suite: associativity, identity, inverses, equivariance and
/// congruence stability on `samples` rational tuples from a fixed seed.
inline GroupLawReport group_law_check(const GroupLaw& law, int samples, unsigned long seed = 20061u) {
    GroupLawReport report;
    report.samples = samples;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 4);
    std::uniform_int_distribution<long> integer(-12, 12);
    auto rat_tuple = [&] {
        RatVec v(law.m);
        for (auto& x : v) x = Rational(num(rng), den(rng));
        return v;
    };
    auto add_failure = [&](const std::string& check, std::vector<RatVec> tuple) {
        if (report.failures.size() < 8) report.failures.push_back({check, std::move(tuple)});
    };
    RatVec e(law.m);
    for (int s = 0; s < samples; ++s) {
        RatVec p = rat_tuple(), q = rat_tuple(), r = rat_tuple();
        if (law.multiply(law.multiply(p, q), r) != law.multiply(p, law.multiply(q, r)))
            add_failure("associativity", {p, q, r});
        if (law.multiply(e, p) != p || law.multiply(p, e) != p) add_failure("identity", {p});
        auto inv = detail::right_inverse(law, p);
        if (!inv || law.multiply(*inv, p) != e)
            add_failure("inverse", {p});
        if (law.equivariance) {
            RatVec lhs = law.multiply(detail::apply_int_matrix(*law.equivariance, p),
                                      detail::apply_int_matrix(*law.equivariance, q));
            RatVec rhs = detail::apply_int_matrix(*law.equivariance, law.multiply(p, q));
            if (lhs != rhs) add_failure("equivariance", {p, q});
        }
        if (law.congruence) {
            const auto& cg = *law.congruence;
            auto int_tuple_in_gamma = [&] {
                RatVec v(law.m);
                for (auto& x : v) x = Rational(integer(rng));
                mpz_class base = v[cg.i].numerator() % cg.modulus;
                mpz_class adjusted = v[cg.j].numerator() - (v[cg.j].numerator() % cg.modulus) + base;
                v[cg.j] = Rational(adjusted);
                return v;
            };
            auto in_gamma = [&](const RatVec& v) {
                for (const Rational& x : v)
                    if (x.denominator() != 1) return false;
                mpz_class diff = v[cg.i].numerator() - v[cg.j].numerator();
                return diff % cg.modulus == 0;
            };
            RatVec gp = int_tuple_in_gamma(), gq = int_tuple_in_gamma();
            if (!in_gamma(gp) || !in_gamma(gq)) add_failure("congruence sampling", {gp, gq});
            if (!in_gamma(law.multiply(gp, gq))) add_failure("congruence closure", {gp, gq});
            if (law.equivariance && !in_gamma(detail::apply_int_matrix(*law.equivariance, gp)))
                add_failure("congruence rho-stability", {gp});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// polynomial-coefficient differential forms on R^m
// ---------------------------------------------------------------------------

/// Differential form on R^m whose coefficients are rational polynomials in
/// the coordinates; supports wedge and the exterior derivative.
class PolyForm {
public:
    struct Key {
        std::vector<int> exps;
        Mono dx = 0;
        friend bool operator<(const Key& a, const Key& b) {
            if (a.exps != b.exps) return a.exps < b.exps;
            return mono_lex_less(a.dx, b.dx);
        }
        friend bool operator==(const Key& a, const Key& b) = default;
    };

    explicit PolyForm(int nvars) : nvars_(nvars) {}

    int nvars() const { return nvars_; }
    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(std::vector<int> exps, Mono dx, const Rational& c) {
        if (static_cast<int>(exps.size()) != nvars_) throw LatticeError("exponent arity mismatch");
        if (c.is_zero()) return;
        Key key{std::move(exps), dx};
        auto [it, fresh] = terms_.emplace(std::move(key), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend PolyForm operator+(const PolyForm& a, const PolyForm& b) {
        PolyForm out = a;
        for (const auto& [k, c] : b.terms_) out.add_term(k.exps, k.dx, c);
        return out;
    }

    friend bool operator==(const PolyForm& a, const PolyForm& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

private:
    int nvars_;
    std::map<Key, Rational> terms_;
};

inline PolyForm poly_wedge(const PolyForm& a, const PolyForm& b) {
    PolyForm out(a.nvars());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            int sign = wedge_sign(ka.dx, kb.dx);
            if (sign == 0) continue;
            std::vector<int> exps = ka.exps;
            for (int v = 0; v < a.nvars(); ++v) exps[v] += kb.exps[v];
            Rational c = ca * cb;
            out.add_term(std::move(exps), ka.dx | kb.dx, sign < 0 ? -c : c);
        }
    return out;
}

/// Exterior derivative: d(g dx_I) = sum_v (dg/dx_v) dx_v ^ dx_I.
inline PolyForm poly_d(const PolyForm& f) {
    PolyForm out(f.nvars());
    for (const auto& [k, c] : f.terms()) {
        for (int v = 0; v < f.nvars(); ++v) {
            if (k.exps[v] == 0) continue;
            Mono dv = Mono(1) << v;
            int sign = wedge_sign(dv, k.dx);
            if (sign == 0) continue;
            std::vector<int> exps = k.exps;
            exps[v] -= 1;
            Rational coeff = Rational(k.exps[v]) * c;
            out.add_term(std::move(exps), dv | k.dx, sign < 0 ? -coeff : coeff);
        }
    }
    return out;
}

}  // namespace nilforge
