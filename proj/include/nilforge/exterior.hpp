#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nilforge/quadext.hpp"

namespace nilforge {

class AlgebraError : public std::runtime_error {
public:
    explicit AlgebraError(const std::string& what) : std::runtime_error(what) {}
};

/// Canonical monomial of the exterior algebra: bit i set means generator i
/// occurs. Degree-1 generators only, so a word of 64 bits covers every
/// supported generator set and the strictly-increasing index sequence is
/// exactly the set of bits read from low to high.
using Mono = std::uint64_t;

constexpr Mono kUnitMono = 0;

inline int mono_degree(Mono m) { return std::popcount(m); }

inline Mono mono_of(std::initializer_list<int> indices) {
    Mono m = 0;
    for (int i : indices) m |= Mono(1) << i;
    return m;
}

inline std::vector<int> mono_indices(Mono m) {
    std::vector<int> out;
    while (m != 0) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

/// Lexicographic order on the increasing index sequences (prefixes first).
inline bool mono_lex_less(Mono a, Mono b) {
    while (a != 0 && b != 0) {
        int ia = std::countr_zero(a);
        int ib = std::countr_zero(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

struct MonoLess {
    bool operator()(Mono a, Mono b) const { return mono_lex_less(a, b); }
};

/// Sign of merging disjoint monomials a^b into canonical order:
/// (-1)^{#inversions}. Returns 0 when an index repeats.
inline int wedge_sign(Mono a, Mono b) {
    if ((a & b) != 0) return 0;
    int inversions = 0;
    Mono rest = b;
    while (rest != 0) {
        int j = std::countr_zero(rest);
        Mono above = (j == 63) ? 0 : (a >> (j + 1));
        inversions += std::popcount(above);
        rest &= rest - 1;
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

/// Ordered set of degree-1 generator names, fixed at creation.
class GeneratorSet {
public:
    explicit GeneratorSet(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.size() > 64) throw AlgebraError("at most 64 generators supported");
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw AlgebraError("duplicate generator name: " + names_[i]);
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<int> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return std::nullopt;
    }

    std::string mono_name(Mono m) const {
        if (m == kUnitMono) return "1";
        std::string out;
        for (int i : mono_indices(m)) {
            if (!out.empty()) out += "^";
            out += name(i);
        }
        return out;
    }

    friend bool operator==(const GeneratorSet& a, const GeneratorSet& b) {
        return a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
};

using GenSetPtr = std::shared_ptr<const GeneratorSet>;

inline GenSetPtr make_generators(std::vector<std::string> names) {
    return std::make_shared<const GeneratorSet>(std::move(names));
}

inline bool same_generators(const GenSetPtr& a, const GenSetPtr& b) {
    return a == b || (a && b && *a == *b);
}

/// Homogeneous element of the exterior algebra: sparse map from canonical
/// monomials to nonzero scalars. Immutable in spirit; mutating helpers keep
/// the normal form (no zero coefficients, every monomial of the stated degree).
template <ScalarField S>
class Form {
public:
    using Scalar = S;
    using TermMap = std::map<Mono, S, MonoLess>;

    /// Placeholder (no generator set); meant to be assigned before use.
    Form() = default;

    /// Degrees above the generator count are allowed; those slices are zero,
    /// so such a form never carries terms.
    Form(GenSetPtr gens, int degree) : gens_(std::move(gens)), degree_(degree) {
        if (!gens_) throw AlgebraError("form without generator set");
        if (degree_ < 0 || degree_ > 128) throw AlgebraError("form degree out of range");
    }

    static Form zero(GenSetPtr gens, int degree) { return Form(std::move(gens), degree); }

    static Form unit(GenSetPtr gens) {
        Form f(std::move(gens), 0);
        f.terms_.emplace(kUnitMono, S(1L));
        return f;
    }

    static Form generator(GenSetPtr gens, int i) {
        if (i < 0 || i >= gens->size()) throw AlgebraError("generator index out of range");
        Form f(std::move(gens), 1);
        f.terms_.emplace(Mono(1) << i, S(1L));
        return f;
    }

    static Form monomial(GenSetPtr gens, Mono m, S coeff = S(1L)) {
        Form f(std::move(gens), mono_degree(m));
        if (!coeff.is_zero()) f.terms_.emplace(m, std::move(coeff));
        return f;
    }

    const GenSetPtr& gens() const { return gens_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    S coeff(Mono m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? S() : it->second;
    }

    Form& add_term(Mono m, const S& c) {
        if (mono_degree(m) != degree_) throw AlgebraError("monomial degree mismatch");
        if (c.is_zero()) return *this;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
        return *this;
    }

    friend Form operator+(const Form& a, const Form& b) {
        require_compatible(a, b);
        Form out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend Form operator-(const Form& a, const Form& b) {
        require_compatible(a, b);
        Form out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
        return out;
    }
    Form operator-() const {
        Form out(gens_, degree_);
        for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
        return out;
    }
    friend Form operator*(const S& c, const Form& f) {
        Form out(f.gens_, f.degree_);
        if (c.is_zero()) return out;
        for (const auto& [m, v] : f.terms_) out.terms_.emplace(m, c * v);
        return out;
    }

    friend bool operator==(const Form& a, const Form& b) {
        return a.degree_ == b.degree_ && a.terms_ == b.terms_ && same_generators(a.gens_, b.gens_);
    }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

private:
    static void require_compatible(const Form& a, const Form& b) {
        if (!same_generators(a.gens_, b.gens_)) throw AlgebraError("mismatched generator sets");
        if (a.degree_ != b.degree_) throw AlgebraError("mixed degrees in form sum");
    }

    GenSetPtr gens_;
    int degree_ = 0;
    TermMap terms_;
};

/// Graded product; repeated generators annihilate, signs by inversion count.
template <ScalarField S>
Form<S> wedge(const Form<S>& f, const Form<S>& g) {
    if (!same_generators(f.gens(), g.gens())) throw AlgebraError("mismatched generator sets");
    int deg = f.degree() + g.degree();
    Form<S> out(f.gens(), deg);
    if (deg > f.gens()->size()) return out;
    for (const auto& [ma, ca] : f.terms()) {
        for (const auto& [mb, cb] : g.terms()) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            S c = ca * cb;
            out.add_term(ma | mb, s < 0 ? -c : c);
        }
    }
    return out;
}

template <ScalarField S>
Form<S> wedge_power(const Form<S>& f, int k) {
    if (k < 0) throw AlgebraError("negative wedge power");
    Form<S> out = Form<S>::unit(f.gens());
    for (int i = 0; i < k; ++i) out = wedge(out, f);
    return out;
}

/// Exact linear combination of same-degree forms.
template <ScalarField S>
Form<S> lin_comb(const std::vector<S>& coeffs, const std::vector<Form<S>>& forms) {
    if (coeffs.size() != forms.size()) throw AlgebraError("coefficient/form count mismatch");
    if (forms.empty()) throw AlgebraError("empty linear combination");
    Form<S> out = Form<S>::zero(forms.front().gens(), forms.front().degree());
    for (std::size_t i = 0; i < forms.size(); ++i) out = out + coeffs[i] * forms[i];
    return out;
}

/// All C(n,k) degree-k monomials in lexicographic order.
inline std::vector<Mono> basis_of_degree(const GeneratorSet& gens, int k) {
    int n = gens.size();
    if (k < 0 || k > n) throw AlgebraError("basis degree out of range");
    std::vector<Mono> out;
    if (k == 0) {
        out.push_back(kUnitMono);
        return out;
    }
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        Mono m = 0;
        for (int i : idx) m |= Mono(1) << i;
        out.push_back(m);
        int p = k - 1;
        while (p >= 0 && idx[p] == n - k + p) --p;
        if (p < 0) break;
        ++idx[p];
        for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
    return out;
}

/// Canonical printer shared with the workspace language: terms in monomial
/// order, explicit coefficients, `^` between generators.
template <ScalarField S>
std::string format_form(const Form<S>& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : f.terms()) {
        std::string cs = c.str();
        bool neg = !cs.empty() && cs[0] == '-';
        std::string mag = neg ? cs.substr(1) : cs;
        bool composite = mag.find(' ') != std::string::npos || mag.find('+') != std::string::npos ||
                         mag.find('-') != std::string::npos;
        if (out.empty()) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        std::string name = f.gens()->mono_name(m);
        if (m == kUnitMono) {
            out += composite ? "(" + mag + ")" : mag;
        } else if (mag == "1" && !composite) {
            out += name;
        } else {
            out += (composite ? "(" + mag + ")" : mag) + " " + name;
        }
    }
    return out;
}

}  // namespace nilforge
