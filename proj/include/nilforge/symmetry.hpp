#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nilforge/dga.hpp"

namespace nilforge {

/// Algebra endomorphism determined by degree-1 generator images, extended
/// multiplicatively.
template <ScalarField S>
class Morphism {
public:
    Morphism(GenSetPtr gens, std::vector<Form<S>> images)
        : gens_(std::move(gens)), images_(std::move(images)) {
        if (static_cast<int>(images_.size()) != gens_->size())
            throw AlgebraError("morphism must map every generator");
        for (const auto& img : images_) {
            if (!same_generators(img.gens(), gens_)) throw AlgebraError("morphism image over foreign generators");
            if (img.degree() != 1) throw AlgebraError("morphism image must have degree 1");
        }
    }

    static Morphism identity(GenSetPtr gens) {
        std::vector<Form<S>> images;
        for (int i = 0; i < gens->size(); ++i) images.push_back(Form<S>::generator(gens, i));
        return Morphism(std::move(gens), std::move(images));
    }

    const GenSetPtr& gens() const { return gens_; }
    const Form<S>& image(int i) const { return images_.at(i); }

    Form<S> apply(const Form<S>& f) const {
        if (!same_generators(f.gens(), gens_)) throw AlgebraError("form over foreign generators");
        Form<S> out = Form<S>::zero(gens_, f.degree());
        for (const auto& [m, c] : f.terms()) {
            Form<S> term = Form<S>::unit(gens_);
            for (int i : mono_indices(m)) term = wedge(term, images_[i]);
            out = out + c * term;
        }
        return out;
    }

    /// this ∘ other (apply other first).
    Morphism compose(const Morphism& other) const {
        std::vector<Form<S>> images;
        for (int i = 0; i < gens_->size(); ++i) images.push_back(apply(other.images_[i]));
        return Morphism(gens_, std::move(images));
    }

    bool is_identity() const {
        for (int i = 0; i < gens_->size(); ++i)
            if (images_[i] != Form<S>::generator(gens_, i)) return false;
        return true;
    }

    /// Degree-1 action: column j holds the coordinates of the image of
    /// generator j.
    Matrix<S> matrix() const {
        int n = gens_->size();
        Matrix<S> m(n, n);
        for (int j = 0; j < n; ++j)
            for (const auto& [mono, c] : images_[j].terms())
                m.at(mono_indices(mono)[0], j) = c;
        return m;
    }

    friend bool operator==(const Morphism& a, const Morphism& b) {
        return same_generators(a.gens_, b.gens_) && a.images_ == b.images_;
    }

private:
    GenSetPtr gens_;
    std::vector<Form<S>> images_;
};

/// Cyclic group action generated by a single algebra morphism of finite order.
template <ScalarField S>
struct CyclicAction {
    Morphism<S> generator;
    int order;
};

template <ScalarField S>
struct ActionReport {
    struct CochainViolation {
        int generator;
        Form<S> d_then_phi;
        Form<S> phi_then_d;
    };
    std::vector<CochainViolation> cochain_violations;
    bool power_is_identity = false;
    bool order_is_exact = false;  // no smaller positive power is the identity
    bool ok() const { return cochain_violations.empty() && power_is_identity && order_is_exact; }
};

template <ScalarField S>
ActionReport<S> verify_action(const Dga<S>& a, const CyclicAction<S>& act) {
    ActionReport<S> report;
    const Morphism<S>& phi = act.generator;
    for (int i = 0; i < a.n(); ++i) {
        Form<S> lhs = a.differential(phi.image(i));
        Form<S> rhs = phi.apply(a.d_of_generator(i));
        if (lhs != rhs) report.cochain_violations.push_back({i, lhs, rhs});
    }
    Morphism<S> power = phi;
    report.order_is_exact = true;
    for (int k = 1; k < act.order; ++k) {
        if (power.is_identity()) report.order_is_exact = false;
        power = phi.compose(power);
    }
    report.power_is_identity = power.is_identity();
    if (act.order < 1) report.order_is_exact = false;
    return report;
}

/// Group averaging projector (1/n) sum phi^k; requires 1/n in the field.
template <ScalarField S>
Form<S> average(const CyclicAction<S>& act, const Form<S>& f) {
    Form<S> acc = f;
    Form<S> cur = f;
    for (int k = 1; k < act.order; ++k) {
        cur = act.generator.apply(cur);
        acc = acc + cur;
    }
    return (S(1L) / S(static_cast<long>(act.order))) * acc;
}

/// Per-degree fixed subspace of phi^*, assembled as a d-closed subcomplex.
template <ScalarField S>
Complex<S> invariant_complex(const Dga<S>& a, const CyclicAction<S>& act) {
    std::vector<std::vector<Form<S>>> spans;
    for (int k = 0; k <= a.n(); ++k) {
        std::vector<Mono> monos = basis_of_degree(*a.gens(), k);
        int dim = static_cast<int>(monos.size());
        Matrix<S> fixed(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Form<S> img = act.generator.apply(Form<S>::monomial(a.gens(), monos[j]));
            int i = 0;
            for (const auto& [m, c] : img.terms()) {
                while (i < dim && mono_lex_less(monos[i], m)) ++i;
                fixed.at(i, j) = c;
            }
            fixed.at(j, j) -= S(1L);
        }
        std::vector<Form<S>> span;
        for (const auto& v : kernel_basis(std::move(fixed))) {
            Form<S> f = Form<S>::zero(a.gens(), k);
            for (int i = 0; i < dim; ++i)
                if (!v[i].is_zero()) f.add_term(monos[i], v[i]);
            span.push_back(std::move(f));
        }
        spans.push_back(std::move(span));
    }
    return Complex<S>::spanned(a, spans);
}

template <ScalarField S>
CohomologyBasis<S> invariant_cohomology(const Dga<S>& a, const CyclicAction<S>& act, int k) {
    return invariant_complex(a, act).cohomology(k);
}

/// Second computation path: dimensions of the phi^*-fixed subspace of H^k.
template <ScalarField S>
std::vector<int> fixed_cohomology_dims(const Complex<S>& full, const CyclicAction<S>& act) {
    std::vector<int> out;
    for (int k = 0; k <= full.top_degree(); ++k) {
        const CohomologyBasis<S>& basis = full.cohomology(k);
        int dim = basis.dimension();
        Matrix<S> m(dim, dim);
        for (int j = 0; j < dim; ++j) {
            CohomologyClass<S> img = class_of(full, act.generator.apply(basis.representatives[j]));
            for (int i = 0; i < dim; ++i) m.at(i, j) = img.coords[i];
            m.at(j, j) -= S(1L);
        }
        out.push_back(dim - rank(std::move(m)));
    }
    return out;
}

/// Rewrites the algebra in a new degree-1 basis. `images[i]` is the i-th new
/// generator expressed in the old basis; the matrix must be invertible.
template <ScalarField S>
Dga<S> change_of_basis(const Dga<S>& a, const std::vector<std::string>& new_names,
                       const std::vector<Form<S>>& images) {
    int n = a.n();
    if (static_cast<int>(new_names.size()) != n || static_cast<int>(images.size()) != n)
        throw AlgebraError("change of basis must cover every generator");
    Matrix<S> c(n, n);
    for (int i = 0; i < n; ++i) {
        if (images[i].degree() != 1 || !same_generators(images[i].gens(), a.gens()))
            throw AlgebraError("basis image must be a degree-1 form over the source algebra");
        for (const auto& [m, v] : images[i].terms()) c.at(i, mono_indices(m)[0]) = v;
    }
    auto cinv = inverse(c);
    if (!cinv) throw AlgebraError("singular change of basis");
    GenSetPtr gens = make_generators(new_names);
    // old generator j as a form in the new generators
    std::vector<Form<S>> old_in_new;
    for (int j = 0; j < n; ++j) {
        Form<S> f = Form<S>::zero(gens, 1);
        for (int i = 0; i < n; ++i) f.add_term(Mono(1) << i, cinv->at(j, i));
        old_in_new.push_back(std::move(f));
    }
    std::vector<Form<S>> dgen;
    for (int i = 0; i < n; ++i) {
        Form<S> d_old = a.differential(images[i]);  // 2-form in old generators
        Form<S> img = Form<S>::zero(gens, 2);
        for (const auto& [m, v] : d_old.terms()) {
            std::vector<int> idx = mono_indices(m);
            img = img + v * wedge(old_in_new[idx[0]], old_in_new[idx[1]]);
        }
        dgen.push_back(std::move(img));
    }
    return Dga<S>(gens, std::move(dgen));
}

}  // namespace nilforge
