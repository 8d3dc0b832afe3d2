#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilforge/exterior.hpp"
#include "nilforge/linalg.hpp"

namespace nilforge {

/// Chevalley-Eilenberg style differential algebra: degree-1 generators with
/// degree-2 differential images, extended to everything by the Leibniz rule.
template <ScalarField S>
class Dga {
public:
    using Scalar = S;

    Dga(GenSetPtr gens, std::vector<Form<S>> dgen) : gens_(std::move(gens)), dgen_(std::move(dgen)) {
        if (static_cast<int>(dgen_.size()) != gens_->size())
            throw AlgebraError("differential must be given on every generator");
        for (const auto& img : dgen_) {
            if (!same_generators(img.gens(), gens_)) throw AlgebraError("differential image over foreign generators");
            if (img.degree() != 2) throw AlgebraError("differential image must have degree 2");
        }
    }

    /// All differentials zero (torus / free abelian case).
    static Dga torus(GenSetPtr gens) {
        std::vector<Form<S>> zero(gens->size(), Form<S>::zero(gens, 2));
        return Dga(gens, std::move(zero));
    }

    const GenSetPtr& gens() const { return gens_; }
    int n() const { return gens_->size(); }
    const Form<S>& d_of_generator(int i) const { return dgen_.at(i); }

    /// Leibniz extension of the generator differentials; raises degree by 1.
    Form<S> differential(const Form<S>& f) const {
        if (!same_generators(f.gens(), gens_)) throw AlgebraError("form over foreign generators");
        Form<S> out = Form<S>::zero(gens_, f.degree() + 1);
        if (f.degree() >= n()) return out;
        for (const auto& [m, c] : f.terms()) {
            int pos = 0;
            for (int i : mono_indices(m)) {
                const Form<S>& di = dgen_[i];
                if (!di.is_zero()) {
                    Mono prefix = m & ((Mono(1) << i) - 1);
                    Mono suffix = m & ~((Mono(1) << (i + 1)) - 1);
                    Form<S> term = wedge(wedge(Form<S>::monomial(gens_, prefix), di),
                                         Form<S>::monomial(gens_, suffix));
                    S sign_c = (pos % 2 == 0) ? c : -c;
                    out = out + sign_c * term;
                }
                ++pos;
            }
        }
        return out;
    }

    friend bool operator==(const Dga& a, const Dga& b) {
        return same_generators(a.gens_, b.gens_) && a.dgen_ == b.dgen_;
    }

private:
    GenSetPtr gens_;
    std::vector<Form<S>> dgen_;
};

/// Outcome of the d^2 = 0 check, one entry per violating generator.
template <ScalarField S>
struct D2Report {
    struct Violation {
        int generator;
        Form<S> d_squared;
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

template <ScalarField S>
D2Report<S> verify_d2(const Dga<S>& a) {
    D2Report<S> report;
    for (int i = 0; i < a.n(); ++i) {
        Form<S> dd = a.differential(a.d_of_generator(i));
        if (!dd.is_zero()) report.violations.push_back({i, std::move(dd)});
    }
    return report;
}

/// Union of two algebras with disjoint (renamed if necessary) generators.
template <ScalarField S>
Dga<S> tensor_product(const Dga<S>& a, const Dga<S>& b) {
    std::vector<std::string> names = a.gens()->names();
    auto taken = [&names](const std::string& s) {
        for (const auto& n : names)
            if (n == s) return true;
        return false;
    };
    for (const std::string& bn : b.gens()->names()) {
        std::string candidate = bn;
        int suffix = 2;
        while (taken(candidate)) candidate = bn + std::to_string(suffix++);
        names.push_back(candidate);
    }
    GenSetPtr gens = make_generators(std::move(names));
    int na = a.n();
    std::vector<Form<S>> dgen;
    dgen.reserve(gens->size());
    for (int i = 0; i < na; ++i) {
        Form<S> img = Form<S>::zero(gens, 2);
        for (const auto& [m, c] : a.d_of_generator(i).terms()) img.add_term(m, c);
        dgen.push_back(std::move(img));
    }
    for (int j = 0; j < b.n(); ++j) {
        Form<S> img = Form<S>::zero(gens, 2);
        for (const auto& [m, c] : b.d_of_generator(j).terms()) img.add_term(m << na, c);
        dgen.push_back(std::move(img));
    }
    return Dga<S>(gens, std::move(dgen));
}

template <ScalarField S>
struct CohomologyBasis {
    int degree = 0;
    std::vector<Form<S>> representatives;
    /// Representative coordinates in the complex's degree-k slice basis,
    /// rows of a reduced echelon matrix (canonical across runs).
    std::vector<std::vector<S>> rep_coords;
    std::vector<int> rep_pivots;
    int dimension() const { return static_cast<int>(representatives.size()); }
};

template <ScalarField S>
struct CohomologyClass {
    int degree = 0;
    std::vector<S> coords;
    Form<S> representative;
    bool is_zero() const {
        for (const auto& c : coords)
            if (!c.is_zero()) return false;
        return true;
    }
};

/// A cochain complex carved out of a Dga: either the whole free algebra or a
/// d-closed spanned subcomplex. Bases, differentials and cohomology are all
/// computed eagerly with deterministic pivoting, so instances are immutable
/// and safe to share across threads.
template <ScalarField S>
class Complex {
public:
    static Complex full(Dga<S> dga) {
        Complex c(std::move(dga), false);
        int n = c.dga_.n();
        for (int k = 0; k <= n; ++k) {
            std::vector<Mono> monos = basis_of_degree(*c.dga_.gens(), k);
            c.slice_monos_.push_back(monos);
            std::vector<Form<S>> fs;
            fs.reserve(monos.size());
            for (Mono m : monos) fs.push_back(Form<S>::monomial(c.dga_.gens(), m));
            c.basis_.push_back(std::move(fs));
        }
        c.finish();
        return c;
    }

    /// Spanning forms per degree (index = degree, may be ragged/missing at the
    /// tail); canonicalized by row reduction and validated d-closed.
    static Complex spanned(Dga<S> dga, const std::vector<std::vector<Form<S>>>& spans) {
        Complex c(std::move(dga), true);
        int n = c.dga_.n();
        for (int k = 0; k <= n; ++k) {
            std::vector<Mono> monos = basis_of_degree(*c.dga_.gens(), k);
            c.slice_monos_.push_back(monos);
            std::vector<std::vector<S>> rows;
            if (k < static_cast<int>(spans.size())) {
                for (const Form<S>& f : spans[k]) {
                    if (f.degree() != k) throw AlgebraError("span form of wrong degree");
                    rows.push_back(c.mono_coords(k, f));
                }
            }
            Matrix<S> m = from_rows(rows, static_cast<int>(monos.size()));
            std::vector<int> pivots = rref(m);
            std::vector<Form<S>> fs;
            for (std::size_t r = 0; r < pivots.size(); ++r)
                fs.push_back(c.form_from_monos(k, m.row(int(r))));
            c.basis_.push_back(std::move(fs));
        }
        c.finish();
        return c;
    }

    const Dga<S>& dga() const { return dga_; }
    bool is_subcomplex() const { return sub_; }
    int top_degree() const { return dga_.n(); }
    int dim(int k) const {
        return (k < 0 || k > top_degree()) ? 0 : static_cast<int>(basis_[k].size());
    }
    const std::vector<Form<S>>& slice_basis(int k) const { return basis_.at(k); }

    Form<S> differential(const Form<S>& f) const { return dga_.differential(f); }

    /// Coordinates of f in the degree-k slice basis; nullopt when f does not
    /// lie in the slice (only possible for subcomplexes).
    std::optional<std::vector<S>> to_coords(int k, const Form<S>& f) const {
        if (f.degree() != k) throw AlgebraError("degree mismatch in to_coords");
        std::vector<S> mono = mono_coords(k, f);
        if (!sub_) return mono;
        std::vector<S> coords(dim(k));
        for (int r = 0; r < dim(k); ++r) {
            S c = mono[slice_pivots_[k][r]];
            if (c.is_zero()) continue;
            coords[r] = c;
            const std::vector<S>& row = basis_coords_[k][r];
            for (std::size_t j = 0; j < mono.size(); ++j)
                if (!row[j].is_zero()) mono[j] -= c * row[j];
        }
        for (const S& c : mono)
            if (!c.is_zero()) return std::nullopt;
        return coords;
    }

    Form<S> from_coords(int k, const std::vector<S>& coords) const {
        Form<S> out = Form<S>::zero(dga_.gens(), k);
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (!coords[i].is_zero()) out = out + coords[i] * basis_[k][i];
        return out;
    }

    /// Matrix of d : slice_k -> slice_{k+1}.
    const Matrix<S>& d_matrix(int k) const { return dmat_.at(k); }

    const CohomologyBasis<S>& cohomology(int k) const {
        if (k < 0 || k > top_degree()) throw AlgebraError("cohomology degree out of range");
        return cohomology_.at(k);
    }

    std::vector<int> betti() const {
        std::vector<int> out;
        for (int k = 0; k <= top_degree(); ++k) out.push_back(cohomology_[k].dimension());
        return out;
    }

    long euler_characteristic() const {
        long chi = 0;
        int sign = 1;
        for (int k = 0; k <= top_degree(); ++k, sign = -sign) chi += sign * cohomology_[k].dimension();
        return chi;
    }

private:
    Complex(Dga<S> dga, bool sub) : dga_(std::move(dga)), sub_(sub) {}

    std::vector<S> mono_coords(int k, const Form<S>& f) const {
        const std::vector<Mono>& monos = slice_monos_[k];
        std::vector<S> v(monos.size());
        std::size_t i = 0;
        for (const auto& [m, c] : f.terms()) {
            while (i < monos.size() && mono_lex_less(monos[i], m)) ++i;
            v.at(i) = c;
        }
        return v;
    }

    Form<S> form_from_monos(int k, const std::vector<S>& v) const {
        Form<S> out = Form<S>::zero(dga_.gens(), k);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) out.add_term(slice_monos_[k][i], v[i]);
        return out;
    }

    void finish() {
        int n = top_degree();
        if (sub_) {
            for (int k = 0; k <= n; ++k) {
                std::vector<std::vector<S>> rows;
                std::vector<int> piv;
                for (const Form<S>& b : basis_[k]) rows.push_back(mono_coords(k, b));
                Matrix<S> m = from_rows(rows, static_cast<int>(slice_monos_[k].size()));
                // rows are already reduced; recover pivot columns
                for (int r = 0; r < m.rows(); ++r) {
                    int c = 0;
                    while (c < m.cols() && m.at(r, c).is_zero()) ++c;
                    piv.push_back(c);
                }
                basis_coords_.push_back(std::move(rows));
                slice_pivots_.push_back(std::move(piv));
            }
        }
        for (int k = 0; k <= n; ++k) {
            Matrix<S> dm(dim(k + 1), dim(k));
            for (int j = 0; j < dim(k); ++j) {
                Form<S> df = dga_.differential(basis_[k][j]);
                auto coords = (k + 1 <= n) ? to_coords(k + 1, df) : std::nullopt;
                if (k + 1 <= n && !coords) throw AlgebraError("spanning set not closed under d in degree " + std::to_string(k));
                if (coords)
                    for (int i = 0; i < dim(k + 1); ++i) dm.at(i, j) = (*coords)[i];
            }
            dmat_.push_back(std::move(dm));
        }
        for (int k = 0; k <= n; ++k) cohomology_.push_back(compute_cohomology(k));
    }

    CohomologyBasis<S> compute_cohomology(int k) {
        CohomologyBasis<S> basis;
        basis.degree = k;
        std::vector<std::vector<S>> cocycles = kernel_basis(dmat_[k]);
        // canonical image basis of d_{k-1}
        std::vector<std::vector<S>> imrows;
        if (k > 0) {
            const Matrix<S>& dm = dmat_[k - 1];
            for (int j = 0; j < dm.cols(); ++j) {
                std::vector<S> col(dm.rows());
                for (int i = 0; i < dm.rows(); ++i) col[i] = dm.at(i, j);
                imrows.push_back(std::move(col));
            }
        }
        Matrix<S> im = from_rows(imrows, dim(k));
        std::vector<int> impiv = rref(im);
        Matrix<S> imr(static_cast<int>(impiv.size()), dim(k));
        for (std::size_t r = 0; r < impiv.size(); ++r)
            for (int j = 0; j < dim(k); ++j) imr.at(int(r), j) = im.at(int(r), j);
        image_rows_.push_back(imr);
        image_pivots_.push_back(impiv);
        // quotient lift: reduce cocycles mod image, then canonicalize
        std::vector<std::vector<S>> reduced;
        for (auto& z : cocycles) reduced.push_back(reduce_against(imr, impiv, std::move(z)));
        Matrix<S> q = from_rows(reduced, dim(k));
        std::vector<int> qpiv = rref(q);
        for (std::size_t r = 0; r < qpiv.size(); ++r) {
            basis.rep_coords.push_back(q.row(int(r)));
            basis.rep_pivots.push_back(qpiv[r]);
            basis.representatives.push_back(from_coords(k, q.row(int(r))));
        }
        return basis;
    }

    Dga<S> dga_;
    bool sub_;
    std::vector<std::vector<Mono>> slice_monos_;
    std::vector<std::vector<Form<S>>> basis_;
    std::vector<std::vector<std::vector<S>>> basis_coords_;  // subcomplex only
    std::vector<std::vector<int>> slice_pivots_;             // subcomplex only
    std::vector<Matrix<S>> dmat_;
    std::vector<CohomologyBasis<S>> cohomology_;
    std::vector<Matrix<S>> image_rows_;
    std::vector<std::vector<int>> image_pivots_;

    template <ScalarField T>
    friend CohomologyClass<T> class_of(const Complex<T>&, const Form<T>&);
};

/// Class of a closed form in the canonical cohomology basis.
template <ScalarField S>
CohomologyClass<S> class_of(const Complex<S>& c, const Form<S>& f) {
    int k = f.degree();
    Form<S> df = c.differential(f);
    if (!df.is_zero())
        throw AlgebraError("form is not closed; d f = " + format_form(df));
    if (k > c.top_degree()) {
        CohomologyClass<S> out;
        out.degree = k;
        out.representative = Form<S>::zero(c.dga().gens(), k);
        return out;
    }
    auto coords = c.to_coords(k, f);
    if (!coords) throw AlgebraError("form does not lie in the subcomplex");
    std::vector<S> v = reduce_against(c.image_rows_[k], c.image_pivots_[k], std::move(*coords));
    const CohomologyBasis<S>& basis = c.cohomology(k);
    CohomologyClass<S> out;
    out.degree = k;
    out.coords.assign(basis.dimension(), S());
    for (int r = 0; r < basis.dimension(); ++r) {
        const S& coeff = v[basis.rep_pivots[r]];
        if (coeff.is_zero()) continue;
        out.coords[r] = coeff;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (!basis.rep_coords[r][j].is_zero()) v[j] -= out.coords[r] * basis.rep_coords[r][j];
    }
    for (const S& resid : v)
        if (!resid.is_zero()) throw AlgebraError("internal: class reduction left a remainder");
    Form<S> rep = Form<S>::zero(f.gens(), k);
    for (int r = 0; r < basis.dimension(); ++r)
        if (!out.coords[r].is_zero()) rep = rep + out.coords[r] * basis.representatives[r];
    out.representative = std::move(rep);
    return out;
}

template <ScalarField S>
CohomologyClass<S> zero_class(const Complex<S>& c, int degree) {
    CohomologyClass<S> out;
    out.degree = degree;
    out.coords.assign(c.cohomology(degree).dimension(), S());
    out.representative = Form<S>::zero(c.dga().gens(), degree);
    return out;
}

/// Cup product of classes via wedge of representatives.
template <ScalarField S>
CohomologyClass<S> cup(const Complex<S>& c, const CohomologyClass<S>& a, const CohomologyClass<S>& b) {
    int k = a.degree + b.degree;
    if (k > c.top_degree()) {
        // the target group is zero
        CohomologyClass<S> out;
        out.degree = k;
        out.representative = Form<S>::zero(c.dga().gens(), k);
        return out;
    }
    return class_of(c, wedge(a.representative, b.representative));
}

/// Deterministic primitive for d x = f, or nullopt when f is not exact.
template <ScalarField S>
std::optional<Form<S>> is_exact_with_preimage(const Complex<S>& c, const Form<S>& f) {
    int k = f.degree();
    if (k == 0) {
        if (f.is_zero()) return Form<S>::zero(c.dga().gens(), 0);
        return std::nullopt;
    }
    if (k > c.top_degree()) {
        if (f.is_zero()) return Form<S>::zero(c.dga().gens(), k - 1);
        return std::nullopt;
    }
    auto target = c.to_coords(k, f);
    if (!target) throw AlgebraError("form does not lie in the subcomplex");
    auto x = solve(c.d_matrix(k - 1), *target);
    if (!x) return std::nullopt;
    return c.from_coords(k - 1, *x);
}

/// Matrix of the cup pairing H^k x H^{n-k} -> H^n in the canonical bases.
template <ScalarField S>
Matrix<S> poincare_pairing(const Complex<S>& c, int k) {
    int n = c.top_degree();
    const CohomologyBasis<S>& top = c.cohomology(n);
    if (top.dimension() != 1) throw AlgebraError("top cohomology is not one-dimensional");
    const CohomologyBasis<S>& left = c.cohomology(k);
    const CohomologyBasis<S>& right = c.cohomology(n - k);
    Matrix<S> out(left.dimension(), right.dimension());
    for (int i = 0; i < left.dimension(); ++i)
        for (int j = 0; j < right.dimension(); ++j) {
            Form<S> w = wedge(left.representatives[i], right.representatives[j]);
            CohomologyClass<S> cls = class_of(c, w);
            out.at(i, j) = cls.coords[0];
        }
    return out;
}

template <ScalarField S>
std::pair<std::vector<int>, long> betti_and_euler(const Complex<S>& c) {
    return {c.betti(), c.euler_characteristic()};
}

}  // namespace nilforge
