#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nilforge/dga.hpp"
#include "nilforge/symmetry.hpp"

namespace nilforge {

/// Raised when a Massey product is queried outside its domain of definition
/// (some gating cup product does not vanish).
class MasseyUndefinedError : public AlgebraError {
public:
    explicit MasseyUndefinedError(const std::string& what) : AlgebraError(what) {}
};

/// Degree-dependent sign used throughout defining systems:
/// bar(f) = (-1)^{deg f} f.
template <ScalarField S>
Form<S> bar(const Form<S>& f) {
    return (f.degree() % 2 == 0) ? f : -f;
}

template <ScalarField S>
struct TripleMasseyResult {
    CohomologyClass<S> value;
    /// Spanning classes of the indeterminacy subspace a1 ∪ H + H ∪ a3.
    std::vector<CohomologyClass<S>> indeterminacy;
    bool trivial = false;
    /// Primitives with d xi = bar(r1)^r2 and d eta = bar(r2)^r3 for the
    /// chosen representatives r_i.
    Form<S> xi;
    Form<S> eta;
};

namespace detail {

/// True when `cls` lies in the span of `space` (exact rank test).
template <ScalarField S>
bool in_span(const std::vector<CohomologyClass<S>>& space, const CohomologyClass<S>& cls) {
    if (cls.is_zero()) return true;
    std::size_t dim = cls.coords.size();
    std::vector<std::vector<S>> rows;
    for (const auto& c : space) rows.push_back(c.coords);
    int base = rank(from_rows(rows, static_cast<int>(dim)));
    rows.push_back(cls.coords);
    return rank(from_rows(rows, static_cast<int>(dim))) == base;
}

}  // namespace detail

/// Triple product <a1,a2,a3> with deterministic primitives and its exact
/// indeterminacy coset; requires a1∪a2 = a2∪a3 = 0.
template <ScalarField S>
TripleMasseyResult<S> triple_massey(const Complex<S>& c, const CohomologyClass<S>& a1,
                                    const CohomologyClass<S>& a2, const CohomologyClass<S>& a3) {
    CohomologyClass<S> c12 = cup(c, a1, a2);
    if (!c12.is_zero())
        throw MasseyUndefinedError("triple Massey product undefined: a1 cup a2 = [" +
                                   format_form(c12.representative) + "] != 0");
    CohomologyClass<S> c23 = cup(c, a2, a3);
    if (!c23.is_zero())
        throw MasseyUndefinedError("triple Massey product undefined: a2 cup a3 = [" +
                                   format_form(c23.representative) + "] != 0");

    TripleMasseyResult<S> out;
    auto xi = is_exact_with_preimage(c, wedge(bar(a1.representative), a2.representative));
    auto eta = is_exact_with_preimage(c, wedge(bar(a2.representative), a3.representative));
    if (!xi || !eta) throw AlgebraError("internal: exact form without primitive");
    out.xi = std::move(*xi);
    out.eta = std::move(*eta);
    Form<S> value =
        wedge(bar(a1.representative), out.eta) + wedge(bar(out.xi), a3.representative);
    out.value = class_of(c, value);

    int p1 = a1.degree, p2 = a2.degree, p3 = a3.degree;
    int left_deg = p2 + p3 - 1;
    int right_deg = p1 + p2 - 1;
    if (left_deg >= 0 && left_deg <= c.top_degree())
        for (const auto& rep : c.cohomology(left_deg).representatives)
            out.indeterminacy.push_back(class_of(c, wedge(a1.representative, rep)));
    if (right_deg >= 0 && right_deg <= c.top_degree())
        for (const auto& rep : c.cohomology(right_deg).representatives)
            out.indeterminacy.push_back(class_of(c, wedge(rep, a3.representative)));
    out.trivial = detail::in_span(out.indeterminacy, out.value);
    return out;
}

/// Triangular array realizing an n-fold product: entries alpha_{i,j} for
/// 1 <= i <= j <= t, (i,j) != (1,t), with
///   d alpha_{i,j} = sum_{k=i}^{j-1} bar(alpha_{i,k}) ^ alpha_{k+1,j}.
template <ScalarField S>
class DefiningSystem {
public:
    DefiningSystem(int t, std::map<std::pair<int, int>, Form<S>> entries)
        : t_(t), entries_(std::move(entries)) {}

    int arity() const { return t_; }

    const Form<S>& entry(int i, int j) const {
        auto it = entries_.find({i, j});
        if (it == entries_.end())
            throw AlgebraError("missing defining system entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
        return it->second;
    }

    const std::map<std::pair<int, int>, Form<S>>& entries() const { return entries_; }

    Form<S> structural_sum(int i, int j) const {
        std::optional<Form<S>> rhs;
        for (int k = i; k < j; ++k) {
            Form<S> term = wedge(bar(entry(i, k)), entry(k + 1, j));
            rhs = rhs ? *rhs + term : std::move(term);
        }
        if (!rhs) throw AlgebraError("empty structural sum");
        return *rhs;
    }

    /// Checks every structural equation exactly against the differential.
    template <class Diff>
    std::optional<std::string> validate(const Diff& differential) const {
        for (int s = 1; s <= t_ - 1; ++s) {
            for (int i = 1; i + s <= t_; ++i) {
                int j = i + s;
                if (i == 1 && j == t_) continue;
                Form<S> lhs = differential(entry(i, j));
                Form<S> rhs = structural_sum(i, j);
                if (lhs != rhs)
                    return "structural equation fails at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")";
            }
        }
        return std::nullopt;
    }

private:
    int t_;
    std::map<std::pair<int, int>, Form<S>> entries_;
};

template <ScalarField S>
struct BlockedCell {
    int i = 0;
    int j = 0;
    CohomologyClass<S> obstruction;
};

template <ScalarField S>
using SolveOutcome = std::variant<DefiningSystem<S>, BlockedCell<S>>;

/// Fills a defining system for <a_1,...,a_t> in increasing band order, one
/// exact linear solve per cell. Diagonal representatives may be overridden
/// (they must represent the given classes).
template <ScalarField S>
SolveOutcome<S> solve_defining_system(const Complex<S>& c,
                                      const std::vector<CohomologyClass<S>>& classes,
                                      const std::vector<Form<S>>* diagonal = nullptr) {
    int t = static_cast<int>(classes.size());
    if (t < 3) throw AlgebraError("defining systems need arity >= 3");
    std::map<std::pair<int, int>, Form<S>> filled;
    for (int i = 1; i <= t; ++i)
        filled.emplace(std::make_pair(i, i),
                       diagonal ? (*diagonal)[i - 1] : classes[i - 1].representative);
    for (int s = 1; s <= t - 1; ++s) {
        for (int i = 1; i + s <= t; ++i) {
            int j = i + s;
            if (i == 1 && j == t) continue;
            DefiningSystem<S> partial(t, filled);
            Form<S> rhs = partial.structural_sum(i, j);
            auto primitive = is_exact_with_preimage(c, rhs);
            if (!primitive) {
                BlockedCell<S> blocked;
                blocked.i = i;
                blocked.j = j;
                blocked.obstruction = class_of(c, rhs);
                return blocked;
            }
            filled.emplace(std::make_pair(i, j), std::move(*primitive));
        }
    }
    return DefiningSystem<S>(t, std::move(filled));
}

template <ScalarField S>
struct MasseyValue {
    Form<S> form;
    CohomologyClass<S> cls;
};

/// Value sum of a validated system: [sum_k bar(alpha_{1,k}) ^ alpha_{k+1,t}].
template <ScalarField S>
MasseyValue<S> massey_value(const Complex<S>& c, const DefiningSystem<S>& ds) {
    auto complaint = ds.validate([&c](const Form<S>& f) { return c.differential(f); });
    if (complaint) throw AlgebraError("invalid defining system: " + *complaint);
    int t = ds.arity();
    Form<S> value = ds.structural_sum(1, t);
    if (!c.differential(value).is_zero())
        throw AlgebraError("internal: Massey value sum is not closed");
    MasseyValue<S> out{value, class_of(c, value)};
    return out;
}

/// Entry-wise group averaging of a defining system whose diagonal
/// representatives are already invariant. The structural equations survive
/// averaging for arities up to 4, where every summand contains a diagonal
/// factor; the result is validated unconditionally.
template <ScalarField S>
DefiningSystem<S> equivariant_average_system(const Complex<S>& c, const CyclicAction<S>& act,
                                             const DefiningSystem<S>& ds) {
    for (int i = 1; i <= ds.arity(); ++i) {
        const Form<S>& rep = ds.entry(i, i);
        if (act.generator.apply(rep) != rep)
            throw AlgebraError("diagonal representative " + std::to_string(i) +
                               " is not invariant");
    }
    std::map<std::pair<int, int>, Form<S>> averaged;
    for (const auto& [key, form] : ds.entries()) averaged.emplace(key, average(act, form));
    DefiningSystem<S> out(ds.arity(), std::move(averaged));
    auto complaint = out.validate([&c](const Form<S>& f) { return c.differential(f); });
    if (complaint) throw AlgebraError("averaging broke the defining system: " + *complaint);
    return out;
}

struct CertificateCondition {
    bool passed = false;
    std::string detail;
};

/// Sufficient certificate that a quadruple product is non-trivial for every
/// defining system: both triple sub-products trivial, no cohomology in the
/// correction degrees, sigma annihilating end representatives at form level,
/// and one witness value with [sigma][Psi0] != 0. Failure of (3) or (4) means
/// "inconclusive", never "trivial".
template <ScalarField S>
struct ObstructionCertificate {
    CertificateCondition subproducts_trivial;   // (1)
    CertificateCondition correction_gaps;       // (2)
    CertificateCondition sigma_annihilates;     // (3)
    CertificateCondition witness_nonzero;       // (4)
    Form<S> sigma;
    std::optional<Form<S>> witness_value;               // Psi0
    std::optional<CohomologyClass<S>> sigma_cup_value;  // [sigma ^ Psi0]
    bool valid() const {
        return subproducts_trivial.passed && correction_gaps.passed && sigma_annihilates.passed &&
               witness_nonzero.passed;
    }
};

namespace detail {

/// Searches rep + d(x) with sigma ^ (rep + d x) = 0 identically; the search
/// space is one exact linear feasibility solve over the degree-(p-1) slice.
template <ScalarField S>
std::optional<Form<S>> sigma_compatible_representative(const Complex<S>& c, const Form<S>& sigma,
                                                       const Form<S>& rep) {
    Form<S> target = wedge(sigma, rep);
    int out_deg = target.degree();
    if (target.is_zero()) return rep;
    int k = rep.degree();
    if (k == 0) return std::nullopt;
    const auto& candidates = c.slice_basis(k - 1);
    Matrix<S> m(c.dim(out_deg), static_cast<int>(candidates.size()));
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        Form<S> col = wedge(sigma, c.differential(candidates[j]));
        auto coords = c.to_coords(out_deg, col);
        if (!coords) throw AlgebraError("internal: wedge image left the subcomplex");
        for (int i = 0; i < c.dim(out_deg); ++i) m.at(i, int(j)) = (*coords)[i];
    }
    auto targetc = c.to_coords(out_deg, target);
    if (!targetc) throw AlgebraError("internal: wedge image left the subcomplex");
    std::vector<S> neg(targetc->size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -(*targetc)[i];
    auto x = solve(m, neg);
    if (!x) return std::nullopt;
    Form<S> correction = Form<S>::zero(rep.gens(), k - 1);
    for (std::size_t j = 0; j < x->size(); ++j)
        if (!(*x)[j].is_zero()) correction = correction + (*x)[j] * candidates[j];
    return rep + c.differential(correction);
}

}  // namespace detail

template <ScalarField S>
ObstructionCertificate<S> quad_nontriviality_certificate(const Complex<S>& c,
                                                         const std::vector<CohomologyClass<S>>& a,
                                                         const Form<S>& sigma) {
    if (a.size() != 4) throw AlgebraError("certificate needs exactly four classes");
    if (!c.differential(sigma).is_zero()) throw AlgebraError("sigma must be closed");
    ObstructionCertificate<S> cert;
    cert.sigma = sigma;

    // (1) both triple sub-products defined and trivial
    {
        std::string detail;
        bool ok = true;
        for (int start : {0, 1}) {
            try {
                TripleMasseyResult<S> r = triple_massey(c, a[start], a[start + 1], a[start + 2]);
                if (!r.trivial) {
                    ok = false;
                    detail += "<a" + std::to_string(start + 1) + ",...> is non-trivial; ";
                }
            } catch (const MasseyUndefinedError& e) {
                ok = false;
                detail += std::string(e.what()) + "; ";
            }
        }
        cert.subproducts_trivial = {ok, ok ? "both triple sub-products defined and trivial" : detail};
    }

    // (2) cohomology vanishes where the correction forms live
    {
        bool ok = true;
        std::string detail = "H^k = 0 for k in {";
        for (int i = 0; i < 3; ++i) {
            int deg = a[i].degree + a[i + 1].degree - 1;
            detail += (i ? "," : "") + std::to_string(deg);
            if (deg >= 0 && deg <= c.top_degree() && c.cohomology(deg).dimension() != 0) {
                ok = false;
            }
        }
        detail += "}";
        cert.correction_gaps = {ok, ok ? detail : detail + " fails"};
    }

    // (3) sigma kills end representatives at form level, searching over
    //     representative + exact corrections
    std::vector<Form<S>> diagonal = {a[0].representative, a[1].representative,
                                     a[2].representative, a[3].representative};
    {
        auto left = detail::sigma_compatible_representative(c, sigma, a[0].representative);
        auto right = detail::sigma_compatible_representative(c, sigma, a[3].representative);
        bool ok = left.has_value() && right.has_value();
        std::string detail_msg;
        if (ok) {
            diagonal[0] = *left;
            diagonal[3] = *right;
            detail_msg = "sigma ^ rep(a1) = 0 and sigma ^ rep(a4) = 0 at form level";
        } else {
            detail_msg = std::string("no representative with sigma ^ rep = 0 for ") +
                         (!left ? "a1" : "") + (!left && !right ? " and " : "") + (!right ? "a4" : "");
        }
        cert.sigma_annihilates = {ok, detail_msg};
    }

    // (4) one witness value with [sigma][Psi0] != 0
    {
        SolveOutcome<S> outcome = solve_defining_system(c, a, &diagonal);
        if (std::holds_alternative<BlockedCell<S>>(outcome)) {
            const auto& blocked = std::get<BlockedCell<S>>(outcome);
            cert.witness_nonzero = {false, "no defining system: blocked at (" +
                                               std::to_string(blocked.i) + "," +
                                               std::to_string(blocked.j) + ")"};
        } else {
            MasseyValue<S> value = massey_value(c, std::get<DefiningSystem<S>>(outcome));
            cert.witness_value = value.form;
            CohomologyClass<S> obstruction = class_of(c, wedge(sigma, value.form));
            bool ok = !obstruction.is_zero();
            cert.sigma_cup_value = std::move(obstruction);
            cert.witness_nonzero = {ok, ok ? "[sigma][Psi0] != 0" : "[sigma][Psi0] = 0"};
        }
    }
    return cert;
}

/// Betti-table feasibility scan for potentially non-trivial products.
struct ScanEntry {
    int arity = 0;
    std::vector<int> degrees;  // non-decreasing
    int value_degree = 0;
};

struct ScanReport {
    std::vector<ScanEntry> survivors;
    /// Top-degree values killable by shifting an end entry with a closed form
    /// phi with a1 ∪ [phi] any multiple of the fundamental class (requires
    /// Poincare duality, verified elsewhere).
    std::vector<ScanEntry> top_degree_killable;
};

inline ScanReport massey_degree_scan(const std::vector<int>& betti, int max_arity) {
    ScanReport report;
    int top = static_cast<int>(betti.size()) - 1;
    std::vector<int> usable;
    for (int d = 1; d <= top; ++d)
        if (betti[d] > 0) usable.push_back(d);
    if (usable.empty()) return report;
    for (int t = 3; t <= max_arity; ++t) {
        std::vector<int> pick(t, 0);
        // enumerate non-decreasing index tuples into `usable`
        while (true) {
            std::vector<int> degs(t);
            int sum = 0;
            for (int i = 0; i < t; ++i) {
                degs[i] = usable[pick[i]];
                sum += degs[i];
            }
            int value_degree = sum - (t - 2);
            if (value_degree > 0 && value_degree <= top && betti[value_degree] > 0) {
                ScanEntry entry{t, degs, value_degree};
                bool shiftable = value_degree == top &&
                                 ((value_degree - degs.front() >= 0 && betti[value_degree - degs.front()] > 0) ||
                                  (value_degree - degs.back() >= 0 && betti[value_degree - degs.back()] > 0));
                if (shiftable)
                    report.top_degree_killable.push_back(std::move(entry));
                else
                    report.survivors.push_back(std::move(entry));
            }
            int pos = t - 1;
            while (pos >= 0 && pick[pos] == static_cast<int>(usable.size()) - 1) --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (int q = pos + 1; q < t; ++q) pick[q] = pick[pos];
        }
    }
    return report;
}

}  // namespace nilforge
