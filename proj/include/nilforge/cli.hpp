#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nilforge/dsl.hpp"

namespace nilforge {

using Json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Undefined, Error };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Undefined: return "undefined";
        case Status::Error: return "error";
    }
    return "error";
}

struct QueryReport {
    std::string name;
    Status status = Status::Error;
    Json payload;
    double ms = 0.0;
};

struct PlanResult {
    std::string workspace;
    std::vector<QueryReport> reports;
    int exit_code = 0;
};

inline int exit_code_for(const std::vector<QueryReport>& reports) {
    bool failed = false, undefined = false;
    for (const auto& r : reports) {
        failed = failed || r.status == Status::Fail || r.status == Status::Error;
        undefined = undefined || r.status == Status::Undefined;
    }
    if (failed) return 1;
    if (undefined) return 3;
    return 0;
}

namespace cli_detail {

template <ScalarField S>
Json class_json(const CohomologyClass<S>& c) {
    Json coords = Json::array();
    for (const auto& x : c.coords) coords.push_back(x.str());
    return Json{{"degree", c.degree}, {"coords", coords}, {"representative", format_form(c.representative)}};
}

inline Json int_vector_json(const std::vector<int>& v) {
    Json out = Json::array();
    for (int x : v) out.push_back(x);
    return out;
}

inline Json long_vector_json(const std::vector<long>& v) {
    Json out = Json::array();
    for (long x : v) out.push_back(x);
    return out;
}

template <ScalarField S>
CyclicAction<S> cyclic_action_for(const Workspace& ws, const std::string& morphism_name) {
    const MorphismDecl* m = ws.morphism(morphism_name);
    if (!m || !m->order) throw AlgebraError("morphism '" + morphism_name + "' with an order is required");
    return CyclicAction<S>{std::get<Morphism<S>>(m->morphism), *m->order};
}

template <ScalarField S>
Complex<S> complex_for(const Workspace& ws, const Dga<S>& dga, const std::string& invariant) {
    if (invariant.empty()) return Complex<S>::full(dga);
    return invariant_complex(dga, cyclic_action_for<S>(ws, invariant));
}

template <ScalarField S>
S lower_scalar_lit(const ScalarLit& lit) {
    if constexpr (std::is_same_v<S, Rational>) {
        if (!lit.b.is_zero()) throw AlgebraError("sqrt literal over Q");
        return lit.a;
    } else {
        return QuadExt(lit.a, lit.b, lit.d);
    }
}

inline bool scan_matches(const ScanReport& report,
                         const std::vector<std::pair<long, std::vector<long>>>& expected) {
    if (report.survivors.size() != expected.size()) return false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const ScanEntry& got = report.survivors[i];
        if (got.arity != expected[i].first) return false;
        if (static_cast<long>(got.degrees.size()) != static_cast<long>(expected[i].second.size()))
            return false;
        for (std::size_t j = 0; j < got.degrees.size(); ++j)
            if (got.degrees[j] != expected[i].second[j]) return false;
    }
    return true;
}

inline Json scan_entries_json(const std::vector<ScanEntry>& entries) {
    Json out = Json::array();
    for (const auto& e : entries)
        out.push_back(Json{{"arity", e.arity},
                           {"degrees", int_vector_json(e.degrees)},
                           {"value_degree", e.value_degree}});
    return out;
}

// ---- per-kind executors, generic over the scalar field --------------------

template <ScalarField S>
void run_check(const Workspace&, const Dga<S>& dga, const Query&, QueryReport& out) {
    D2Report<S> report = verify_d2(dga);
    Json violations = Json::array();
    for (const auto& v : report.violations)
        violations.push_back(Json{{"generator", dga.gens()->name(v.generator)},
                                  {"d_squared", format_form(v.d_squared)}});
    out.payload = Json{{"d2_ok", report.ok()}, {"violations", violations}};
    out.status = report.ok() ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_checkaction(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    CyclicAction<S> act = cyclic_action_for<S>(ws, q.target);
    ActionReport<S> report = verify_action(dga, act);
    Json violations = Json::array();
    for (const auto& v : report.cochain_violations)
        violations.push_back(Json{{"generator", dga.gens()->name(v.generator)},
                                  {"d_phi", format_form(v.d_then_phi)},
                                  {"phi_d", format_form(v.phi_then_d)}});
    out.payload = Json{{"cochain_ok", report.cochain_violations.empty()},
                       {"power_is_identity", report.power_is_identity},
                       {"order_is_exact", report.order_is_exact},
                       {"violations", violations}};
    out.status = report.ok() ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_betti(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    Complex<S> complex = complex_for<S>(ws, dga, q.invariant);
    std::vector<int> betti = complex.betti();
    long chi = complex.euler_characteristic();
    out.payload = Json{{"algebra", q.target},
                       {"invariant", q.invariant.empty() ? Json() : Json(q.invariant)},
                       {"betti", int_vector_json(betti)},
                       {"euler", chi}};
    bool ok = true;
    if (!q.invariant.empty()) {
        // two-path agreement: fixed subspace of H* versus invariant subcomplex
        Complex<S> full = Complex<S>::full(dga);
        std::vector<int> fixed = fixed_cohomology_dims(full, cyclic_action_for<S>(ws, q.invariant));
        out.payload["fixed_subspace_dims"] = int_vector_json(fixed);
        bool agree = fixed == betti;
        out.payload["paths_agree"] = agree;
        ok = ok && agree;
    }
    if (q.expect_ints) {
        std::vector<long> got(betti.begin(), betti.end());
        bool match = got == *q.expect_ints;
        out.payload["expected"] = long_vector_json(*q.expect_ints);
        out.payload["match"] = match;
        ok = ok && match;
    }
    out.status = ok ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_cohomology(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    Complex<S> complex = complex_for<S>(ws, dga, q.invariant);
    const CohomologyBasis<S>& basis = complex.cohomology(static_cast<int>(q.number));
    Json reps = Json::array();
    for (const auto& r : basis.representatives) reps.push_back(format_form(r));
    out.payload = Json{{"algebra", q.target},
                       {"degree", q.number},
                       {"dimension", basis.dimension()},
                       {"representatives", reps}};
    bool ok = !q.expect_dim || *q.expect_dim == basis.dimension();
    if (q.expect_dim) {
        out.payload["expected"] = *q.expect_dim;
        out.payload["match"] = ok;
    }
    out.status = ok ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_cup(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    Complex<S> complex = complex_for<S>(ws, dga, q.invariant);
    CohomologyClass<S> a = class_of(complex, std::get<Form<S>>(q.forms[0]));
    CohomologyClass<S> b = class_of(complex, std::get<Form<S>>(q.forms[1]));
    CohomologyClass<S> product = cup(complex, a, b);
    out.payload = Json{{"left", class_json(a)}, {"right", class_json(b)}, {"product", class_json(product)},
                       {"zero", product.is_zero()}};
    bool ok = !q.expect_zero || *q.expect_zero == product.is_zero();
    out.status = ok ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_massey3(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    Complex<S> complex = complex_for<S>(ws, dga, q.invariant);
    CohomologyClass<S> a1 = class_of(complex, std::get<Form<S>>(q.forms[0]));
    CohomologyClass<S> a2 = class_of(complex, std::get<Form<S>>(q.forms[1]));
    CohomologyClass<S> a3 = class_of(complex, std::get<Form<S>>(q.forms[2]));
    try {
        TripleMasseyResult<S> r = triple_massey(complex, a1, a2, a3);
        std::vector<std::vector<S>> rows;
        for (const auto& c : r.indeterminacy) rows.push_back(c.coords);
        int ind_dim = r.indeterminacy.empty()
                          ? 0
                          : rank(from_rows(rows, static_cast<int>(r.indeterminacy.front().coords.size())));
        out.payload = Json{{"defined", true},
                           {"value", class_json(r.value)},
                           {"trivial", r.trivial},
                           {"indeterminacy_dim", ind_dim},
                           {"xi", format_form(r.xi)},
                           {"eta", format_form(r.eta)}};
        bool ok = !q.expect_trivial || *q.expect_trivial == r.trivial;
        out.status = ok ? Status::Pass : Status::Fail;
    } catch (const MasseyUndefinedError& e) {
        out.payload = Json{{"defined", false}, {"reason", e.what()}};
        out.status = Status::Undefined;
    }
}

template <ScalarField S>
void run_massey_system(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    Complex<S> complex = complex_for<S>(ws, dga, q.invariant);
    std::vector<CohomologyClass<S>> classes;
    for (const auto& f : q.forms) classes.push_back(class_of(complex, std::get<Form<S>>(f)));
    SolveOutcome<S> outcome = solve_defining_system(complex, classes);
    if (std::holds_alternative<BlockedCell<S>>(outcome)) {
        const auto& blocked = std::get<BlockedCell<S>>(outcome);
        out.payload = Json{{"solvable", false},
                           {"blocked_at", Json::array({blocked.i, blocked.j})},
                           {"obstruction", class_json(blocked.obstruction)}};
        bool expected_blocked = q.expect_solvable && !*q.expect_solvable;
        out.status = expected_blocked ? Status::Pass : Status::Undefined;
        return;
    }
    MasseyValue<S> value = massey_value(complex, std::get<DefiningSystem<S>>(outcome));
    out.payload = Json{{"solvable", true},
                       {"arity", static_cast<int>(classes.size())},
                       {"value", class_json(value.cls)}};
    bool ok = !q.expect_solvable || *q.expect_solvable;
    out.status = ok ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_massey4cert(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    Complex<S> complex = complex_for<S>(ws, dga, q.invariant);
    std::vector<CohomologyClass<S>> classes;
    for (int i = 0; i < 4; ++i) classes.push_back(class_of(complex, std::get<Form<S>>(q.forms[i])));
    Form<S> sigma = std::get<Form<S>>(q.forms[4]);
    ObstructionCertificate<S> cert = quad_nontriviality_certificate(complex, classes, sigma);
    auto condition_json = [](const CertificateCondition& c) {
        return Json{{"passed", c.passed}, {"detail", c.detail}};
    };
    out.payload = Json{{"conditions",
                        Json{{"subproducts_trivial", condition_json(cert.subproducts_trivial)},
                             {"correction_gaps", condition_json(cert.correction_gaps)},
                             {"sigma_annihilates", condition_json(cert.sigma_annihilates)},
                             {"witness_nonzero", condition_json(cert.witness_nonzero)}}},
                       {"valid", cert.valid()}};
    if (cert.witness_value) out.payload["psi0"] = format_form(*cert.witness_value);
    bool ok = true;
    if (cert.sigma_cup_value) {
        out.payload["sigma_cup_value"] = class_json(*cert.sigma_cup_value);
        if (q.expect_value) {
            if (cert.sigma_cup_value->coords.size() != 1) {
                ok = false;
            } else {
                S expected = lower_scalar_lit<S>(*q.expect_value);
                bool match = cert.sigma_cup_value->coords[0] == expected;
                out.payload["expected_top_coefficient"] = expected.str();
                out.payload["top_coefficient_match"] = match;
                ok = ok && match;
            }
        }
    } else if (q.expect_value) {
        ok = false;
    }
    if (q.expect_valid) ok = ok && (*q.expect_valid == cert.valid());
    out.status = ok ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_masseyscan(const Workspace& ws, const Dga<S>& dga, const Query& q, QueryReport& out) {
    Complex<S> complex = complex_for<S>(ws, dga, q.invariant);
    ScanReport report = massey_degree_scan(complex.betti(), static_cast<int>(q.number));
    out.payload = Json{{"betti", int_vector_json(complex.betti())},
                       {"max_arity", q.number},
                       {"survivors", scan_entries_json(report.survivors)},
                       {"top_degree_killable", scan_entries_json(report.top_degree_killable)}};
    bool ok = !q.expect_scan || scan_matches(report, *q.expect_scan);
    out.status = ok ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_tensor(const Workspace& ws, const Query& q, QueryReport& out) {
    const AlgebraDecl* a = ws.algebra(q.target);
    const AlgebraDecl* b = ws.algebra(q.second);
    const AlgebraDecl* expected = ws.algebra(q.expect_name);
    Dga<S> product = tensor_product(std::get<Dga<S>>(a->dga), std::get<Dga<S>>(b->dga));
    bool match = std::holds_alternative<Dga<S>>(expected->dga) &&
                 product == std::get<Dga<S>>(expected->dga);
    std::vector<int> betti = Complex<S>::full(product).betti();
    out.payload = Json{{"left", q.target},
                       {"right", q.second},
                       {"generators", product.n()},
                       {"betti", int_vector_json(betti)},
                       {"match", match}};
    out.status = match ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_changebasis(const Workspace& ws, const Query& q, QueryReport& out) {
    const BasisChangeDecl* bc = ws.basischange(q.target);
    const AlgebraDecl* src = ws.algebra(bc->algebra);
    const AlgebraDecl* expected = ws.algebra(q.expect_name);
    Dga<S> result = change_of_basis(std::get<Dga<S>>(src->dga), bc->new_names,
                                    std::get<std::vector<Form<S>>>(bc->images));
    bool match = std::holds_alternative<Dga<S>>(expected->dga) &&
                 result == std::get<Dga<S>>(expected->dga);
    Json differentials = Json::array();
    for (int i = 0; i < result.n(); ++i)
        if (!result.d_of_generator(i).is_zero())
            differentials.push_back(Json{{"generator", result.gens()->name(i)},
                                         {"image", format_form(result.d_of_generator(i))}});
    bool betti_stable = Complex<S>::full(result).betti() ==
                        Complex<S>::full(std::get<Dga<S>>(src->dga)).betti();
    out.payload = Json{{"source", bc->algebra},
                       {"differentials", differentials},
                       {"betti_stable", betti_stable},
                       {"match", match}};
    out.status = (match && betti_stable) ? Status::Pass : Status::Fail;
}

template <ScalarField S>
void run_form_query(const Workspace& ws, const FormDecl& decl, const Dga<S>& dga, const Query& q,
                    QueryReport& out) {
    const Form<S>& form = std::get<Form<S>>(decl.form);
    if (q.kind == QueryKind::DClosed) {
        Form<S> df = dga.differential(form);
        out.payload = Json{{"form", format_form(form)}, {"d", format_form(df)}};
        out.status = df.is_zero() ? Status::Pass : Status::Fail;
    } else if (q.kind == QueryKind::DEquals) {
        Form<S> df = dga.differential(form);
        const Form<S>& expected = std::get<Form<S>>(q.forms[0]);
        bool ok = df == expected;
        out.payload = Json{{"d", format_form(df)}, {"expected", format_form(expected)}, {"match", ok}};
        out.status = ok ? Status::Pass : Status::Fail;
    } else if (q.kind == QueryKind::InvariantForm) {
        const MorphismDecl* m = ws.morphism(q.second);
        Form<S> image = std::get<Morphism<S>>(m->morphism).apply(form);
        bool ok = image == form;
        out.payload = Json{{"form", format_form(form)}, {"image", format_form(image)}, {"invariant", ok}};
        out.status = ok ? Status::Pass : Status::Fail;
    } else {  // WedgePower
        Form<S> power = wedge_power(form, static_cast<int>(q.number));
        out.payload = Json{{"power", q.number},
                           {"result", format_form(power)},
                           {"zero", power.is_zero()}};
        bool ok = !q.expect_zero || *q.expect_zero == power.is_zero();
        out.status = ok ? Status::Pass : Status::Fail;
    }
}

inline void run_checklaw(const Workspace& ws, const Query& q, QueryReport& out) {
    const GroupLawDecl* decl = ws.grouplaw(q.target);
    GroupLawReport report = group_law_check(decl->law, static_cast<int>(q.number));
    Json failures = Json::array();
    for (const auto& f : report.failures) {
        Json tuples = Json::array();
        for (const auto& t : f.tuple) {
            Json tuple = Json::array();
            for (const auto& x : t) tuple.push_back(x.str());
            tuples.push_back(tuple);
        }
        failures.push_back(Json{{"check", f.check}, {"tuple", tuples}});
    }
    out.payload = Json{{"samples", report.samples},
                       {"checks", Json::array({"associativity", "identity", "inverse", "equivariance",
                                               "congruence"})},
                       {"failures", failures}};
    out.status = report.ok() ? Status::Pass : Status::Fail;
}

inline void run_fixedpoints(const Workspace& ws, const Query& q, QueryReport& out) {
    const ActionDecl* decl = ws.action(q.target);
    std::vector<RatVec> points = fixed_points(decl->action);
    Json pts = Json::array();
    for (const auto& p : points) {
        Json pt = Json::array();
        for (const auto& x : p) pt.push_back(x.str());
        pts.push_back(pt);
    }
    out.payload = Json{{"action", q.target}, {"count", static_cast<long>(points.size())}, {"points", pts}};
    bool ok = true;
    if (q.expect_count) {
        ok = *q.expect_count == static_cast<long>(points.size());
        out.payload["expected_count"] = *q.expect_count;
    }
    if (!q.expect_points.empty()) {
        // every named point must be lattice-equivalent to a computed one
        bool all_found = q.expect_points.size() == points.size();
        for (const auto& want : q.expect_points) {
            bool found = false;
            for (const auto& got : points) found = found || lattice_equivalent(decl->action, want, got);
            all_found = all_found && found;
        }
        out.payload["expected_points_equivalent"] = all_found;
        ok = ok && all_found;
    }
    out.status = ok ? Status::Pass : Status::Fail;
}

inline void run_euler(const Query& q, QueryReport& out) {
    std::vector<int> isotropy;
    for (const auto& [count, order] : q.euler_isotropy)
        for (long i = 0; i < count; ++i) isotropy.push_back(static_cast<int>(order));
    Rational chi = orbifold_euler(q.euler_chi, static_cast<int>(q.euler_order), isotropy);
    out.payload = Json{{"chi_input", q.euler_chi},
                       {"group_order", q.euler_order},
                       {"isolated_points", static_cast<long>(isotropy.size())},
                       {"chi", chi.str()}};
    bool ok = !q.expect_rat || *q.expect_rat == chi;
    if (q.expect_rat) out.payload["expected"] = q.expect_rat->str();
    out.status = ok ? Status::Pass : Status::Fail;
}

inline void run_polyd(const Workspace& ws, const Query& q, QueryReport& out) {
    const PolyFormDecl* decl = ws.polyform(q.target);
    PolyForm d = poly_d(decl->form);
    bool ok = d == *q.expect_polyform;
    out.payload = Json{{"polyform", q.target},
                       {"d", dsl_detail::polyform_text(d, decl->vars)},
                       {"expected", dsl_detail::polyform_text(*q.expect_polyform, decl->vars)},
                       {"match", ok}};
    out.status = ok ? Status::Pass : Status::Fail;
}

}  // namespace cli_detail

/// Executes one workspace query; never throws (errors become reports).
inline QueryReport run_query(const Workspace& ws, const Query& q) {
    using namespace cli_detail;
    QueryReport out;
    out.name = q.name;
    auto started = std::chrono::steady_clock::now();
    try {
        auto with_algebra = [&](const std::string& name, auto&& fn) {
            const AlgebraDecl* a = ws.algebra(name);
            if (!a) throw AlgebraError("unknown algebra '" + name + "'");
            std::visit([&](const auto& dga) { fn(*a, dga); }, a->dga);
        };
        switch (q.kind) {
            case QueryKind::Check:
                with_algebra(q.target, [&](const AlgebraDecl&, const auto& dga) { run_check(ws, dga, q, out); });
                break;
            case QueryKind::CheckAction: {
                const MorphismDecl* m = ws.morphism(q.target);
                with_algebra(m->algebra,
                             [&](const AlgebraDecl&, const auto& dga) { run_checkaction(ws, dga, q, out); });
                break;
            }
            case QueryKind::CheckLaw: run_checklaw(ws, q, out); break;
            case QueryKind::Betti:
                with_algebra(q.target, [&](const AlgebraDecl&, const auto& dga) { run_betti(ws, dga, q, out); });
                break;
            case QueryKind::Cohomology:
                with_algebra(q.target,
                             [&](const AlgebraDecl&, const auto& dga) { run_cohomology(ws, dga, q, out); });
                break;
            case QueryKind::Cup:
                with_algebra(q.target, [&](const AlgebraDecl&, const auto& dga) { run_cup(ws, dga, q, out); });
                break;
            case QueryKind::Massey3:
                with_algebra(q.target, [&](const AlgebraDecl&, const auto& dga) { run_massey3(ws, dga, q, out); });
                break;
            case QueryKind::MasseySystem:
                with_algebra(q.target,
                             [&](const AlgebraDecl&, const auto& dga) { run_massey_system(ws, dga, q, out); });
                break;
            case QueryKind::Massey4Cert:
                with_algebra(q.target,
                             [&](const AlgebraDecl&, const auto& dga) { run_massey4cert(ws, dga, q, out); });
                break;
            case QueryKind::MasseyScan:
                with_algebra(q.target,
                             [&](const AlgebraDecl&, const auto& dga) { run_masseyscan(ws, dga, q, out); });
                break;
            case QueryKind::Tensor: {
                const AlgebraDecl* a = ws.algebra(q.target);
                if (a->sqrt_d == 0)
                    run_tensor<Rational>(ws, q, out);
                else
                    run_tensor<QuadExt>(ws, q, out);
                break;
            }
            case QueryKind::ChangeBasis: {
                const BasisChangeDecl* bc = ws.basischange(q.target);
                const AlgebraDecl* src = ws.algebra(bc->algebra);
                if (src->sqrt_d == 0)
                    run_changebasis<Rational>(ws, q, out);
                else
                    run_changebasis<QuadExt>(ws, q, out);
                break;
            }
            case QueryKind::DClosed:
            case QueryKind::DEquals:
            case QueryKind::InvariantForm:
            case QueryKind::WedgePower: {
                const FormDecl* f = ws.form(q.target);
                with_algebra(f->algebra, [&](const AlgebraDecl&, const auto& dga) {
                    run_form_query(ws, *f, dga, q, out);
                });
                break;
            }
            case QueryKind::FixedPoints: run_fixedpoints(ws, q, out); break;
            case QueryKind::Euler: run_euler(q, out); break;
            case QueryKind::PolyD: run_polyd(ws, q, out); break;
        }
    } catch (const std::exception& e) {
        out.status = Status::Error;
        out.payload = Json{{"error", e.what()}};
    }
    auto finished = std::chrono::steady_clock::now();
    out.ms = std::chrono::duration<double, std::milli>(finished - started).count();
    return out;
}

/// Runs every declared query; report order follows declaration order.
/// NILFORGE_THREADS > 1 fans independent queries out over that many workers.
inline std::vector<QueryReport> run_workspace_queries(const Workspace& ws) {
    std::vector<QueryReport> reports(ws.queries.size());
    int threads = 1;
    if (const char* env = std::getenv("NILFORGE_THREADS")) {
        threads = std::max(1, std::atoi(env));
    }
    if (threads <= 1 || ws.queries.size() < 2) {
        for (std::size_t i = 0; i < ws.queries.size(); ++i) reports[i] = run_query(ws, ws.queries[i]);
        return reports;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= ws.queries.size()) break;
            reports[i] = run_query(ws, ws.queries[i]);
        }
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(threads, static_cast<int>(ws.queries.size()));
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return reports;
}

inline Json plan_json(const PlanResult& plan) {
    Json queries = Json::array();
    for (const auto& r : plan.reports)
        queries.push_back(
            Json{{"name", r.name}, {"status", status_name(r.status)}, {"payload", r.payload}, {"ms", r.ms}});
    return Json{{"version", "1"}, {"workspace", plan.workspace}, {"queries", queries}};
}

inline std::string render_text(const PlanResult& plan, bool quiet) {
    std::ostringstream out;
    int pass = 0;
    for (const auto& r : plan.reports) {
        if (r.status == Status::Pass) ++pass;
        if (quiet && r.status == Status::Pass) continue;
        out << "[" << status_name(r.status) << "] " << r.name;
        if (r.status != Status::Pass) out << "  " << r.payload.dump();
        out << "\n";
    }
    out << plan.workspace << ": " << pass << "/" << plan.reports.size() << " queries passed\n";
    return out.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace nilforge
