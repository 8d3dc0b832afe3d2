// nilforge: batch front end for the workspace language.
//
// Subcommands load a .dga workspace, run queries and emit human-readable or
// JSON reports. Exit codes: 0 all pass, 1 verification failure, 2 parse/load
// error, 3 query undefined.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "nilforge/cli.hpp"

namespace {

using namespace nilforge;

struct Output {
    bool json = false;
    bool quiet = false;
};

int finish(const PlanResult& plan, const Output& out) {
    if (out.json)
        std::cout << plan_json(plan).dump(2) << "\n";
    else
        std::cout << render_text(plan, out.quiet);
    return plan.exit_code;
}

Workspace load_workspace(const std::string& path) {
    return parse_workspace(read_file(path), path);
}

PlanResult run_queries(const Workspace& ws, std::vector<Query> queries) {
    Workspace scratch = ws;
    scratch.queries = std::move(queries);
    PlanResult plan;
    plan.workspace = ws.name;
    plan.reports = run_workspace_queries(scratch);
    plan.exit_code = exit_code_for(plan.reports);
    return plan;
}

FormVar parse_flag_form(const Workspace& ws, const std::string& algebra, const std::string& text) {
    const AlgebraDecl* a = ws.algebra(algebra);
    if (!a) throw WorkspaceError("cli", "unknown algebra '" + algebra + "'", false);
    return parse_form_text(*a, text);
}

int dispatch(const std::string& cmd, const std::string& file, const Output& out,
             const std::string& algebra, const std::string& invariant, long degree,
             const std::string& left, const std::string& right,
             const std::vector<std::string>& classes, const std::string& sigma,
             const std::string& action, long chi, long order,
             const std::vector<long>& points, const std::vector<long>& isotropy,
             const std::string& fixtures) {
    if (cmd == "euler") {
        Query q;
        q.name = "euler";
        q.kind = QueryKind::Euler;
        q.euler_chi = chi;
        q.euler_order = order;
        for (std::size_t i = 0; i < points.size() && i < isotropy.size(); ++i)
            q.euler_isotropy.emplace_back(points[i], isotropy[i]);
        Workspace empty;
        empty.name = "euler";
        empty.queries.push_back(std::move(q));
        PlanResult plan;
        plan.workspace = empty.name;
        plan.reports = run_workspace_queries(empty);
        plan.exit_code = exit_code_for(plan.reports);
        return finish(plan, out);
    }
    if (cmd == "reproduce-paper") {
        PlanResult plan;
        plan.workspace = "reproduce-paper";
        for (const char* name : {"n6.dga", "m8.dga", "rho.dga", "massey_prop4.dga", "controls.dga"}) {
            std::string path = fixtures + "/" + name;
            Workspace ws = load_workspace(path);
            std::vector<QueryReport> reports = run_workspace_queries(ws);
            for (auto& r : reports) {
                r.name = std::string(name) + "/" + r.name;
                plan.reports.push_back(std::move(r));
            }
        }
        plan.exit_code = exit_code_for(plan.reports);
        return finish(plan, out);
    }

    Workspace ws = load_workspace(file);
    if (cmd == "run") {
        PlanResult plan;
        plan.workspace = ws.name;
        plan.reports = run_workspace_queries(ws);
        plan.exit_code = exit_code_for(plan.reports);
        return finish(plan, out);
    }
    if (cmd == "check") {
        std::vector<Query> queries;
        for (const auto& a : ws.algebras) {
            Query q;
            q.name = "d2." + a.name;
            q.kind = QueryKind::Check;
            q.target = a.name;
            queries.push_back(std::move(q));
        }
        for (const auto& m : ws.morphisms) {
            if (!m.order) continue;
            Query q;
            q.name = "action." + m.name;
            q.kind = QueryKind::CheckAction;
            q.target = m.name;
            queries.push_back(std::move(q));
        }
        for (const auto& g : ws.grouplaws) {
            Query q;
            q.name = "law." + g.name;
            q.kind = QueryKind::CheckLaw;
            q.target = g.name;
            q.number = 100;
            queries.push_back(std::move(q));
        }
        return finish(run_queries(ws, std::move(queries)), out);
    }
    if (cmd == "betti" || cmd == "cohomology") {
        Query q;
        q.name = cmd + "." + algebra;
        q.kind = cmd == "betti" ? QueryKind::Betti : QueryKind::Cohomology;
        q.target = algebra;
        q.invariant = invariant;
        q.number = degree;
        return finish(run_queries(ws, {std::move(q)}), out);
    }
    if (cmd == "cup") {
        Query q;
        q.name = "cup." + algebra;
        q.kind = QueryKind::Cup;
        q.target = algebra;
        q.invariant = invariant;
        q.forms.push_back(parse_flag_form(ws, algebra, left));
        q.forms.push_back(parse_flag_form(ws, algebra, right));
        return finish(run_queries(ws, {std::move(q)}), out);
    }
    if (cmd == "massey3" || cmd == "massey-system" || cmd == "massey4-cert") {
        Query q;
        q.target = algebra;
        q.invariant = invariant;
        for (const auto& text : classes) q.forms.push_back(parse_flag_form(ws, algebra, text));
        if (cmd == "massey3") {
            q.name = "massey3." + algebra;
            q.kind = QueryKind::Massey3;
            if (q.forms.size() != 3) throw WorkspaceError("cli", "massey3 needs exactly three --class forms", false);
        } else if (cmd == "massey-system") {
            q.name = "massey-system." + algebra;
            q.kind = QueryKind::MasseySystem;
            if (q.forms.size() < 3) throw WorkspaceError("cli", "massey-system needs at least three --class forms", false);
        } else {
            q.name = "massey4-cert." + algebra;
            q.kind = QueryKind::Massey4Cert;
            if (q.forms.size() != 4) throw WorkspaceError("cli", "massey4-cert needs exactly four --class forms", false);
            q.forms.push_back(parse_flag_form(ws, algebra, sigma));
        }
        return finish(run_queries(ws, {std::move(q)}), out);
    }
    if (cmd == "fixed-points") {
        Query q;
        q.name = "fixed-points." + action;
        q.kind = QueryKind::FixedPoints;
        q.target = action;
        if (!ws.action(action)) throw WorkspaceError("cli", "unknown action '" + action + "'", false);
        return finish(run_queries(ws, {std::move(q)}), out);
    }
    throw WorkspaceError("cli", "unknown subcommand " + cmd, false);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nilforge: exact cohomology, group actions and Massey products for structure-equation algebras"};
    app.require_subcommand(1);
    app.fallthrough();

    Output out;
    app.add_flag("--json", out.json, "emit a JSON report");
    app.add_flag("--quiet", out.quiet, "only print failing queries");

    std::string file, algebra, invariant, left, right, sigma, action;
    std::string fixtures = "fixtures";
    std::vector<std::string> classes;
    long degree = 0, chi = 0, order = 1;
    std::vector<long> points, isotropy;

    auto add_file = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "workspace file (.dga)")->required();
    };
    auto add_algebra = [&](CLI::App* cmd, bool with_invariant = true) {
        cmd->add_option("--algebra", algebra, "algebra name")->required();
        if (with_invariant)
            cmd->add_option("--invariant", invariant, "restrict to the invariant complex of this morphism");
    };

    CLI::App* c_check = app.add_subcommand("check", "verify d^2, declared actions and group laws");
    add_file(c_check);
    CLI::App* c_run = app.add_subcommand("run", "run the queries declared in the workspace");
    add_file(c_run);
    CLI::App* c_betti = app.add_subcommand("betti", "Betti numbers and Euler characteristic");
    add_file(c_betti);
    add_algebra(c_betti);
    CLI::App* c_coho = app.add_subcommand("cohomology", "basis of one cohomology degree");
    add_file(c_coho);
    add_algebra(c_coho);
    c_coho->add_option("--degree", degree, "cohomology degree")->required();
    CLI::App* c_cup = app.add_subcommand("cup", "cup product of two classes");
    add_file(c_cup);
    add_algebra(c_cup);
    c_cup->add_option("--left", left, "left class representative")->required();
    c_cup->add_option("--right", right, "right class representative")->required();
    CLI::App* c_m3 = app.add_subcommand("massey3", "triple Massey product");
    add_file(c_m3);
    add_algebra(c_m3);
    c_m3->add_option("--class", classes, "class representative (three times)")->required();
    CLI::App* c_ms = app.add_subcommand("massey-system", "defining system for an n-fold product");
    add_file(c_ms);
    add_algebra(c_ms);
    c_ms->add_option("--class", classes, "class representative (at least three)")->required();
    CLI::App* c_m4 = app.add_subcommand("massey4-cert", "quadruple non-triviality certificate");
    add_file(c_m4);
    add_algebra(c_m4);
    c_m4->add_option("--class", classes, "class representative (four times)")->required();
    c_m4->add_option("--sigma", sigma, "closed obstruction form")->required();
    CLI::App* c_fp = app.add_subcommand("fixed-points", "fixed points of an affine torus action");
    add_file(c_fp);
    c_fp->add_option("--action", action, "action name")->required();
    CLI::App* c_euler = app.add_subcommand("euler", "orbifold Euler characteristic");
    c_euler->add_option("--chi", chi, "Euler characteristic of the covering space")->required();
    c_euler->add_option("--order", order, "group order")->required();
    c_euler->add_option("--points", points, "isolated point count (repeatable)");
    c_euler->add_option("--isotropy", isotropy, "isotropy order per point group (repeatable)");
    CLI::App* c_rep = app.add_subcommand("reproduce-paper", "run the bundled fixtures end to end");
    c_rep->add_option("--fixtures", fixtures, "fixture directory (default: fixtures)");

    CLI11_PARSE(app, argc, argv);

    std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cmd, file, out, algebra, invariant, degree, left, right, classes, sigma,
                        action, chi, order, points, isotropy, fixtures);
    } catch (const nilforge::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const nilforge::WorkspaceError& e) {
        std::cerr << (e.verification ? "verification error: " : "load error: ") << e.what() << "\n";
        return e.verification ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
