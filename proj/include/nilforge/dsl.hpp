#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nilforge/dga.hpp"
#include "nilforge/lattice.hpp"
#include "nilforge/massey.hpp"
#include "nilforge/symmetry.hpp"

namespace nilforge {

/// Syntax error with a 1-based source position; deterministic for fixed input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, int line, int col, std::string expected, std::string found)
        : std::runtime_error((file.empty() ? "" : file + ":") + std::to_string(line) + ":" +
                             std::to_string(col) + ": expected " + expected + ", found " + found),
          file(std::move(file)),
          line(line),
          col(col),
          expected(std::move(expected)),
          found(std::move(found)) {}
    std::string file;
    int line;
    int col;
    std::string expected;
    std::string found;
};

/// Load-time failure after a successful parse. `verification` distinguishes
/// mathematical check failures (d^2, action order) from reference/shape
/// errors.
class WorkspaceError : public std::runtime_error {
public:
    WorkspaceError(std::string declaration, std::string what, bool verification_failure)
        : std::runtime_error(declaration + ": " + what),
          declaration(std::move(declaration)),
          verification(verification_failure) {}
    std::string declaration;
    bool verification;
};

using FormVar = std::variant<Form<Rational>, Form<QuadExt>>;
using DgaVar = std::variant<Dga<Rational>, Dga<QuadExt>>;
using MorphismVar = std::variant<Morphism<Rational>, Morphism<QuadExt>>;

/// Scalar literal a + b sqrt(d) as written (d = 0 when no radical).
struct ScalarLit {
    Rational a;
    Rational b;
    long d = 0;
    friend bool operator==(const ScalarLit&, const ScalarLit&) = default;
};

struct AlgebraDecl {
    std::string name;
    long sqrt_d = 0;  // 0 = rationals
    DgaVar dga;
    friend bool operator==(const AlgebraDecl&, const AlgebraDecl&) = default;
};

struct FormDecl {
    std::string name;
    std::string algebra;
    FormVar form;
    friend bool operator==(const FormDecl&, const FormDecl&) = default;
};

struct MorphismDecl {
    std::string name;
    std::string algebra;
    MorphismVar morphism;
    std::optional<int> order;
    friend bool operator==(const MorphismDecl&, const MorphismDecl&) = default;
};

struct BasisChangeDecl {
    std::string name;
    std::string algebra;
    std::vector<std::string> new_names;
    std::variant<std::vector<Form<Rational>>, std::vector<Form<QuadExt>>> images;
    friend bool operator==(const BasisChangeDecl&, const BasisChangeDecl&) = default;
};

struct ActionDecl {
    std::string name;
    AffineTorusAction action;
    friend bool operator==(const ActionDecl& x, const ActionDecl& y) {
        return x.name == y.name && x.action.linear == y.action.linear &&
               x.action.translation == y.action.translation && x.action.lattice == y.action.lattice &&
               x.action.order == y.action.order;
    }
};

struct GroupLawDecl {
    std::string name;
    std::vector<std::string> first_vars;
    std::vector<std::string> second_vars;
    GroupLaw law;
    friend bool operator==(const GroupLawDecl& x, const GroupLawDecl& y) {
        bool base = x.name == y.name && x.first_vars == y.first_vars &&
                    x.second_vars == y.second_vars && x.law.m == y.law.m &&
                    x.law.components == y.law.components && x.law.equivariance == y.law.equivariance;
        if (!base) return false;
        if (x.law.congruence.has_value() != y.law.congruence.has_value()) return false;
        if (!x.law.congruence) return true;
        return x.law.congruence->modulus == y.law.congruence->modulus &&
               x.law.congruence->i == y.law.congruence->i && x.law.congruence->j == y.law.congruence->j;
    }
};

struct PolyFormDecl {
    std::string name;
    std::vector<std::string> vars;
    PolyForm form{0};
    friend bool operator==(const PolyFormDecl&, const PolyFormDecl&) = default;
};

enum class QueryKind {
    Check,
    CheckAction,
    CheckLaw,
    Betti,
    Cohomology,
    Cup,
    DClosed,
    DEquals,
    InvariantForm,
    WedgePower,
    Massey3,
    MasseySystem,
    Massey4Cert,
    MasseyScan,
    FixedPoints,
    Euler,
    Tensor,
    ChangeBasis,
    PolyD,
};

struct Query {
    std::string name;
    QueryKind kind = QueryKind::Check;
    std::string target;     // main named object (algebra, form, action, law, ...)
    std::string invariant;  // morphism restricting to the invariant complex
    std::string second;     // 'under' morphism / tensor right factor
    std::string expect_name;
    long number = 0;  // degree / samples / max arity / wedge power
    std::vector<FormVar> forms;
    std::optional<PolyForm> expect_polyform;
    std::optional<std::vector<long>> expect_ints;
    std::optional<long> expect_dim;
    std::optional<bool> expect_zero;
    std::optional<bool> expect_trivial;
    std::optional<bool> expect_solvable;
    std::optional<bool> expect_valid;
    std::optional<ScalarLit> expect_value;
    std::optional<std::vector<std::pair<long, std::vector<long>>>> expect_scan;
    std::optional<long> expect_count;
    std::vector<RatVec> expect_points;
    long euler_chi = 0;
    long euler_order = 1;
    std::vector<std::pair<long, long>> euler_isotropy;  // (count, order)
    std::optional<Rational> expect_rat;
    friend bool operator==(const Query&, const Query&) = default;
};

struct Workspace {
    std::string name;
    std::vector<AlgebraDecl> algebras;
    std::vector<FormDecl> forms;
    std::vector<MorphismDecl> morphisms;
    std::vector<BasisChangeDecl> basischanges;
    std::vector<ActionDecl> actions;
    std::vector<GroupLawDecl> grouplaws;
    std::vector<PolyFormDecl> polyforms;
    std::vector<Query> queries;

    const AlgebraDecl* algebra(const std::string& n) const { return find(algebras, n); }
    const FormDecl* form(const std::string& n) const { return find(forms, n); }
    const MorphismDecl* morphism(const std::string& n) const { return find(morphisms, n); }
    const BasisChangeDecl* basischange(const std::string& n) const { return find(basischanges, n); }
    const ActionDecl* action(const std::string& n) const { return find(actions, n); }
    const GroupLawDecl* grouplaw(const std::string& n) const { return find(grouplaws, n); }
    const PolyFormDecl* polyform(const std::string& n) const { return find(polyforms, n); }

    /// Structural equality; the workspace name (source file) is not part of it.
    friend bool operator==(const Workspace& x, const Workspace& y) {
        return x.algebras == y.algebras && x.forms == y.forms && x.morphisms == y.morphisms &&
               x.basischanges == y.basischanges && x.actions == y.actions &&
               x.grouplaws == y.grouplaws && x.polyforms == y.polyforms && x.queries == y.queries;
    }

private:
    template <class T>
    static const T* find(const std::vector<T>& v, const std::string& n) {
        for (const auto& x : v)
            if (x.name == n) return &x;
        return nullptr;
    }
};

namespace dsl_detail {

struct Token {
    enum Kind { Ident, Int, Punct, End } kind = End;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    Lexer(std::string_view src, std::string file) : src_(src), file_(std::move(file)) { advance(); }

    const Token& peek() const { return tok_; }
    const std::string& file() const { return file_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = tok_.kind == Token::End ? "end of input" : "'" + tok_.text + "'";
        throw ParseError(file_, tok_.line, tok_.col, expected, found);
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_, ++col_;
                continue;
            }
            if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
                ++col_;
                continue;
            }
            break;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::End, "", line_, col_};
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++col_;
            tok_ = {Token::Ident, std::string(src_.substr(start, pos_ - start)), tok_.line, tok_.col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++col_;
            tok_ = {Token::Int, std::string(src_.substr(start, pos_ - start)), tok_.line, tok_.col};
            return;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            pos_ += 2;
            col_ += 2;
            tok_ = {Token::Punct, "->", tok_.line, tok_.col};
            return;
        }
        static constexpr std::string_view singles = "{}()[];:,^+-/=";
        if (singles.find(c) != std::string_view::npos) {
            ++pos_;
            ++col_;
            tok_ = {Token::Punct, std::string(1, c), tok_.line, tok_.col};
            return;
        }
        throw ParseError(file_, line_, col_, "a token", "'" + std::string(1, c) + "'");
    }

    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

// raw (unlowered) syntax for forms and polynomial expressions
struct FormTermAst {
    ScalarLit coeff;
    std::vector<std::string> gens;
};
using FormAst = std::vector<FormTermAst>;

struct PolyTermAst {
    Rational coeff;
    std::vector<std::pair<std::string, int>> powers;
    std::vector<std::string> dvars;
};
using PolyAst = std::vector<PolyTermAst>;

}  // namespace dsl_detail

/// Canonical text of a scalar in the workspace syntax.
inline std::string format_scalar(const Rational& r) { return r.str(); }
inline std::string format_scalar(const QuadExt& q) { return q.str(); }

class Parser {
public:
    Parser(std::string_view src, std::string file) : lex_(src, std::move(file)) {}

    /// Parses a bare form expression (used for command-line form arguments).
    FormVar parse_standalone_form(const AlgebraDecl& alg) {
        dsl_detail::FormAst ast = parse_form_ast();
        if (lex_.peek().kind != dsl_detail::Token::End) lex_.fail("end of the form expression");
        return lower_form_for(alg, ast, "form argument");
    }

    Workspace parse() {
        Workspace ws;
        ws.name = lex_.file();
        while (lex_.peek().kind != dsl_detail::Token::End) {
            const std::string& kw = peek_ident("a declaration");
            if (kw == "algebra")
                parse_algebra(ws);
            else if (kw == "form")
                parse_form(ws);
            else if (kw == "morphism")
                parse_morphism(ws);
            else if (kw == "basischange")
                parse_basischange(ws);
            else if (kw == "action")
                parse_action(ws);
            else if (kw == "grouplaw")
                parse_grouplaw(ws);
            else if (kw == "polyform")
                parse_polyform(ws);
            else if (kw == "query")
                parse_query(ws);
            else
                lex_.fail("'algebra', 'form', 'morphism', 'basischange', 'action', 'grouplaw', 'polyform' or 'query'");
        }
        return ws;
    }

private:
    using Token = dsl_detail::Token;

    // ----- token helpers -------------------------------------------------
    const std::string& peek_ident(const std::string& expected) {
        if (lex_.peek().kind != Token::Ident) lex_.fail(expected);
        return lex_.peek().text;
    }
    std::string expect_ident(const std::string& expected) {
        if (lex_.peek().kind != Token::Ident) lex_.fail(expected);
        return lex_.next().text;
    }
    std::string expect_name(const std::string& what) {
        std::string n = expect_ident(what);
        if (n == "sqrt" || n == "d")
            throw ParseError(lex_.file(), lex_.peek().line, lex_.peek().col, what,
                             "reserved word '" + n + "'");
        return n;
    }
    void expect_keyword(const std::string& kw) {
        if (lex_.peek().kind != Token::Ident || lex_.peek().text != kw) lex_.fail("'" + kw + "'");
        lex_.next();
    }
    bool eat_keyword(const std::string& kw) {
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == kw) {
            lex_.next();
            return true;
        }
        return false;
    }
    void expect_punct(const std::string& p) {
        if (lex_.peek().kind != Token::Punct || lex_.peek().text != p) lex_.fail("'" + p + "'");
        lex_.next();
    }
    bool eat_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }
    bool peek_punct(const std::string& p) const {
        return lex_.peek().kind == Token::Punct && lex_.peek().text == p;
    }
    long expect_int(const std::string& expected) {
        if (lex_.peek().kind != Token::Int) lex_.fail(expected);
        long v = 0;
        try {
            v = std::stol(lex_.peek().text);
        } catch (const std::exception&) {
            lex_.fail("a representable integer");
        }
        lex_.next();
        return v;
    }
    long expect_signed_int(const std::string& expected) {
        bool neg = eat_punct("-");
        long v = expect_int(expected);
        return neg ? -v : v;
    }
    Rational expect_signed_rational(const std::string& expected) {
        bool neg = eat_punct("-");
        long num = expect_int(expected);
        long den = 1;
        if (eat_punct("/")) den = expect_int("a denominator");
        Rational r(num, den);
        return neg ? -r : r;
    }

    // ----- scalars --------------------------------------------------------
    bool at_scalar_start() const {
        if (lex_.peek().kind == Token::Int) return true;
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "sqrt") return true;
        return peek_punct("(");
    }

    ScalarLit parse_scalar_term() {
        ScalarLit out;
        if (lex_.peek().kind == Token::Int) {
            long num = expect_int("a number");
            Rational r(num, 1);
            if (eat_punct("/")) r = Rational(num, expect_int("a denominator"));
            if (lex_.peek().kind == Token::Ident && lex_.peek().text == "sqrt") {
                lex_.next();
                expect_punct("(");
                long d = expect_int("a radicand");
                expect_punct(")");
                if (eat_punct("/")) r = r / Rational(expect_int("a denominator"));
                out.b = r;
                out.d = d;
            } else {
                out.a = r;
            }
            return out;
        }
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "sqrt") {
            lex_.next();
            expect_punct("(");
            long d = expect_int("a radicand");
            expect_punct(")");
            Rational r(1, 1);
            if (eat_punct("/")) r = Rational(1, expect_int("a denominator"));
            out.b = r;
            out.d = d;
            return out;
        }
        lex_.fail("a scalar literal");
    }

    ScalarLit combine(const ScalarLit& x, const ScalarLit& y, bool subtract) {
        ScalarLit out;
        out.a = subtract ? x.a - y.a : x.a + y.a;
        out.b = subtract ? x.b - y.b : x.b + y.b;
        out.d = x.d;
        if (out.b.is_zero()) {
            out.d = 0;
        } else if (x.d != 0 && y.d != 0 && x.d != y.d) {
            lex_.fail("matching radicands");
        } else if (out.d == 0) {
            out.d = y.d;
        }
        return out;
    }

    ScalarLit parse_scalar() {
        if (eat_punct("(")) {
            bool neg = eat_punct("-");
            ScalarLit acc = parse_scalar_term();
            if (neg) {
                acc.a = -acc.a;
                acc.b = -acc.b;
            }
            while (peek_punct("+") || peek_punct("-")) {
                bool subtract = lex_.next().text == "-";
                acc = combine(acc, parse_scalar_term(), subtract);
            }
            expect_punct(")");
            if (eat_punct("/")) {
                Rational den(expect_int("a denominator"), 1);
                acc.a = acc.a / den;
                acc.b = acc.b / den;
            }
            return acc;
        }
        return parse_scalar_term();
    }

    // ----- forms ------------------------------------------------------------
    dsl_detail::FormAst parse_form_ast() {
        dsl_detail::FormAst ast;
        bool neg = eat_punct("-");
        ast.push_back(parse_form_term(neg));
        while (peek_punct("+") || peek_punct("-")) {
            bool subtract = lex_.next().text == "-";
            ast.push_back(parse_form_term(subtract));
        }
        return ast;
    }

    dsl_detail::FormTermAst parse_form_term(bool negated) {
        dsl_detail::FormTermAst term;
        term.coeff = {Rational(1), Rational(0), 0};
        bool have_scalar = false;
        if (at_scalar_start()) {
            term.coeff = parse_scalar();
            have_scalar = true;
        }
        if (lex_.peek().kind == Token::Ident && lex_.peek().text != "sqrt" && lex_.peek().text != "d") {
            term.gens.push_back(expect_name("a generator"));
            while (eat_punct("^")) term.gens.push_back(expect_name("a generator"));
        } else if (!have_scalar) {
            lex_.fail("a term");
        }
        if (negated) {
            term.coeff.a = -term.coeff.a;
            term.coeff.b = -term.coeff.b;
        }
        return term;
    }

    template <ScalarField S>
    S lower_scalar(const ScalarLit& lit, long field_d, const std::string& where) {
        if constexpr (std::is_same_v<S, Rational>) {
            if (!lit.b.is_zero())
                throw WorkspaceError(where, "sqrt literal in an algebra over Q", false);
            return lit.a;
        } else {
            if (lit.d != 0 && field_d != 0 && lit.d != field_d)
                throw WorkspaceError(where, "radicand does not match the algebra field", false);
            return QuadExt(lit.a, lit.b, lit.d);
        }
    }

    template <ScalarField S>
    Form<S> lower_form(const dsl_detail::FormAst& ast, const GenSetPtr& gens, long field_d,
                       const std::string& where) {
        std::optional<int> degree;
        std::optional<Form<S>> acc;
        for (const auto& term : ast) {
            int deg = static_cast<int>(term.gens.size());
            if (degree && *degree != deg)
                throw WorkspaceError(where, "mixed degrees in a form expression", false);
            degree = deg;
            Form<S> f = Form<S>::unit(gens);
            for (const std::string& g : term.gens) {
                auto idx = gens->index_of(g);
                if (!idx) throw WorkspaceError(where, "unknown generator '" + g + "'", false);
                f = wedge(f, Form<S>::generator(gens, *idx));
            }
            f = lower_scalar<S>(term.coeff, field_d, where) * f;
            acc = acc ? *acc + f : f;
        }
        if (!acc) throw WorkspaceError(where, "empty form expression", false);
        return *acc;
    }

    FormVar lower_form_for(const AlgebraDecl& alg, const dsl_detail::FormAst& ast,
                           const std::string& where) {
        if (alg.sqrt_d == 0)
            return lower_form<Rational>(ast, std::get<Dga<Rational>>(alg.dga).gens(), 0, where);
        return lower_form<QuadExt>(ast, std::get<Dga<QuadExt>>(alg.dga).gens(), alg.sqrt_d, where);
    }

    // ----- declarations ---------------------------------------------------
    void check_fresh(Workspace& ws, const std::string& name) {
        bool dup = ws.algebra(name) || ws.form(name) || ws.morphism(name) || ws.basischange(name) ||
                   ws.action(name) || ws.grouplaw(name) || ws.polyform(name);
        for (const auto& q : ws.queries) dup = dup || q.name == name;
        if (dup) throw WorkspaceError(name, "duplicate name", false);
    }

    void parse_algebra(Workspace& ws) {
        expect_keyword("algebra");
        std::string name = expect_name("an algebra name");
        check_fresh(ws, name);
        expect_punct("{");
        long field_d = 0;
        std::vector<std::string> gens;
        std::vector<std::pair<std::string, dsl_detail::FormAst>> diffs;
        while (!eat_punct("}")) {
            const std::string& kw = peek_ident("'field', 'generators', 'd' or '}'");
            if (kw == "field") {
                lex_.next();
                expect_keyword("Q");
                if (eat_punct("(")) {
                    expect_keyword("sqrt");
                    field_d = expect_int("a radicand");
                    expect_punct(")");
                }
                expect_punct(";");
            } else if (kw == "generators") {
                lex_.next();
                while (lex_.peek().kind == Token::Ident) gens.push_back(expect_name("a generator name"));
                expect_punct(":");
                long deg = expect_int("a degree");
                if (deg != 1) throw WorkspaceError(name, "generators must have degree 1", false);
                expect_punct(";");
            } else if (kw == "d") {
                lex_.next();
                std::string g = expect_name("a generator name");
                expect_punct("=");
                diffs.emplace_back(g, parse_form_ast());
                expect_punct(";");
            } else {
                lex_.fail("'field', 'generators', 'd' or '}'");
            }
        }
        if (gens.empty()) throw WorkspaceError(name, "algebra has no generators", false);
        DgaVar dga = field_d == 0 ? DgaVar(build_dga<Rational>(name, gens, diffs, 0))
                                  : DgaVar(build_dga<QuadExt>(name, gens, diffs, field_d));
        std::visit(
            [&](const auto& d) {
                auto report = verify_d2(d);
                if (!report.ok()) {
                    std::string msg = "d^2 != 0 on generator " +
                                      d.gens()->name(report.violations.front().generator) +
                                      "; d^2 = " + format_form(report.violations.front().d_squared);
                    throw WorkspaceError(name, msg, true);
                }
            },
            dga);
        ws.algebras.push_back(AlgebraDecl{name, field_d, std::move(dga)});
    }

    template <ScalarField S>
    Dga<S> build_dga(const std::string& name, const std::vector<std::string>& gens,
                     const std::vector<std::pair<std::string, dsl_detail::FormAst>>& diffs,
                     long field_d) {
        GenSetPtr gs;
        try {
            gs = make_generators(gens);
        } catch (const AlgebraError& e) {
            throw WorkspaceError(name, e.what(), false);
        }
        std::vector<Form<S>> dgen(gens.size(), Form<S>::zero(gs, 2));
        for (const auto& [g, ast] : diffs) {
            auto idx = gs->index_of(g);
            if (!idx) throw WorkspaceError(name, "differential on unknown generator '" + g + "'", false);
            Form<S> img = lower_form<S>(ast, gs, field_d, name);
            if (img.degree() != 2)
                throw WorkspaceError(name, "differential of " + g + " must have degree 2", false);
            dgen[*idx] = std::move(img);
        }
        return Dga<S>(gs, std::move(dgen));
    }

    void parse_form(Workspace& ws) {
        expect_keyword("form");
        std::string name = expect_name("a form name");
        check_fresh(ws, name);
        expect_keyword("on");
        std::string alg = expect_name("an algebra name");
        const AlgebraDecl* a = ws.algebra(alg);
        if (!a) throw WorkspaceError(name, "unknown algebra '" + alg + "'", false);
        expect_punct("=");
        dsl_detail::FormAst ast = parse_form_ast();
        expect_punct(";");
        ws.forms.push_back(FormDecl{name, alg, lower_form_for(*a, ast, name)});
    }

    void parse_morphism(Workspace& ws) {
        expect_keyword("morphism");
        std::string name = expect_name("a morphism name");
        check_fresh(ws, name);
        expect_keyword("on");
        std::string alg = expect_name("an algebra name");
        const AlgebraDecl* a = ws.algebra(alg);
        if (!a) throw WorkspaceError(name, "unknown algebra '" + alg + "'", false);
        expect_punct("{");
        std::vector<std::pair<std::string, dsl_detail::FormAst>> images;
        std::optional<int> order;
        while (!eat_punct("}")) {
            std::string g = expect_ident("a generator name or 'order'");
            if (g == "order" && lex_.peek().kind == Token::Int) {
                order = static_cast<int>(expect_int("an order"));
                expect_punct(";");
                continue;
            }
            expect_punct("->");
            images.emplace_back(g, parse_form_ast());
            expect_punct(";");
        }
        MorphismVar morphism = build_morphism(*a, name, images);
        if (order) {
            std::visit(
                [&](const auto& dga) {
                    using S = typename std::decay_t<decltype(dga)>::Scalar;
                    CyclicAction<S> act{std::get<Morphism<S>>(morphism), *order};
                    auto report = verify_action(dga, act);
                    if (!report.ok())
                        throw WorkspaceError(
                            name, !report.cochain_violations.empty()
                                      ? "morphism does not commute with the differential"
                                      : (!report.power_is_identity ? "declared order is not an identity power"
                                                                   : "a smaller power is already the identity"),
                            true);
                },
                a->dga);
        }
        ws.morphisms.push_back(MorphismDecl{name, alg, std::move(morphism), order});
    }

    MorphismVar build_morphism(const AlgebraDecl& a, const std::string& name,
                               const std::vector<std::pair<std::string, dsl_detail::FormAst>>& images) {
        auto build = [&]<ScalarField S>(const Dga<S>& dga) -> MorphismVar {
            std::vector<Form<S>> imgs;
            for (int i = 0; i < dga.n(); ++i) imgs.push_back(Form<S>::generator(dga.gens(), i));
            for (const auto& [g, ast] : images) {
                auto idx = dga.gens()->index_of(g);
                if (!idx) throw WorkspaceError(name, "unknown generator '" + g + "'", false);
                Form<S> img = lower_form<S>(ast, dga.gens(), a.sqrt_d, name);
                if (img.degree() != 1)
                    throw WorkspaceError(name, "image of " + g + " must have degree 1", false);
                imgs[*idx] = std::move(img);
            }
            return Morphism<S>(dga.gens(), std::move(imgs));
        };
        if (a.sqrt_d == 0) return build(std::get<Dga<Rational>>(a.dga));
        return build(std::get<Dga<QuadExt>>(a.dga));
    }

    void parse_basischange(Workspace& ws) {
        expect_keyword("basischange");
        std::string name = expect_name("a basischange name");
        check_fresh(ws, name);
        expect_keyword("on");
        std::string alg = expect_name("an algebra name");
        const AlgebraDecl* a = ws.algebra(alg);
        if (!a) throw WorkspaceError(name, "unknown algebra '" + alg + "'", false);
        expect_punct("{");
        std::vector<std::string> new_names;
        std::vector<dsl_detail::FormAst> asts;
        while (!eat_punct("}")) {
            new_names.push_back(expect_name("a new generator name"));
            expect_punct("->");
            asts.push_back(parse_form_ast());
            expect_punct(";");
        }
        auto build = [&]<ScalarField S>(const Dga<S>& dga) {
            std::vector<Form<S>> imgs;
            for (const auto& ast : asts) {
                Form<S> img = lower_form<S>(ast, dga.gens(), a->sqrt_d, name);
                if (img.degree() != 1)
                    throw WorkspaceError(name, "basis images must have degree 1", false);
                imgs.push_back(std::move(img));
            }
            return imgs;
        };
        std::variant<std::vector<Form<Rational>>, std::vector<Form<QuadExt>>> images =
            a->sqrt_d == 0
                ? decltype(BasisChangeDecl::images)(build(std::get<Dga<Rational>>(a->dga)))
                : decltype(BasisChangeDecl::images)(build(std::get<Dga<QuadExt>>(a->dga)));
        ws.basischanges.push_back(BasisChangeDecl{name, alg, std::move(new_names), std::move(images)});
    }

    IntMat parse_int_matrix() {
        IntMat m;
        expect_punct("[");
        while (true) {
            expect_punct("[");
            std::vector<mpz_class> row;
            while (true) {
                row.push_back(expect_signed_int("an integer"));
                if (!eat_punct(",")) break;
            }
            expect_punct("]");
            m.push_back(std::move(row));
            if (!eat_punct(",")) break;
        }
        expect_punct("]");
        for (const auto& row : m)
            if (row.size() != m.size())
                throw WorkspaceError("matrix", "matrix must be square", false);
        return m;
    }

    void parse_action(Workspace& ws) {
        expect_keyword("action");
        std::string name = expect_name("an action name");
        check_fresh(ws, name);
        expect_punct("{");
        AffineTorusAction act;
        bool have_matrix = false;
        while (!eat_punct("}")) {
            const std::string& kw = peek_ident("'matrix', 'lattice', 'translation' or 'order'");
            if (kw == "matrix") {
                lex_.next();
                act.linear = parse_int_matrix();
                have_matrix = true;
            } else if (kw == "lattice") {
                lex_.next();
                act.lattice = parse_int_matrix();
            } else if (kw == "translation") {
                lex_.next();
                expect_punct("[");
                while (true) {
                    act.translation.push_back(expect_signed_rational("a rational"));
                    if (!eat_punct(",")) break;
                }
                expect_punct("]");
            } else if (kw == "order") {
                lex_.next();
                act.order = static_cast<int>(expect_int("an order"));
            } else {
                lex_.fail("'matrix', 'lattice', 'translation' or 'order'");
            }
            expect_punct(";");
        }
        if (!have_matrix) throw WorkspaceError(name, "action needs a matrix", false);
        if (act.lattice.empty()) act.lattice = int_identity(static_cast<int>(act.linear.size()));
        if (act.lattice.size() != act.linear.size())
            throw WorkspaceError(name, "lattice and matrix dimensions differ", false);
        if (!act.translation.empty() && act.translation.size() != act.linear.size())
            throw WorkspaceError(name, "translation dimension differs from the matrix", false);
        try {
            if (!action_order_is_exact(act))
                throw WorkspaceError(name, "declared order is not the exact order of the torus map", true);
        } catch (const LatticeError& e) {
            throw WorkspaceError(name, e.what(), true);
        }
        ws.actions.push_back(ActionDecl{name, std::move(act)});
    }

    dsl_detail::PolyAst parse_poly_ast(bool allow_d) {
        dsl_detail::PolyAst ast;
        bool neg = eat_punct("-");
        ast.push_back(parse_poly_term(allow_d, neg));
        while (peek_punct("+") || peek_punct("-")) {
            bool subtract = lex_.next().text == "-";
            ast.push_back(parse_poly_term(allow_d, subtract));
        }
        return ast;
    }

    dsl_detail::PolyTermAst parse_poly_term(bool allow_d, bool negated) {
        dsl_detail::PolyTermAst term;
        term.coeff = Rational(1);
        bool any = false;
        if (lex_.peek().kind == Token::Int) {
            long num = expect_int("a number");
            term.coeff = Rational(num, 1);
            if (eat_punct("/")) term.coeff = Rational(num, expect_int("a denominator"));
            any = true;
        }
        while (lex_.peek().kind == Token::Ident && lex_.peek().text != "d") {
            std::string v = expect_name("a variable");
            int power = 1;
            if (eat_punct("^")) power = static_cast<int>(expect_int("an exponent"));
            term.powers.emplace_back(v, power);
            any = true;
        }
        if (allow_d && lex_.peek().kind == Token::Ident && lex_.peek().text == "d") {
            lex_.next();
            term.dvars.push_back(expect_name("a coordinate"));
            while (eat_punct("^")) {
                expect_keyword("d");
                term.dvars.push_back(expect_name("a coordinate"));
            }
            any = true;
        }
        if (!any) lex_.fail("a polynomial term");
        if (negated) term.coeff = -term.coeff;
        return term;
    }

    Polynomial lower_poly(const dsl_detail::PolyAst& ast, const std::vector<std::string>& vars,
                          const std::string& where) {
        Polynomial p(static_cast<int>(vars.size()));
        for (const auto& term : ast) {
            std::vector<int> exps(vars.size(), 0);
            for (const auto& [v, e] : term.powers) {
                auto it = std::find(vars.begin(), vars.end(), v);
                if (it == vars.end()) throw WorkspaceError(where, "unknown variable '" + v + "'", false);
                exps[it - vars.begin()] += e;
            }
            p.add_term(std::move(exps), term.coeff);
        }
        return p;
    }

    void parse_grouplaw(Workspace& ws) {
        expect_keyword("grouplaw");
        std::string name = expect_name("a group law name");
        check_fresh(ws, name);
        expect_punct("{");
        GroupLawDecl decl;
        decl.name = name;
        std::vector<dsl_detail::PolyAst> comps;
        while (!eat_punct("}")) {
            const std::string& kw = peek_ident("'first', 'second', 'components', 'equivariance' or 'congruence'");
            if (kw == "first") {
                lex_.next();
                while (lex_.peek().kind == Token::Ident) decl.first_vars.push_back(expect_name("a variable"));
            } else if (kw == "second") {
                lex_.next();
                while (lex_.peek().kind == Token::Ident) decl.second_vars.push_back(expect_name("a variable"));
            } else if (kw == "components") {
                lex_.next();
                comps.push_back(parse_poly_ast(false));
                while (eat_punct(",")) comps.push_back(parse_poly_ast(false));
            } else if (kw == "equivariance") {
                lex_.next();
                decl.law.equivariance = parse_int_matrix();
            } else if (kw == "congruence") {
                lex_.next();
                GroupLaw::Congruence cg;
                cg.modulus = expect_int("a modulus");
                expect_punct(":");
                std::string vi = expect_name("a variable");
                std::string vj = expect_name("a variable");
                decl.law.congruence = cg;
                congruence_vars_ = {vi, vj};
            } else {
                lex_.fail("'first', 'second', 'components', 'equivariance' or 'congruence'");
            }
            expect_punct(";");
        }
        int m = static_cast<int>(decl.first_vars.size());
        if (m == 0 || static_cast<int>(decl.second_vars.size()) != m)
            throw WorkspaceError(name, "'first' and 'second' must list the same number of variables", false);
        if (static_cast<int>(comps.size()) != m)
            throw WorkspaceError(name, "component count must match the arity", false);
        std::vector<std::string> vars = decl.first_vars;
        vars.insert(vars.end(), decl.second_vars.begin(), decl.second_vars.end());
        decl.law.m = m;
        for (const auto& ast : comps) decl.law.components.push_back(lower_poly(ast, vars, name));
        if (decl.law.congruence) {
            auto locate = [&](const std::string& v) -> int {
                auto it = std::find(decl.second_vars.begin(), decl.second_vars.end(), v);
                if (it == decl.second_vars.end())
                    throw WorkspaceError(name, "congruence variable '" + v + "' not in 'second'", false);
                return static_cast<int>(it - decl.second_vars.begin());
            };
            decl.law.congruence->i = locate(congruence_vars_.first);
            decl.law.congruence->j = locate(congruence_vars_.second);
        }
        if (decl.law.equivariance && static_cast<int>(decl.law.equivariance->size()) != m)
            throw WorkspaceError(name, "equivariance matrix must match the arity", false);
        ws.grouplaws.push_back(std::move(decl));
    }

    void parse_polyform(Workspace& ws) {
        expect_keyword("polyform");
        std::string name = expect_name("a polyform name");
        check_fresh(ws, name);
        expect_keyword("vars");
        std::vector<std::string> vars;
        while (lex_.peek().kind == Token::Ident) vars.push_back(expect_name("a variable"));
        expect_punct("=");
        dsl_detail::PolyAst ast = parse_poly_ast(true);
        expect_punct(";");
        PolyFormDecl decl;
        decl.name = name;
        decl.vars = vars;
        decl.form = lower_polyform(ast, vars, name);
        ws.polyforms.push_back(std::move(decl));
    }

    PolyForm lower_polyform(const dsl_detail::PolyAst& ast, const std::vector<std::string>& vars,
                            const std::string& where) {
        PolyForm f(static_cast<int>(vars.size()));
        for (const auto& term : ast) {
            std::vector<int> exps(vars.size(), 0);
            for (const auto& [v, e] : term.powers) {
                auto it = std::find(vars.begin(), vars.end(), v);
                if (it == vars.end()) throw WorkspaceError(where, "unknown variable '" + v + "'", false);
                exps[it - vars.begin()] += e;
            }
            Rational coeff = term.coeff;
            Mono dx = 0;
            // wedge the coordinate differentials left to right
            int sign = 1;
            for (const std::string& v : term.dvars) {
                auto it = std::find(vars.begin(), vars.end(), v);
                if (it == vars.end()) throw WorkspaceError(where, "unknown coordinate '" + v + "'", false);
                Mono dv = Mono(1) << (it - vars.begin());
                int s = wedge_sign(dx, dv);
                if (s == 0) {
                    sign = 0;
                    break;
                }
                sign *= s;
                dx |= dv;
            }
            if (sign == 0) continue;
            f.add_term(std::move(exps), dx, sign < 0 ? -coeff : coeff);
        }
        return f;
    }

    // ----- queries ----------------------------------------------------------
    FormVar parse_bracket_form(const AlgebraDecl& alg, const std::string& where) {
        expect_punct("[");
        dsl_detail::FormAst ast = parse_form_ast();
        expect_punct("]");
        return lower_form_for(alg, ast, where);
    }

    const AlgebraDecl& resolve_algebra(Workspace& ws, const std::string& name,
                                       const std::string& where) {
        const AlgebraDecl* a = ws.algebra(name);
        if (!a) throw WorkspaceError(where, "unknown algebra '" + name + "'", false);
        return *a;
    }

    void parse_query(Workspace& ws) {
        expect_keyword("query");
        Query q;
        q.name = expect_name("a query name");
        check_fresh(ws, q.name);
        std::string kind = expect_ident("a query kind");
        if (kind == "check") {
            q.kind = QueryKind::Check;
            q.target = expect_name("an algebra name");
            resolve_algebra(ws, q.target, q.name);
        } else if (kind == "checkaction") {
            q.kind = QueryKind::CheckAction;
            q.target = expect_name("a morphism name");
            if (!ws.morphism(q.target)) throw WorkspaceError(q.name, "unknown morphism", false);
        } else if (kind == "checklaw") {
            q.kind = QueryKind::CheckLaw;
            q.target = expect_name("a group law name");
            if (!ws.grouplaw(q.target)) throw WorkspaceError(q.name, "unknown group law", false);
            expect_keyword("samples");
            q.number = expect_int("a sample count");
        } else if (kind == "betti") {
            q.kind = QueryKind::Betti;
            q.target = expect_name("an algebra name");
            resolve_algebra(ws, q.target, q.name);
            parse_invariant(ws, q);
            if (eat_keyword("expect")) {
                expect_punct("[");
                std::vector<long> v;
                while (lex_.peek().kind == Token::Int) v.push_back(expect_int("a number"));
                expect_punct("]");
                q.expect_ints = std::move(v);
            }
        } else if (kind == "cohomology") {
            q.kind = QueryKind::Cohomology;
            q.target = expect_name("an algebra name");
            resolve_algebra(ws, q.target, q.name);
            q.number = expect_int("a degree");
            parse_invariant(ws, q);
            if (eat_keyword("expect")) q.expect_dim = expect_int("a dimension");
        } else if (kind == "cup") {
            q.kind = QueryKind::Cup;
            const AlgebraDecl& a = parse_target_algebra(ws, q);
            q.forms.push_back(parse_bracket_form(a, q.name));
            q.forms.push_back(parse_bracket_form(a, q.name));
            if (eat_keyword("expect")) q.expect_zero = parse_zero_nonzero();
        } else if (kind == "dclosed") {
            q.kind = QueryKind::DClosed;
            q.target = expect_name("a form name");
            if (!ws.form(q.target)) throw WorkspaceError(q.name, "unknown form", false);
        } else if (kind == "dequals") {
            q.kind = QueryKind::DEquals;
            q.target = expect_name("a form name");
            const FormDecl* f = ws.form(q.target);
            if (!f) throw WorkspaceError(q.name, "unknown form", false);
            q.forms.push_back(parse_bracket_form(resolve_algebra(ws, f->algebra, q.name), q.name));
        } else if (kind == "invariantform") {
            q.kind = QueryKind::InvariantForm;
            q.target = expect_name("a form name");
            if (!ws.form(q.target)) throw WorkspaceError(q.name, "unknown form", false);
            expect_keyword("under");
            q.second = expect_name("a morphism name");
            if (!ws.morphism(q.second)) throw WorkspaceError(q.name, "unknown morphism", false);
        } else if (kind == "wedgepower") {
            q.kind = QueryKind::WedgePower;
            q.target = expect_name("a form name");
            if (!ws.form(q.target)) throw WorkspaceError(q.name, "unknown form", false);
            q.number = expect_int("a power");
            if (eat_keyword("expect")) q.expect_zero = parse_zero_nonzero();
        } else if (kind == "massey3") {
            q.kind = QueryKind::Massey3;
            const AlgebraDecl& a = parse_target_algebra(ws, q);
            for (int i = 0; i < 3; ++i) q.forms.push_back(parse_bracket_form(a, q.name));
            if (eat_keyword("expect")) {
                std::string v = expect_ident("'trivial' or 'nontrivial'");
                if (v != "trivial" && v != "nontrivial") lex_.fail("'trivial' or 'nontrivial'");
                q.expect_trivial = v == "trivial";
            }
        } else if (kind == "masseysystem") {
            q.kind = QueryKind::MasseySystem;
            const AlgebraDecl& a = parse_target_algebra(ws, q);
            while (peek_punct("[")) q.forms.push_back(parse_bracket_form(a, q.name));
            if (q.forms.size() < 3) throw WorkspaceError(q.name, "need at least three classes", false);
            if (eat_keyword("expect")) {
                std::string v = expect_ident("'solvable' or 'blocked'");
                if (v != "solvable" && v != "blocked") lex_.fail("'solvable' or 'blocked'");
                q.expect_solvable = v == "solvable";
            }
        } else if (kind == "massey4cert") {
            q.kind = QueryKind::Massey4Cert;
            const AlgebraDecl& a = parse_target_algebra(ws, q);
            for (int i = 0; i < 4; ++i) q.forms.push_back(parse_bracket_form(a, q.name));
            expect_keyword("sigma");
            q.forms.push_back(parse_bracket_form(a, q.name));
            if (eat_keyword("expect")) {
                std::string v = expect_ident("'valid' or 'invalid'");
                if (v != "valid" && v != "invalid") lex_.fail("'valid' or 'invalid'");
                q.expect_valid = v == "valid";
                if (*q.expect_valid && eat_keyword("value")) {
                    bool neg = eat_punct("-");
                    ScalarLit lit = parse_scalar();
                    if (neg) {
                        lit.a = -lit.a;
                        lit.b = -lit.b;
                    }
                    q.expect_value = lit;
                }
            }
        } else if (kind == "masseyscan") {
            q.kind = QueryKind::MasseyScan;
            parse_target_algebra(ws, q);
            expect_keyword("maxarity");
            q.number = expect_int("a maximum arity");
            if (eat_keyword("expect")) {
                std::vector<std::pair<long, std::vector<long>>> entries;
                if (!eat_keyword("none")) {
                    while (peek_punct("[")) {
                        expect_punct("[");
                        long arity = expect_int("an arity");
                        expect_punct(":");
                        std::vector<long> degs;
                        while (lex_.peek().kind == Token::Int) degs.push_back(expect_int("a degree"));
                        expect_punct("]");
                        entries.emplace_back(arity, std::move(degs));
                    }
                }
                q.expect_scan = std::move(entries);
            }
        } else if (kind == "fixedpoints") {
            q.kind = QueryKind::FixedPoints;
            q.target = expect_name("an action name");
            if (!ws.action(q.target)) throw WorkspaceError(q.name, "unknown action", false);
            if (eat_keyword("expect")) {
                q.expect_count = expect_int("a count");
                if (eat_keyword("points")) {
                    while (peek_punct("(")) {
                        expect_punct("(");
                        RatVec pt;
                        while (true) {
                            pt.push_back(expect_signed_rational("a rational"));
                            if (!eat_punct(",")) break;
                        }
                        expect_punct(")");
                        q.expect_points.push_back(std::move(pt));
                    }
                }
            }
        } else if (kind == "euler") {
            q.kind = QueryKind::Euler;
            q.euler_chi = expect_signed_int("an Euler characteristic");
            q.euler_order = expect_int("a group order");
            while (peek_punct("[")) {
                expect_punct("[");
                long count = expect_int("a point count");
                expect_punct(":");
                long iso = expect_int("an isotropy order");
                expect_punct("]");
                q.euler_isotropy.emplace_back(count, iso);
            }
            if (eat_keyword("expect")) q.expect_rat = expect_signed_rational("a rational");
        } else if (kind == "tensor") {
            q.kind = QueryKind::Tensor;
            q.target = expect_name("an algebra name");
            q.second = expect_name("an algebra name");
            resolve_algebra(ws, q.target, q.name);
            resolve_algebra(ws, q.second, q.name);
            expect_keyword("expect");
            q.expect_name = expect_name("an algebra name");
            resolve_algebra(ws, q.expect_name, q.name);
        } else if (kind == "changebasis") {
            q.kind = QueryKind::ChangeBasis;
            q.target = expect_name("a basischange name");
            if (!ws.basischange(q.target)) throw WorkspaceError(q.name, "unknown basischange", false);
            expect_keyword("expect");
            q.expect_name = expect_name("an algebra name");
            resolve_algebra(ws, q.expect_name, q.name);
        } else if (kind == "polyd") {
            q.kind = QueryKind::PolyD;
            q.target = expect_name("a polyform name");
            const PolyFormDecl* pf = ws.polyform(q.target);
            if (!pf) throw WorkspaceError(q.name, "unknown polyform", false);
            expect_punct("=");
            expect_punct("[");
            dsl_detail::PolyAst ast = parse_poly_ast(true);
            expect_punct("]");
            q.expect_polyform = lower_polyform(ast, pf->vars, q.name);
        } else {
            lex_.fail("a query kind");
        }
        expect_punct(";");
        ws.queries.push_back(std::move(q));
    }

    bool parse_zero_nonzero() {
        std::string v = expect_ident("'zero' or 'nonzero'");
        if (v != "zero" && v != "nonzero") lex_.fail("'zero' or 'nonzero'");
        return v == "zero";
    }

    void parse_invariant(Workspace& ws, Query& q) {
        if (eat_keyword("invariant")) {
            q.invariant = expect_name("a morphism name");
            const MorphismDecl* m = ws.morphism(q.invariant);
            if (!m) throw WorkspaceError(q.name, "unknown morphism '" + q.invariant + "'", false);
            if (!m->order) throw WorkspaceError(q.name, "morphism '" + q.invariant + "' has no order", false);
        }
    }

    const AlgebraDecl& parse_target_algebra(Workspace& ws, Query& q) {
        q.target = expect_name("an algebra name");
        const AlgebraDecl& a = resolve_algebra(ws, q.target, q.name);
        parse_invariant(ws, q);
        return a;
    }

    dsl_detail::Lexer lex_;
    std::pair<std::string, std::string> congruence_vars_;
};

inline Workspace parse_workspace(std::string_view text, std::string file = "") {
    return Parser(text, std::move(file)).parse();
}

inline FormVar parse_form_text(const AlgebraDecl& alg, std::string_view text) {
    return Parser(text, "<form>").parse_standalone_form(alg);
}

// ---------------------------------------------------------------------------
// canonical printing (parse . print = identity on loaded workspaces)
// ---------------------------------------------------------------------------

namespace dsl_detail {

inline std::string poly_text(const Polynomial& p, const std::vector<std::string>& vars) {
    if (p.terms().empty()) return "0";
    std::string out;
    for (const auto& [exps, c] : p.terms()) {
        std::string cs = c.str();
        bool neg = cs[0] == '-';
        std::string mag = neg ? cs.substr(1) : cs;
        out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        std::string body;
        for (std::size_t v = 0; v < exps.size(); ++v) {
            if (exps[v] == 0) continue;
            if (!body.empty()) body += " ";
            body += vars[v];
            if (exps[v] > 1) body += "^" + std::to_string(exps[v]);
        }
        if (body.empty())
            out += mag;
        else
            out += (mag == "1" ? body : mag + " " + body);
    }
    return out;
}

inline std::string polyform_text(const PolyForm& f, const std::vector<std::string>& vars) {
    if (f.terms().empty()) return "0";
    std::string out;
    for (const auto& [key, c] : f.terms()) {
        std::string cs = c.str();
        bool neg = cs[0] == '-';
        std::string mag = neg ? cs.substr(1) : cs;
        out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        std::string body;
        for (std::size_t v = 0; v < key.exps.size(); ++v) {
            if (key.exps[v] == 0) continue;
            if (!body.empty()) body += " ";
            body += vars[v];
            if (key.exps[v] > 1) body += "^" + std::to_string(key.exps[v]);
        }
        std::string dpart;
        for (int i : mono_indices(key.dx)) {
            if (!dpart.empty()) dpart += " ^ ";
            dpart += "d " + vars[i];
        }
        std::string factors = body;
        if (!dpart.empty()) factors += (factors.empty() ? "" : " ") + dpart;
        if (factors.empty())
            out += mag;
        else
            out += (mag == "1" ? factors : mag + " " + factors);
    }
    return out;
}

inline std::string imat_text(const IntMat& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < m[i].size(); ++j)
            out += (j ? ", " : "") + m[i][j].get_str();
        out += "]";
    }
    return out + "]";
}

}  // namespace dsl_detail

inline std::string print_workspace(const Workspace& ws) {
    std::ostringstream out;
    auto form_text = [](const FormVar& fv) {
        return std::visit([](const auto& f) { return format_form(f); }, fv);
    };
    for (const auto& a : ws.algebras) {
        out << "algebra " << a.name << " {\n";
        out << "  field Q" << (a.sqrt_d ? "(sqrt " + std::to_string(a.sqrt_d) + ")" : "") << ";\n";
        std::visit(
            [&](const auto& dga) {
                out << "  generators";
                for (const auto& n : dga.gens()->names()) out << " " << n;
                out << " : 1;\n";
                for (int i = 0; i < dga.n(); ++i)
                    if (!dga.d_of_generator(i).is_zero())
                        out << "  d " << dga.gens()->name(i) << " = " << format_form(dga.d_of_generator(i))
                            << ";\n";
            },
            a.dga);
        out << "}\n";
    }
    for (const auto& f : ws.forms)
        out << "form " << f.name << " on " << f.algebra << " = " << form_text(f.form) << ";\n";
    for (const auto& m : ws.morphisms) {
        out << "morphism " << m.name << " on " << m.algebra << " {\n";
        std::visit(
            [&](const auto& mor) {
                for (int i = 0; i < mor.gens()->size(); ++i)
                    out << "  " << mor.gens()->name(i) << " -> " << format_form(mor.image(i)) << ";\n";
            },
            m.morphism);
        if (m.order) out << "  order " << *m.order << ";\n";
        out << "}\n";
    }
    for (const auto& b : ws.basischanges) {
        out << "basischange " << b.name << " on " << b.algebra << " {\n";
        std::visit(
            [&](const auto& imgs) {
                for (std::size_t i = 0; i < imgs.size(); ++i)
                    out << "  " << b.new_names[i] << " -> " << format_form(imgs[i]) << ";\n";
            },
            b.images);
        out << "}\n";
    }
    for (const auto& a : ws.actions) {
        out << "action " << a.name << " {\n";
        out << "  matrix " << dsl_detail::imat_text(a.action.linear) << ";\n";
        out << "  lattice " << dsl_detail::imat_text(a.action.lattice) << ";\n";
        if (!a.action.translation.empty()) {
            out << "  translation [";
            for (std::size_t i = 0; i < a.action.translation.size(); ++i)
                out << (i ? ", " : "") << a.action.translation[i].str();
            out << "];\n";
        }
        out << "  order " << a.action.order << ";\n}\n";
    }
    for (const auto& g : ws.grouplaws) {
        out << "grouplaw " << g.name << " {\n  first";
        for (const auto& v : g.first_vars) out << " " << v;
        out << ";\n  second";
        for (const auto& v : g.second_vars) out << " " << v;
        out << ";\n  components ";
        std::vector<std::string> vars = g.first_vars;
        vars.insert(vars.end(), g.second_vars.begin(), g.second_vars.end());
        for (std::size_t i = 0; i < g.law.components.size(); ++i)
            out << (i ? ", " : "") << dsl_detail::poly_text(g.law.components[i], vars);
        out << ";\n";
        if (g.law.equivariance) out << "  equivariance " << dsl_detail::imat_text(*g.law.equivariance) << ";\n";
        if (g.law.congruence)
            out << "  congruence " << g.law.congruence->modulus << " : "
                << g.second_vars[g.law.congruence->i] << " " << g.second_vars[g.law.congruence->j]
                << ";\n";
        out << "}\n";
    }
    for (const auto& p : ws.polyforms) {
        out << "polyform " << p.name << " vars";
        for (const auto& v : p.vars) out << " " << v;
        out << " = " << dsl_detail::polyform_text(p.form, p.vars) << ";\n";
    }
    for (const auto& q : ws.queries) {
        out << "query " << q.name << " ";
        auto inv = [&]() { return q.invariant.empty() ? std::string() : " invariant " + q.invariant; };
        auto bforms = [&](std::size_t from, std::size_t to) {
            std::string s;
            for (std::size_t i = from; i < to; ++i) s += " [" + form_text(q.forms[i]) + "]";
            return s;
        };
        switch (q.kind) {
            case QueryKind::Check: out << "check " << q.target; break;
            case QueryKind::CheckAction: out << "checkaction " << q.target; break;
            case QueryKind::CheckLaw: out << "checklaw " << q.target << " samples " << q.number; break;
            case QueryKind::Betti:
                out << "betti " << q.target << inv();
                if (q.expect_ints) {
                    out << " expect [";
                    for (std::size_t i = 0; i < q.expect_ints->size(); ++i)
                        out << (i ? " " : "") << (*q.expect_ints)[i];
                    out << "]";
                }
                break;
            case QueryKind::Cohomology:
                out << "cohomology " << q.target << " " << q.number << inv();
                if (q.expect_dim) out << " expect " << *q.expect_dim;
                break;
            case QueryKind::Cup:
                out << "cup " << q.target << inv() << bforms(0, 2);
                if (q.expect_zero) out << " expect " << (*q.expect_zero ? "zero" : "nonzero");
                break;
            case QueryKind::DClosed: out << "dclosed " << q.target; break;
            case QueryKind::DEquals: out << "dequals " << q.target << bforms(0, 1); break;
            case QueryKind::InvariantForm:
                out << "invariantform " << q.target << " under " << q.second;
                break;
            case QueryKind::WedgePower:
                out << "wedgepower " << q.target << " " << q.number;
                if (q.expect_zero) out << " expect " << (*q.expect_zero ? "zero" : "nonzero");
                break;
            case QueryKind::Massey3:
                out << "massey3 " << q.target << inv() << bforms(0, 3);
                if (q.expect_trivial) out << " expect " << (*q.expect_trivial ? "trivial" : "nontrivial");
                break;
            case QueryKind::MasseySystem:
                out << "masseysystem " << q.target << inv() << bforms(0, q.forms.size());
                if (q.expect_solvable) out << " expect " << (*q.expect_solvable ? "solvable" : "blocked");
                break;
            case QueryKind::Massey4Cert:
                out << "massey4cert " << q.target << inv() << bforms(0, 4) << " sigma"
                    << bforms(4, 5);
                if (q.expect_valid) {
                    out << " expect " << (*q.expect_valid ? "valid" : "invalid");
                    if (q.expect_value) {
                        QuadExt v(q.expect_value->a, q.expect_value->b, q.expect_value->d);
                        std::string s = v.str();
                        bool composite = s.find(' ') != std::string::npos;
                        out << " value " << (composite ? "(" + s + ")" : s);
                    }
                }
                break;
            case QueryKind::MasseyScan:
                out << "masseyscan " << q.target << inv() << " maxarity " << q.number;
                if (q.expect_scan) {
                    out << " expect";
                    if (q.expect_scan->empty()) out << " none";
                    for (const auto& [arity, degs] : *q.expect_scan) {
                        out << " [" << arity << " :";
                        for (long d : degs) out << " " << d;
                        out << "]";
                    }
                }
                break;
            case QueryKind::FixedPoints:
                out << "fixedpoints " << q.target;
                if (q.expect_count) {
                    out << " expect " << *q.expect_count;
                    if (!q.expect_points.empty()) {
                        out << " points";
                        for (const auto& pt : q.expect_points) {
                            out << " (";
                            for (std::size_t i = 0; i < pt.size(); ++i) out << (i ? ", " : "") << pt[i].str();
                            out << ")";
                        }
                    }
                }
                break;
            case QueryKind::Euler:
                out << "euler " << q.euler_chi << " " << q.euler_order;
                for (const auto& [count, iso] : q.euler_isotropy) out << " [" << count << " : " << iso << "]";
                if (q.expect_rat) out << " expect " << q.expect_rat->str();
                break;
            case QueryKind::Tensor:
                out << "tensor " << q.target << " " << q.second << " expect " << q.expect_name;
                break;
            case QueryKind::ChangeBasis:
                out << "changebasis " << q.target << " expect " << q.expect_name;
                break;
            case QueryKind::PolyD: {
                const PolyFormDecl* pf = ws.polyform(q.target);
                out << "polyd " << q.target << " = ["
                    << dsl_detail::polyform_text(*q.expect_polyform, pf->vars) << "]";
                break;
            }
        }
        out << ";\n";
    }
    return out.str();
}

}  // namespace nilforge
