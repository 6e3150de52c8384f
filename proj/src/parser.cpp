#include "parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace vlens {

namespace {

// --------------------------------------------------------------------------
// Lexer
// --------------------------------------------------------------------------

enum class Tok {
    Ident,    // lowercase identifier
    Var,      // uppercase identifier
    Int,
    Quoted,
    LParen,
    RParen,
    Comma,
    Dot,
    ColonDash,
    Colon,
    Plus,
    Minus,
    Not,      // "not" or "¬"
    Bottom,   // "_|_" or "⊥"
    Under,    // "_"
    Eq,
    Lt,
    Gt,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    long long num = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    Lexer(const std::string& s, std::vector<Diagnostic>& diags) : s_(s), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            int line = line_, col = col_;
            if (pos_ >= s_.size()) {
                out.push_back({Tok::End, "", 0, line, col});
                break;
            }
            char c = s_[pos_];
            if (c == '%') {  // comment to end of line
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                ((c == '-' || c == '+') && pos_ + 1 < s_.size() &&
                 std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
                out.push_back(lex_int(line, col));
                continue;
            }
            if (c == '_' || std::isalpha(static_cast<unsigned char>(c))) {
                out.push_back(lex_word(line, col));
                continue;
            }
            if (c == '\'') {
                out.push_back(lex_quoted(line, col));
                continue;
            }
            // UTF-8 punctuation: ¬ (C2 AC), ⊥ (E2 8A A5)
            if (starts_with("\xC2\xAC")) {
                advance_n(2);
                out.push_back({Tok::Not, "¬", 0, line, col});
                continue;
            }
            if (starts_with("\xE2\x8A\xA5")) {
                advance_n(3);
                out.push_back({Tok::Bottom, "⊥", 0, line, col});
                continue;
            }
            switch (c) {
                case '(': advance(); out.push_back({Tok::LParen, "(", 0, line, col}); continue;
                case ')': advance(); out.push_back({Tok::RParen, ")", 0, line, col}); continue;
                case ',': advance(); out.push_back({Tok::Comma, ",", 0, line, col}); continue;
                case '.': advance(); out.push_back({Tok::Dot, ".", 0, line, col}); continue;
                case '+': advance(); out.push_back({Tok::Plus, "+", 0, line, col}); continue;
                case '-': advance(); out.push_back({Tok::Minus, "-", 0, line, col}); continue;
                case '=': advance(); out.push_back({Tok::Eq, "=", 0, line, col}); continue;
                case '<': advance(); out.push_back({Tok::Lt, "<", 0, line, col}); continue;
                case '>': advance(); out.push_back({Tok::Gt, ">", 0, line, col}); continue;
                case ':':
                    advance();
                    if (pos_ < s_.size() && s_[pos_] == '-') {
                        advance();
                        out.push_back({Tok::ColonDash, ":-", 0, line, col});
                    } else {
                        out.push_back({Tok::Colon, ":", 0, line, col});
                    }
                    continue;
                default:
                    diags_.push_back({line, col, std::string("unexpected character '") + c + "'"});
                    advance();
                    continue;
            }
        }
        return out;
    }

private:
    bool starts_with(const char* p) const { return s_.compare(pos_, std::strlen(p), p) == 0; }
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void advance_n(size_t n) {
        for (size_t i = 0; i < n; ++i) advance();
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
    }
    Token lex_int(int line, int col) {
        std::string t;
        if (s_[pos_] == '-' || s_[pos_] == '+') {
            if (s_[pos_] == '-') t += '-';
            advance();
        }
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            t += s_[pos_];
            advance();
        }
        return {Tok::Int, t, std::stoll(t), line, col};
    }
    Token lex_word(int line, int col) {
        // "_|_" special-cased first.
        if (starts_with("_|_")) {
            advance_n(3);
            return {Tok::Bottom, "_|_", 0, line, col};
        }
        std::string t;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            t += s_[pos_];
            advance();
        }
        if (t == "_") return {Tok::Under, t, 0, line, col};
        if (t == "not") return {Tok::Not, t, 0, line, col};
        if (std::isupper(static_cast<unsigned char>(t[0])))
            return {Tok::Var, t, 0, line, col};
        return {Tok::Ident, t, 0, line, col};
    }
    Token lex_quoted(int line, int col) {
        advance();  // opening '
        std::string t;
        while (pos_ < s_.size() && s_[pos_] != '\'' && s_[pos_] != '\n') {
            t += s_[pos_];
            advance();
        }
        if (pos_ >= s_.size() || s_[pos_] != '\'')
            diags_.push_back({line, col, "unterminated string literal"});
        else
            advance();  // closing '
        return {Tok::Quoted, t, 0, line, col};
    }

    const std::string& s_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

// --------------------------------------------------------------------------
// Grammar
// --------------------------------------------------------------------------

struct RawAtom {
    int sign = 0;  // 0 bare, +1 insert delta, -1 delete delta
    std::string name;
    std::vector<Term> args;
    int line = 0, col = 0;
};

struct RawLiteral {
    bool negated = false;
    bool is_atom = false;
    RawAtom atom;
    Term lhs, rhs;
    BuiltinOp op = BuiltinOp::Eq;
    int line = 0, col = 0;
};

struct RawRule {
    bool bottom_head = false;
    RawAtom head;
    std::vector<RawLiteral> body;
    int line = 0;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
        : toks_(std::move(toks)), diags_(diags) {}

    void run(std::vector<RelationDecl>& sources, std::vector<RelationDecl>& views,
             std::vector<RawRule>& rules) {
        while (peek().kind != Tok::End) {
            size_t before = pos_;
            if (peek().kind == Tok::Ident && (peek().text == "source" || peek().text == "view") &&
                peek(1).kind == Tok::Ident) {
                parse_decl(sources, views);
            } else {
                parse_rule(rules);
            }
            if (pos_ == before) ++pos_;  // always make progress on errors
        }
    }

private:
    const Token& peek(size_t k = 0) const {
        size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    Token take() {
        Token t = peek();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept(Tok k) {
        if (peek().kind == k) {
            take();
            return true;
        }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k)) {
            error(peek(), std::string("expected ") + what);
            sync();
        }
    }
    void error(const Token& t, std::string msg) { diags_.push_back({t.line, t.col, std::move(msg)}); }
    /// Skip to just past the next '.' (statement boundary).
    void sync() {
        while (peek().kind != Tok::End && peek().kind != Tok::Dot) take();
        accept(Tok::Dot);
    }

    void parse_decl(std::vector<RelationDecl>& sources, std::vector<RelationDecl>& views) {
        Token kw = take();
        RelationDecl d;
        d.name = take().text;
        expect(Tok::LParen, "'('");
        while (true) {
            if (peek().kind != Tok::Ident) {
                error(peek(), "expected attribute name");
                sync();
                return;
            }
            Attribute a;
            a.name = take().text;
            expect(Tok::Colon, "':'");
            Token ty = peek();
            if (ty.kind != Tok::Ident ||
                (ty.text != "int" && ty.text != "string" && ty.text != "date")) {
                error(ty, "expected attribute type (int, string, or date)");
                sync();
                return;
            }
            take();
            a.type = ty.text == "int"      ? AttrType::Int
                     : ty.text == "string" ? AttrType::String
                                           : AttrType::Date;
            d.attrs.push_back(a);
            if (accept(Tok::Comma)) continue;
            break;
        }
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.'");
        (kw.text == "source" ? sources : views).push_back(d);
    }

    std::optional<Term> parse_term(bool allow_anon) {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Var: return Term::var(take().text);
            case Tok::Int: return Term::constant(Value::of_int(take().num));
            case Tok::Quoted: return Term::constant(Value::of_string(take().text));
            case Tok::Under:
                take();
                if (!allow_anon) error(t, "anonymous variable not allowed here");
                return Term::anon();
            default:
                error(t, "expected term");
                return std::nullopt;
        }
    }

    std::optional<RawAtom> parse_atom_tail(int sign, int line, int col) {
        RawAtom a;
        a.sign = sign;
        a.line = line;
        a.col = col;
        if (peek().kind != Tok::Ident) {
            error(peek(), "expected predicate name");
            return std::nullopt;
        }
        a.name = take().text;
        expect(Tok::LParen, "'('");
        if (!accept(Tok::RParen)) {
            while (true) {
                auto t = parse_term(true);
                if (!t) return std::nullopt;
                a.args.push_back(*t);
                if (accept(Tok::Comma)) continue;
                break;
            }
            expect(Tok::RParen, "')'");
        }
        return a;
    }

    std::optional<RawLiteral> parse_literal() {
        RawLiteral l;
        l.line = peek().line;
        l.col = peek().col;
        if (accept(Tok::Not)) l.negated = true;
        const Token& t = peek();
        if (t.kind == Tok::Plus || t.kind == Tok::Minus || t.kind == Tok::Ident) {
            int sign = 0;
            if (accept(Tok::Plus)) sign = +1;
            else if (accept(Tok::Minus)) sign = -1;
            if (sign != 0 || (peek().kind == Tok::Ident && peek(1).kind == Tok::LParen)) {
                auto a = parse_atom_tail(sign, l.line, l.col);
                if (!a) return std::nullopt;
                l.is_atom = true;
                l.atom = *a;
                return l;
            }
            error(peek(), "expected atom or builtin literal");
            return std::nullopt;
        }
        auto lhs = parse_term(false);
        if (!lhs) return std::nullopt;
        Tok opk = peek().kind;
        if (opk != Tok::Eq && opk != Tok::Lt && opk != Tok::Gt) {
            error(peek(), "expected '=', '<', or '>'");
            return std::nullopt;
        }
        take();
        auto rhs = parse_term(false);
        if (!rhs) return std::nullopt;
        l.lhs = *lhs;
        l.rhs = *rhs;
        l.op = opk == Tok::Eq ? BuiltinOp::Eq : opk == Tok::Lt ? BuiltinOp::Lt : BuiltinOp::Gt;
        return l;
    }

    void parse_rule(std::vector<RawRule>& rules) {
        RawRule r;
        r.line = peek().line;
        if (accept(Tok::Bottom)) {
            r.bottom_head = true;
        } else {
            int sign = 0;
            int line = peek().line, col = peek().col;
            if (accept(Tok::Plus)) sign = +1;
            else if (accept(Tok::Minus)) sign = -1;
            auto a = parse_atom_tail(sign, line, col);
            if (!a) {
                sync();
                return;
            }
            for (auto& t : a->args)
                if (t.is_anon()) error({Tok::Under, "_", 0, a->line, a->col},
                                       "anonymous variable not allowed in rule head");
            r.head = *a;
        }
        expect(Tok::ColonDash, "':-'");
        while (true) {
            auto l = parse_literal();
            if (!l) {
                sync();
                return;
            }
            r.body.push_back(*l);
            if (accept(Tok::Comma)) continue;
            break;
        }
        expect(Tok::Dot, "'.'");
        rules.push_back(std::move(r));
    }

    std::vector<Token> toks_;
    std::vector<Diagnostic>& diags_;
    size_t pos_ = 0;
};

// --------------------------------------------------------------------------
// Resolution and type checking
// --------------------------------------------------------------------------

/// Union-find over a rule's variables, used to propagate types through
/// var = var equalities.
class VarGroups {
public:
    int group(const std::string& v) {
        auto it = index_.find(v);
        if (it == index_.end()) {
            int id = static_cast<int>(parent_.size());
            index_[v] = id;
            parent_.push_back(id);
            return id;
        }
        return find(it->second);
    }
    void merge(const std::string& a, const std::string& b) {
        int ra = group(a), rb = group(b);
        if (ra != rb) parent_[ra] = rb;
    }

private:
    int find(int i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    std::map<std::string, int> index_;
    std::vector<int> parent_;
};

class Resolver {
public:
    Resolver(std::vector<RelationDecl> sources, std::vector<RelationDecl> views,
             std::vector<RawRule> raw, std::vector<Diagnostic>& diags)
        : sources_(std::move(sources)), views_(std::move(views)), raw_(std::move(raw)),
          diags_(diags) {}

    Program run() {
        Program p;
        check_decls(p);
        collect_heads();
        for (auto& r : raw_) infer_arities(r);
        infer_intermediate_types();
        for (auto& r : raw_) {
            Rule out;
            if (resolve_rule(r, out)) {
                if (out.is_constraint()) p.constraints.push_back(std::move(out));
                else p.rules.push_back(std::move(out));
            }
        }
        for (auto& [name, sig] : inter_sigs_) {
            std::vector<AttrType> ts;
            for (auto& o : sig) ts.push_back(o.value_or(AttrType::String));
            p.intermediates[name] = ts;
        }
        return p;
    }

private:
    void err(int line, int col, std::string m) { diags_.push_back({line, col, std::move(m)}); }

    void check_decls(Program& p) {
        if (sources_.empty() && views_.empty() && raw_.empty()) {
            err(1, 1, "empty program");
            return;
        }
        if (views_.size() > 1) err(1, 1, "multiple view declarations");
        if (views_.empty()) err(1, 1, "missing view declaration");
        std::set<std::string> seen;
        for (auto& s : sources_) {
            if (!seen.insert(s.name).second) err(1, 1, "duplicate declaration of '" + s.name + "'");
        }
        if (!views_.empty()) {
            if (seen.count(views_[0].name))
                err(1, 1, "view '" + views_[0].name + "' also declared as source");
            p.schema.view = views_[0];
        }
        p.schema.sources = sources_;
    }

    const RelationDecl* declared(const std::string& n) const {
        for (auto& s : sources_)
            if (s.name == n) return &s;
        if (!views_.empty() && views_[0].name == n) return &views_[0];
        return nullptr;
    }
    bool is_view(const std::string& n) const { return !views_.empty() && views_[0].name == n; }
    bool is_source(const std::string& n) const {
        for (auto& s : sources_)
            if (s.name == n) return true;
        return false;
    }

    void collect_heads() {
        for (auto& r : raw_) {
            if (r.bottom_head) continue;
            if (r.head.sign == 0 && !declared(r.head.name))
                inter_sigs_.try_emplace(r.head.name,
                                        std::vector<std::optional<AttrType>>(r.head.args.size()));
        }
    }

    void infer_arities(const RawRule& r) {
        auto check_atom = [&](const RawAtom& a, bool is_head) {
            if (a.sign != 0) {
                if (!is_source(a.name) && !is_view(a.name)) {
                    err(a.line, a.col, "delta predicate over undeclared relation '" + a.name + "'");
                    return;
                }
                if (is_head && is_view(a.name))
                    err(a.line, a.col, "delta of the view cannot head a rule");
                const RelationDecl* d = declared(a.name);
                if (d && a.args.size() != d->arity())
                    err(a.line, a.col, "arity mismatch for '" + a.name + "': expected " +
                                           std::to_string(d->arity()) + ", got " +
                                           std::to_string(a.args.size()));
                return;
            }
            if (const RelationDecl* d = declared(a.name)) {
                if (is_head && is_source(a.name))
                    err(a.line, a.col, "source relation '" + a.name + "' cannot head a rule");
                if (a.args.size() != d->arity())
                    err(a.line, a.col, "arity mismatch for '" + a.name + "': expected " +
                                           std::to_string(d->arity()) + ", got " +
                                           std::to_string(a.args.size()));
                return;
            }
            auto it = inter_sigs_.find(a.name);
            if (it == inter_sigs_.end()) {
                err(a.line, a.col, "unknown predicate '" + a.name + "'");
                return;
            }
            if (a.args.size() != it->second.size())
                err(a.line, a.col, "arity mismatch for '" + a.name + "': expected " +
                                       std::to_string(it->second.size()) + ", got " +
                                       std::to_string(a.args.size()));
        };
        if (!r.bottom_head) check_atom(r.head, true);
        for (auto& l : r.body)
            if (l.is_atom) check_atom(l.atom, false);
    }

    /// Types of a predicate's columns, if known (nullopt entries for
    /// not-yet-resolved intermediate columns).
    std::vector<std::optional<AttrType>> sig_of(const std::string& name) const {
        if (const RelationDecl* d = declared(name)) {
            std::vector<std::optional<AttrType>> sig;
            for (auto& a : d->attrs) sig.emplace_back(a.type);
            return sig;
        }
        auto it = inter_sigs_.find(name);
        if (it != inter_sigs_.end()) return it->second;
        return {};
    }

    void infer_intermediate_types() {
        bool changed = true;
        int guard = 0;
        while (changed && guard++ < 64) {
            changed = false;
            for (auto& r : raw_) {
                if (r.bottom_head || r.head.sign != 0 || declared(r.head.name)) continue;
                auto types = rule_var_types(r);
                auto it = inter_sigs_.find(r.head.name);
                if (it == inter_sigs_.end()) continue;
                for (size_t i = 0; i < r.head.args.size() && i < it->second.size(); ++i) {
                    const Term& t = r.head.args[i];
                    std::optional<AttrType> ty;
                    if (t.is_var()) {
                        auto f = types.find(t.name);
                        if (f != types.end()) ty = f->second;
                    } else if (t.is_const()) {
                        ty = t.value.type();
                    }
                    if (ty && !it->second[i]) {
                        it->second[i] = ty;
                        changed = true;
                    }
                }
            }
        }
    }

    /// Best-effort var -> type map for one rule, from atom positions with
    /// known signatures and from builtins, propagated through var=var.
    std::map<std::string, AttrType> rule_var_types(const RawRule& r) const {
        VarGroups groups;
        std::map<int, AttrType> group_ty;
        std::vector<std::pair<std::string, AttrType>> direct;
        auto note = [&](const std::string& v, AttrType t) { direct.push_back({v, t}); };
        auto scan_atom = [&](const RawAtom& a) {
            auto sig = sig_of(a.name);
            for (size_t i = 0; i < a.args.size() && i < sig.size(); ++i)
                if (a.args[i].is_var() && sig[i]) note(a.args[i].name, *sig[i]);
        };
        if (!r.bottom_head) scan_atom(r.head);
        for (auto& l : r.body) {
            if (l.is_atom) {
                scan_atom(l.atom);
                continue;
            }
            if (l.lhs.is_var() && l.rhs.is_var()) {
                groups.merge(l.lhs.name, l.rhs.name);
                continue;
            }
            const Term* v = l.lhs.is_var() ? &l.lhs : l.rhs.is_var() ? &l.rhs : nullptr;
            const Term* c = l.lhs.is_const() ? &l.lhs : l.rhs.is_const() ? &l.rhs : nullptr;
            if (v && c && c->value.type() == AttrType::Int) note(v->name, AttrType::Int);
            // Quoted constants stay ambiguous (string vs date) until the
            // final pass; they impose no constraint here.
        }
        for (auto& [v, t] : direct) {
            int g = groups.group(v);
            group_ty.try_emplace(g, t);
        }
        std::map<std::string, AttrType> out;
        for (auto& [v, t] : direct) out.try_emplace(v, t);
        // Propagate group types to merged variables.
        for (auto& l : r.body) {
            if (!l.is_atom && l.lhs.is_var() && l.rhs.is_var()) {
                for (auto* t : {&l.lhs, &l.rhs}) {
                    int g = const_cast<VarGroups&>(groups).group(t->name);
                    auto f = group_ty.find(g);
                    if (f != group_ty.end()) out.try_emplace(t->name, f->second);
                }
            }
        }
        return out;
    }

    PredicateRef make_ref(const RawAtom& a) const {
        PredicateRef ref;
        ref.name = a.name;
        if (a.sign > 0) ref.kind = PredKind::DeltaInsert;
        else if (a.sign < 0) ref.kind = PredKind::DeltaDelete;
        else if (is_view(a.name)) ref.kind = PredKind::View;
        else if (is_source(a.name)) ref.kind = PredKind::Source;
        else ref.kind = PredKind::Intermediate;
        return ref;
    }

    bool resolve_rule(const RawRule& r, Rule& out) {
        size_t before = diags_.size();
        out.line = r.line;
        auto types = rule_var_types(r);

        // Require a concrete type for every variable; quoted-only variables
        // default to string.
        auto var_type = [&](const std::string& v) -> std::optional<AttrType> {
            auto it = types.find(v);
            if (it != types.end()) return it->second;
            return std::nullopt;
        };

        auto fix_const = [&](Term& t, AttrType want, int line, int col) {
            if (!t.is_const()) return;
            AttrType have = t.value.type();
            if (have == want) return;
            if (have == AttrType::String && want == AttrType::Date) {
                if (!is_valid_date(t.value.as_text())) {
                    err(line, col, "invalid date literal '" + t.value.as_text() + "'");
                    return;
                }
                t.value = Value::of_date(t.value.as_text());
                return;
            }
            err(line, col,
                "type mismatch: " + to_string(have) + " constant in " + to_string(want) +
                    " position");
        };

        auto resolve_atom = [&](const RawAtom& a) -> Atom {
            Atom atom;
            atom.pred = make_ref(a);
            atom.args = a.args;
            auto sig = sig_of(a.name);
            for (size_t i = 0; i < atom.args.size() && i < sig.size(); ++i) {
                if (!sig[i]) continue;
                Term& t = atom.args[i];
                if (t.is_const()) {
                    fix_const(t, *sig[i], a.line, a.col);
                } else if (t.is_var()) {
                    auto ty = var_type(t.name);
                    if (ty && *ty != *sig[i])
                        err(a.line, a.col,
                            "type mismatch: variable " + t.name + " is " + to_string(*ty) +
                                " but '" + a.name + "' column " + std::to_string(i + 1) + " is " +
                                to_string(*sig[i]));
                }
            }
            return atom;
        };

        if (!r.bottom_head) out.head = resolve_atom(r.head);
        for (auto& l : r.body) {
            if (l.is_atom) {
                Literal lit = l.negated ? Literal::negative(resolve_atom(l.atom))
                                        : Literal::positive(resolve_atom(l.atom));
                out.body.push_back(std::move(lit));
                continue;
            }
            Term lhs = l.lhs, rhs = l.rhs;
            // Determine the builtin's operand type.
            std::optional<AttrType> ty;
            for (const Term* t : {&lhs, &rhs}) {
                if (t->is_var()) {
                    if (auto vt = var_type(t->name); vt && !ty) ty = vt;
                } else if (t->is_const() && t->value.type() == AttrType::Int && !ty) {
                    ty = AttrType::Int;
                }
            }
            if (!ty) ty = AttrType::String;  // quoted-only equality
            if (l.op != BuiltinOp::Eq) {
                if (*ty == AttrType::String) {
                    // A quoted constant compared against an untyped variable
                    // is a date comparison; plain strings are not ordered.
                    bool quoted = (lhs.is_const() && lhs.value.type() == AttrType::String) ||
                                  (rhs.is_const() && rhs.value.type() == AttrType::String);
                    bool untyped_var =
                        (lhs.is_var() && !var_type(lhs.name)) || (rhs.is_var() && !var_type(rhs.name));
                    if (quoted && untyped_var) ty = AttrType::Date;
                    else
                        err(l.line, l.col, "comparisons require int or date operands");
                }
            }
            fix_const(lhs, *ty, l.line, l.col);
            fix_const(rhs, *ty, l.line, l.col);
            for (const Term* t : {&lhs, &rhs})
                if (t->is_var()) {
                    auto vt = var_type(t->name);
                    if (vt && *vt != *ty)
                        err(l.line, l.col,
                            "type mismatch: variable " + t->name + " is " + to_string(*vt) +
                                " but the builtin operand is " + to_string(*ty));
                }
            Literal lit = l.op == BuiltinOp::Eq
                              ? Literal::equality(lhs, rhs, l.negated)
                              : Literal::comparison(l.op, lhs, rhs, l.negated);
            out.body.push_back(std::move(lit));
        }
        if (out.body.empty()) err(r.line, 1, "rule has an empty body");
        return diags_.size() == before;
    }

    std::vector<RelationDecl> sources_;
    std::vector<RelationDecl> views_;
    std::vector<RawRule> raw_;
    std::vector<Diagnostic>& diags_;
    std::map<std::string, std::vector<std::optional<AttrType>>> inter_sigs_;
};

}  // namespace

Program parse_program(const std::string& text) {
    std::vector<Diagnostic> diags;
    Lexer lexer(text, diags);
    auto tokens = lexer.run();
    std::vector<RelationDecl> sources, views;
    std::vector<RawRule> raw;
    Parser parser(std::move(tokens), diags);
    parser.run(sources, views, raw);
    if (!diags.empty()) throw ParseError(std::move(diags));
    Resolver resolver(std::move(sources), std::move(views), std::move(raw), diags);
    Program p = resolver.run();
    if (!diags.empty()) throw ParseError(std::move(diags));
    return p;
}

Program parse_program_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str());
}

}  // namespace vlens
