#include "fitch/surface.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "fitch/error.hpp"

namespace fitch {

namespace {

enum class Tok {
    Ident, Number, Backslash, Colon, Dot, Equals, EqEq, LParen, RParen, Comma,
    LBrack, RBrack, Box, Dia, Arrow, Star, Plus, Bar, Hash, Turnstile,
    LBrace, RBrace, Semi, End
};

const char* tok_text(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Backslash: return "'\\'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Equals: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Box: return "'[]'";
    case Tok::Dia: return "'<>'";
    case Tok::Arrow: return "'->'";
    case Tok::Star: return "'*'";
    case Tok::Plus: return "'+'";
    case Tok::Bar: return "'|'";
    case Tok::Hash: return "'#'";
    case Tok::Turnstile: return "'|-'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    Span span;
};

const std::set<std::string, std::less<>> kKeywords = {
    "let", "dia", "in", "case", "of", "inl", "inr", "abort", "shut", "open", "fst", "snd",
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto bad = [&](const std::string& msg) {
        throw Error(ErrorKind::ParseError, msg, Span{line, col});
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Span sp{line, col};
        auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
        auto push = [&](Tok k, std::size_t n) {
            out.push_back({k, std::string(src.substr(i, n)), sp});
            advance(n);
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                      src[j] == '_' || src[j] == '\''))
                ++j;
            push(Tok::Ident, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            push(Tok::Number, j - i);
            continue;
        }
        if (two('-', '>')) { push(Tok::Arrow, 2); continue; }
        if (two('[', ']')) { push(Tok::Box, 2); continue; }
        if (two('<', '>')) { push(Tok::Dia, 2); continue; }
        if (two('|', '-')) { push(Tok::Turnstile, 2); continue; }
        if (two('=', '=')) { push(Tok::EqEq, 2); continue; }
        switch (c) {
        case '\\': push(Tok::Backslash, 1); continue;
        case ':': push(Tok::Colon, 1); continue;
        case '.': push(Tok::Dot, 1); continue;
        case '=': push(Tok::Equals, 1); continue;
        case '(': push(Tok::LParen, 1); continue;
        case ')': push(Tok::RParen, 1); continue;
        case ',': push(Tok::Comma, 1); continue;
        case '[': push(Tok::LBrack, 1); continue;
        case ']': push(Tok::RBrack, 1); continue;
        case '*': push(Tok::Star, 1); continue;
        case '+': push(Tok::Plus, 1); continue;
        case '|': push(Tok::Bar, 1); continue;
        case '#': push(Tok::Hash, 1); continue;
        case '{': push(Tok::LBrace, 1); continue;
        case '}': push(Tok::RBrace, 1); continue;
        case ';': push(Tok::Semi, 1); continue;
        default: break;
        }
        bad(std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", Span{line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_kw(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
    bool at_end() const { return at(Tok::End); }

    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }

    [[noreturn]] void fail(std::initializer_list<std::string> expected) const {
        std::string msg = "expected one of {";
        bool first = true;
        for (const auto& e : expected) {
            if (!first) msg += ", ";
            msg += e;
            first = false;
        }
        msg += "} but found ";
        msg += at_end() ? std::string("end of input") : "'" + peek().text + "'";
        throw Error(ErrorKind::ParseError, msg, peek().span);
    }

    Token expect(Tok k) {
        if (!at(k)) fail({tok_text(k)});
        return next();
    }

    void expect_kw(std::string_view kw) {
        if (!at_kw(kw)) fail({"'" + std::string(kw) + "'"});
        next();
    }

    std::string ident() {
        if (!at(Tok::Ident) || kKeywords.count(peek().text)) fail({"identifier"});
        return next().text;
    }

    int number() { return std::stoi(expect(Tok::Number).text); }

    // Types ------------------------------------------------------------------

    Ty type() {
        Ty lhs = sum_type();
        if (at(Tok::Arrow)) {
            next();
            return Ty::fun(lhs, type());
        }
        return lhs;
    }

    Ty sum_type() {
        Ty t = prod_type();
        while (at(Tok::Plus)) {
            next();
            t = Ty::sum(t, prod_type());
        }
        return t;
    }

    Ty prod_type() {
        Ty t = prefix_type();
        while (at(Tok::Star)) {
            next();
            t = Ty::prod(t, prefix_type());
        }
        return t;
    }

    Ty prefix_type() {
        if (at(Tok::Box)) {
            next();
            return Ty::box(prefix_type());
        }
        if (at(Tok::Dia)) {
            next();
            return Ty::dia(prefix_type());
        }
        if (at(Tok::Number)) {
            Token t = next();
            if (t.text == "1") return Ty::unit();
            if (t.text == "0") return Ty::empty();
            throw Error(ErrorKind::ParseError, "only 0 and 1 are type constants", t.span);
        }
        if (at(Tok::LParen)) {
            next();
            Ty t = type();
            expect(Tok::RParen);
            return t;
        }
        if (at(Tok::Ident) && !kKeywords.count(peek().text)) return Ty::base(next().text);
        fail({"type"});
    }

    // Terms ------------------------------------------------------------------

    bool starts_prefix() const {
        if (at(Tok::LParen)) return true;
        if (!at(Tok::Ident)) return false;
        const auto& s = peek().text;
        if (!kKeywords.count(s)) return true;
        return s == "shut" || s == "open" || s == "dia" || s == "fst" || s == "snd" || s == "inl" ||
               s == "inr" || s == "abort";
    }

    Term term() {
        Span sp = peek().span;
        if (at(Tok::Backslash)) {
            next();
            std::string x = ident();
            expect(Tok::Colon);
            Ty a = type();
            expect(Tok::Dot);
            return Term::lam(x, a, term()).with_span(sp);
        }
        if (at_kw("let")) {
            next();
            expect_kw("dia");
            std::string x = ident();
            expect(Tok::Colon);
            Ty a = type();
            expect(Tok::Equals);
            Term t = term();
            expect_kw("in");
            return Term::let_dia(x, a, t, term()).with_span(sp);
        }
        if (at_kw("case")) {
            next();
            Term s = term();
            expect_kw("of");
            expect_kw("inl");
            std::string x = ident();
            expect(Tok::Arrow);
            Term l = term();
            expect(Tok::Bar);
            expect_kw("inr");
            std::string y = ident();
            expect(Tok::Arrow);
            Term r = term();
            return Term::case_of(s, x, l, y, r).with_span(sp);
        }
        return application();
    }

    Term application() {
        if (!starts_prefix()) fail({"term", "'\\'", "'let'", "'case'", "'('"});
        Term t = prefix();
        while (starts_prefix()) {
            Span sp = peek().span;
            t = Term::app(t, prefix()).with_span(sp);
        }
        return t;
    }

    Ty bracket_type() {
        expect(Tok::LBrack);
        Ty t = type();
        expect(Tok::RBrack);
        return t;
    }

    Term prefix() {
        Span sp = peek().span;
        if (at(Tok::Ident)) {
            const std::string s = peek().text;
            if (s == "shut") { next(); return Term::shut(prefix()).with_span(sp); }
            if (s == "open") { next(); return Term::open(prefix()).with_span(sp); }
            if (s == "dia") { next(); return Term::dia(prefix()).with_span(sp); }
            if (s == "fst") { next(); return Term::fst(prefix()).with_span(sp); }
            if (s == "snd") { next(); return Term::snd(prefix()).with_span(sp); }
            if (s == "inl") { next(); Ty b = bracket_type(); return Term::inl(b, prefix()).with_span(sp); }
            if (s == "inr") { next(); Ty a = bracket_type(); return Term::inr(a, prefix()).with_span(sp); }
            if (s == "abort") { next(); Ty a = bracket_type(); return Term::abort(a, prefix()).with_span(sp); }
        }
        return atom();
    }

    Term atom() {
        Span sp = peek().span;
        if (at(Tok::LParen)) {
            next();
            if (at(Tok::RParen)) {
                next();
                return Term::unit().with_span(sp);
            }
            Term t = term();
            if (at(Tok::Comma)) {
                next();
                Term u = term();
                expect(Tok::RParen);
                return Term::pair(t, u).with_span(sp);
            }
            expect(Tok::RParen);
            return t;
        }
        if (at(Tok::Ident) && !kKeywords.count(peek().text)) return Term::var(next().text).with_span(sp);
        fail({"identifier", "'('"});
    }

    // Contexts ---------------------------------------------------------------

    /// Comma-separated entries up to (not including) a token for which
    /// `stop` holds.
    template <class Stop>
    Ctx ctx(Stop stop) {
        std::vector<Entry> es;
        std::set<std::string> seen;
        if (stop()) return Ctx{};
        while (true) {
            if (at(Tok::Hash)) {
                next();
                es.push_back(Entry::lock_entry());
            } else {
                Token nt = peek();
                std::string x = ident();
                expect(Tok::Colon);
                Ty a = type();
                if (!seen.insert(x).second)
                    throw Error(ErrorKind::DuplicateVariable, "duplicate variable '" + x + "' in context",
                                nt.span);
                es.push_back(Entry::var(x, a));
            }
            if (!at(Tok::Comma)) break;
            next();
        }
        return Ctx(std::move(es));
    }

    // Files ------------------------------------------------------------------

    std::vector<int> int_list() {
        if (at(Tok::Box)) {
            next();
            return {};
        }
        expect(Tok::LBrack);
        std::vector<int> v;
        if (at(Tok::RBrack)) {
            next();
            return v;
        }
        v.push_back(number());
        while (at(Tok::Comma)) {
            next();
            v.push_back(number());
        }
        expect(Tok::RBrack);
        return v;
    }

    std::vector<std::vector<int>> table_list() {
        if (at(Tok::Box)) {
            next();
            return {};
        }
        expect(Tok::LBrack);
        std::vector<std::vector<int>> v;
        if (at(Tok::RBrack)) {
            next();
            return v;
        }
        v.push_back(int_list());
        while (at(Tok::Comma)) {
            next();
            v.push_back(int_list());
        }
        expect(Tok::RBrack);
        return v;
    }

    ModelConfig model_body() {
        ModelConfig cfg;
        expect(Tok::LBrace);
        bool kind_seen = false;
        while (!at(Tok::RBrace)) {
            Span sp = peek().span;
            std::string key = ident();
            expect(Tok::Equals);
            if (key == "kind") {
                std::string k = ident();
                if (k == "identity") {
                    cfg.kind = ModelKind::Identity;
                    cfg.stages = 0;
                } else if (k == "chain" || k == "constant") {
                    cfg.kind = k == "chain" ? ModelKind::Chain : ModelKind::ConstantComonad;
                    expect(Tok::LParen);
                    cfg.stages = number();
                    expect(Tok::RParen);
                } else {
                    throw Error(ErrorKind::ParseError, "unknown model kind '" + k + "'", sp);
                }
                kind_seen = true;
            } else {
                BaseInterp bi;
                expect_kw_ident("sizes");
                bi.sizes = int_list();
                if (at(Tok::Ident) && peek().text == "trans") {
                    next();
                    bi.trans = table_list();
                }
                if (cfg.bases.count(key))
                    throw Error(ErrorKind::ParseError, "base type '" + key + "' configured twice", sp);
                cfg.bases[key] = std::move(bi);
            }
            if (at(Tok::Semi)) next();
            else if (!at(Tok::RBrace)) fail({"';'", "'}'"});
        }
        expect(Tok::RBrace);
        if (!kind_seen) throw Error(ErrorKind::ParseError, "model declaration needs 'kind = ...'", peek().span);
        try {
            cfg.validate();
        } catch (const Error& e) {
            throw Error(ErrorKind::ParseError, e.what(), peek().span);
        }
        return cfg;
    }

    void expect_kw_ident(std::string_view w) {
        if (!(at(Tok::Ident) && peek().text == w)) fail({"'" + std::string(w) + "'"});
        next();
    }

    SourceFile source() {
        SourceFile f;
        std::set<std::string> names;
        auto claim = [&](const std::string& n, Span sp) {
            if (!names.insert(n).second)
                throw Error(ErrorKind::ParseError, "duplicate declaration name '" + n + "'", sp);
        };
        while (!at_end()) {
            Span sp = peek().span;
            if (!at(Tok::Ident)) fail({"'def'", "'goal'", "'model'", "'mode'"});
            std::string kw = next().text;
            if (kw == "mode") {
                Token m = expect(Tok::Ident);
                auto mode = parse_mode(m.text);
                if (!mode) throw Error(ErrorKind::ParseError, "unknown mode '" + m.text + "'", m.span);
                f.mode = mode;
            } else if (kw == "def") {
                std::string name = ident();
                claim(name, sp);
                expect(Tok::LBrack);
                Ctx c = ctx([&] { return at(Tok::Turnstile); });
                expect(Tok::Turnstile);
                Term t = term();
                std::optional<Ty> ty;
                if (at(Tok::Colon)) {
                    next();
                    ty = type();
                }
                expect(Tok::RBrack);
                f.defs.push_back({name, c, t, ty, sp});
            } else if (kw == "goal") {
                std::string name = ident();
                claim(name, sp);
                expect(Tok::LBrack);
                Ctx c = ctx([&] { return at(Tok::Turnstile); });
                expect(Tok::Turnstile);
                Term l = term();
                expect(Tok::EqEq);
                Term r = term();
                expect(Tok::Colon);
                Ty ty = type();
                expect(Tok::RBrack);
                f.goals.push_back({name, c, l, r, ty, sp});
            } else if (kw == "model") {
                std::string name = ident();
                claim(name, sp);
                f.models.push_back({name, model_body(), sp});
            } else {
                throw Error(ErrorKind::ParseError,
                            "expected one of {'def', 'goal', 'model', 'mode'} but found '" + kw + "'", sp);
            }
        }
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Printing ------------------------------------------------------------------

void print_ty(const Ty& t, int level, std::string& out) {
    auto wrap = [&](int need, auto body) {
        bool paren = level > need;
        if (paren) out += '(';
        body();
        if (paren) out += ')';
    };
    switch (t.kind()) {
    case TyKind::Base: out += t.name(); return;
    case TyKind::Unit: out += '1'; return;
    case TyKind::Empty: out += '0'; return;
    case TyKind::Box: out += "[]"; print_ty(t.operand(), 3, out); return;
    case TyKind::Dia: out += "<>"; print_ty(t.operand(), 3, out); return;
    case TyKind::Fun:
        wrap(0, [&] {
            print_ty(t.lhs(), 1, out);
            out += " -> ";
            print_ty(t.rhs(), 0, out);
        });
        return;
    case TyKind::Sum:
        wrap(1, [&] {
            print_ty(t.lhs(), 1, out);
            out += " + ";
            print_ty(t.rhs(), 2, out);
        });
        return;
    case TyKind::Prod:
        wrap(2, [&] {
            print_ty(t.lhs(), 2, out);
            out += " * ";
            print_ty(t.rhs(), 3, out);
        });
        return;
    }
}

// Levels: 0 binders, 1 application, 2 prefix, 3 atom.
void print_term(const Term& t, int level, std::string& out) {
    auto wrap = [&](int need, auto body) {
        bool paren = level > need;
        if (paren) out += '(';
        body();
        if (paren) out += ')';
    };
    auto prefix = [&](const char* kw, const Term& arg) {
        wrap(2, [&] {
            out += kw;
            out += ' ';
            print_term(arg, 2, out);
        });
    };
    auto annotated = [&](const char* kw, const Ty& ty, const Term& arg) {
        wrap(2, [&] {
            out += kw;
            out += '[';
            print_ty(ty, 0, out);
            out += "] ";
            print_term(arg, 2, out);
        });
    };
    switch (t.kind()) {
    case TermKind::Var: out += t.name(); return;
    case TermKind::Unit: out += "()"; return;
    case TermKind::Pair:
        out += '(';
        print_term(t.child(0), 0, out);
        out += ", ";
        print_term(t.child(1), 0, out);
        out += ')';
        return;
    case TermKind::Lam:
        wrap(0, [&] {
            out += '\\' + t.name() + ':';
            print_ty(t.annot(), 0, out);
            out += ". ";
            print_term(t.child(0), 0, out);
        });
        return;
    case TermKind::LetDia:
        wrap(0, [&] {
            out += "let dia " + t.name() + ':';
            print_ty(t.annot(), 0, out);
            out += " = ";
            print_term(t.child(0), 0, out);
            out += " in ";
            print_term(t.child(1), 0, out);
        });
        return;
    case TermKind::Case:
        wrap(0, [&] {
            out += "case ";
            print_term(t.child(0), 0, out);
            out += " of inl " + t.name() + " -> ";
            print_term(t.child(1), 0, out);
            out += " | inr " + t.name2() + " -> ";
            print_term(t.child(2), 0, out);
        });
        return;
    case TermKind::App:
        wrap(1, [&] {
            print_term(t.child(0), 1, out);
            out += ' ';
            print_term(t.child(1), 3, out);
        });
        return;
    case TermKind::Fst: prefix("fst", t.child(0)); return;
    case TermKind::Snd: prefix("snd", t.child(0)); return;
    case TermKind::Shut: prefix("shut", t.child(0)); return;
    case TermKind::Open: prefix("open", t.child(0)); return;
    case TermKind::Dia: prefix("dia", t.child(0)); return;
    case TermKind::Inl: annotated("inl", t.annot(), t.child(0)); return;
    case TermKind::Inr: annotated("inr", t.annot(), t.child(0)); return;
    case TermKind::Abort: annotated("abort", t.annot(), t.child(0)); return;
    }
}

}  // namespace

Ty parse_type(std::string_view src) {
    Parser p(src);
    Ty t = p.type();
    if (!p.at_end()) p.fail({"end of input", "'->'", "'+'", "'*'"});
    return t;
}

Term parse_term(std::string_view src) {
    Parser p(src);
    Term t = p.term();
    if (!p.at_end()) p.fail({"end of input", "term"});
    return t;
}

Ctx parse_ctx(std::string_view src) {
    Parser p(src);
    Ctx c = p.ctx([&] { return p.at_end(); });
    if (!p.at_end()) p.fail({"end of input", "','"});
    return c;
}

std::string print(const Ty& ty) {
    std::string s;
    print_ty(ty, 0, s);
    return s;
}

std::string print(const Term& t) {
    std::string s;
    print_term(t, 0, s);
    return s;
}

std::string print(const Ctx& ctx) {
    std::string s;
    bool first = true;
    for (const auto& e : ctx) {
        if (!first) s += ", ";
        first = false;
        if (e.lock) s += '#';
        else s += e.name + " : " + print(*e.ty);
    }
    return s;
}

const TermDecl* SourceFile::find_def(std::string_view name) const {
    for (const auto& d : defs)
        if (d.name == name) return &d;
    return nullptr;
}
const GoalDecl* SourceFile::find_goal(std::string_view name) const {
    for (const auto& g : goals)
        if (g.name == name) return &g;
    return nullptr;
}
const ModelDecl* SourceFile::find_model(std::string_view name) const {
    for (const auto& m : models)
        if (m.name == name) return &m;
    return nullptr;
}

SourceFile parse_source(std::string_view src) {
    Parser p(src);
    return p.source();
}

SourceFile load_source(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_source(ss.str());
}

std::string print_model(const std::string& name, const ModelConfig& cfg) {
    std::string s = "model " + name + " { kind = ";
    switch (cfg.kind) {
    case ModelKind::Identity: s += "identity"; break;
    case ModelKind::Chain: s += "chain(" + std::to_string(cfg.stages) + ")"; break;
    case ModelKind::ConstantComonad: s += "constant(" + std::to_string(cfg.stages) + ")"; break;
    }
    auto list = [](const std::vector<int>& v) {
        std::string r = "[";
        for (std::size_t i = 0; i < v.size(); ++i) r += (i ? "," : "") + std::to_string(v[i]);
        return r + "]";
    };
    for (const auto& [b, bi] : cfg.bases) {
        s += "; " + b + " = sizes " + list(bi.sizes);
        if (!bi.trans.empty()) {
            s += " trans [";
            for (std::size_t i = 0; i < bi.trans.size(); ++i) s += (i ? "," : "") + list(bi.trans[i]);
            s += "]";
        }
    }
    return s + " }";
}

std::string print_goal(const GoalDecl& g) {
    return "goal " + g.name + " [" + print(g.ctx) + " |- " + print(g.lhs) + " == " + print(g.rhs) +
           " : " + print(g.type) + "]";
}

std::string print_def(const TermDecl& d) {
    std::string s = "def " + d.name + " [" + print(d.ctx) + " |- " + print(d.term);
    if (d.type) s += " : " + print(*d.type);
    return s + "]";
}

}  // namespace fitch
