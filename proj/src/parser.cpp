#include "chorex/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "chorex/checks.hpp"

namespace chorex {

namespace {

std::string span_text(const SourceSpan& s) {
    return std::to_string(s.line) + ":" + std::to_string(s.column);
}

}  // namespace

ParseError::ParseError(const std::string& msg, SourceSpan s)
    : Error(span_text(s) + ": " + msg), span(s) {}

namespace {

const std::set<std::string, std::less<>> kKeywords = {"def",  "main", "stop",    "if",
                                                      "then", "else", "deadlock", "continue"};

class Cursor {
public:
    explicit Cursor(std::string_view t) : t_(t) {}

    SourceSpan span_at(std::size_t off, std::size_t len = 1) const {
        SourceSpan s;
        s.offset = std::min(off, t_.size());
        s.length = std::min(len, t_.size() - s.offset);
        for (std::size_t i = 0; i < s.offset; ++i) {
            if (t_[i] == '\n') {
                ++s.line;
                s.column = 1;
            } else {
                ++s.column;
            }
        }
        return s;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
    [[noreturn]] void fail_at(std::size_t off, const std::string& msg) const {
        throw ParseError(msg, span_at(off));
    }

    void skip() {
        while (pos_ < t_.size()) {
            char c = t_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < t_.size() && t_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t pos() {
        skip();
        return pos_;
    }
    bool eof() {
        skip();
        return pos_ >= t_.size();
    }
    bool at(std::string_view s) {
        skip();
        return t_.substr(pos_, s.size()) == s;
    }
    bool accept(std::string_view s) {
        if (!at(s)) return false;
        pos_ += s.size();
        return true;
    }
    void expect(std::string_view s) {
        if (!accept(s)) fail("expected '" + std::string(s) + "'" + found());
    }

    std::string found() {
        skip();
        if (pos_ >= t_.size()) return " but reached end of input";
        std::size_t e = pos_;
        while (e < t_.size() && e - pos_ < 12 && !std::isspace(static_cast<unsigned char>(t_[e])))
            ++e;
        return " near '" + std::string(t_.substr(pos_, e - pos_)) + "'";
    }

    std::string peek_word() {
        skip();
        std::size_t e = pos_;
        while (e < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[e])) || t_[e] == '_'))
            ++e;
        return std::string(t_.substr(pos_, e - pos_));
    }
    bool at_keyword(std::string_view k) {
        std::string w = peek_word();
        return w == k;
    }
    bool accept_keyword(std::string_view k) {
        if (!at_keyword(k)) return false;
        pos_ += k.size();
        return true;
    }
    void expect_keyword(std::string_view k) {
        if (!accept_keyword(k)) fail("expected '" + std::string(k) + "'" + found());
    }

    std::string ident(const char* what) {
        skip();
        std::string w = peek_word();
        if (w.empty() || !std::isalpha(static_cast<unsigned char>(w[0])))
            fail(std::string("expected ") + what + found());
        if (kKeywords.count(w)) fail(std::string("expected ") + what + ", found keyword '" + w + "'");
        pos_ += w.size();
        return w;
    }

    std::string expression() {
        skip();
        std::size_t start = pos_;
        while (pos_ < t_.size() && is_expression_char(t_[pos_])) ++pos_;
        if (pos_ < t_.size() && t_[pos_] == '(') {
            int depth = 0;
            for (; pos_ < t_.size(); ++pos_) {
                char c = t_[pos_];
                if (std::isspace(static_cast<unsigned char>(c)) || c == '#')
                    fail("whitespace or '#' inside expression");
                if (c == '(') ++depth;
                if (c == ')' && --depth == 0) {
                    ++pos_;
                    break;
                }
            }
            if (depth != 0) fail_at(start, "unbalanced parentheses in expression");
        }
        if (pos_ == start) fail("expected expression" + found());
        return std::string(t_.substr(start, pos_ - start));
    }

private:
    std::string_view t_;
    std::size_t pos_ = 0;
};

template <class F>
auto wrap(Cursor& c, std::size_t at, F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        c.fail_at(at, e.what());
    }
}

// ------------------------------------------------------------------ networks

class NetworkParser {
public:
    explicit NetworkParser(std::string_view t) : c_(t) {}

    Network parse(std::map<Name, std::size_t>* spans) {
        std::vector<std::pair<Name, ProcessTerm>> procs;
        std::set<Name> seen;
        do {
            std::size_t at = c_.pos();
            Name p = c_.ident("process name");
            if (!seen.insert(p).second) c_.fail_at(at, "duplicate process '" + p + "'");
            if (spans) (*spans)[p] = at;
            procs.emplace_back(p, process());
        } while (c_.accept("|"));
        if (!c_.eof()) c_.fail("unexpected input" + c_.found());
        return Network(std::move(procs));
    }

private:
    ProcessTerm process() {
        c_.expect("{");
        ProcedureList defs;
        while (c_.accept_keyword("def")) {
            Name x = c_.ident("procedure name");
            c_.expect("{");
            Behaviour b = behaviour();
            c_.expect("}");
            defs.emplace_back(std::move(x), std::move(b));
        }
        c_.expect_keyword("main");
        c_.expect("{");
        Behaviour m = behaviour();
        c_.expect("}");
        c_.expect("}");
        return ProcessTerm(std::move(defs), std::move(m));
    }

    bool at_end() {
        return c_.eof() || c_.at("}") || c_.at(")") || c_.at(",") || c_.at("|") ||
               c_.at_keyword("else") || c_.at_keyword("continue");
    }

    Behaviour cont() {
        if (c_.accept(";")) return behaviour();
        if (at_end()) return Behaviour::nil();
        c_.fail("expected ';'" + c_.found());
    }

    Behaviour behaviour() {
        if (at_end()) return Behaviour::nil();
        std::size_t at = c_.pos();
        if (c_.accept("(")) {
            Behaviour b = behaviour();
            c_.expect(")");
            return b;
        }
        if (c_.accept_keyword("stop")) return Behaviour::nil();
        if (c_.accept_keyword("if")) {
            std::string e = c_.expression();
            c_.expect_keyword("then");
            Behaviour t = behaviour();
            c_.expect_keyword("else");
            Behaviour f = behaviour();
            c_.accept_keyword("continue");
            return wrap(c_, at, [&] { return Behaviour::cond(e, t, f); });
        }
        Name p = c_.ident("behaviour");
        if (c_.accept("!")) {
            c_.expect("<");
            std::string e = c_.expression();
            c_.expect(">");
            Behaviour k = cont();
            return wrap(c_, at, [&] { return Behaviour::send(p, e, k); });
        }
        if (c_.accept("?")) {
            Name x = c_.ident("variable");
            Behaviour k = cont();
            return wrap(c_, at, [&] { return Behaviour::receive(p, x, k); });
        }
        if (c_.accept("+")) {
            Name l = c_.ident("label");
            Behaviour k = cont();
            return wrap(c_, at, [&] { return Behaviour::select(p, l, k); });
        }
        if (c_.accept("&")) {
            c_.expect("{");
            Behaviour::Branches bs;
            std::set<Name> labels;
            do {
                std::size_t lat = c_.pos();
                Name l = c_.ident("label");
                if (!labels.insert(l).second) c_.fail_at(lat, "duplicate label '" + l + "'");
                c_.expect(":");
                bs.emplace_back(l, behaviour());
            } while (c_.accept(","));
            c_.expect("}");
            return wrap(c_, at, [&] { return Behaviour::offer(p, bs); });
        }
        return wrap(c_, at, [&] { return Behaviour::call(p); });
    }

    Cursor c_;
};

// ------------------------------------------------------------- choreographies

class ChorParser {
public:
    explicit ChorParser(std::string_view t) : c_(t) {}

    Program parse(std::vector<std::size_t>* spans) {
        Program prog;
        do {
            if (spans) spans->push_back(c_.pos());
            prog.components.push_back(choreography());
        } while (c_.accept("||"));
        if (!c_.eof()) c_.fail("unexpected input" + c_.found());
        return prog;
    }

private:
    Choreography choreography() {
        ChorProcedureList defs;
        while (c_.accept_keyword("def")) {
            Name x = c_.ident("procedure name");
            c_.expect("{");
            ChoreographyBody b = body();
            c_.expect("}");
            defs.emplace_back(std::move(x), std::move(b));
        }
        c_.expect_keyword("main");
        c_.expect("{");
        ChoreographyBody m = body();
        c_.expect("}");
        return Choreography(std::move(defs), std::move(m));
    }

    bool at_end() {
        return c_.eof() || c_.at("}") || c_.at(")") || c_.at("||") || c_.at_keyword("else");
    }

    ChoreographyBody cont() {
        if (c_.accept(";")) return body();
        if (at_end()) return ChoreographyBody::nil();
        c_.fail("expected ';'" + c_.found());
    }

    ChoreographyBody body() {
        if (at_end()) return ChoreographyBody::nil();
        std::size_t at = c_.pos();
        if (c_.accept("(")) {
            ChoreographyBody b = body();
            c_.expect(")");
            return b;
        }
        if (c_.accept_keyword("stop")) return ChoreographyBody::nil();
        if (c_.accept_keyword("deadlock")) return ChoreographyBody::dlock();
        if (c_.accept_keyword("if")) {
            Name p = c_.ident("process name");
            c_.expect(".");
            std::string e = c_.expression();
            c_.expect_keyword("then");
            ChoreographyBody t = body();
            c_.expect_keyword("else");
            ChoreographyBody f = body();
            return wrap(c_, at, [&] { return ChoreographyBody::cond(p, e, t, f); });
        }
        Name p = c_.ident("choreography");
        if (c_.accept(".")) {
            std::string e = c_.expression();
            c_.expect("->");
            Name q = c_.ident("process name");
            c_.expect(".");
            Name x = c_.ident("variable");
            ChoreographyBody k = cont();
            return wrap(c_, at, [&] { return ChoreographyBody::com(p, e, q, x, k); });
        }
        if (c_.accept("->")) {
            Name q = c_.ident("process name");
            c_.expect("[");
            Name l = c_.ident("label");
            c_.expect("]");
            ChoreographyBody k = cont();
            return wrap(c_, at, [&] { return ChoreographyBody::sel(p, q, l, k); });
        }
        return wrap(c_, at, [&] { return ChoreographyBody::call(p); });
    }

    Cursor c_;
};

}  // namespace

Network parse_network_unchecked(std::string_view text) {
    return NetworkParser(text).parse(nullptr);
}

Network parse_network(std::string_view text) {
    std::map<Name, std::size_t> spans;
    Network n = NetworkParser(text).parse(&spans);
    CheckReport r = check_well_formed(n);
    if (r.ok) r = check_guardedness(n);
    if (!r.ok) {
        const Violation& v = r.violations.front();
        Cursor c(text);
        c.fail_at(spans[v.process], v.kind + ": " + v.description);
    }
    return n;
}

Program parse_program_unchecked(std::string_view text) { return ChorParser(text).parse(nullptr); }

Program parse_program(std::string_view text) {
    std::vector<std::size_t> spans;
    Program p = ChorParser(text).parse(&spans);
    Cursor c(text);
    std::set<Name> used;
    for (std::size_t i = 0; i < p.components.size(); ++i) {
        CheckReport r = check_choreography(p.components[i]);
        if (!r.ok) {
            const Violation& v = r.violations.front();
            c.fail_at(spans[i], v.kind + ": " + v.description);
        }
        for (auto& n : process_names(p.components[i]))
            if (!used.insert(n).second)
                c.fail_at(spans[i], "process " + n + " occurs in more than one component");
    }
    return p;
}

Choreography parse_choreography(std::string_view text) {
    Program p = parse_program(text);
    if (p.components.size() != 1)
        throw ParseError("expected a single choreography, found a parallel program", SourceSpan{});
    return p.components.front();
}

// ----------------------------------------------------------------- printing

namespace {

void print(const Behaviour& b, std::string& o);

void print_branch(const Behaviour& b, std::string& o) {
    if (b.kind() == Behaviour::Kind::Nil || b.kind() == Behaviour::Kind::Call) {
        print(b, o);
    } else {
        o += '(';
        print(b, o);
        o += ')';
    }
}

void print(const Behaviour& b, std::string& o) {
    using K = Behaviour::Kind;
    switch (b.kind()) {
        case K::Nil: o += "stop"; return;
        case K::Call: o += b.proc(); return;
        case K::Send: o += b.peer() + "!<" + b.text() + ">; "; break;
        case K::Receive: o += b.peer() + "?" + b.text() + "; "; break;
        case K::Select: o += b.peer() + "+" + b.text() + "; "; break;
        case K::Offer: {
            o += b.peer() + "&{";
            bool first = true;
            for (auto& [l, c] : b.branches()) {
                if (!first) o += ", ";
                first = false;
                o += l + ": ";
                print(c, o);
            }
            o += "}";
            return;
        }
        case K::Cond:
            o += "if " + b.text() + " then ";
            print_branch(b.then_branch(), o);
            o += " else ";
            print_branch(b.else_branch(), o);
            return;
    }
    print(b.cont(), o);
}

void print(const ChoreographyBody& c, std::string& o);

void print_branch(const ChoreographyBody& c, std::string& o) {
    using K = ChoreographyBody::Kind;
    if (c.kind() == K::Nil || c.kind() == K::Dlock || c.kind() == K::Call) {
        print(c, o);
    } else {
        o += '(';
        print(c, o);
        o += ')';
    }
}

void print(const ChoreographyBody& c, std::string& o) {
    using K = ChoreographyBody::Kind;
    switch (c.kind()) {
        case K::Nil: o += "stop"; return;
        case K::Dlock: o += "deadlock"; return;
        case K::Call: o += c.proc(); return;
        case K::Com: o += c.p() + "." + c.expr() + "->" + c.q() + "." + c.var() + "; "; break;
        case K::Sel: o += c.p() + "->" + c.q() + "[" + c.label() + "]; "; break;
        case K::Cond:
            o += "if " + c.p() + "." + c.expr() + " then ";
            print_branch(c.then_branch(), o);
            o += " else ";
            print_branch(c.else_branch(), o);
            return;
    }
    print(c.cont(), o);
}

}  // namespace

std::string pretty(const Behaviour& b) {
    std::string o;
    print(b, o);
    return o;
}

std::string pretty(const ProcessTerm& t) {
    std::string o = "{\n";
    for (auto& [x, b] : *t.procedures) o += "  def " + x + " { " + pretty(b) + " }\n";
    o += "  main { " + pretty(t.main) + " }\n}";
    return o;
}

std::string pretty(const Network& n) {
    std::string o;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) o += "\n| ";
        o += n.name(i) + " " + pretty(n.term(i));
    }
    return o + "\n";
}

std::string pretty(const ChoreographyBody& c) {
    std::string o;
    print(c, o);
    return o;
}

namespace {
std::string pretty_chor(const Choreography& c) {
    std::string o;
    for (auto& [x, b] : c.procedures) o += "def " + x + " { " + pretty(b) + " }\n";
    return o + "main { " + pretty(c.main) + " }\n";
}
}  // namespace

std::string pretty(const Choreography& c) { return pretty_chor(c); }

std::string pretty(const Program& p) {
    std::string o;
    for (std::size_t i = 0; i < p.components.size(); ++i) {
        if (i) o += "||\n";
        o += pretty_chor(p.components[i]);
    }
    return o;
}

}  // namespace chorex
