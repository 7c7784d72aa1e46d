#include "olgpp/query.hpp"

#include "olgpp/error.hpp"
#include "olgpp/schema.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <memory>
#include <set>

namespace olgpp {

std::string_view to_string(CompareOp op) {
    switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "<>";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::contains: return "CONTAINS";
    case CompareOp::in: return "IN";
    case CompareOp::starts_with: return "STARTS WITH";
    case CompareOp::ends_with: return "ENDS WITH";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { ident, string, number, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t line = 1;
    std::size_t col = 1;
    double number = 0;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::end: return "end of query";
    case Tok::string: return "string '" + t.text + "'";
    default: return "'" + t.text + "'";
    }
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto bump = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (true) {
        while (i < src.size()) {
            if (std::isspace(static_cast<unsigned char>(src[i]))) {
                bump(1);
            } else if (src.substr(i, 2) == "//") {
                while (i < src.size() && src[i] != '\n') bump(1);
            } else {
                break;
            }
        }
        Token t;
        t.line = line;
        t.col = col;
        if (i >= src.size()) {
            out.push_back(t);
            return out;
        }
        char c = src[i];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::ident;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                t.text.push_back(src[i]);
                bump(1);
            }
        } else if (c == '`') {
            t.kind = Tok::ident;
            bump(1);
            while (i < src.size() && src[i] != '`') {
                t.text.push_back(src[i]);
                bump(1);
            }
            if (i >= src.size()) throw SyntaxError(t.line, t.col, "unterminated `identifier`");
            bump(1);
        } else if (c == '\'' || c == '"') {
            t.kind = Tok::string;
            bump(1);
            while (i < src.size() && src[i] != c) {
                if (src[i] == '\\' && i + 1 < src.size()) {
                    bump(1);
                    char e = src[i];
                    t.text.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
                } else {
                    t.text.push_back(src[i]);
                }
                bump(1);
            }
            if (i >= src.size()) throw SyntaxError(t.line, t.col, "unterminated string");
            bump(1);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::number;
            std::size_t start = i;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) bump(1);
            if (i + 1 < src.size() && src[i] == '.' && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
                bump(1);
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) bump(1);
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t save_i = i, save_line = line, save_col = col;
                bump(1);
                if (i < src.size() && (src[i] == '+' || src[i] == '-')) bump(1);
                if (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) bump(1);
                } else {
                    i = save_i;
                    line = save_line;
                    col = save_col;
                }
            }
            t.text = std::string(src.substr(start, i - start));
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        } else {
            t.kind = Tok::punct;
            static const char* two[] = {"->", "<-", "<>", "!=", "<=", ">="};
            bool matched = false;
            for (const char* p : two) {
                if (src.substr(i, 2) == p) {
                    t.text = p;
                    bump(2);
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                static const std::string_view singles = "()[]{}:,.=<>-|;*+";
                if (singles.find(c) == std::string_view::npos) {
                    throw SyntaxError(t.line, t.col, std::string("unexpected character '") + c + "'");
                }
                t.text = std::string(1, c);
                bump(1);
            }
        }
        out.push_back(std::move(t));
    }
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
    }
    return true;
}

const char* const kReserved[] = {"MATCH", "WHERE", "RETURN", "AND", "OR", "NOT", "EXISTS", "AS", "ORDER", "BY",
                                 "DISTINCT", "CASE", "WHEN", "THEN", "ELSE", "END", "IN", "CONTAINS", "IS", "NULL",
                                 "LIMIT", "ASC", "DESC", "STARTS", "ENDS", "WITH", "TRUE", "FALSE", "SUBCLASS",
                                 "OPTIONAL"};

bool reserved(std::string_view word) {
    return std::any_of(std::begin(kReserved), std::end(kReserved), [&](const char* k) { return iequals(word, k); });
}

// ---------------------------------------------------------------- parser

enum class VarKind { node, edge };

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    QueryAST parse() {
        QueryAST ast;
        if (kw("SUBCLASS")) {
            next();
            expect_kw("MATCH", "after SUBCLASS");
            ast.subclass_match = true;
        }
        while (true) {
            if (kw("MATCH")) {
                next();
                MatchClause m;
                m.paths.push_back(path(false));
                while (punct(",")) {
                    next();
                    m.paths.push_back(path(false));
                }
                ast.clauses.emplace_back(std::move(m));
            } else if (kw("WHERE")) {
                next();
                ast.clauses.emplace_back(WhereClause{expr()});
            } else if (kw("RETURN")) {
                break;
            } else if (kw("OPTIONAL")) {
                fail("OPTIONAL MATCH is not supported");
            } else {
                fail("expected MATCH, WHERE or RETURN, found " + describe(peek()));
            }
        }
        if (ast.match_count() == 0) fail("a query needs at least one MATCH clause");
        next();
        ast.returns = return_clause();
        if (punct(";")) next();
        if (peek().kind != Tok::end) fail("expected end of query, found " + describe(peek()));
        return ast;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool kw(std::string_view word, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::ident && iequals(peek(ahead).text, word);
    }
    bool punct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::punct && peek(ahead).text == p;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(peek().line, peek().col, msg);
    }
    void expect_punct(std::string_view p, std::string_view context) {
        if (!punct(p)) fail("expected '" + std::string(p) + "' " + std::string(context) + ", found " + describe(peek()));
        next();
    }
    void expect_kw(std::string_view word, std::string_view context) {
        if (!kw(word)) fail("expected " + std::string(word) + " " + std::string(context) + ", found " + describe(peek()));
        next();
    }
    std::string name(std::string_view what) {
        if (peek().kind != Tok::ident) fail("expected " + std::string(what) + ", found " + describe(peek()));
        return next().text;
    }

    void declare(const std::string& var, VarKind kind) {
        if (var.empty()) return;
        auto [it, fresh] = kinds_.emplace(var, kind);
        if (!fresh && it->second != kind) {
            fail("variable '" + var + "' is used both as a node and as a relationship");
        }
    }

    // ---- patterns

    PatternProps props() {
        PatternProps out;
        expect_punct("{", "to open properties");
        if (punct("}")) {
            next();
            return out;
        }
        while (true) {
            std::string key;
            if (peek().kind == Tok::ident || peek().kind == Tok::string) {
                key = next().text;
            } else {
                fail("expected property name, found " + describe(peek()));
            }
            for (const auto& [k, _] : out) {
                if (k == key) fail("duplicate property '" + key + "'");
            }
            expect_punct(":", "after property name");
            Value v = literal_value();
            out.emplace_back(std::move(key), std::move(v));
            if (punct(",")) {
                next();
                continue;
            }
            expect_punct("}", "to close properties");
            return out;
        }
    }

    NodePattern node() {
        NodePattern n;
        expect_punct("(", "to open a node pattern");
        if (peek().kind == Tok::ident && !punct(":") ) {
            n.var = next().text;
        }
        if (punct(":")) {
            next();
            n.label = name("node label");
            if (punct(":")) {
                if (iequals(*n.label, "Edge") || iequals(*n.label, "Relationship")) {
                    fail("a relationship cannot be matched as a node '(" + n.var + ":" + *n.label +
                         ":...)'; bind it in the edge instead, e.g. ()-[" + (n.var.empty() ? "r" : n.var) +
                         ":type]->()");
                }
                fail("multiple labels on one node are not supported");
            }
        }
        if (punct("{")) n.props = props();
        expect_punct(")", "to close the node pattern");
        declare(n.var, VarKind::node);
        return n;
    }

    EdgePattern edge() {
        EdgePattern e;
        bool left = false;
        if (punct("<-")) {
            left = true;
            next();
        } else {
            expect_punct("-", "to start a relationship");
        }
        expect_punct("[", "to open a relationship pattern");
        if (peek().kind == Tok::ident) e.var = next().text;
        if (punct(":")) {
            next();
            e.types.push_back(name("relationship type"));
            while (punct("|")) {
                next();
                if (punct(":")) next();
                e.types.push_back(name("relationship type"));
            }
        }
        if (punct("*")) fail("variable-length relationships are not supported");
        if (punct("{")) e.props = props();
        expect_punct("]", "to close the relationship pattern");
        if (left) {
            expect_punct("-", "after ']' of an incoming relationship");
            e.direction = EdgeDirection::in;
        } else if (punct("->")) {
            next();
            e.direction = EdgeDirection::out;
        } else if (punct("-")) {
            next();
            e.direction = EdgeDirection::either;
        } else {
            fail("expected '->' or '-' after ']', found " + describe(peek()));
        }
        declare(e.var, VarKind::edge);
        return e;
    }

    bool edge_ahead() const { return punct("-") || punct("<-"); }

    PathPattern path(bool bare_start) {
        PathPattern p;
        if (bare_start && peek().kind == Tok::ident) {
            NodePattern n;
            n.var = next().text;
            declare(n.var, VarKind::node);
            p.nodes.push_back(std::move(n));
        } else {
            p.nodes.push_back(node());
        }
        while (edge_ahead()) {
            p.edges.push_back(edge());
            p.nodes.push_back(node());
        }
        return p;
    }

    // ---- literals and expressions

    Value literal_value() {
        auto v = literal();
        if (!v) fail("null is not allowed here");
        return *v;
    }

    std::optional<Value> literal() {
        const Token& t = peek();
        if (t.kind == Tok::string) {
            next();
            return Value(t.text);
        }
        if (t.kind == Tok::number) {
            next();
            return Value(t.number);
        }
        if (punct("-") && peek(1).kind == Tok::number) {
            next();
            return Value(-next().number);
        }
        if (kw("TRUE")) {
            next();
            return Value(true);
        }
        if (kw("FALSE")) {
            next();
            return Value(false);
        }
        if (kw("NULL")) {
            next();
            return std::nullopt;
        }
        if (punct("[")) {
            next();
            Value::List items;
            if (!punct("]")) {
                items.push_back(literal_value());
                while (punct(",")) {
                    next();
                    items.push_back(literal_value());
                }
            }
            expect_punct("]", "to close the list");
            Value list(std::move(items));
            if (!list.homogeneous()) fail("list literals must hold one kind of value");
            return list;
        }
        fail("expected a literal, found " + describe(t));
    }

    bool literal_ahead() const {
        const Token& t = peek();
        return t.kind == Tok::string || t.kind == Tok::number || (punct("-") && peek(1).kind == Tok::number) ||
               kw("TRUE") || kw("FALSE") || kw("NULL") || punct("[");
    }

    Expr expr() { return disjunction(); }

    Expr disjunction() {
        Expr first = conjunction();
        if (!kw("OR")) return first;
        Expr out;
        out.kind = ExprKind::disj;
        out.args.push_back(std::move(first));
        while (kw("OR")) {
            next();
            out.args.push_back(conjunction());
        }
        return out;
    }

    Expr conjunction() {
        Expr first = negation();
        if (!kw("AND")) return first;
        Expr out;
        out.kind = ExprKind::conj;
        out.args.push_back(std::move(first));
        while (kw("AND")) {
            next();
            out.args.push_back(negation());
        }
        return out;
    }

    Expr negation() {
        if (kw("NOT")) {
            next();
            Expr out;
            out.kind = ExprKind::negation;
            out.args.push_back(negation());
            return out;
        }
        return comparison();
    }

    std::optional<Expr> try_pattern(bool bare_start) {
        std::size_t save = pos_;
        auto saved_kinds = kinds_;
        try {
            PathPattern p = path(bare_start);
            if (!p.edges.empty()) {
                Expr out;
                out.kind = ExprKind::pattern;
                out.pattern.push_back(std::move(p));
                return out;
            }
        } catch (const SyntaxError&) {
        }
        pos_ = save;
        kinds_ = std::move(saved_kinds);
        return std::nullopt;
    }

    Expr comparison() {
        if (kw("EXISTS") && punct("{", 1)) {
            next();
            next();
            Expr out;
            out.kind = ExprKind::exists;
            if (kw("MATCH")) next();
            out.pattern.push_back(path(false));
            while (punct(",")) {
                next();
                out.pattern.push_back(path(false));
            }
            if (kw("WHERE")) {
                next();
                out.args.push_back(expr());
            }
            expect_punct("}", "to close EXISTS");
            return out;
        }
        if (punct("(")) {
            if (auto p = try_pattern(false)) return *p;
            next();
            Expr inner = expr();
            expect_punct(")", "to close parenthesis");
            return inner;
        }
        if (peek().kind == Tok::ident && !reserved(peek().text) && (punct("-", 1) || punct("<-", 1))) {
            if (auto p = try_pattern(true)) return *p;
        }
        Expr lhs = operand();
        if (kw("IS")) {
            next();
            Expr out;
            out.kind = ExprKind::is_null;
            if (kw("NOT")) {
                next();
                out.kind = ExprKind::is_not_null;
            }
            expect_kw("NULL", "after IS");
            out.args.push_back(std::move(lhs));
            return out;
        }
        std::optional<CompareOp> op;
        if (punct("=")) op = CompareOp::eq;
        else if (punct("<>") || punct("!=")) op = CompareOp::ne;
        else if (punct("<")) op = CompareOp::lt;
        else if (punct("<=")) op = CompareOp::le;
        else if (punct(">")) op = CompareOp::gt;
        else if (punct(">=")) op = CompareOp::ge;
        else if (kw("CONTAINS")) op = CompareOp::contains;
        else if (kw("IN")) op = CompareOp::in;
        else if (kw("STARTS") && kw("WITH", 1)) op = CompareOp::starts_with;
        else if (kw("ENDS") && kw("WITH", 1)) op = CompareOp::ends_with;
        if (!op) return lhs;
        next();
        if (*op == CompareOp::starts_with || *op == CompareOp::ends_with) next();
        Expr out;
        out.kind = ExprKind::compare;
        out.op = *op;
        out.args.push_back(std::move(lhs));
        out.args.push_back(operand());
        return out;
    }

    Expr operand() {
        if (literal_ahead()) {
            Expr out;
            out.kind = ExprKind::literal;
            out.value = literal();
            return out;
        }
        if (kw("CASE")) return case_expr();
        if (punct("(")) {
            next();
            Expr inner = expr();
            expect_punct(")", "to close parenthesis");
            return inner;
        }
        if (peek().kind != Tok::ident || reserved(peek().text)) {
            fail("expected a variable, property or literal, found " + describe(peek()));
        }
        Expr out;
        out.var = next().text;
        if (punct(".")) {
            next();
            out.kind = ExprKind::property;
            out.key = name("property name");
        } else {
            out.kind = ExprKind::variable;
        }
        return out;
    }

    Expr case_expr() {
        next();
        Expr out;
        out.kind = ExprKind::case_when;
        if (!kw("WHEN")) fail("expected WHEN after CASE, found " + describe(peek()));
        while (kw("WHEN")) {
            next();
            out.args.push_back(expr());
            expect_kw("THEN", "after the WHEN condition");
            out.args.push_back(expr());
        }
        if (kw("ELSE")) {
            next();
            out.args.push_back(expr());
        }
        expect_kw("END", "to close CASE");
        return out;
    }

    ReturnClause return_clause() {
        ReturnClause r;
        if (kw("DISTINCT")) {
            next();
            r.distinct = true;
        }
        while (true) {
            ReturnItem item;
            item.expr = expr();
            if (kw("AS")) {
                next();
                item.alias = name("column alias");
            } else {
                item.alias = to_string(item.expr);
            }
            for (const auto& other : r.items) {
                if (other.alias == item.alias) fail("duplicate column '" + item.alias + "'");
            }
            r.items.push_back(std::move(item));
            if (!punct(",")) break;
            next();
        }
        if (kw("ORDER")) {
            next();
            expect_kw("BY", "after ORDER");
            while (true) {
                Expr key = expr();
                std::string text = to_string(key);
                std::optional<std::string> alias;
                for (const auto& item : r.items) {
                    if ((key.kind == ExprKind::variable && key.var == item.alias) || text == item.alias ||
                        text == to_string(item.expr)) {
                        alias = item.alias;
                        break;
                    }
                }
                if (!alias) fail("ORDER BY key '" + text + "' is not a returned column");
                OrderKey k{*alias, false};
                if (kw("DESC")) {
                    next();
                    k.descending = true;
                } else if (kw("ASC")) {
                    next();
                }
                r.order_by.push_back(std::move(k));
                if (!punct(",")) break;
                next();
            }
        }
        if (kw("LIMIT")) {
            next();
            if (peek().kind != Tok::number || peek().number < 0 || peek().number != static_cast<double>(static_cast<std::size_t>(peek().number))) {
                fail("LIMIT takes a non-negative integer");
            }
            r.limit = static_cast<std::size_t>(next().number);
        }
        return r;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<std::string, VarKind> kinds_;
};

// ---------------------------------------------------------------- binding checks

void path_vars(const PathPattern& p, std::set<std::string>& out) {
    for (const auto& n : p.nodes) {
        if (!n.var.empty()) out.insert(n.var);
    }
    for (const auto& e : p.edges) {
        if (!e.var.empty()) out.insert(e.var);
    }
}

void check_bound(const Expr& e, const std::set<std::string>& scope) {
    auto require = [&](const std::string& v) {
        if (!scope.contains(v)) {
            throw Error(ErrorCode::UnboundVariable, "variable '" + v + "' is not bound by any MATCH pattern");
        }
    };
    switch (e.kind) {
    case ExprKind::property:
    case ExprKind::variable: require(e.var); return;
    case ExprKind::exists:
    case ExprKind::pattern: {
        std::set<std::string> inner = scope;
        for (const auto& p : e.pattern) path_vars(p, inner);
        for (const auto& a : e.args) check_bound(a, inner);
        return;
    }
    default:
        for (const auto& a : e.args) check_bound(a, scope);
    }
}

void count_exists(const Expr& e, std::size_t& n) {
    if (e.kind == ExprKind::exists) ++n;
    for (const auto& a : e.args) count_exists(a, n);
}

// ---------------------------------------------------------------- printing

std::string quote(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out + "'";
}

bool plain_name(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    if (reserved(s)) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string ident(std::string_view s) {
    return plain_name(s) ? std::string(s) : "`" + std::string(s) + "`";
}

std::string literal_text(const std::optional<Value>& v) {
    if (!v) return "NULL";
    switch (v->kind()) {
    case Value::Kind::string: return quote(v->as_string());
    case Value::Kind::number: return format_number(v->as_number());
    case Value::Kind::boolean: return v->as_bool() ? "true" : "false";
    case Value::Kind::list: {
        std::string out = "[";
        for (std::size_t i = 0; i < v->as_list().size(); ++i) {
            if (i) out += ", ";
            out += literal_text(v->as_list()[i]);
        }
        return out + "]";
    }
    default: return quote(v->to_literal());
    }
}

std::string props_text(const PatternProps& props) {
    if (props.empty()) return {};
    std::string out = " {";
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (i) out += ", ";
        out += ident(props[i].first) + ": " + literal_text(props[i].second);
    }
    return out + "}";
}

std::string node_text(const NodePattern& n) {
    std::string out = "(" + (n.var.empty() ? std::string() : ident(n.var));
    if (n.label) out += ":" + ident(*n.label);
    return out + props_text(n.props) + ")";
}

std::string edge_text(const EdgePattern& e) {
    std::string inner = e.var.empty() ? std::string() : ident(e.var);
    for (std::size_t i = 0; i < e.types.size(); ++i) inner += (i ? "|" : ":") + ident(e.types[i]);
    inner += props_text(e.props);
    switch (e.direction) {
    case EdgeDirection::out: return "-[" + inner + "]->";
    case EdgeDirection::in: return "<-[" + inner + "]-";
    case EdgeDirection::either: return "-[" + inner + "]-";
    }
    return {};
}

std::string paths_text(const std::vector<PathPattern>& paths) {
    std::string out;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (i) out += ", ";
        out += to_string(paths[i]);
    }
    return out;
}

} // namespace

std::string to_string(const PathPattern& path) {
    std::string out = node_text(path.nodes.front());
    for (std::size_t i = 0; i < path.edges.size(); ++i) out += edge_text(path.edges[i]) + node_text(path.nodes[i + 1]);
    return out;
}

std::string to_string(const Expr& e) {
    auto joined = [&](std::string_view sep) {
        std::string out = "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += sep;
            out += to_string(e.args[i]);
        }
        return out + ")";
    };
    switch (e.kind) {
    case ExprKind::literal: return literal_text(e.value);
    case ExprKind::property: return ident(e.var) + "." + ident(e.key);
    case ExprKind::variable: return ident(e.var);
    case ExprKind::compare:
        return "(" + to_string(e.args[0]) + " " + std::string(to_string(e.op)) + " " + to_string(e.args[1]) + ")";
    case ExprKind::is_null: return "(" + to_string(e.args[0]) + " IS NULL)";
    case ExprKind::is_not_null: return "(" + to_string(e.args[0]) + " IS NOT NULL)";
    case ExprKind::conj: return joined(" AND ");
    case ExprKind::disj: return joined(" OR ");
    case ExprKind::negation: return "(NOT " + to_string(e.args[0]) + ")";
    case ExprKind::exists: {
        std::string out = "EXISTS { MATCH " + paths_text(e.pattern);
        if (!e.args.empty()) out += " WHERE " + to_string(e.args[0]);
        return out + " }";
    }
    case ExprKind::pattern: return paths_text(e.pattern);
    case ExprKind::case_when: {
        std::string out = "CASE";
        std::size_t i = 0;
        for (; i + 1 < e.args.size(); i += 2) {
            out += " WHEN " + to_string(e.args[i]) + " THEN " + to_string(e.args[i + 1]);
        }
        if (i < e.args.size()) out += " ELSE " + to_string(e.args[i]);
        return out + " END";
    }
    }
    return {};
}

std::string to_string(const QueryAST& ast) {
    std::string out;
    if (ast.subclass_match) out += "SUBCLASS MATCH\n";
    for (const auto& c : ast.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) {
            out += "MATCH " + paths_text(m->paths) + "\n";
        } else {
            out += "WHERE " + to_string(std::get<WhereClause>(c).condition) + "\n";
        }
    }
    out += "RETURN ";
    if (ast.returns.distinct) out += "DISTINCT ";
    for (std::size_t i = 0; i < ast.returns.items.size(); ++i) {
        if (i) out += ", ";
        out += to_string(ast.returns.items[i].expr) + " AS " + ident(ast.returns.items[i].alias);
    }
    if (!ast.returns.order_by.empty()) {
        out += "\nORDER BY ";
        for (std::size_t i = 0; i < ast.returns.order_by.size(); ++i) {
            if (i) out += ", ";
            out += ident(ast.returns.order_by[i].alias);
            if (ast.returns.order_by[i].descending) out += " DESC";
        }
    }
    if (ast.returns.limit) out += "\nLIMIT " + std::to_string(*ast.returns.limit);
    return out + "\n";
}

std::size_t QueryAST::match_count() const {
    return static_cast<std::size_t>(std::count_if(clauses.begin(), clauses.end(), [](const Clause& c) {
        return std::holds_alternative<MatchClause>(c);
    }));
}

std::size_t QueryAST::pattern_count() const {
    std::size_t n = 0;
    for (const auto& c : clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) n += m->paths.size();
    }
    return n;
}

std::size_t QueryAST::exists_count() const {
    std::size_t n = 0;
    for (const auto& c : clauses) {
        if (const auto* w = std::get_if<WhereClause>(&c)) count_exists(w->condition, n);
    }
    for (const auto& item : returns.items) count_exists(item.expr, n);
    return n;
}

QueryAST parse_query(std::string_view text) {
    QueryAST ast = Parser(text).parse();
    std::set<std::string> bound;
    for (const auto& c : ast.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) {
            for (const auto& p : m->paths) path_vars(p, bound);
        }
    }
    for (const auto& c : ast.clauses) {
        if (const auto* w = std::get_if<WhereClause>(&c)) check_bound(w->condition, bound);
    }
    for (const auto& item : ast.returns.items) check_bound(item.expr, bound);
    return ast;
}

// ---------------------------------------------------------------- execution

namespace {

using Binding = std::vector<const std::string*>;

struct Slots {
    std::vector<std::string> names;  // empty for anonymous
    std::vector<bool> is_edge;

    int add(const std::string& name, bool edge) {
        names.push_back(name);
        is_edge.push_back(edge);
        return static_cast<int>(names.size()) - 1;
    }
};

using Scope = std::map<std::string, int>;

struct Plan;

struct CExpr {
    ExprKind kind = ExprKind::literal;
    std::optional<Value> value;
    int slot = -1;
    std::string key;
    CompareOp op = CompareOp::eq;
    std::vector<CExpr> args;
    std::shared_ptr<Plan> sub;
};

struct NodeStep {
    int slot;
    std::optional<std::string> label;
    PatternProps props;
};

struct EdgeStep {
    int slot;
    int from;
    int to;
    std::vector<std::string> types;  // canonical names
    bool impossible = false;         // every named type is unknown
    PatternProps props;
    EdgeDirection direction;
};

struct Step {
    std::variant<NodeStep, EdgeStep> op;
    std::vector<CExpr> filters;  // run once this step has bound its slots
};

struct Plan {
    std::vector<CExpr> initial;  // depend only on slots bound before the plan runs
    std::vector<Step> steps;
};

class Executor {
public:
    Executor(const QueryAST& ast, const Graph& graph, const ExecOptions& options)
        : ast_(ast), graph_(graph), options_(options) {}

    std::vector<Binding> run(const std::vector<const std::vector<PathPattern>*>& matches,
                             const std::vector<const Expr*>& wheres) {
        Scope scope;
        main_ = compile(matches, wheres, scope, {});
        Binding b(slots_.names.size(), nullptr);
        std::vector<Binding> out;
        search(*main_, 0, b, [&](const Binding& full) {
            out.push_back(full);
            return false;
        }, true);
        std::stable_sort(out.begin(), out.end(), [&](const Binding& l, const Binding& r) {
            for (std::size_t i = 0; i < main_slots_; ++i) {
                if (!l[i] || !r[i]) continue;
                if (*l[i] != *r[i]) return NaturalLess{}(*l[i], *r[i]);
            }
            return false;
        });
        scope_ = std::move(scope);
        return out;
    }

    const Slots& slots() const { return slots_; }
    std::size_t main_slot_count() const { return main_slots_; }
    const Scope& scope() const { return scope_; }

    Cell value(const CExpr& e, const Binding& b) { return eval_value(e, b); }

    CExpr compile_expr(const Expr& e, Scope& scope) { return compile(e, scope); }

private:
    // ---- compilation

    int slot_for(const std::string& var, bool edge, Scope& scope) {
        if (!var.empty()) {
            if (auto it = scope.find(var); it != scope.end()) return it->second;
            int s = slots_.add(var, edge);
            scope[var] = s;
            return s;
        }
        return slots_.add("", edge);
    }

    std::vector<PathPattern> oriented(const std::vector<PathPattern>& paths, const std::set<int>& bound,
                                      const Scope& scope) {
        // Start a path from a bound end when only that end is bound.
        std::vector<PathPattern> out;
        for (const auto& p : paths) {
            auto is_bound = [&](const NodePattern& n) {
                if (n.var.empty()) return false;
                auto it = scope.find(n.var);
                return it != scope.end() && bound.contains(it->second);
            };
            if (!p.edges.empty() && !is_bound(p.nodes.front()) && is_bound(p.nodes.back())) {
                PathPattern r;
                r.nodes.assign(p.nodes.rbegin(), p.nodes.rend());
                r.edges.assign(p.edges.rbegin(), p.edges.rend());
                for (auto& e : r.edges) {
                    if (e.direction == EdgeDirection::out) e.direction = EdgeDirection::in;
                    else if (e.direction == EdgeDirection::in) e.direction = EdgeDirection::out;
                }
                out.push_back(std::move(r));
            } else {
                out.push_back(p);
            }
        }
        return out;
    }

    std::shared_ptr<Plan> compile(const std::vector<const std::vector<PathPattern>*>& matches,
                                  const std::vector<const Expr*>& wheres, Scope& scope, std::set<int> bound) {
        auto plan = std::make_shared<Plan>();
        std::map<int, int> bound_at;  // slot -> step index
        for (int s : bound) bound_at[s] = -1;

        for (const auto* paths : matches) {
            for (const auto& p : oriented(*paths, bound, scope)) {
                int prev = -1;
                for (std::size_t i = 0; i < p.nodes.size(); ++i) {
                    const NodePattern& n = p.nodes[i];
                    if (i > 0) {
                        const EdgePattern& ep = p.edges[i - 1];
                        EdgeStep es;
                        es.slot = slot_for(ep.var, true, scope);
                        es.from = prev;
                        es.to = slot_for(n.var, false, scope);
                        es.props = ep.props;
                        es.direction = ep.direction;
                        for (const auto& t : ep.types) {
                            if (auto canon = graph_.vocabulary().resolve_edge_type(t)) es.types.push_back(*canon);
                        }
                        es.impossible = !ep.types.empty() && es.types.empty();
                        int idx = static_cast<int>(plan->steps.size());
                        bound_at.emplace(es.slot, idx);
                        bound_at.emplace(es.to, idx);
                        plan->steps.push_back({es, {}});
                        prev = es.to;
                    } else {
                        prev = slot_for(n.var, false, scope);
                    }
                    NodeStep ns{prev, n.label, n.props};
                    bound_at.emplace(prev, static_cast<int>(plan->steps.size()));
                    plan->steps.push_back({ns, {}});
                    bound.insert(prev);
                    if (i > 0) bound.insert(std::get<EdgeStep>(plan->steps[plan->steps.size() - 2].op).slot);
                }
            }
        }
        if (!main_done_) {
            main_slots_ = slots_.names.size();
            main_done_ = true;
        }

        for (const Expr* w : wheres) {
            std::vector<const Expr*> conjuncts;
            if (w->kind == ExprKind::conj) {
                for (const auto& a : w->args) conjuncts.push_back(&a);
            } else {
                conjuncts.push_back(w);
            }
            for (const Expr* c : conjuncts) {
                CExpr ce = compile(*c, scope);
                std::set<int> refs;
                free_slots(ce, refs);
                int at = -1;
                for (int s : refs) {
                    auto it = bound_at.find(s);
                    if (it != bound_at.end()) at = std::max(at, it->second);
                }
                if (at < 0) plan->initial.push_back(std::move(ce));
                else plan->steps[static_cast<std::size_t>(at)].filters.push_back(std::move(ce));
            }
        }
        return plan;
    }

    CExpr compile(const Expr& e, Scope& scope) {
        CExpr out;
        out.kind = e.kind;
        out.value = e.value;
        out.key = e.key;
        out.op = e.op;
        if (e.kind == ExprKind::property || e.kind == ExprKind::variable) {
            auto it = scope.find(e.var);
            out.slot = it == scope.end() ? -1 : it->second;
            return out;
        }
        if (e.kind == ExprKind::exists || e.kind == ExprKind::pattern) {
            Scope inner = scope;
            std::set<int> bound;
            for (const auto& [_, s] : scope) bound.insert(s);
            std::vector<const std::vector<PathPattern>*> m{&e.pattern};
            std::vector<const Expr*> w;
            if (!e.args.empty()) w.push_back(&e.args[0]);
            out.sub = compile(m, w, inner, bound);
            return out;
        }
        for (const auto& a : e.args) out.args.push_back(compile(a, scope));
        return out;
    }

    void free_slots(const CExpr& e, std::set<int>& out) const {
        if (e.slot >= 0) out.insert(e.slot);
        for (const auto& a : e.args) free_slots(a, out);
        if (e.sub) {
            // Outer slots a subplan reads are those below its own allocation.
            collect_plan_refs(*e.sub, out);
        }
    }

    void collect_plan_refs(const Plan& p, std::set<int>& out) const {
        std::set<int> local;
        std::set<int> all;
        for (const auto& s : p.steps) {
            std::visit([&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, NodeStep>) {
                    all.insert(op.slot);
                } else {
                    all.insert(op.slot);
                    all.insert(op.from);
                    all.insert(op.to);
                }
            }, s.op);
            for (const auto& f : s.filters) free_slots(f, all);
        }
        for (const auto& f : p.initial) free_slots(f, all);
        for (int s : all) out.insert(s);
    }

    // ---- evaluation

    void tick() {
        if (++explored_ > options_.max_bindings) {
            throw Error(ErrorCode::ResourceLimit,
                        "query explored more than " + std::to_string(options_.max_bindings) + " bindings");
        }
    }

    const std::vector<const NodeRecord*>& label_nodes(const std::string& label) {
        auto it = label_cache_.find(label);
        if (it != label_cache_.end()) return it->second;
        std::set<std::string, NaturalLess> ids;
        for (const auto& id : graph_.match_nodes(label)) {
            ids.insert(id);
            if (ast_.subclass_match) {
                try {
                    for (auto& a : subclass_ancestors(graph_, id)) ids.insert(std::move(a));
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::SubclassCycle) throw;
                }
            }
        }
        std::vector<const NodeRecord*> nodes;
        for (const auto& id : ids) nodes.push_back(&graph_.node(id));
        return label_cache_.emplace(label, std::move(nodes)).first->second;
    }

    bool label_ok(const NodeRecord& n, const std::optional<std::string>& label) {
        if (!label) return true;
        if (Graph::has_type(n, *label)) return true;
        if (!ast_.subclass_match) return false;
        const auto& nodes = label_nodes(*label);
        return std::any_of(nodes.begin(), nodes.end(), [&](const NodeRecord* x) { return x == &n; });
    }

    static Cell node_prop(const NodeRecord& n, std::string_view key) {
        if (const Value* v = n.prop(key)) return *v;
        if (key == "type") return Value(n.subtype ? *n.subtype : n.node_type);
        if (key == "id") return Value(n.id);
        if (key == "label" && !n.label.empty()) return Value(n.label);
        if (key == "status") return Value(std::string(to_string(n.base.status)));
        return std::nullopt;
    }

    static Cell edge_prop(const EdgeRecord& e, std::string_view key) {
        if (const Value* v = e.prop(key)) return *v;
        if (key == "type") return Value(e.edge_type);
        if (key == "id") return Value(e.id);
        if (key == "status") return Value(std::string(to_string(e.base.status)));
        return std::nullopt;
    }

    static bool props_ok(const PatternProps& props, const auto& lookup) {
        for (const auto& [k, v] : props) {
            Cell c = lookup(k);
            if (!c || !(*c == v)) return false;
        }
        return true;
    }

    bool filters_ok(const std::vector<CExpr>& filters, const Binding& b) {
        for (const auto& f : filters) {
            if (!truth(f, b)) return false;
        }
        return true;
    }

    using Sink = std::function<bool(const Binding&)>;  // return true to stop

    // Returns true when the sink asked to stop.
    bool search(const Plan& plan, std::size_t i, Binding& b, const Sink& sink, bool check_initial = false) {
        if (check_initial && !filters_ok(plan.initial, b)) return false;
        if (i == plan.steps.size()) return sink(b);
        const Step& step = plan.steps[i];
        if (const auto* ns = std::get_if<NodeStep>(&step.op)) {
            auto visit = [&](const NodeRecord& n) {
                if (!label_ok(n, ns->label)) return false;
                if (!props_ok(ns->props, [&](std::string_view k) { return node_prop(n, k); })) return false;
                const std::string* before = b[ns->slot];
                b[ns->slot] = &n.id;
                tick();
                bool stop = filters_ok(step.filters, b) && search(plan, i + 1, b, sink);
                b[ns->slot] = before;
                return stop;
            };
            if (b[ns->slot]) {
                const NodeRecord& n = graph_.node(*b[ns->slot]);
                if (!label_ok(n, ns->label)) return false;
                if (!props_ok(ns->props, [&](std::string_view k) { return node_prop(n, k); })) return false;
                return filters_ok(step.filters, b) && search(plan, i + 1, b, sink);
            }
            if (ns->label) {
                for (const NodeRecord* n : label_nodes(*ns->label)) {
                    if (visit(*n)) return true;
                }
            } else {
                for (const NodeRecord* n : graph_.nodes()) {
                    if (visit(*n)) return true;
                }
            }
            return false;
        }

        const EdgeStep& es = std::get<EdgeStep>(step.op);
        if (es.impossible) return false;
        const std::string& from = *b[es.from];
        std::vector<std::pair<const EdgeRecord*, const std::string*>> cand;
        if (es.direction != EdgeDirection::in) {
            for (const auto* e : graph_.out_edges(from)) cand.emplace_back(e, &e->dst);
        }
        if (es.direction != EdgeDirection::out) {
            for (const auto* e : graph_.in_edges(from)) {
                if (es.direction == EdgeDirection::either && e->src == e->dst) continue;
                cand.emplace_back(e, &e->src);
            }
        }
        if (es.direction == EdgeDirection::either) {
            std::stable_sort(cand.begin(), cand.end(),
                             [](const auto& l, const auto& r) { return NaturalLess{}(l.first->id, r.first->id); });
        }
        for (const auto& [e, other] : cand) {
            if (!es.types.empty() && std::find(es.types.begin(), es.types.end(), e->edge_type) == es.types.end()) {
                continue;
            }
            if (b[es.slot] && *b[es.slot] != e->id) continue;
            if (b[es.to] && *b[es.to] != *other) continue;
            if (!props_ok(es.props, [&](std::string_view k) { return edge_prop(*e, k); })) continue;
            const std::string* before_edge = b[es.slot];
            const std::string* before_to = b[es.to];
            b[es.slot] = &e->id;
            b[es.to] = other;
            tick();
            bool stop = filters_ok(step.filters, b) && search(plan, i + 1, b, sink);
            b[es.slot] = before_edge;
            b[es.to] = before_to;
            if (stop) return true;
        }
        return false;
    }

    bool exists(const Plan& plan, const Binding& outer) {
        Binding b = outer;
        return search(plan, 0, b, [](const Binding&) { return true; }, true);
    }

    Cell eval_value(const CExpr& e, const Binding& b) {
        switch (e.kind) {
        case ExprKind::literal: return e.value;
        case ExprKind::variable:
            if (e.slot < 0 || !b[e.slot]) return std::nullopt;
            return Value(*b[e.slot]);
        case ExprKind::property: {
            if (e.slot < 0 || !b[e.slot]) return std::nullopt;
            if (slots_.is_edge[e.slot]) return edge_prop(graph_.edge(*b[e.slot]), e.key);
            return node_prop(graph_.node(*b[e.slot]), e.key);
        }
        case ExprKind::case_when: {
            std::size_t i = 0;
            for (; i + 1 < e.args.size(); i += 2) {
                if (truth(e.args[i], b)) return eval_value(e.args[i + 1], b);
            }
            if (i < e.args.size()) return eval_value(e.args[i], b);
            return std::nullopt;
        }
        default: return Value(truth(e, b));
        }
    }

    static bool compare_cells(CompareOp op, const Cell& l, const Cell& r) {
        if (!l || !r) return false;
        switch (op) {
        case CompareOp::eq: return *l == *r;
        case CompareOp::ne: return !(*l == *r);
        case CompareOp::lt:
        case CompareOp::le:
        case CompareOp::gt:
        case CompareOp::ge: {
            if (l->kind() != r->kind()) return false;
            auto c = compare(*l, *r);
            if (op == CompareOp::lt) return c < 0;
            if (op == CompareOp::le) return c <= 0;
            if (op == CompareOp::gt) return c > 0;
            return c >= 0;
        }
        case CompareOp::contains:
            if (l->is_string() && r->is_string()) return l->as_string().find(r->as_string()) != std::string::npos;
            if (l->is_list()) {
                return std::any_of(l->as_list().begin(), l->as_list().end(), [&](const Value& v) { return v == *r; });
            }
            return false;
        case CompareOp::in:
            if (!r->is_list()) return false;
            return std::any_of(r->as_list().begin(), r->as_list().end(), [&](const Value& v) { return v == *l; });
        case CompareOp::starts_with:
            return l->is_string() && r->is_string() && l->as_string().starts_with(r->as_string());
        case CompareOp::ends_with:
            return l->is_string() && r->is_string() && l->as_string().ends_with(r->as_string());
        }
        return false;
    }

    bool truth(const CExpr& e, const Binding& b) {
        switch (e.kind) {
        case ExprKind::compare: return compare_cells(e.op, eval_value(e.args[0], b), eval_value(e.args[1], b));
        case ExprKind::is_null: return !eval_value(e.args[0], b).has_value();
        case ExprKind::is_not_null: return eval_value(e.args[0], b).has_value();
        case ExprKind::conj:
            return std::all_of(e.args.begin(), e.args.end(), [&](const CExpr& a) { return truth(a, b); });
        case ExprKind::disj:
            return std::any_of(e.args.begin(), e.args.end(), [&](const CExpr& a) { return truth(a, b); });
        case ExprKind::negation: return !truth(e.args[0], b);
        case ExprKind::exists:
        case ExprKind::pattern: return exists(*e.sub, b);
        default: {
            Cell c = eval_value(e, b);
            return c && c->is_bool() && c->as_bool();
        }
        }
    }

    const QueryAST& ast_;
    const Graph& graph_;
    ExecOptions options_;
    Slots slots_;
    std::shared_ptr<Plan> main_;
    std::size_t main_slots_ = 0;
    bool main_done_ = false;
    Scope scope_;
    std::size_t explored_ = 0;
    std::map<std::string, std::vector<const NodeRecord*>> label_cache_;
};

std::strong_ordering compare_cells_order(const Cell& a, const Cell& b) {
    if (!a && !b) return std::strong_ordering::equal;
    if (!a) return std::strong_ordering::greater;
    if (!b) return std::strong_ordering::less;
    return compare(*a, *b);
}

bool rows_less(const std::vector<Cell>& a, const std::vector<Cell>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto c = compare_cells_order(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

struct Prepared {
    std::vector<const std::vector<PathPattern>*> matches;
    std::vector<const Expr*> wheres;
};

Prepared prepare(const QueryAST& ast) {
    Prepared p;
    for (const auto& c : ast.clauses) {
        if (const auto* m = std::get_if<MatchClause>(&c)) p.matches.push_back(&m->paths);
        else p.wheres.push_back(&std::get<WhereClause>(c).condition);
    }
    return p;
}

} // namespace

ResultTable execute(const QueryAST& ast, const Graph& graph, const ExecOptions& options) {
    Executor ex(ast, graph, options);
    Prepared p = prepare(ast);
    auto bindings = ex.run(p.matches, p.wheres);

    ResultTable table;
    Scope scope = ex.scope();
    std::vector<CExpr> items;
    for (const auto& item : ast.returns.items) {
        table.columns.push_back(item.alias);
        items.push_back(ex.compile_expr(item.expr, scope));
    }
    std::set<std::vector<Cell>, decltype(&rows_less)> seen(&rows_less);
    for (const auto& b : bindings) {
        Binding full = b;
        full.resize(ex.slots().names.size(), nullptr);
        std::vector<Cell> row;
        for (const auto& item : items) row.push_back(ex.value(item, full));
        if (ast.returns.distinct && !seen.insert(row).second) continue;
        table.rows.push_back(std::move(row));
    }

    if (!ast.returns.order_by.empty()) {
        std::vector<std::pair<std::size_t, bool>> keys;
        for (const auto& k : ast.returns.order_by) {
            auto it = std::find(table.columns.begin(), table.columns.end(), k.alias);
            keys.emplace_back(static_cast<std::size_t>(it - table.columns.begin()), k.descending);
        }
        std::stable_sort(table.rows.begin(), table.rows.end(), [&](const auto& l, const auto& r) {
            for (const auto& [col, desc] : keys) {
                auto c = compare_cells_order(l[col], r[col]);
                if (c != 0) return desc ? c > 0 : c < 0;
            }
            return false;
        });
    }
    if (ast.returns.limit && table.rows.size() > *ast.returns.limit) table.rows.resize(*ast.returns.limit);
    return table;
}

BindingTable execute_bindings(const QueryAST& ast, const Graph& graph, const ExecOptions& options) {
    Executor ex(ast, graph, options);
    Prepared p = prepare(ast);
    auto bindings = ex.run(p.matches, p.wheres);
    BindingTable out;
    std::vector<int> named;
    for (std::size_t i = 0; i < ex.main_slot_count(); ++i) {
        if (!ex.slots().names[i].empty()) {
            named.push_back(static_cast<int>(i));
            out.variables.push_back(ex.slots().names[i]);
        }
    }
    for (const auto& b : bindings) {
        std::vector<std::string> row;
        for (int s : named) row.push_back(b[s] ? *b[s] : std::string());
        out.rows.push_back(std::move(row));
    }
    return out;
}

namespace {

std::string display(const Cell& c) {
    return c ? c->to_display() : std::string();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

nlohmann::json cell_json(const Cell& c) {
    if (!c) return nullptr;
    switch (c->kind()) {
    case Value::Kind::string: return c->as_string();
    case Value::Kind::number: return c->as_number();
    case Value::Kind::boolean: return c->as_bool();
    case Value::Kind::list: {
        auto arr = nlohmann::json::array();
        for (const auto& v : c->as_list()) arr.push_back(cell_json(v));
        return arr;
    }
    default: return c->to_literal();
    }
}

} // namespace

std::string format_table(const ResultTable& table, TableFormat format) {
    std::string out;
    switch (format) {
    case TableFormat::csv: {
        for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_field(table.columns[i]);
        out += "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(display(row[i]));
            out += "\n";
        }
        return out;
    }
    case TableFormat::json: {
        nlohmann::json doc;
        doc["columns"] = table.columns;
        doc["rows"] = nlohmann::json::array();
        for (const auto& row : table.rows) {
            auto r = nlohmann::json::array();
            for (const auto& c : row) r.push_back(cell_json(c));
            doc["rows"].push_back(std::move(r));
        }
        return doc.dump(2) + "\n";
    }
    case TableFormat::text: {
        std::vector<std::size_t> width;
        for (const auto& c : table.columns) width.push_back(c.size());
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], display(row[i]).size());
        }
        auto line = [&](const std::vector<std::string>& cells) {
            std::string l;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) l += " | ";
                l += cells[i];
                if (i + 1 < cells.size()) l += std::string(width[i] - cells[i].size(), ' ');
            }
            return l + "\n";
        };
        out += line(table.columns);
        std::string rule;
        for (std::size_t i = 0; i < width.size(); ++i) {
            if (i) rule += "-+-";
            rule += std::string(width[i], '-');
        }
        out += rule + "\n";
        for (const auto& row : table.rows) {
            std::vector<std::string> cells;
            for (const auto& c : row) cells.push_back(display(c));
            out += line(cells);
        }
        out += "(" + std::to_string(table.rows.size()) + (table.rows.size() == 1 ? " row)\n" : " rows)\n");
        return out;
    }
    }
    return out;
}

} // namespace olgpp
