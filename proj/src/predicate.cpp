#include "absnorm/predicate.hpp"

#include <cctype>
#include <vector>

namespace absnorm {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
    Int, Ident, Or, And, Not, LParen, RParen, Comma,
    Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, Percent, End
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    std::size_t k = 0;
    auto bump = [&](std::size_t n) {
        for (std::size_t j = 0; j < n; ++j) {
            if (src[k] == '\n') { ++line; col = 1; } else { ++col; }
            ++k;
        }
    };
    while (k < src.size()) {
        const char c = src[k];
        if (std::isspace(static_cast<unsigned char>(c))) { bump(1); continue; }
        const std::size_t l = line, cl = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t e = k;
            while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
            out.push_back({Tok::Int, std::string(src.substr(k, e - k)), l, cl});
            bump(e - k);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t e = k;
            while (e < src.size() && (std::isalnum(static_cast<unsigned char>(src[e])) || src[e] == '_')) ++e;
            out.push_back({Tok::Ident, std::string(src.substr(k, e - k)), l, cl});
            bump(e - k);
            continue;
        }
        auto two = [&](char next) { return k + 1 < src.size() && src[k + 1] == next; };
        Tok kind;
        std::size_t len = 1;
        switch (c) {
            case '|': kind = Tok::Or; break;
            case '&': kind = Tok::And; break;
            case '!':
                if (two('=')) { kind = Tok::Ne; len = 2; } else { kind = Tok::Not; }
                break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            case '=': kind = Tok::Eq; break;
            case '<':
                if (two('=')) { kind = Tok::Le; len = 2; } else { kind = Tok::Lt; }
                break;
            case '>':
                if (two('=')) { kind = Tok::Ge; len = 2; } else { kind = Tok::Gt; }
                break;
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '%': kind = Tok::Percent; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
        }
        out.push_back({kind, std::string(src.substr(k, len)), l, cl});
        bump(len);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

bool is_rel(Tok t) {
    return t == Tok::Eq || t == Tok::Ne || t == Tok::Lt || t == Tok::Le || t == Tok::Gt || t == Tok::Ge;
}

bool is_arith(Tok t) {
    return t == Tok::Plus || t == Tok::Minus || t == Tok::Star || t == Tok::Percent;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    std::unique_ptr<BoolExpr> parse_all() {
        auto e = parse_or();
        if (peek().kind != Tok::End) error("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void error(const std::string& msg) const {
        throw ParseError(msg, peek().line, peek().column);
    }
    void expect(Tok kind, const char* what) {
        if (peek().kind != kind) {
            error(std::string("expected ") + what + (peek().kind == Tok::End ? " at end of input" : ", found '" + peek().text + "'"));
        }
        take();
    }

    static std::unique_ptr<BoolExpr> node(BoolExpr::Kind k) {
        auto e = std::make_unique<BoolExpr>();
        e->kind = k;
        return e;
    }

    std::unique_ptr<BoolExpr> parse_or() {
        auto lhs = parse_and();
        while (peek().kind == Tok::Or) {
            take();
            auto e = node(BoolExpr::Kind::Or);
            e->lhs = std::move(lhs);
            e->rhs = parse_and();
            lhs = std::move(e);
        }
        return lhs;
    }

    std::unique_ptr<BoolExpr> parse_and() {
        auto lhs = parse_unary();
        while (peek().kind == Tok::And) {
            take();
            auto e = node(BoolExpr::Kind::And);
            e->lhs = std::move(lhs);
            e->rhs = parse_unary();
            lhs = std::move(e);
        }
        return lhs;
    }

    std::unique_ptr<BoolExpr> parse_unary() {
        if (peek().kind == Tok::Not) {
            take();
            auto e = node(BoolExpr::Kind::Not);
            e->lhs = parse_unary();
            return e;
        }
        return parse_atom();
    }

    // A '(' opens a sum when the token after its matching ')' continues arithmetic or a comparison.
    bool paren_starts_sum() const {
        std::size_t depth = 0;
        for (std::size_t k = pos_; k < toks_.size(); ++k) {
            if (toks_[k].kind == Tok::LParen) ++depth;
            else if (toks_[k].kind == Tok::RParen && --depth == 0) {
                const Tok after = toks_[std::min(k + 1, toks_.size() - 1)].kind;
                return is_rel(after) || is_arith(after);
            }
        }
        return false;
    }

    std::unique_ptr<BoolExpr> parse_atom() {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text == "true") { take(); return node(BoolExpr::Kind::True); }
        if (t.kind == Tok::Ident && t.text == "false") { take(); return node(BoolExpr::Kind::False); }
        if (t.kind == Tok::Ident && t.text == "div") {
            take();
            expect(Tok::LParen, "'('");
            auto e = node(BoolExpr::Kind::Divides);
            e->a = parse_sum();
            expect(Tok::Comma, "','");
            e->b = parse_sum();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (t.kind == Tok::LParen && !paren_starts_sum()) {
            take();
            auto e = parse_or();
            expect(Tok::RParen, "')'");
            return e;
        }
        auto e = node(BoolExpr::Kind::Compare);
        e->a = parse_sum();
        if (!is_rel(peek().kind)) error("expected a comparison operator");
        switch (take().kind) {
            case Tok::Eq: e->rel = BoolExpr::Rel::Eq; break;
            case Tok::Ne: e->rel = BoolExpr::Rel::Ne; break;
            case Tok::Lt: e->rel = BoolExpr::Rel::Lt; break;
            case Tok::Le: e->rel = BoolExpr::Rel::Le; break;
            case Tok::Gt: e->rel = BoolExpr::Rel::Gt; break;
            default: e->rel = BoolExpr::Rel::Ge; break;
        }
        e->b = parse_sum();
        if (is_rel(peek().kind)) error("comparisons do not chain");
        return e;
    }

    static std::unique_ptr<IntExpr> binary(IntExpr::Kind k, std::unique_ptr<IntExpr> l,
                                           std::unique_ptr<IntExpr> r) {
        auto e = std::make_unique<IntExpr>();
        e->kind = k;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        return e;
    }

    std::unique_ptr<IntExpr> parse_sum() {
        auto lhs = parse_term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const auto k = take().kind == Tok::Plus ? IntExpr::Kind::Add : IntExpr::Kind::Sub;
            lhs = binary(k, std::move(lhs), parse_term());
        }
        return lhs;
    }

    std::unique_ptr<IntExpr> parse_term() {
        auto lhs = parse_factor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Percent) {
            const auto k = take().kind == Tok::Star ? IntExpr::Kind::Mul : IntExpr::Kind::Mod;
            lhs = binary(k, std::move(lhs), parse_factor());
        }
        return lhs;
    }

    std::unique_ptr<IntExpr> parse_factor() {
        const Token& t = peek();
        auto e = std::make_unique<IntExpr>();
        if (t.kind == Tok::Int) {
            e->kind = IntExpr::Kind::Constant;
            e->value = Integer(t.text, 10);
            take();
            return e;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "x") e->kind = IntExpr::Kind::X;
            else if (t.text == "y") e->kind = IntExpr::Kind::Y;
            else error("unknown identifier '" + t.text + "'");
            take();
            return e;
        }
        if (t.kind == Tok::LParen) {
            take();
            auto inner = parse_sum();
            expect(Tok::RParen, "')'");
            return inner;
        }
        if (t.kind == Tok::End) error("unexpected end of input");
        error("unexpected '" + t.text + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

Integer eval(const IntExpr& e, const Integer& x, const Integer& y) {
    switch (e.kind) {
        case IntExpr::Kind::Constant: return e.value;
        case IntExpr::Kind::X: return x;
        case IntExpr::Kind::Y: return y;
        case IntExpr::Kind::Add: return eval(*e.lhs, x, y) + eval(*e.rhs, x, y);
        case IntExpr::Kind::Sub: return eval(*e.lhs, x, y) - eval(*e.rhs, x, y);
        case IntExpr::Kind::Mul: return eval(*e.lhs, x, y) * eval(*e.rhs, x, y);
        case IntExpr::Kind::Mod: {
            const Integer a = eval(*e.lhs, x, y);
            const Integer b = eval(*e.rhs, x, y);
            if (b == 0) throw PredicateError("modulus by zero");
            Integer r;
            mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            return r;
        }
    }
    throw PredicateError("corrupt expression");
}

bool eval(const BoolExpr& e, const Integer& x, const Integer& y) {
    switch (e.kind) {
        case BoolExpr::Kind::True: return true;
        case BoolExpr::Kind::False: return false;
        case BoolExpr::Kind::Not: return !eval(*e.lhs, x, y);
        case BoolExpr::Kind::And: return eval(*e.lhs, x, y) && eval(*e.rhs, x, y);
        case BoolExpr::Kind::Or: return eval(*e.lhs, x, y) || eval(*e.rhs, x, y);
        case BoolExpr::Kind::Divides: {
            const Integer a = eval(*e.a, x, y);
            const Integer b = eval(*e.b, x, y);
            if (b == 0) return a == 0;
            return mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) != 0;
        }
        case BoolExpr::Kind::Compare: {
            const int c = cmp(eval(*e.a, x, y), eval(*e.b, x, y));
            switch (e.rel) {
                case BoolExpr::Rel::Eq: return c == 0;
                case BoolExpr::Rel::Ne: return c != 0;
                case BoolExpr::Rel::Lt: return c < 0;
                case BoolExpr::Rel::Le: return c <= 0;
                case BoolExpr::Rel::Gt: return c > 0;
                case BoolExpr::Rel::Ge: return c >= 0;
            }
        }
    }
    throw PredicateError("corrupt expression");
}

std::string show(const IntExpr& e) {
    switch (e.kind) {
        case IntExpr::Kind::Constant: return e.value.get_str();
        case IntExpr::Kind::X: return "x";
        case IntExpr::Kind::Y: return "y";
        case IntExpr::Kind::Add: return "(" + show(*e.lhs) + " + " + show(*e.rhs) + ")";
        case IntExpr::Kind::Sub: return "(" + show(*e.lhs) + " - " + show(*e.rhs) + ")";
        case IntExpr::Kind::Mul: return "(" + show(*e.lhs) + " * " + show(*e.rhs) + ")";
        case IntExpr::Kind::Mod: return "(" + show(*e.lhs) + " % " + show(*e.rhs) + ")";
    }
    return "?";
}

const char* rel_text(BoolExpr::Rel r) {
    switch (r) {
        case BoolExpr::Rel::Eq: return " = ";
        case BoolExpr::Rel::Ne: return " != ";
        case BoolExpr::Rel::Lt: return " < ";
        case BoolExpr::Rel::Le: return " <= ";
        case BoolExpr::Rel::Gt: return " > ";
        case BoolExpr::Rel::Ge: return " >= ";
    }
    return " ? ";
}

std::string show(const BoolExpr& e) {
    switch (e.kind) {
        case BoolExpr::Kind::True: return "true";
        case BoolExpr::Kind::False: return "false";
        case BoolExpr::Kind::Not: return "!" + show(*e.lhs);
        case BoolExpr::Kind::And: return "(" + show(*e.lhs) + " & " + show(*e.rhs) + ")";
        case BoolExpr::Kind::Or: return "(" + show(*e.lhs) + " | " + show(*e.rhs) + ")";
        case BoolExpr::Kind::Divides: return "div(" + show(*e.a) + ", " + show(*e.b) + ")";
        case BoolExpr::Kind::Compare: return "(" + show(*e.a) + rel_text(e.rel) + show(*e.b) + ")";
    }
    return "?";
}

}  // namespace

Predicate Predicate::parse(std::string_view text) {
    Parser parser(lex(text));
    return Predicate(parser.parse_all());
}

Predicate Predicate::constant(bool value) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = value ? BoolExpr::Kind::True : BoolExpr::Kind::False;
    return Predicate(std::move(e));
}

bool Predicate::evaluate(std::uint64_t x, std::uint64_t y) const {
    return eval(*root_, Integer(static_cast<unsigned long>(x)), Integer(static_cast<unsigned long>(y)));
}

std::string Predicate::to_string() const { return show(*root_); }

}  // namespace absnorm
