#include "gyro/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

namespace gyro {

namespace {

struct Token {
    enum Kind { Word, Number, LBrace, RBrace, End } kind = End;
    std::string text;
    double value = 0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws_and_comments();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];
        if (c == '{' || c == '}') {
            t.kind = c == '{' ? Token::LBrace : Token::RBrace;
            t.text = c;
            advance();
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            t.kind = Token::Word;
            while (pos_ < text_.size() &&
                   std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                t.text += text_[pos_];
                advance();
            }
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            size_t start = pos_;
            while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                   text_[pos_] != '{' && text_[pos_] != '}' && text_[pos_] != '#') {
                t.text += text_[pos_];
                advance();
            }
            const char* begin = text_.data() + start;
            auto [ptr, ec] = std::from_chars(begin, begin + t.text.size(), t.value);
            if (ec != std::errc() || ptr != begin + t.text.size())
                throw ParseError(t.line, t.column, "malformed number", t.text);
            t.kind = Token::Number;
            return t;
        }
        throw ParseError(t.line, t.column, "unexpected character", std::string(1, c));
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { bump(); }

    Netlist parse() {
        Netlist nl;
        while (tok_.kind != Token::End) {
            if (tok_.kind != Token::Word)
                throw ParseError(tok_.line, tok_.column, "expected 'loop' or 'couple'", tok_.text);
            if (tok_.text == "loop") {
                bump();
                nl.loops.push_back(parse_loop());
            } else if (tok_.text == "couple") {
                bump();
                nl.couplings.push_back(parse_couple());
            } else {
                throw ParseError(tok_.line, tok_.column, "expected 'loop' or 'couple'", tok_.text);
            }
        }
        check_structure(nl);
        return nl;
    }

private:
    void bump() { tok_ = lexer_.next(); }

    int expect_int(const char* what) {
        if (tok_.kind != Token::Number || tok_.value != std::floor(tok_.value) || tok_.value < 1)
            throw ParseError(tok_.line, tok_.column, std::string("expected ") + what, tok_.text);
        int v = static_cast<int>(tok_.value);
        bump();
        return v;
    }

    double expect_number() {
        if (tok_.kind != Token::Number)
            throw ParseError(tok_.line, tok_.column, "expected a number", tok_.text);
        double v = tok_.value;
        bump();
        return v;
    }

    void expect(Token::Kind kind, const char* what) {
        if (tok_.kind != kind) throw ParseError(tok_.line, tok_.column, what, tok_.text);
        bump();
    }

    void set_once(std::optional<double>& slot, double v, const Token& at) {
        if (slot)
            throw ParseError(at.line, at.column, "DuplicateElement: element given twice", at.text);
        slot = v;
    }

    LoopDecl parse_loop() {
        LoopDecl loop;
        loop.index = expect_int("a loop index (integer >= 1)");
        expect(Token::LBrace, "expected '{'");
        while (tok_.kind == Token::Word) {
            Token at = tok_;
            std::string elem = tok_.text;
            bump();
            double v = expect_number();
            if (elem == "L") {
                if (v <= 0) throw ParseError(at.line, at.column, "inductance must be positive");
                set_once(loop.l, v, at);
            } else if (elem == "C") {
                if (v <= 0) throw ParseError(at.line, at.column, "capacitance must be positive");
                set_once(loop.c, v, at);
            } else if (elem == "R") {
                if (v < 0) throw ParseError(at.line, at.column, "resistance must be nonnegative");
                set_once(loop.r, v, at);
            } else {
                throw ParseError(at.line, at.column, "only L, C, R are valid in a loop block",
                                 elem);
            }
        }
        expect(Token::RBrace, "expected '}'");
        return loop;
    }

    CouplingDecl parse_couple() {
        CouplingDecl cpl;
        cpl.i = expect_int("a loop index (integer >= 1)");
        cpl.j = expect_int("a loop index (integer >= 1)");
        if (cpl.i == cpl.j)
            throw ParseError(tok_.line, tok_.column, "coupling must join two distinct loops");
        if (cpl.i > cpl.j) std::swap(cpl.i, cpl.j);
        expect(Token::LBrace, "expected '{'");
        while (tok_.kind == Token::Word) {
            Token at = tok_;
            std::string elem = tok_.text;
            bump();
            double v = expect_number();
            if (elem == "C") {
                if (v <= 0) throw ParseError(at.line, at.column, "capacitance must be positive");
                set_once(cpl.c, v, at);
            } else if (elem == "G") {
                set_once(cpl.g, v, at);
            } else {
                throw ParseError(at.line, at.column, "only C, G are valid in a couple block",
                                 elem);
            }
        }
        expect(Token::RBrace, "expected '}'");
        return cpl;
    }

    void check_structure(const Netlist& nl) {
        std::set<int> indices;
        for (const auto& loop : nl.loops)
            if (!indices.insert(loop.index).second)
                throw ValidationError("DuplicateElement",
                                      "loop " + std::to_string(loop.index) + " declared twice");
        const int n = static_cast<int>(nl.loops.size());
        for (int k = 1; k <= n; ++k)
            if (!indices.count(k))
                throw ValidationError("UnknownLoopReference",
                                      "loop indices must be contiguous from 1; missing " +
                                          std::to_string(k));
        std::set<std::pair<int, int>> pairs;
        for (const auto& cpl : nl.couplings) {
            if (!indices.count(cpl.i) || !indices.count(cpl.j))
                throw ValidationError("UnknownLoopReference",
                                      "coupling references undeclared loop " +
                                          std::to_string(indices.count(cpl.i) ? cpl.j : cpl.i));
            if (!pairs.insert({cpl.i, cpl.j}).second)
                throw ValidationError("DuplicateElement",
                                      "coupling (" + std::to_string(cpl.i) + ", " +
                                          std::to_string(cpl.j) + ") declared twice");
        }
    }

    Lexer lexer_;
    Token tok_;
};

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Netlist parse_netlist(std::string_view text) { return Parser(text).parse(); }

LagrangianSystem compile_netlist(const Netlist& nl) {
    const int n = static_cast<int>(nl.loops.size());
    if (n == 0) throw ValidationError("NoDissipation", "empty netlist");

    std::vector<LoopDecl> loops = nl.loops;
    std::sort(loops.begin(), loops.end(),
              [](const LoopDecl& a, const LoopDecl& b) { return a.index < b.index; });

    LagrangianSystem sys;
    sys.alpha = Eigen::MatrixXd::Zero(n, n);
    sys.eta = Eigen::MatrixXd::Zero(n, n);
    sys.theta = Eigen::MatrixXd::Zero(n, n);
    sys.r = Eigen::MatrixXd::Zero(n, n);

    for (int k = 0; k < n; ++k) {
        const LoopDecl& loop = loops[static_cast<size_t>(k)];
        if (!loop.l)
            throw ValidationError("MissingInductance",
                                  "loop " + std::to_string(loop.index) + " has no inductance");
        sys.alpha(k, k) = *loop.l;
        if (loop.c) sys.eta(k, k) += 1.0 / *loop.c;
        if (loop.r) sys.r(k, k) = *loop.r;
    }
    for (const auto& cpl : nl.couplings) {
        if (cpl.i < 1 || cpl.j < 1 || cpl.i > n || cpl.j > n || cpl.i == cpl.j)
            throw ValidationError("UnknownLoopReference",
                                  "coupling (" + std::to_string(cpl.i) + ", " +
                                      std::to_string(cpl.j) + ") references no declared loop");
        const int a = cpl.i - 1, b = cpl.j - 1;
        if (cpl.c) {
            sys.eta(a, a) += 1.0 / *cpl.c;
            sys.eta(b, b) += 1.0 / *cpl.c;
            sys.eta(a, b) -= 1.0 / *cpl.c;
            sys.eta(b, a) -= 1.0 / *cpl.c;
        }
        if (cpl.g) {
            sys.theta(a, b) -= *cpl.g / 2.0;
            sys.theta(b, a) += *cpl.g / 2.0;
        }
    }
    if (sys.r.diagonal().maxCoeff() <= 0.0)
        throw ValidationError("NoDissipation", "every loop resistance is zero");
    validate(sys);
    return sys;
}

std::string emit_netlist(const Netlist& nl) {
    std::vector<LoopDecl> loops = nl.loops;
    std::sort(loops.begin(), loops.end(),
              [](const LoopDecl& a, const LoopDecl& b) { return a.index < b.index; });
    std::vector<CouplingDecl> couplings = nl.couplings;
    std::sort(couplings.begin(), couplings.end(), [](const CouplingDecl& a, const CouplingDecl& b) {
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });

    std::string out;
    for (const auto& loop : loops) {
        out += "loop " + std::to_string(loop.index) + " {";
        if (loop.l) out += " L " + fmt17(*loop.l);
        if (loop.c) out += " C " + fmt17(*loop.c);
        if (loop.r) out += " R " + fmt17(*loop.r);
        out += " }\n";
    }
    for (const auto& cpl : couplings) {
        if (!cpl.c && !cpl.g) continue;
        out += "couple " + std::to_string(cpl.i) + " " + std::to_string(cpl.j) + " {";
        if (cpl.c) out += " C " + fmt17(*cpl.c);
        if (cpl.g) out += " G " + fmt17(*cpl.g);
        out += " }\n";
    }
    return out;
}

}  // namespace gyro
