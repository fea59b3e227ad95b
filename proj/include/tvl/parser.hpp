// parser.hpp - recursive-descent parser for the canonical TVL grammar:
//
//   VISUALIZE <map|bar|line|pie> [AREA "<name>"] [TIME "<st>" TO "<et>"]
//   SQL SELECT <items> FROM <table> [JOIN <t> ON <a> = <b>]...
//       [WHERE <pred> [AND <pred>]...] [BIN BY <HOUR|DAY|MONTH|YEAR>(<col>)]
//       [GROUP BY <cols>] [ORDER BY <cols> [ASC|DESC]]
//
// Keywords are case-insensitive; whitespace (including newlines) is free
// between tokens. Every input either parses or raises a positioned error.
#ifndef TVL_PARSER_HPP
#define TVL_PARSER_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tvl/ast.hpp"
#include "tvl/validate.hpp"

namespace tvl {

struct SyntaxError : TvlError {
    size_t position;
    std::string expected;

    SyntaxError(size_t pos, std::string exp, const std::string& found)
        : TvlError("syntax error at offset " + std::to_string(pos) + ": expected " + exp +
                   ", found " + found),
          position(pos),
          expected(std::move(exp)) {}
};

struct SemanticError : TvlError {
    std::vector<Violation> violations;

    explicit SemanticError(std::vector<Violation> v)
        : TvlError(describe_violations(v)), violations(std::move(v)) {}
};

namespace detail {

enum class TokKind { Ident, Number, SingleQuoted, DoubleQuoted, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;   // identifier text, unescaped string body, number text, punct
    size_t pos = 0;
    bool is_real = false;  // for Number: had '.' or exponent
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.pos = i_;
        if (i_ >= src_.size()) return t;
        char c = src_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t b = i_;
            while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
                ++i_;
            t.kind = TokKind::Ident;
            t.text = std::string(src_.substr(b, i_ - b));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
            return lex_number();
        }
        if (c == '\'') return lex_quoted('\'', TokKind::SingleQuoted);
        if (c == '"') return lex_quoted('"', TokKind::DoubleQuoted);
        // multi-char comparators first
        for (std::string_view p : {"!=", "<=", ">="}) {
            if (src_.substr(i_, 2) == p) {
                t.kind = TokKind::Punct;
                t.text = std::string(p);
                i_ += 2;
                return t;
            }
        }
        if (std::string_view("(),=<>*.").find(c) != std::string_view::npos) {
            t.kind = TokKind::Punct;
            t.text = std::string(1, c);
            ++i_;
            return t;
        }
        throw SyntaxError(i_, "a token", "character '" + std::string(1, c) + "'");
    }

private:
    std::string_view src_;
    size_t i_ = 0;

    void skip_ws() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    }

    Token lex_number() {
        Token t;
        t.pos = i_;
        t.kind = TokKind::Number;
        size_t b = i_;
        if (src_[i_] == '-') ++i_;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        if (i_ < src_.size() && src_[i_] == '.') {
            t.is_real = true;
            ++i_;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            size_t save = i_;
            ++i_;
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
            if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                t.is_real = true;
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            } else {
                i_ = save;  // 'e' belongs to a following identifier
            }
        }
        t.text = std::string(src_.substr(b, i_ - b));
        return t;
    }

    Token lex_quoted(char quote, TokKind kind) {
        Token t;
        t.pos = i_;
        t.kind = kind;
        ++i_;  // opening quote
        std::string body;
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == quote) {
                if (quote == '\'' && i_ + 1 < src_.size() && src_[i_ + 1] == '\'') {
                    body.push_back('\'');  // '' escape inside SQL strings
                    i_ += 2;
                    continue;
                }
                ++i_;
                t.text = std::move(body);
                return t;
            }
            body.push_back(c);
            ++i_;
        }
        throw SyntaxError(t.pos, "closing quote", "end of input");
    }
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { advance(); }

    TvlQuery parse_statement() {
        TvlQuery q;
        expect_keyword("VISUALIZE");
        Token vt = expect(TokKind::Ident, "a visualization type (map|bar|line|pie)");
        auto vis = vis_from_keyword(vt.text);
        if (!vis) throw SyntaxError(vt.pos, "map, bar, line or pie", "'" + vt.text + "'");
        q.vis = *vis;

        if (accept_keyword("AREA")) {
            Token name = expect(TokKind::DoubleQuoted, "a quoted area name");
            q.area = AreaRef::canonical(name.text);
        }
        if (accept_keyword("TIME")) {
            Token st = expect(TokKind::DoubleQuoted, "a quoted start timestamp");
            expect_keyword("TO");
            Token et = expect(TokKind::DoubleQuoted, "a quoted end timestamp");
            auto pst = parse_timestamp(st.text);
            if (!pst) throw SyntaxError(st.pos, "timestamp \"YYYY-MM-DD HH:MM:SS\"", "'" + st.text + "'");
            auto pet = parse_timestamp(et.text);
            if (!pet) throw SyntaxError(et.pos, "timestamp \"YYYY-MM-DD HH:MM:SS\"", "'" + et.text + "'");
            q.time = TimeWindow{*pst, *pet};
        }
        expect_keyword("SQL");
        q.sql = parse_skeleton();
        if (cur_.kind != TokKind::End)
            throw SyntaxError(cur_.pos, "end of statement", tok_desc(cur_));
        return q;
    }

    SqlSkeleton parse_skeleton() {
        SqlSkeleton s;
        expect_keyword("SELECT");
        s.select_items.push_back(parse_select_item());
        while (accept_punct(",")) s.select_items.push_back(parse_select_item());
        expect_keyword("FROM");
        s.from_table = expect(TokKind::Ident, "a table name").text;
        while (accept_keyword("JOIN")) {
            Join j;
            j.table = expect(TokKind::Ident, "a table name").text;
            expect_keyword("ON");
            j.left_col = parse_column_ref();
            expect_punct("=");
            j.right_col = parse_column_ref();
            s.joins.push_back(std::move(j));
        }
        if (accept_keyword("WHERE")) {
            s.extra_where.push_back(parse_predicate());
            while (accept_keyword("AND")) s.extra_where.push_back(parse_predicate());
        }
        TransformSpec t;
        bool have_transform = false;
        if (accept_keyword("BIN")) {
            expect_keyword("BY");
            Token u = expect(TokKind::Ident, "a bin unit (HOUR|DAY|MONTH|YEAR)");
            auto unit = bin_unit_from_keyword(u.text);
            if (!unit) throw SyntaxError(u.pos, "HOUR, DAY, MONTH or YEAR", "'" + u.text + "'");
            expect_punct("(");
            std::string col = parse_column_ref();
            expect_punct(")");
            t.bin = BinSpec{*unit, std::move(col)};
            have_transform = true;
        }
        if (check_keyword("GROUP")) {
            advance();
            expect_keyword("BY");
            t.group_keys.push_back(parse_column_ref());
            while (accept_punct(",")) t.group_keys.push_back(parse_column_ref());
            have_transform = true;
        }
        if (have_transform) s.transform = std::move(t);
        if (check_keyword("ORDER")) {
            advance();
            expect_keyword("BY");
            OrderBy ob;
            ob.keys.push_back(parse_column_ref());
            while (accept_punct(",")) ob.keys.push_back(parse_column_ref());
            if (accept_keyword("DESC"))
                ob.dir = SortDir::Desc;
            else
                accept_keyword("ASC");
            s.order_by = std::move(ob);
        }
        return s;
    }

private:
    Lexer lex_;
    Token cur_;

    void advance() { cur_ = lex_.next(); }

    bool check_keyword(std::string_view kw) const {
        return cur_.kind == TokKind::Ident && str::iequals(cur_.text, kw);
    }
    bool accept_keyword(std::string_view kw) {
        if (!check_keyword(kw)) return false;
        advance();
        return true;
    }
    void expect_keyword(std::string_view kw) {
        if (!accept_keyword(kw))
            throw SyntaxError(cur_.pos, std::string(kw), tok_desc(cur_));
    }
    bool accept_punct(std::string_view p) {
        if (cur_.kind == TokKind::Punct && cur_.text == p) {
            advance();
            return true;
        }
        return false;
    }
    void expect_punct(std::string_view p) {
        if (!accept_punct(p))
            throw SyntaxError(cur_.pos, "'" + std::string(p) + "'", tok_desc(cur_));
    }
    Token expect(TokKind k, std::string what) {
        if (cur_.kind != k) throw SyntaxError(cur_.pos, std::move(what), tok_desc(cur_));
        Token t = cur_;
        advance();
        return t;
    }

    static std::string tok_desc(const Token& t) {
        switch (t.kind) {
            case TokKind::End: return "end of input";
            case TokKind::Ident: return "'" + t.text + "'";
            case TokKind::Number: return "number " + t.text;
            case TokKind::SingleQuoted: return "string '" + t.text + "'";
            case TokKind::DoubleQuoted: return "quoted \"" + t.text + "\"";
            case TokKind::Punct: return "'" + t.text + "'";
        }
        return "?";
    }

    static bool is_reserved(std::string_view w) {
        for (std::string_view kw :
             {"FROM", "JOIN", "ON", "WHERE", "AND", "BIN", "GROUP", "ORDER", "BY", "ASC",
              "DESC", "AS", "IN", "SELECT", "TO", "SQL"})
            if (str::iequals(w, kw)) return true;
        return false;
    }

    std::string parse_column_ref() {
        Token t = expect(TokKind::Ident, "a column name");
        if (is_reserved(t.text))
            throw SyntaxError(t.pos, "a column name", "keyword '" + t.text + "'");
        std::string col = t.text;
        if (accept_punct(".")) {
            Token c = expect(TokKind::Ident, "a column name after '.'");
            col += "." + c.text;
        }
        return col;
    }

    SelectItem parse_select_item() {
        SelectItem it;
        if (cur_.kind == TokKind::Ident) {
            if (auto agg = agg_from_keyword(cur_.text)) {
                // aggregates require '('; a bare identifier such as "count"
                // would otherwise be a column
                Token save = cur_;
                advance();
                if (accept_punct("(")) {
                    it.agg = *agg;
                    if (accept_punct("*")) {
                        if (*agg != AggFn::Count)
                            throw SyntaxError(save.pos, "a column name (only COUNT accepts *)", "'*'");
                        it.column = "*";
                    } else {
                        it.column = parse_column_ref();
                    }
                    expect_punct(")");
                } else {
                    it.column = save.text;
                }
            } else {
                it.column = parse_column_ref();
            }
        } else {
            throw SyntaxError(cur_.pos, "a select item", tok_desc(cur_));
        }
        if (accept_keyword("AS")) it.alias = expect(TokKind::Ident, "an alias").text;
        return it;
    }

    Scalar parse_scalar() {
        if (cur_.kind == TokKind::Number) {
            Token t = cur_;
            advance();
            if (t.is_real) {
                double v = 0;
                auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (res.ec != std::errc())
                    throw SyntaxError(t.pos, "a numeric literal", t.text);
                return Scalar{v};
            }
            int64_t v = 0;
            auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (res.ec != std::errc())
                throw SyntaxError(t.pos, "an integer literal in range", t.text);
            return Scalar{v};
        }
        if (cur_.kind == TokKind::SingleQuoted) {
            Token t = cur_;
            advance();
            return Scalar{t.text};
        }
        throw SyntaxError(cur_.pos, "a literal (number or 'string')", tok_desc(cur_));
    }

    Predicate parse_predicate() {
        Predicate p;
        p.column = parse_column_ref();
        if (accept_keyword("IN")) {
            p.cmp = Cmp::In;
            expect_punct("(");
            std::vector<Scalar> vs;
            if (!accept_punct(")")) {
                vs.push_back(parse_scalar());
                while (accept_punct(",")) vs.push_back(parse_scalar());
                expect_punct(")");
            }
            p.value = Literal::list(std::move(vs));
            return p;
        }
        if (cur_.kind != TokKind::Punct)
            throw SyntaxError(cur_.pos, "a comparator (=, !=, <, <=, >, >=, IN)", tok_desc(cur_));
        std::string op = cur_.text;
        Cmp cmp;
        if (op == "=") cmp = Cmp::Eq;
        else if (op == "!=") cmp = Cmp::Ne;
        else if (op == "<") cmp = Cmp::Lt;
        else if (op == "<=") cmp = Cmp::Le;
        else if (op == ">") cmp = Cmp::Gt;
        else if (op == ">=") cmp = Cmp::Ge;
        else throw SyntaxError(cur_.pos, "a comparator (=, !=, <, <=, >, >=, IN)", tok_desc(cur_));
        advance();
        p.cmp = cmp;
        p.value = Literal::scalar(parse_scalar());
        return p;
    }
};

}  // namespace detail

// Parses one TVL statement. Throws SyntaxError on malformed text and
// SemanticError when the parsed statement violates structural invariants.
inline TvlQuery parse_tvl(std::string_view text) {
    detail::Parser p(text);
    TvlQuery q = p.parse_statement();
    auto violations = validate(q);
    if (!violations.empty()) throw SemanticError(std::move(violations));
    return q;
}

}  // namespace tvl

#endif  // TVL_PARSER_HPP
