#pragma once

#include "simpledb/diagnostics.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sdb {

enum class Tok {
    KwModel, KwEndModel, KwTable, KwPrimary, KwKey, KwForeign, KwReferences,
    KwCommit, KwRollback,
    KwIf, KwThen, KwElse, KwEndIf, KwWhile, KwDo, KwEndWhile,
    KwRead, KwLoad, KwSelect, KwFrom, KwWhere, KwNext, KwCatch,
    KwInsert, KwInto, KwValues, KwUpdate, KwSet, KwDelete,
    KwTrue, KwFalse, KwNil, KwHead, KwTail,
    Ident, Natural,
    LParen, RParen, LBracket, RBracket, Comma, Semicolon, Dot,
    Plus, Minus, Star, Slash, Less, Equal, Greater, AndAnd, OrOr, Bang,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;          // identifier spelling
    std::uint64_t value = 0;   // natural literal value
    SourcePos pos;
};

inline const std::map<std::string_view, Tok>& keyword_table() {
    static const std::map<std::string_view, Tok> table = {
        {"MODEL", Tok::KwModel},       {"ENDMODEL", Tok::KwEndModel},
        {"TABLE", Tok::KwTable},       {"PRIMARY", Tok::KwPrimary},
        {"KEY", Tok::KwKey},           {"FOREIGN", Tok::KwForeign},
        {"REFERENCES", Tok::KwReferences},
        {"COMMIT", Tok::KwCommit},     {"ROLLBACK", Tok::KwRollback},
        {"IF", Tok::KwIf},             {"THEN", Tok::KwThen},
        {"ELSE", Tok::KwElse},         {"ENDIF", Tok::KwEndIf},
        {"WHILE", Tok::KwWhile},       {"DO", Tok::KwDo},
        {"ENDWHILE", Tok::KwEndWhile},
        {"READ", Tok::KwRead},         {"LOAD", Tok::KwLoad},
        {"SELECT", Tok::KwSelect},     {"FROM", Tok::KwFrom},
        {"WHERE", Tok::KwWhere},       {"NEXT", Tok::KwNext},
        {"CATCH", Tok::KwCatch},
        {"INSERT", Tok::KwInsert},     {"INTO", Tok::KwInto},
        {"VALUES", Tok::KwValues},     {"UPDATE", Tok::KwUpdate},
        {"SET", Tok::KwSet},           {"DELETE", Tok::KwDelete},
        {"TRUE", Tok::KwTrue},         {"FALSE", Tok::KwFalse},
        {"NIL", Tok::KwNil},           {"HEAD", Tok::KwHead},
        {"TAIL", Tok::KwTail},
    };
    return table;
}

inline const char* token_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Natural: return "natural number";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Semicolon: return "';'";
        case Tok::Dot: return "'.'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Less: return "'<'";
        case Tok::Equal: return "'='";
        case Tok::Greater: return "'>'";
        case Tok::AndAnd: return "'&&'";
        case Tok::OrOr: return "'||'";
        case Tok::Bang: return "'!'";
        case Tok::End: return "end of input";
        default: break;
    }
    for (const auto& [name, tok] : keyword_table())
        if (tok == t) return name.data();
    return "?";
}

namespace detail {
inline bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
}  // namespace detail

/// Splits SimpleDB source into tokens. Whitespace separates tokens and carries
/// no other meaning; there are no comments. Keywords are reserved words.
inline std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> out;
    SourcePos pos;
    std::size_t i = 0;
    auto advance = [&](char c) {
        if (c == '\n') { pos.line++; pos.col = 1; } else { pos.col++; }
        ++i;
    };
    while (i < source.size()) {
        char c = source[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(c); continue; }
        SourcePos start = pos;
        if (detail::is_letter(c)) {
            std::string word;
            while (i < source.size() && (detail::is_letter(source[i]) || detail::is_digit(source[i]))) {
                word.push_back(source[i]);
                advance(source[i]);
            }
            auto it = keyword_table().find(word);
            if (it != keyword_table().end())
                out.push_back(Token{it->second, "", 0, start});
            else
                out.push_back(Token{Tok::Ident, word, 0, start});
            continue;
        }
        if (detail::is_digit(c)) {
            std::string digits;
            while (i < source.size() && detail::is_digit(source[i])) {
                digits.push_back(source[i]);
                advance(source[i]);
            }
            if (digits.size() > 1 && digits[0] == '0')
                throw CompileError(Diagnostic{start, "natural number may not have leading zeros"});
            if (i < source.size() && detail::is_letter(source[i]))
                throw CompileError(Diagnostic{pos, "natural number and identifier must be separated"});
            out.push_back(Token{Tok::Natural, "", std::stoull(digits), start});
            continue;
        }
        auto punct = [&](Tok k) {
            advance(c);
            out.push_back(Token{k, "", 0, start});
        };
        switch (c) {
            case '(': punct(Tok::LParen); continue;
            case ')': punct(Tok::RParen); continue;
            case '[': punct(Tok::LBracket); continue;
            case ']': punct(Tok::RBracket); continue;
            case ',': punct(Tok::Comma); continue;
            case ';': punct(Tok::Semicolon); continue;
            case '.': punct(Tok::Dot); continue;
            case '+': punct(Tok::Plus); continue;
            case '-': punct(Tok::Minus); continue;
            case '*': punct(Tok::Star); continue;
            case '/': punct(Tok::Slash); continue;
            case '<': punct(Tok::Less); continue;
            case '=': punct(Tok::Equal); continue;
            case '>': punct(Tok::Greater); continue;
            case '!': punct(Tok::Bang); continue;
            case '&':
                if (i + 1 < source.size() && source[i + 1] == '&') {
                    advance(c); advance('&');
                    out.push_back(Token{Tok::AndAnd, "", 0, start});
                    continue;
                }
                throw CompileError(Diagnostic{start, "stray '&' (expected '&&')"});
            case '|':
                if (i + 1 < source.size() && source[i + 1] == '|') {
                    advance(c); advance('|');
                    out.push_back(Token{Tok::OrOr, "", 0, start});
                    continue;
                }
                throw CompileError(Diagnostic{start, "stray '|' (expected '||')"});
            default:
                throw CompileError(Diagnostic{start, std::string("unexpected character '") + c + "'"});
        }
    }
    out.push_back(Token{Tok::End, "", 0, pos});
    return out;
}

}  // namespace sdb
