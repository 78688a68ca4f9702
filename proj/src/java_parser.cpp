#include "testgen/java_parser.hpp"

#include <algorithm>

namespace testgen::java {

namespace {

struct Cursor {
    const std::vector<Token>& toks;
    std::string_view src;
    std::size_t i = 0;

    bool done() const { return i >= toks.size(); }
    const Token& peek(std::size_t k = 0) const {
        static const Token sentinel{Token::Kind::Punct, "", 0, 0, 0};
        return i + k < toks.size() ? toks[i + k] : sentinel;
    }
    const Token& take() {
        if (done()) throw ParseError("unexpected end of input");
        return toks[i++];
    }
    void expect(std::string_view text) {
        if (done() || toks[i].text != text)
            throw ParseError("expected '" + std::string(text) + "' near line " +
                             std::to_string(done() ? 0 : toks[i].line));
        ++i;
    }
    std::string slice(std::size_t begin_off, std::size_t end_off) const {
        return std::string(src.substr(begin_off, end_off - begin_off));
    }
};

// Consumes from the current open token through its matching close,
// counting only that bracket pair. Returns index of the close token.
std::size_t skip_balanced(Cursor& c, std::string_view open, std::string_view close) {
    if (!c.peek().is(open)) throw ParseError("expected '" + std::string(open) + "'");
    int depth = 0;
    while (!c.done()) {
        const Token& t = c.take();
        if (t.is(open)) ++depth;
        else if (t.is(close)) {
            if (--depth == 0) return c.i - 1;
        }
    }
    throw ParseError("unbalanced '" + std::string(open) + "'");
}

// Consumes through the ';' that terminates a simple statement, tracking all
// bracket depths so lambdas and anonymous classes don't end it early.
void consume_simple(Cursor& c) {
    int paren = 0, brace = 0, bracket = 0;
    while (!c.done()) {
        const Token& t = c.take();
        if (t.is("(")) ++paren;
        else if (t.is(")")) --paren;
        else if (t.is("{")) ++brace;
        else if (t.is("}")) --brace;
        else if (t.is("[")) ++bracket;
        else if (t.is("]")) --bracket;
        else if (t.is(";") && paren == 0 && brace == 0 && bracket == 0) return;
    }
    throw ParseError("statement not terminated by ';'");
}

Statement parse_statement(Cursor& c);

Statement parse_try(Cursor& c) {
    Statement st;
    st.form = Statement::Form::Try;
    std::size_t begin = c.peek().begin;
    c.expect("try");
    if (c.peek().is("(")) {
        std::size_t ropen = c.peek().end;
        std::size_t close_idx = skip_balanced(c, "(", ")");
        st.resources = c.slice(ropen, c.toks[close_idx].begin);
    }
    if (!c.peek().is("{")) throw ParseError("expected '{' after try");
    std::size_t bopen = c.peek().end;
    std::size_t close_idx = skip_balanced(c, "{", "}");
    std::string body = c.slice(bopen, c.toks[close_idx].begin);
    st.try_body = parse_statements(body);
    while (c.peek().is("catch")) {
        std::size_t cbegin = c.peek().begin;
        c.take();
        skip_balanced(c, "(", ")");
        if (!c.peek().is("{")) throw ParseError("expected '{' in catch");
        std::size_t cclose = skip_balanced(c, "{", "}");
        st.catch_blocks.push_back(c.slice(cbegin, c.toks[cclose].end));
    }
    if (c.peek().is("finally")) {
        c.take();
        if (!c.peek().is("{")) throw ParseError("expected '{' in finally");
        std::size_t fopen = c.peek().end;
        std::size_t fclose = skip_balanced(c, "{", "}");
        st.finally_body = c.slice(fopen, c.toks[fclose].begin);
        st.has_finally = true;
    }
    st.text = c.slice(begin, c.toks[c.i - 1].end);
    return st;
}

Statement parse_statement(Cursor& c) {
    Statement st;
    std::size_t begin = c.peek().begin;
    const Token& t = c.peek();

    if (t.is(";")) {
        c.take();
        st.form = Statement::Form::Empty;
        st.text = ";";
        return st;
    }
    if (t.is("{")) {
        std::size_t close = skip_balanced(c, "{", "}");
        st.form = Statement::Form::Block;
        st.text = c.slice(begin, c.toks[close].end);
        return st;
    }
    if (t.is("try")) return parse_try(c);
    if (t.is("if")) {
        c.take();
        skip_balanced(c, "(", ")");
        parse_statement(c);
        while (c.peek().is("else")) {
            c.take();
            parse_statement(c);
        }
        st.form = Statement::Form::If;
        st.text = c.slice(begin, c.toks[c.i - 1].end);
        return st;
    }
    if (t.is("for") || t.is("while")) {
        c.take();
        skip_balanced(c, "(", ")");
        parse_statement(c);
        st.form = Statement::Form::Loop;
        st.text = c.slice(begin, c.toks[c.i - 1].end);
        return st;
    }
    if (t.is("do")) {
        c.take();
        parse_statement(c);
        c.expect("while");
        skip_balanced(c, "(", ")");
        c.expect(";");
        st.form = Statement::Form::Loop;
        st.text = c.slice(begin, c.toks[c.i - 1].end);
        return st;
    }
    if (t.is("switch")) {
        c.take();
        skip_balanced(c, "(", ")");
        skip_balanced(c, "{", "}");
        // expression switch used as a statement would end with ';' — tolerated
        if (c.peek().is(";")) c.take();
        st.form = Statement::Form::Switch;
        st.text = c.slice(begin, c.toks[c.i - 1].end);
        return st;
    }
    if (t.is("synchronized") && c.peek(1).is("(")) {
        c.take();
        skip_balanced(c, "(", ")");
        skip_balanced(c, "{", "}");
        st.form = Statement::Form::Synchronized;
        st.text = c.slice(begin, c.toks[c.i - 1].end);
        return st;
    }
    // local type declaration (possibly after modifiers/annotations);
    // local records are not recognized ('record' is contextual and collides
    // with plain method calls)
    {
        std::size_t k = 0;
        while (c.peek(k).is("@")) {
            k += 2; // @ Name
            if (c.peek(k).is("(")) {
                int depth = 0;
                while (true) {
                    const Token& a = c.peek(k);
                    if (a.text.empty()) break;
                    if (a.is("(")) ++depth;
                    if (a.is(")") && --depth == 0) { ++k; break; }
                    ++k;
                }
            }
        }
        while (is_modifier(c.peek(k).text)) ++k;
        const std::string& kw = c.peek(k).text;
        if (kw == "class" || kw == "interface" || kw == "enum") {
            while (!c.done() && !c.peek().is("{")) c.take();
            skip_balanced(c, "{", "}");
            st.form = Statement::Form::LocalType;
            st.text = c.slice(begin, c.toks[c.i - 1].end);
            return st;
        }
    }
    // labeled statement
    if (t.kind == Token::Kind::Identifier && !is_keyword(t.text) && c.peek(1).is(":") &&
        !c.peek(2).is(":")) {
        c.take();
        c.take();
        parse_statement(c);
        st.form = Statement::Form::Simple;
        st.text = c.slice(begin, c.toks[c.i - 1].end);
        return st;
    }
    consume_simple(c);
    st.form = Statement::Form::Simple;
    st.text = c.slice(begin, c.toks[c.i - 1].end);
    return st;
}

} // namespace

std::vector<Statement> parse_statements(std::string_view block_source) {
    std::vector<Token> toks = lex(block_source);
    Cursor c{toks, block_source};
    std::vector<Statement> out;
    while (!c.done()) {
        Statement st = parse_statement(c);
        if (st.form != Statement::Form::Empty) out.push_back(std::move(st));
    }
    return out;
}

std::string normalize_decl(std::string_view decl_source) {
    std::vector<Token> toks = lex(decl_source);
    std::vector<std::string> texts;
    texts.reserve(toks.size());
    for (const Token& t : toks) texts.push_back(t.text);
    return join_tokens(texts);
}

namespace {

struct MemberScan {
    bool method_like = false;  // '(' seen before '=' or ';' at depth 0
    std::size_t open_paren = 0; // token index of the parameter list '('
};

MemberScan scan_member(const Cursor& c) {
    MemberScan m;
    int angle = 0;
    for (std::size_t k = c.i; k < c.toks.size(); ++k) {
        const Token& t = c.toks[k];
        if (t.is("<")) ++angle;
        else if (t.is(">")) angle = std::max(0, angle - 1);
        else if (angle == 0) {
            if (t.is("(")) {
                m.method_like = true;
                m.open_paren = k;
                return m;
            }
            if (t.is("=") || t.is(";") || t.is("{")) return m;
        }
    }
    return m;
}

std::vector<std::string> split_params(Cursor& c, std::size_t open_idx, std::size_t close_idx) {
    std::vector<std::string> params;
    std::vector<std::string> cur;
    int paren = 0, angle = 0, bracket = 0, brace = 0;
    for (std::size_t k = open_idx + 1; k < close_idx; ++k) {
        const Token& t = c.toks[k];
        if (t.is("(")) ++paren;
        else if (t.is(")")) --paren;
        else if (t.is("<")) ++angle;
        else if (t.is(">")) --angle;
        else if (t.is("[")) ++bracket;
        else if (t.is("]")) --bracket;
        else if (t.is("{")) ++brace;
        else if (t.is("}")) --brace;
        if (t.is(",") && paren == 0 && angle == 0 && bracket == 0 && brace == 0) {
            params.push_back(join_tokens(cur));
            cur.clear();
            continue;
        }
        cur.push_back(t.text);
    }
    if (!cur.empty()) params.push_back(join_tokens(cur));
    return params;
}

// Drops 'final' and annotations, then the trailing parameter name; what
// remains is the type (varargs ellipsis kept on the type).
std::string param_type_of(const std::string& param) {
    std::vector<Token> toks = lex(param);
    std::vector<std::string> texts;
    for (std::size_t k = 0; k < toks.size(); ++k) {
        if (toks[k].is("@")) {
            ++k; // skip annotation name
            if (k + 1 < toks.size() && toks[k + 1].is("(")) {
                int depth = 0;
                ++k;
                for (; k < toks.size(); ++k) {
                    if (toks[k].is("(")) ++depth;
                    if (toks[k].is(")") && --depth == 0) break;
                }
            }
            continue;
        }
        if (toks[k].is("final")) continue;
        texts.push_back(toks[k].text);
    }
    // trailing array brackets can follow the NAME in old-style decls: int x[]
    std::vector<std::string> suffix;
    while (!texts.empty() && (texts.back() == "]" || texts.back() == "[")) {
        suffix.insert(suffix.begin(), texts.back());
        texts.pop_back();
    }
    if (!texts.empty()) texts.pop_back(); // the parameter name
    for (const std::string& s : suffix) texts.push_back(s);
    return join_tokens(texts);
}

TypeDecl parse_type_decl(Cursor& c, std::vector<std::string> pending_annotations);

void parse_members(Cursor& c, std::string_view src, TypeDecl& type, std::size_t body_end_idx) {
    while (c.i < body_end_idx) {
        if (c.peek().is(";")) {
            c.take();
            continue;
        }
        std::size_t anno_begin_off = c.peek().begin;
        std::vector<std::string> annotations;
        while (c.peek().is("@")) {
            c.take();
            std::string name = c.take().text;
            while (c.peek().is(".")) { // qualified annotation: keep last segment
                c.take();
                name = c.take().text;
            }
            if (c.peek().is("(")) skip_balanced(c, "(", ")");
            annotations.push_back(name);
        }
        std::size_t member_begin_idx = c.i;
        std::size_t member_begin_off = c.peek().begin;
        while (is_modifier(c.peek().text) && !(c.peek().is("default") && c.peek(1).is(":")))
            c.take();
        const std::string& kw = c.peek().text;
        if (kw == "class" || kw == "interface" || kw == "enum" || kw == "record") {
            c.i = member_begin_idx;
            type.nested.push_back(parse_type_decl(c, std::move(annotations)));
            continue;
        }
        if (c.peek().is("{")) { // instance/static initializer
            skip_balanced(c, "{", "}");
            continue;
        }
        if (c.peek().is("}")) break;

        MemberScan scan = scan_member(c);
        if (!scan.method_like) { // field: consume through ';'
            consume_simple(c);
            continue;
        }

        Method m;
        m.annotations = std::move(annotations);
        std::size_t name_idx = scan.open_paren - 1;
        m.name = c.toks[name_idx].text;
        m.is_constructor = (m.name == type.name && name_idx == member_begin_idx) ||
                           (m.name == type.name &&
                            std::all_of(c.toks.begin() + static_cast<long>(member_begin_idx),
                                        c.toks.begin() + static_cast<long>(name_idx),
                                        [](const Token& t) { return is_modifier(t.text); }));
        if (!m.is_constructor) {
            std::vector<std::string> ret;
            int angle = 0;
            for (std::size_t k = member_begin_idx; k < name_idx; ++k) {
                const Token& t = c.toks[k];
                if (t.is("<")) ++angle;
                else if (t.is(">")) angle = std::max(0, angle - 1);
                if (angle == 0 && is_modifier(t.text) && !t.is(">")) continue;
                ret.push_back(t.text);
            }
            m.return_type = join_tokens(ret);
        }
        c.i = scan.open_paren;
        std::size_t close_paren = skip_balanced(c, "(", ")");
        for (const std::string& p : split_params(c, scan.open_paren, close_paren)) {
            std::string ty = param_type_of(p);
            if (!ty.empty()) m.param_types.push_back(ty);
        }
        std::size_t sig_end_off = c.toks[close_paren].end;
        if (c.peek().is("throws")) {
            while (!c.done() && !c.peek().is("{") && !c.peek().is(";")) c.take();
            sig_end_off = c.toks[c.i - 1].end;
        }
        m.signature = normalize_decl(c.slice(member_begin_off, sig_end_off));
        if (c.peek().is("{")) {
            std::size_t bopen = c.peek().end;
            std::size_t bclose = skip_balanced(c, "{", "}");
            m.body = c.slice(bopen, c.toks[bclose].begin);
            m.has_body = true;
        } else {
            c.expect(";");
        }
        (void)src;
        m.text = c.slice(anno_begin_off, c.toks[c.i - 1].end);
        type.methods.push_back(std::move(m));
    }
}

TypeDecl parse_type_decl(Cursor& c, std::vector<std::string> pending_annotations) {
    (void)pending_annotations;
    while (is_modifier(c.peek().text)) c.take();
    TypeDecl type;
    type.kind = c.take().text;
    if (type.kind != "class" && type.kind != "interface" && type.kind != "enum" &&
        type.kind != "record")
        throw ParseError("expected a type declaration, found '" + type.kind + "'");
    type.name = c.take().text;
    // header: generics, record components, extends/implements/permits
    while (!c.done() && !c.peek().is("{")) {
        if (c.peek().is("(")) {
            skip_balanced(c, "(", ")");
            continue;
        }
        c.take();
    }
    std::size_t body_close = 0;
    {
        // find the matching close without consuming, then parse members inside
        std::size_t save = c.i;
        body_close = skip_balanced(c, "{", "}");
        c.i = save + 1;
    }
    if (type.kind == "enum") {
        // skip the constants segment: up to the first ';' at depth 0, or the
        // whole body when there are no members
        int paren = 0, brace = 0;
        std::size_t k = c.i;
        bool found = false;
        for (; k < body_close; ++k) {
            const Token& t = c.toks[k];
            if (t.is("(")) ++paren;
            else if (t.is(")")) --paren;
            else if (t.is("{")) ++brace;
            else if (t.is("}")) --brace;
            else if (t.is(";") && paren == 0 && brace == 0) {
                found = true;
                break;
            }
        }
        c.i = found ? k + 1 : body_close;
    }
    parse_members(c, c.src, type, body_close);
    c.i = body_close + 1;
    return type;
}

} // namespace

CompilationUnit parse_compilation_unit(std::string_view source) {
    std::vector<Token> toks = lex(source);
    Cursor c{toks, source};
    CompilationUnit unit;

    while (!c.done()) {
        if (c.peek().is("@")) { // file-level annotation (package-info style)
            c.take();
            c.take();
            if (c.peek().is("(")) skip_balanced(c, "(", ")");
            continue;
        }
        if (c.peek().is("package")) {
            c.take();
            std::vector<std::string> parts;
            while (!c.done() && !c.peek().is(";")) parts.push_back(c.take().text);
            c.expect(";");
            unit.package_name = join_tokens(parts);
            continue;
        }
        if (c.peek().is("import")) {
            c.take();
            std::vector<std::string> parts;
            while (!c.done() && !c.peek().is(";")) parts.push_back(c.take().text);
            c.expect(";");
            unit.imports.push_back(join_tokens(parts));
            continue;
        }
        if (c.peek().is(";")) {
            c.take();
            continue;
        }
        unit.types.push_back(parse_type_decl(c, {}));
    }
    return unit;
}

std::vector<CallSite> find_calls(std::string_view code) {
    std::vector<Token> toks;
    try {
        toks = lex(code);
    } catch (const LexError&) {
        return {};
    }
    std::vector<CallSite> calls;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.kind != Token::Kind::Identifier || is_keyword(t.text)) continue;
        if (!toks[i + 1].is("(")) continue;
        if (i > 0 && (toks[i - 1].is("new") || toks[i - 1].is("@"))) continue;
        // count top-level arguments
        int paren = 0, angle_unused = 0, bracket = 0, brace = 0;
        (void)angle_unused;
        int args = 0;
        bool any_token = false;
        for (std::size_t k = i + 1; k < toks.size(); ++k) {
            const Token& a = toks[k];
            if (a.is("(")) {
                ++paren;
                continue;
            }
            if (a.is(")")) {
                if (--paren == 0) break;
                continue;
            }
            if (a.is("[")) ++bracket;
            else if (a.is("]")) --bracket;
            else if (a.is("{")) ++brace;
            else if (a.is("}")) --brace;
            if (paren == 1 && bracket == 0 && brace == 0 && a.is(",")) {
                ++args;
                continue;
            }
            any_token = true;
        }
        calls.push_back(CallSite{t.text, any_token ? args + 1 : 0});
    }
    return calls;
}

} // namespace testgen::java
