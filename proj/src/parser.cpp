#include <cctype>
#include <optional>
#include <sstream>

#include "amlab/errors.hpp"
#include "amlab/prelude.hpp"
#include "amlab/term.hpp"

namespace amlab {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '_';
}

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }

  [[nodiscard]] bool at_end() {
    skip_ws();
    return pos >= src.size();
  }

  // True when the next token starts an abstraction: '\' or a UTF-8 lambda.
  [[nodiscard]] bool peek_lambda() {
    skip_ws();
    if (pos < src.size() && src[pos] == '\\') return true;
    return pos + 1 < src.size() &&
           static_cast<unsigned char>(src[pos]) == 0xCE &&
           static_cast<unsigned char>(src[pos + 1]) == 0xBB;
  }

  void eat_lambda() {
    skip_ws();
    if (src[pos] == '\\') {
      ++pos;
    } else {
      pos += 2;
    }
  }

  [[nodiscard]] bool peek(char c) {
    skip_ws();
    return pos < src.size() && src[pos] == c;
  }

  void expect(char c, const char* what) {
    skip_ws();
    if (pos >= src.size() || src[pos] != c)
      throw ParseError(std::string("expected ") + what, pos);
    ++pos;
  }

  [[nodiscard]] bool peek_ident() {
    skip_ws();
    return pos < src.size() && ident_start(src[pos]);
  }

  std::string ident() {
    skip_ws();
    if (pos >= src.size() || !ident_start(src[pos]))
      throw ParseError("expected identifier", pos);
    std::size_t start = pos;
    while (pos < src.size() && ident_char(src[pos])) ++pos;
    return std::string(src.substr(start, pos - start));
  }
};

struct Parser {
  Lexer lex;

  TermPtr term() {
    if (lex.peek_lambda()) return abstraction();
    return application();
  }

  TermPtr abstraction() {
    lex.eat_lambda();
    std::vector<std::string> binders;
    binders.push_back(lex.ident());
    while (lex.peek_ident()) binders.push_back(lex.ident());
    lex.expect('.', "'.' after binders");
    TermPtr body = term();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = lam(*it, std::move(body));
    return body;
  }

  TermPtr application() {
    TermPtr acc = atom();
    for (;;) {
      if (lex.peek_lambda()) {
        // Abstraction body extends maximally right; it is the last argument.
        acc = app(std::move(acc), abstraction());
        return acc;
      }
      if (lex.peek_ident() || lex.peek('(')) {
        acc = app(std::move(acc), atom());
        continue;
      }
      return acc;
    }
  }

  TermPtr atom() {
    if (lex.peek('(')) {
      lex.expect('(', "'('");
      TermPtr inner = term();
      lex.expect(')', "')'");
      return inner;
    }
    return var(lex.ident());
  }
};

TermPtr expand_prelude(const TermPtr& t, std::set<std::string>& bound) {
  if (t->is_var()) {
    if (bound.count(t->var().name) == 0) {
      if (TermPtr body = prelude_lookup(t->var().name)) return body;
    }
    return t;
  }
  if (t->is_app())
    return app(expand_prelude(t->app().fn, bound),
               expand_prelude(t->app().arg, bound));
  const bool fresh_binding = bound.insert(t->lam().binder).second;
  TermPtr body = expand_prelude(t->lam().body, bound);
  if (fresh_binding) bound.erase(t->lam().binder);
  return lam(t->lam().binder, std::move(body));
}

}  // namespace

TermPtr parse_raw(std::string_view src) {
  Parser p{Lexer{src}};
  if (p.lex.at_end()) throw ParseError("empty input", 0);
  TermPtr t = p.term();
  if (!p.lex.at_end())
    throw ParseError("unexpected trailing input", p.lex.pos);
  return t;
}

TermPtr parse(std::string_view src) {
  TermPtr t = parse_raw(src);
  std::set<std::string> bound;
  return expand_prelude(t, bound);
}

namespace {

void print_term(const TermPtr& t, std::ostringstream& out, bool paren_app,
                bool paren_lam) {
  if (t->is_var()) {
    out << t->var().name;
    return;
  }
  if (t->is_lam()) {
    if (paren_lam) out << '(';
    out << '\\';
    const Term* cur = t.get();
    for (;;) {
      out << cur->lam().binder;
      if (cur->lam().body->is_lam()) {
        out << ' ';
        cur = cur->lam().body.get();
      } else {
        break;
      }
    }
    out << ". ";
    print_term(cur->lam().body, out, false, false);
    if (paren_lam) out << ')';
    return;
  }
  if (paren_app) out << '(';
  print_term(t->app().fn, out, false, true);
  out << ' ';
  print_term(t->app().arg, out, true, true);
  if (paren_app) out << ')';
}

void print_nameless(const NamelessPtr& t, std::ostringstream& out,
                    bool paren_app, bool paren_lam) {
  if (t->is_idx()) {
    out << t->idx().n;
    return;
  }
  if (t->is_lam()) {
    if (paren_lam) out << '(';
    out << "\\. ";
    print_nameless(t->lam().body, out, false, false);
    if (paren_lam) out << ')';
    return;
  }
  if (paren_app) out << '(';
  print_nameless(t->app().fn, out, false, true);
  out << ' ';
  print_nameless(t->app().arg, out, true, true);
  if (paren_app) out << ')';
}

}  // namespace

std::string print(const TermPtr& t) {
  std::ostringstream out;
  print_term(t, out, false, false);
  return out.str();
}

std::string print(const NamelessPtr& t) {
  std::ostringstream out;
  print_nameless(t, out, false, false);
  return out.str();
}

}  // namespace amlab
