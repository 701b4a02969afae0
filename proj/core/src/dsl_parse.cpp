#include <algorithm>
#include <cctype>

#include "geoctx/dsl.hpp"

namespace geoctx::dsl {

namespace {

enum class Tok { ident, punct, newline, end };

struct Token {
  Tok kind;
  std::string text;
  Loc loc;
};

bool ident_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char ch = text[i];
    Loc loc{line, col};
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (ch == '\n') {
      out.push_back({Tok::newline, "\\n", loc});
      advance(1);
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
    } else if (ident_char(ch)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::ident, std::string(text.substr(i, j - i)), loc});
      advance(j - i);
    } else if (text.substr(i, 2) == "->") {
      out.push_back({Tok::punct, "->", loc});
      advance(2);
    } else if (std::string_view("{}[]():,;=.").find(ch) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, ch), loc});
      advance(1);
    } else {
      throw ParseError(ErrorCode::SyntaxError, loc, std::string("unexpected character '") + ch + "'");
    }
  }
  out.push_back({Tok::end, "end of input", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Document document() {
    Document doc;
    skip_separators();
    while (peek().kind != Tok::end) {
      doc.decls.push_back(statement());
      end_statement();
      skip_separators();
    }
    return doc;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::end) ++pos_;
    return t;
  }
  bool at(const char* punct) const { return peek().kind == Tok::punct && peek().text == punct; }
  bool at_word(const char* word) const { return peek().kind == Tok::ident && peek().text == word; }

  [[noreturn]] void fail(const Token& t, const std::string& expected) const {
    std::string got = t.kind == Tok::ident ? "'" + t.text + "'" : t.kind == Tok::punct ? "'" + t.text + "'"
                      : t.kind == Tok::newline                  ? "end of line"
                                                                : "end of input";
    throw ParseError(ErrorCode::SyntaxError, t.loc, "expected " + expected + ", found " + got);
  }

  void expect(const char* punct) {
    if (!at(punct)) fail(peek(), std::string("'") + punct + "'");
    next();
  }
  void expect_word(const char* word) {
    if (!at_word(word)) fail(peek(), std::string("'") + word + "'");
    next();
  }
  Ident ident(const char* what) {
    if (peek().kind != Tok::ident) fail(peek(), what);
    const Token& t = next();
    return {t.text, t.loc};
  }
  int number() {
    const Token& t = peek();
    if (t.kind != Tok::ident || t.text.size() > 3 ||
        !std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(t, "a chart number");
    next();
    return std::stoi(t.text);
  }

  void skip_separators() {
    while (peek().kind == Tok::newline || at(";")) next();
  }
  void skip_newlines() {
    while (peek().kind == Tok::newline) next();
  }
  void end_statement() {
    if (peek().kind == Tok::newline || peek().kind == Tok::end || at(";") || at("}")) return;
    fail(peek(), "end of statement");
  }

  // Comma separated identifiers up to `close`; newlines allowed.
  std::vector<Ident> ident_list(const char* close, const char* what) {
    std::vector<Ident> out;
    skip_newlines();
    if (at(close)) {
      next();
      return out;
    }
    while (true) {
      out.push_back(ident(what));
      skip_newlines();
      if (at(close)) {
        next();
        return out;
      }
      expect(",");
      skip_newlines();
    }
  }

  std::vector<Mapping> mappings() {
    std::vector<Mapping> out;
    while (true) {
      Ident from = ident("an element");
      expect("->");
      Ident to = ident("an element");
      out.push_back({from, to});
      if (!at(",")) return out;
      next();
      skip_newlines();
    }
  }

  // Items of a `{ ... }` block, one per line.
  template <typename F>
  void block(F item) {
    expect("{");
    skip_separators();
    while (!at("}")) {
      if (peek().kind == Tok::end) fail(peek(), "'}'");
      item();
      end_statement();
      skip_separators();
    }
    next();
  }

  void count_object(Loc loc) {
    if (++objects_ > kMaxObjects)
      throw ParseError(ErrorCode::ResourceBound, loc, "more than " + std::to_string(kMaxObjects) + " objects");
    count_arrow(loc);  // its identity
  }
  void count_arrow(Loc loc) {
    if (++arrows_ > kMaxArrows)
      throw ParseError(ErrorCode::ResourceBound, loc, "more than " + std::to_string(kMaxArrows) + " arrows");
  }
  void check_elements(const std::vector<Ident>& elements, Loc loc) {
    if (static_cast<int>(elements.size()) > kMaxElements)
      throw ParseError(ErrorCode::ResourceBound, loc,
                       "more than " + std::to_string(kMaxElements) + " elements in one value set");
  }

  SheafRef sheaf_ref() {
    if (at_word("h") && peek(1).kind == Tok::punct && peek(1).text == "(") {
      Loc loc = next().loc;
      next();
      Ident u = ident("an object");
      expect(")");
      return {{u.name, loc}, true};
    }
    return {ident("a presheaf name"), false};
  }

  Decl statement() {
    const Token& t = peek();
    if (t.kind != Tok::ident) fail(t, "a declaration");
    if (t.text == "object") {
      next();
      Ident name = ident("an object name");
      count_object(name.loc);
      return ObjectDecl{name};
    }
    if (t.text == "arrow") {
      next();
      Ident name = ident("an arrow name");
      count_arrow(name.loc);
      expect(":");
      Ident src = ident("a source object");
      expect("->");
      Ident dst = ident("a target object");
      return ArrowDecl{name, src, dst};
    }
    if (t.text == "compose") {
      next();
      Ident outer = ident("an arrow");
      expect(".");
      Ident inner = ident("an arrow");
      expect("=");
      Ident result = ident("an arrow");
      return ComposeDecl{outer, inner, result};
    }
    if (t.text == "space") {
      SpaceDecl s;
      s.loc = next().loc;
      block([&] {
        if (at_word("points")) {
          next();
          while (peek().kind == Tok::ident) s.points.push_back(ident("a point"));
        } else if (at_word("open")) {
          next();
          OpenDecl o;
          o.name = ident("an open name");
          count_object(o.name.loc);
          expect("=");
          expect("{");
          o.points = ident_list("}", "a point");
          s.opens.push_back(std::move(o));
        } else {
          fail(peek(), "'points' or 'open'");
        }
      });
      return s;
    }
    if (t.text == "cover") {
      next();
      CoverDecl c;
      c.object = ident("an object");
      expect("=");
      if (at_word("none")) {
        next();
      } else {
        expect("[");
        c.family = ident_list("]", "an arrow");
      }
      return c;
    }
    if (t.text == "P") {
      ClassDecl p;
      p.loc = next().loc;
      expect("=");
      if (at_word("all")) {
        next();
      } else {
        expect("[");
        p.arrows = ident_list("]", "an arrow");
      }
      return p;
    }
    if (t.text == "presheaf") {
      next();
      PresheafDecl p;
      p.name = ident("a presheaf name");
      block([&] {
        if (at_word("at")) {
          next();
          ValuesAt v;
          v.object = ident("an object");
          expect(":");
          expect("{");
          v.elements = ident_list("}", "an element");
          check_elements(v.elements, v.object.loc);
          p.values.push_back(std::move(v));
        } else if (at_word("restrict")) {
          next();
          RestrictDecl r;
          r.arrow = ident("an arrow");
          expect(":");
          r.maps = mappings();
          p.restrictions.push_back(std::move(r));
        } else {
          fail(peek(), "'at' or 'restrict'");
        }
      });
      return p;
    }
    if (t.text == "morphism") {
      next();
      MorphismDecl m;
      m.name = ident("a morphism name");
      expect(":");
      m.source = sheaf_ref();
      expect("->");
      m.target = sheaf_ref();
      block([&] {
        expect_word("at");
        ComponentDecl c;
        c.object = ident("an object");
        expect(":");
        c.maps = mappings();
        m.components.push_back(std::move(c));
      });
      return m;
    }
    if (t.text == "glue") {
      next();
      GlueDecl g;
      g.name = ident("a gluing name");
      block([&] {
        if (at_word("chart")) {
          next();
          g.charts.push_back(ident("an object"));
        } else if (at_word("overlap")) {
          OverlapDecl o;
          o.loc = next().loc;
          expect("(");
          o.i = number();
          expect(",");
          o.j = number();
          expect(")");
          expect("=");
          expect("[");
          skip_newlines();
          while (!at("]")) {
            expect("(");
            Ident a = ident("an arrow");
            expect(",");
            Ident b = ident("an arrow");
            expect(")");
            o.pairs.emplace_back(a, b);
            skip_newlines();
            if (at("]")) break;
            expect(",");
            skip_newlines();
          }
          next();
          g.overlaps.push_back(std::move(o));
        } else {
          fail(peek(), "'chart' or 'overlap'");
        }
      });
      return g;
    }
    fail(t, "a declaration");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int objects_ = 0, arrows_ = 0;
};

}  // namespace

Document parse(std::string_view text) { return Parser(lex(text)).document(); }

}  // namespace geoctx::dsl
