#include "fogbisim/term_syntax.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "fogbisim/error.hpp"

namespace fogbisim {

namespace {

enum class Tok { Name, Var, LParen, RParen, Comma, Semi, Equals, Rec, Ref, Let, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint32_t var = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::size_t line, std::size_t column)
      : src_(src), line_(line), col_(column) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    auto single = [&](Tok k) {
      advance();
      t.kind = k;
      t.text = std::string(1, c);
      return t;
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case ';': return single(Tok::Semi);
      case '=': return single(Tok::Equals);
      default: break;
    }
    if (c == '[') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] != ']') {
        if (src_[pos_] == '\n') throw InputError("unterminated bracketed name", t.line, t.column);
        advance();
      }
      if (pos_ >= src_.size()) throw InputError("unterminated bracketed name", t.line, t.column);
      advance();
      t.kind = Tok::Name;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\'')) {
        advance();
      }
      t.text = std::string(src_.substr(start, pos_ - start));
      if (t.text == "rec") {
        t.kind = Tok::Rec;
      } else if (t.text == "ref") {
        t.kind = Tok::Ref;
      } else if (t.text == "let") {
        t.kind = Tok::Let;
      } else if (t.text.size() > 1 && t.text[0] == 'x' &&
                 t.text.find_first_not_of("0123456789", 1) == std::string::npos) {
        t.kind = Tok::Var;
        if (t.text.size() > 10) throw InputError("variable index too large", t.line, t.column);
        auto k = std::stoull(t.text.substr(1));
        if (k == 0 || k > 1000000) throw InputError("variable index out of range in '" + t.text + "'", t.line, t.column);
        t.var = static_cast<std::uint32_t>(k);
      } else {
        t.kind = Tok::Name;
      }
      return t;
    }
    throw InputError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_;
};

// Intermediate node: either a term node or an alias to another index.
struct PNode {
  bool alias = false;
  std::int64_t target = -1;  // alias target, -1 while unresolved
  Tag tag = 0;
  std::vector<std::uint32_t> children;
  Token where;
};

class Parser {
 public:
  Parser(TermStore& store, std::string_view text, const TermParseOptions& opts)
      : store_(store), lex_(text, opts.line, opts.column), opts_(opts) {
    cur_ = lex_.next();
  }

  TermRef run() {
    std::uint32_t root;
    if (cur_.kind == Tok::Let) {
      root = parse_lets();
    } else {
      root = parse_expr();
    }
    if (cur_.kind != Tok::End) fail("unexpected trailing input '" + cur_.text + "'");
    return store_.intern(build(root));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw InputError(msg, cur_.line, cur_.column); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) { throw InputError(msg, t.line, t.column); }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) fail(std::string("expected ") + what);
    cur_ = lex_.next();
  }

  std::uint32_t fresh(PNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t parse_expr() {
    Token t = cur_;
    switch (t.kind) {
      case Tok::Var: {
        cur_ = lex_.next();
        PNode n;
        n.tag = var_tag(t.var);
        n.where = t;
        return fresh(std::move(n));
      }
      case Tok::Rec: {
        cur_ = lex_.next();
        Token label = cur_;
        if (label.kind != Tok::Name) fail("expected a label after 'rec'");
        cur_ = lex_.next();
        expect(Tok::Equals, "'='");
        PNode a;
        a.alias = true;
        a.where = label;
        auto idx = fresh(std::move(a));
        scopes_.emplace_back(label.text, idx);
        auto body = parse_expr();
        scopes_.pop_back();
        nodes_[idx].target = body;
        return idx;
      }
      case Tok::Ref: {
        cur_ = lex_.next();
        Token label = cur_;
        if (label.kind != Tok::Name) fail("expected a label after 'ref'");
        cur_ = lex_.next();
        if (let_mode_) {
          auto it = lets_.find(label.text);
          if (it != lets_.end()) return it->second;
          PNode a;
          a.alias = true;
          a.where = label;
          auto idx = fresh(std::move(a));
          lets_.emplace(label.text, idx);
          return idx;
        }
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
          if (it->first == label.text) return it->second;
        }
        fail_at(label, "dangling reference '" + label.text + "'");
      }
      case Tok::Name: {
        cur_ = lex_.next();
        std::vector<std::uint32_t> args;
        if (cur_.kind == Tok::LParen) {
          cur_ = lex_.next();
          if (cur_.kind != Tok::RParen) {
            args.push_back(parse_expr());
            while (cur_.kind == Tok::Comma) {
              cur_ = lex_.next();
              args.push_back(parse_expr());
            }
          }
          expect(Tok::RParen, "')'");
        }
        auto id = store_.alphabet().find(t.text);
        if (!id) {
          if (!opts_.declare_unknown) fail_at(t, "unknown symbol '" + t.text + "'");
          id = store_.alphabet().add(t.text, static_cast<int>(args.size()));
        }
        int arity = store_.alphabet().at(*id).arity;
        if (static_cast<std::size_t>(arity) != args.size()) {
          fail_at(t, "symbol '" + t.text + "' has arity " + std::to_string(arity) + " but got " +
                         std::to_string(args.size()) + " argument(s)");
        }
        PNode n;
        n.tag = *id;
        n.children = std::move(args);
        n.where = t;
        return fresh(std::move(n));
      }
      default:
        fail(cur_.kind == Tok::End ? "unexpected end of term" : "unexpected '" + cur_.text + "'");
    }
  }

  std::uint32_t parse_lets() {
    let_mode_ = true;
    std::int64_t root = -1;
    std::map<std::string, bool> bound;
    while (cur_.kind == Tok::Let) {
      cur_ = lex_.next();
      Token name = cur_;
      if (name.kind != Tok::Name) fail("expected a binding name after 'let'");
      cur_ = lex_.next();
      expect(Tok::Equals, "'='");
      if (bound[name.text]) fail_at(name, "duplicate binding '" + name.text + "'");
      bound[name.text] = true;
      std::uint32_t idx;
      auto it = lets_.find(name.text);
      if (it != lets_.end()) {
        idx = it->second;
      } else {
        PNode a;
        a.alias = true;
        a.where = name;
        idx = fresh(std::move(a));
        lets_.emplace(name.text, idx);
      }
      auto body = parse_expr();
      nodes_[idx].target = body;
      if (root < 0) root = idx;
      if (cur_.kind == Tok::Semi) cur_ = lex_.next();
    }
    for (const auto& [label, idx] : lets_) {
      if (nodes_[idx].target < 0) fail_at(nodes_[idx].where, "dangling reference '" + label + "'");
    }
    return static_cast<std::uint32_t>(root);
  }

  TermGraph build(std::uint32_t root) {
    const std::size_t n = nodes_.size();
    std::vector<std::int64_t> resolved(n, -1);
    std::function<std::uint32_t(std::uint32_t)> resolve = [&](std::uint32_t i) -> std::uint32_t {
      std::vector<std::uint32_t> chain;
      std::uint32_t cur = i;
      while (nodes_[cur].alias) {
        if (resolved[cur] >= 0) {
          cur = static_cast<std::uint32_t>(resolved[cur]);
          break;
        }
        for (auto c : chain) {
          if (c == cur) fail_at(nodes_[i].where, "unguarded recursion at '" + nodes_[i].where.text + "'");
        }
        chain.push_back(cur);
        cur = static_cast<std::uint32_t>(nodes_[cur].target);
      }
      for (auto c : chain) resolved[c] = cur;
      return cur;
    };
    std::vector<std::int64_t> out_index(n, -1);
    TermGraph g;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (nodes_[i].alias) continue;
      out_index[i] = static_cast<std::int64_t>(g.nodes.size());
      g.nodes.push_back({nodes_[i].tag, {}});
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (nodes_[i].alias) continue;
      auto& out = g.nodes[static_cast<std::size_t>(out_index[i])];
      for (auto c : nodes_[i].children) out.children.push_back(static_cast<std::uint32_t>(out_index[resolve(c)]));
    }
    g.root = static_cast<std::uint32_t>(out_index[resolve(root)]);
    return g;
  }

  TermStore& store_;
  Lexer lex_;
  TermParseOptions opts_;
  Token cur_;
  std::vector<PNode> nodes_;
  std::vector<std::pair<std::string, std::uint32_t>> scopes_;
  std::map<std::string, std::uint32_t> lets_;
  bool let_mode_ = false;
};

void write_leaf(std::ostream& out, const TermStore& store, TermRef t) {
  if (store.is_var(t)) {
    out << 'x' << store.var_index(t);
  } else {
    out << store.alphabet().at(store.symbol(t)).name;
  }
}

}  // namespace

TermRef parse_term(TermStore& store, std::string_view text, const TermParseOptions& opts) {
  Parser p(store, text, opts);
  return p.run();
}

std::string format_term(const TermStore& store, TermRef t) {
  int next_label = 0;
  std::vector<std::pair<TermRef, int>> stack;  // nodes being printed, label or -1
  std::function<std::string(TermRef)> go = [&](TermRef r) -> std::string {
    for (auto& [node, label] : stack) {
      if (node == r) {
        if (label < 0) label = next_label++;
        return "ref L" + std::to_string(label);
      }
    }
    std::ostringstream out;
    const auto& ch = store.children(r);
    if (ch.empty()) {
      write_leaf(out, store, r);
      return out.str();
    }
    stack.emplace_back(r, -1);
    out << store.alphabet().at(store.symbol(r)).name << '(';
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (i) out << ", ";
      out << go(ch[i]);
    }
    out << ')';
    int label = stack.back().second;
    stack.pop_back();
    if (label < 0) return out.str();
    return "rec L" + std::to_string(label) + " = " + out.str();
  };
  return go(t);
}

std::string format_let(const TermStore& store, TermRef t) {
  TermGraph g = store.to_graph(t);
  std::vector<std::int64_t> binding(g.nodes.size(), -1);
  std::int64_t k = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (i == 0 || !g.nodes[i].children.empty()) binding[i] = k++;
  }
  std::ostringstream out;
  auto leaf = [&](std::uint32_t i) {
    Tag tag = g.nodes[i].tag;
    if (tag < 0) {
      out << 'x' << -tag;
    } else {
      out << store.alphabet().at(tag).name;
    }
  };
  bool first = true;
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) {
    if (binding[i] < 0) continue;
    if (!first) out << "; ";
    first = false;
    out << "let t" << binding[i] << " = ";
    const auto& nd = g.nodes[i];
    if (nd.children.empty()) {
      leaf(i);
      continue;
    }
    out << store.alphabet().at(nd.tag).name << '(';
    for (std::size_t j = 0; j < nd.children.size(); ++j) {
      if (j) out << ", ";
      auto c = nd.children[j];
      if (g.nodes[c].children.empty()) {
        leaf(c);
      } else {
        out << "ref t" << binding[c];
      }
    }
    out << ')';
  }
  return out.str();
}

}  // namespace fogbisim
