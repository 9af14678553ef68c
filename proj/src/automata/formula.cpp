#include "autohom/formula.hpp"

#include <algorithm>
#include <set>

namespace autohom {

namespace {

struct Token {
  std::string text;  // "(" , ")" or an atom
  std::size_t line, column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < s.size();) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
    } else if (c == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '(' || c == ')') {
      out.push_back({std::string(1, c), line, col});
      ++col;
      ++i;
    } else {
      std::size_t j = i;
      while (j < s.size() && std::string_view(" \t\r\n();").find(s[j]) == std::string_view::npos) ++j;
      out.push_back({std::string(s.substr(i, j - i)), line, col});
      col += j - i;
      i = j;
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = parse();
    if (pos_ != toks_.size()) fail("trailing input after formula", toks_[pos_]);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, t.line, t.column); }
  [[noreturn]] void fail_eof(const std::string& msg) const {
    if (toks_.empty()) throw ParseError(msg, 1, 1);
    throw ParseError(msg, toks_.back().line, toks_.back().column);
  }

  const Token& next() {
    if (pos_ >= toks_.size()) fail_eof("unexpected end of formula");
    return toks_[pos_++];
  }

  std::string variable() {
    const Token& t = next();
    if (t.text == "(" || t.text == ")") fail("expected a variable", t);
    return t.text;
  }

  void close() {
    const Token& t = next();
    if (t.text != ")") fail("expected ')'", t);
  }

  Formula parse() {
    const Token& t = next();
    if (t.text == ")") fail("unexpected ')'", t);
    if (t.text != "(") {
      if (t.text == "true") return Formula::truth();
      if (t.text == "false") return Formula::falsity();
      fail("expected a formula, got '" + t.text + "'", t);
    }
    const Token& head = next();
    if (head.text == "(" || head.text == ")") fail("expected an operator or relation symbol", head);
    const std::string& op = head.text;
    if (op == "not") {
      Formula f = Formula::negate(parse());
      close();
      return f;
    }
    if (op == "and" || op == "or") {
      std::vector<Formula> fs;
      while (pos_ < toks_.size() && toks_[pos_].text != ")") fs.push_back(parse());
      close();
      return op == "and" ? Formula::conj(std::move(fs)) : Formula::disj(std::move(fs));
    }
    if (op == "implies") {
      Formula a = parse();
      Formula b = parse();
      close();
      return Formula::implies(std::move(a), std::move(b));
    }
    if (op == "exists" || op == "forall") {
      std::string x = variable();
      Formula body = parse();
      close();
      return op == "exists" ? Formula::exists(x, std::move(body)) : Formula::forall(x, std::move(body));
    }
    std::vector<std::string> args;
    while (pos_ < toks_.size() && toks_[pos_].text != ")") args.push_back(variable());
    close();
    auto need = [&](std::size_t n) {
      if (args.size() != n) fail("'" + op + "' expects " + std::to_string(n) + " arguments", head);
    };
    if (op == "=") {
      need(2);
      return Formula::equal(args[0], args[1]);
    }
    if (op == "equal-length") {
      need(2);
      return Formula::equal_length(args[0], args[1]);
    }
    if (op == "prefix") {
      need(2);
      return Formula::prefix(args[0], args[1]);
    }
    if (op == "last-letter") {
      need(2);
      return Formula::last_letter(args[0], args[1]);
    }
    if (args.empty()) fail("relation atom without arguments", head);
    return Formula::atom(op, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  auto list = [&](const std::string& head, const std::vector<std::string>& xs) {
    out += "(" + head;
    for (const auto& x : xs) out += " " + x;
    out += ")";
  };
  switch (f.kind) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Atom: list(f.name, f.args); return;
    case K::Equal: list("=", f.args); return;
    case K::EqualLength: list("equal-length", f.args); return;
    case K::Prefix: list("prefix", f.args); return;
    case K::LastLetter: list("last-letter " + f.name, f.args); return;
    case K::Not:
    case K::And:
    case K::Or:
    case K::Implies: {
      out += f.kind == K::Not ? "(not" : f.kind == K::And ? "(and" : f.kind == K::Or ? "(or" : "(implies";
      for (const auto& c : f.children) {
        out += " ";
        print(c, out);
      }
      out += ")";
      return;
    }
    case K::Exists:
    case K::Forall:
      out += (f.kind == K::Exists ? "(exists " : "(forall ") + f.name + " ";
      print(f.children[0], out);
      out += ")";
      return;
  }
}

void collect_order(const Formula& f, std::vector<std::string>& order) {
  auto note = [&](const std::string& x) {
    if (std::find(order.begin(), order.end(), x) == order.end()) order.push_back(x);
  };
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) note(f.name);
  for (const auto& x : f.args) note(x);
  for (const auto& c : f.children) collect_order(c, order);
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  for (const auto& x : f.args)
    if (std::find(bound.begin(), bound.end(), x) == bound.end() &&
        std::find(out.begin(), out.end(), x) == out.end())
      out.push_back(x);
  if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) {
    bound.push_back(f.name);
    collect_free(f.children[0], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : f.children) collect_free(c, bound, out);
}

struct Compiled {
  std::vector<std::string> vars;
  SyncAutomaton aut;
};

class Compiler {
 public:
  Compiler(const Formula& root, const Alphabet& alphabet, const Environment& env)
      : alphabet_(alphabet), env_(env) {
    std::vector<std::string> order;
    collect_order(root, order);
    for (std::size_t i = 0; i < order.size(); ++i) rank_[order[i]] = i;
    for (const auto& [name, aut] : env_)
      if (aut.alphabet() != alphabet_) throw ArgumentError("compile: relation " + name + " uses another alphabet");
  }

  Compiled run(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::True: return {{}, canonical(valid_convolutions(alphabet_, 0))};
      case K::False: return {{}, empty_language(alphabet_, 0)};
      case K::Atom: {
        auto it = env_.find(f.name);
        if (it == env_.end()) throw ArgumentError("compile: unresolved relation symbol " + f.name);
        if (it->second.arity() != f.args.size())
          throw ArgumentError("compile: " + f.name + " has arity " + std::to_string(it->second.arity()) +
                              ", used with " + std::to_string(f.args.size()) + " arguments");
        return atomic(it->second, f.args);
      }
      case K::Equal: return atomic(equality_relation(alphabet_), f.args);
      case K::EqualLength: return atomic(equal_length_relation(alphabet_), f.args);
      case K::Prefix: return atomic(prefix_relation(alphabet_), f.args);
      case K::LastLetter: {
        auto sym = alphabet_.find(f.name);
        if (!sym) throw ArgumentError("compile: last-letter of unknown symbol " + f.name);
        return atomic(last_letter_relation(alphabet_, *sym), f.args);
      }
      case K::Not: {
        Compiled c = run(f.children[0]);
        return {c.vars, complement(c.aut)};
      }
      case K::And:
      case K::Or: {
        const bool conj = f.kind == K::And;
        Compiled acc = run(conj ? Formula::truth() : Formula::falsity());
        for (const auto& child : f.children) acc = combine(acc, run(child), conj);
        return acc;
      }
      case K::Implies: {
        Compiled a = run(f.children[0]);
        a.aut = complement(a.aut);
        return combine(a, run(f.children[1]), false);
      }
      case K::Exists: return eliminate(run(f.children[0]), f.name);
      case K::Forall: {
        Compiled c = run(f.children[0]);
        c.aut = complement(c.aut);
        c = eliminate(std::move(c), f.name);
        c.aut = complement(c.aut);
        return c;
      }
    }
    throw ArgumentError("compile: unknown formula kind");
  }

  SyncAutomaton align(const Compiled& c, const std::vector<std::string>& target) const {
    std::vector<std::size_t> pos;
    for (const auto& x : c.vars) {
      auto it = std::find(target.begin(), target.end(), x);
      if (it == target.end()) throw ArgumentError("compile: free variable " + x + " not listed");
      pos.push_back(std::size_t(it - target.begin()));
    }
    bool identity = pos.size() == target.size();
    for (std::size_t i = 0; i < pos.size() && identity; ++i) identity = pos[i] == i;
    if (identity) return c.aut;
    return canonical(cylindrify(c.aut, target.size(), pos));
  }

 private:
  std::vector<std::string> sorted(std::vector<std::string> vs) const {
    std::sort(vs.begin(), vs.end(), [&](const std::string& a, const std::string& b) { return rank_.at(a) < rank_.at(b); });
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }

  // relation over positional arguments, possibly with repeated variables
  Compiled atomic(SyncAutomaton rel, const std::vector<std::string>& args) {
    const std::size_t k = args.size();
    std::vector<std::size_t> first;  // first occurrence position of each distinct variable
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t i = std::size_t(std::find(args.begin(), args.end(), args[j]) - args.begin());
      if (i == j) {
        first.push_back(j);
      } else {
        rel = intersect(rel, cylindrify(equality_relation(alphabet_), k, {i, j}));
      }
    }
    if (first.size() < k) rel = erase_coordinates(rel, first);
    std::vector<std::string> vars;
    for (std::size_t j : first) vars.push_back(args[j]);
    Compiled c{vars, canonical(rel)};
    std::vector<std::string> target = sorted(vars);
    return {target, align(c, target)};
  }

  Compiled combine(const Compiled& a, const Compiled& b, bool conj) const {
    std::vector<std::string> all = a.vars;
    all.insert(all.end(), b.vars.begin(), b.vars.end());
    std::vector<std::string> target = sorted(all);
    SyncAutomaton x = align(a, target), y = align(b, target);
    return {target, canonical(conj ? intersect(x, y) : unite(x, y))};
  }

  Compiled eliminate(Compiled c, const std::string& x) const {
    auto it = std::find(c.vars.begin(), c.vars.end(), x);
    if (it == c.vars.end()) return c;
    std::vector<std::size_t> keep;
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < c.vars.size(); ++i)
      if (c.vars[i] != x) {
        keep.push_back(i);
        vars.push_back(c.vars[i]);
      }
    return {vars, canonical(erase_coordinates(c.aut, keep))};
  }

  const Alphabet& alphabet_;
  const Environment& env_;
  std::map<std::string, std::size_t> rank_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(tokenize(text)).parse_all(); }

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

SyncAutomaton compile(const Formula& f, const Alphabet& alphabet, const Environment& env,
                      const std::vector<std::string>& free_order) {
  std::set<std::string> listed(free_order.begin(), free_order.end());
  if (listed.size() != free_order.size()) throw ArgumentError("compile: repeated variable in the free-variable order");
  for (const auto& x : free_variables(f))
    if (!listed.count(x)) throw ArgumentError("compile: free variable " + x + " not listed");
  Compiler c(f, alphabet, env);
  Compiled r = c.run(f);
  return c.align(r, free_order);
}

SyncAutomaton compile(const Formula& f, const Alphabet& alphabet, const Environment& env) {
  return compile(f, alphabet, env, free_variables(f));
}

bool evaluate_sentence(const Formula& f, const Alphabet& alphabet, const Environment& env) {
  if (!free_variables(f).empty()) throw ArgumentError("evaluate_sentence: formula has free variables");
  return !is_empty(compile(f, alphabet, env, {}));
}

}  // namespace autohom
