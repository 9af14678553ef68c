#include "autohom/io.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace autohom {

namespace {

struct Tok {
  std::string text;
  std::size_t col;
};

struct Line {
  std::size_t number;
  std::vector<Tok> toks;
};

std::vector<Line> split_lines(std::string_view text, std::size_t first_line = 1) {
  std::vector<Line> out;
  std::size_t number = first_line;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view s = text.substr(start, end - start);
    Line line{number, {}};
    for (std::size_t i = 0; i < s.size();) {
      if (s[i] == ' ' || s[i] == '\t' || s[i] == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
      line.toks.push_back({std::string(s.substr(i, j - i)), i + 1});
      i = j;
    }
    if (!line.toks.empty() && line.toks[0].text[0] != '#') out.push_back(std::move(line));
    ++number;
    start = end + 1;
  }
  return out;
}

[[noreturn]] void fail(const Line& l, const Tok& t, const std::string& msg) { throw ParseError(msg, l.number, t.col); }
[[noreturn]] void fail(const Line& l, const std::string& msg) { throw ParseError(msg, l.number, 1); }

std::size_t parse_count(const Line& l, const Tok& t) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(t.text, &used);
    if (used != t.text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(l, t, "expected a number, got '" + t.text + "'");
  }
}

// Text after token `from`, joined by single spaces.
std::string rest(const Line& l, std::size_t from) {
  std::string s;
  for (std::size_t i = from; i < l.toks.size(); ++i) s += (i > from ? " " : "") + l.toks[i].text;
  return s;
}

// Splits "{a,b}" or "(a,b)" at top-level commas.
std::vector<std::string> split_group(const Line& l, const Tok& at, const std::string& s, char open, char close) {
  if (s.size() < 2 || s.front() != open || s.back() != close)
    fail(l, at, std::string("expected ") + open + "..." + close + ", got '" + s + "'");
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  bool any = false;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    if (c != ' ') {
      cur += c;
      any = true;
    }
  }
  if (any || !out.empty()) out.push_back(cur);
  for (auto& x : out)
    if (x.empty()) fail(l, at, "empty entry in '" + s + "'");
  return out;
}

// ---- automata -------------------------------------------------------------

struct RawAutomaton {
  std::optional<std::size_t> arity;
  std::optional<Alphabet> alphabet;
  std::vector<std::string> names;
  std::map<std::string, State> index;
  std::vector<bool> initial, accepting;
  std::vector<std::optional<std::pair<Tok, std::string>>> label;  // label text with its position
  struct Trans {
    State from, to;
    std::vector<Symbol> column;
  };
  std::vector<Trans> trans;
};

RawAutomaton parse_raw(const std::vector<Line>& lines, const Alphabet* inherited) {
  RawAutomaton r;
  if (inherited) r.alphabet = *inherited;
  std::vector<const Line*> pending;
  for (const Line& l : lines) {
    const std::string& kw = l.toks[0].text;
    if (kw == "arity") {
      if (l.toks.size() != 2) fail(l, "usage: arity K");
      r.arity = parse_count(l, l.toks[1]);
    } else if (kw == "alphabet") {
      std::vector<std::string> syms;
      for (std::size_t i = 1; i < l.toks.size(); ++i) syms.push_back(l.toks[i].text);
      Alphabet a;
      try {
        a = Alphabet(syms);
      } catch (const ArgumentError& e) {
        fail(l, e.what());
      }
      if (inherited && a != *inherited) fail(l, "alphabet differs from the enclosing presentation");
      r.alphabet = a;
    } else if (kw == "state") {
      if (l.toks.size() < 2) fail(l, "usage: state NAME [initial] [accepting] [label {..}]");
      const std::string& name = l.toks[1].text;
      if (r.index.count(name)) fail(l, l.toks[1], "duplicate state " + name);
      r.index[name] = State(r.names.size());
      r.names.push_back(name);
      r.initial.push_back(false);
      r.accepting.push_back(false);
      r.label.emplace_back();
      for (std::size_t i = 2; i < l.toks.size(); ++i) {
        const std::string& f = l.toks[i].text;
        if (f == "initial") r.initial.back() = true;
        else if (f == "accepting") r.accepting.back() = true;
        else if (f == "label") {
          if (i + 1 >= l.toks.size()) fail(l, l.toks[i], "label needs a set");
          r.label.back() = std::make_pair(l.toks[i + 1], rest(l, i + 1));
          break;
        } else {
          fail(l, l.toks[i], "unknown state flag '" + f + "'");
        }
      }
    } else if (kw == "trans") {
      pending.push_back(&l);
    } else {
      fail(l, l.toks[0], "unknown keyword '" + kw + "'");
    }
  }
  if (!r.arity) throw ParseError("missing arity line", lines.empty() ? 1 : lines.front().number, 1);
  if (!r.alphabet) throw ParseError("missing alphabet line", lines.empty() ? 1 : lines.front().number, 1);
  const Alphabet& alpha = *r.alphabet;
  for (const Line* lp : pending) {
    const Line& l = *lp;
    if (l.toks.size() < 4) fail(l, "usage: trans FROM COLUMN TO");
    auto state = [&](const Tok& t) {
      auto it = r.index.find(t.text);
      if (it == r.index.end()) fail(l, t, "unknown state " + t.text);
      return it->second;
    };
    std::string col;
    for (std::size_t i = 2; i + 1 < l.toks.size(); ++i) col += l.toks[i].text;
    std::vector<std::string> syms;
    if (!col.empty() && col.front() == '(') syms = split_group(l, l.toks[2], col, '(', ')');
    else syms = {col};
    if (syms.size() != *r.arity)
      fail(l, l.toks[2], "column has " + std::to_string(syms.size()) + " entries, arity is " + std::to_string(*r.arity));
    RawAutomaton::Trans t{state(l.toks[1]), state(l.toks.back()), {}};
    bool all_pad = true;
    for (const auto& s : syms) {
      if (s == kPadGlyph) {
        t.column.push_back(alpha.pad());
        continue;
      }
      auto x = alpha.find(s);
      if (!x) fail(l, l.toks[2], "unknown symbol '" + s + "'");
      t.column.push_back(*x);
      all_pad = false;
    }
    if (all_pad) fail(l, l.toks[2], "the all-pad column is not a letter");
    r.trans.push_back(std::move(t));
  }
  return r;
}

SyncAutomaton to_sync(const RawAutomaton& r) {
  letter_count(r.alphabet->size(), *r.arity);
  SyncAutomaton a(*r.alphabet, *r.arity);
  for (std::size_t s = 0; s < r.names.size(); ++s) a.add_state(r.initial[s], r.accepting[s]);
  for (const auto& t : r.trans) a.add_transition(t.from, t.column, t.to);
  return a;
}

std::string format_column(const Alphabet& a, const std::vector<Symbol>& col) {
  auto sym = [&](Symbol x) { return x == a.pad() ? std::string(kPadGlyph) : a.symbol(x); };
  if (col.size() == 1) return sym(col[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < col.size(); ++i) s += (i ? "," : "") + sym(col[i]);
  return s + ")";
}

std::string alphabet_line(const Alphabet& a) {
  std::string s = "alphabet";
  for (const auto& x : a.symbols()) s += " " + x;
  return s + "\n";
}

// Resolves "{x,y}" against the element names of b.
Mask parse_label(const Tok& at, const Line& l, const std::string& text, const FiniteStructure& b) {
  Mask m = 0;
  for (const auto& name : split_group(l, at, text, '{', '}')) {
    auto e = b.find(name);
    if (!e) fail(l, at, "unknown target element '" + name + "'");
    m |= Mask(1) << *e;
  }
  return m;
}

std::vector<Line> state_lines(const std::vector<Line>& lines) {
  std::vector<Line> out;
  for (const auto& l : lines)
    if (l.toks[0].text == "state") out.push_back(l);
  return out;
}

// Deterministic complete Moore machine from a raw arity-1 automaton.
Classifier to_machine(const RawAutomaton& r, const std::vector<Line>& lines, const FiniteStructure& b,
                      bool complete, Mask unlabeled) {
  if (*r.arity != 1) throw ParseError("expected arity 1", lines.front().number, 1);
  if (b.size() > kMaxTarget) throw SizeGuardExceeded("target has more than 63 elements");
  const std::size_t n = r.names.size(), m = r.alphabet->size();
  Classifier c;
  c.alphabet = *r.alphabet;
  c.targets = b.size();
  c.next.assign(n + 1, std::vector<State>(m, State(n)));  // state n is an implicit sink
  c.label.assign(n + 1, unlabeled);
  auto sl = state_lines(lines);
  std::size_t initials = 0;
  for (State s = 0; s < n; ++s) {
    if (r.initial[s]) {
      c.initial = s;
      ++initials;
    }
    if (r.label[s]) c.label[s] = parse_label(r.label[s]->first, sl[s], r.label[s]->second, b);
  }
  if (initials != 1) throw ParseError("expected exactly one initial state", lines.front().number, 1);
  std::vector<std::vector<bool>> set(n, std::vector<bool>(m, false));
  for (const auto& t : r.trans) {
    if (set[t.from][t.column[0]])
      throw ParseError("nondeterministic transition from " + r.names[t.from], lines.front().number, 1);
    set[t.from][t.column[0]] = true;
    c.next[t.from][t.column[0]] = t.to;
  }
  if (complete)
    for (State s = 0; s < n; ++s)
      for (Symbol x = 0; x < m; ++x)
        if (!set[s][x])
          throw ParseError("state " + r.names[s] + " has no transition on " + r.alphabet->symbol(x),
                           sl[s].number, 1);
  return c;
}

std::string format_machine(const Classifier& c, const FiniteStructure& b, Mask unlabeled) {
  std::ostringstream os;
  os << "arity 1\n" << alphabet_line(c.alphabet);
  for (State s = 0; s < c.num_states(); ++s) {
    os << "state q" << s;
    if (s == c.initial) os << " initial";
    if (c.label[s] != unlabeled) os << " label " << mask_to_string(c.label[s], b);
    os << "\n";
  }
  for (State s = 0; s < c.num_states(); ++s)
    for (Symbol x = 0; x < c.alphabet.size(); ++x)
      os << "trans q" << s << " " << c.alphabet.symbol(x) << " q" << c.next[s][x] << "\n";
  return os.str();
}

}  // namespace

// ---- structures -----------------------------------------------------------

FiniteStructure parse_structure(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines[0].toks[0].text != "signature")
    throw ParseError("structure must start with a signature line", lines.empty() ? 1 : lines[0].number, 1);
  std::vector<Predicate> preds;
  for (std::size_t i = 1; i < lines[0].toks.size(); ++i) {
    const Tok& t = lines[0].toks[i];
    auto slash = t.text.rfind('/');
    if (slash == std::string::npos || slash == 0) fail(lines[0], t, "expected NAME/ARITY, got '" + t.text + "'");
    Tok ar{t.text.substr(slash + 1), t.col + slash + 1};
    preds.push_back({t.text.substr(0, slash), parse_count(lines[0], ar)});
  }
  Signature sig;
  try {
    sig = Signature(preds);
  } catch (const ArgumentError& e) {
    fail(lines[0], e.what());
  }
  if (lines.size() < 2 || lines[1].toks[0].text != "domain")
    throw ParseError("expected a domain line after the signature", lines.size() < 2 ? lines[0].number : lines[1].number, 1);
  std::vector<std::string> names;
  for (std::size_t i = 1; i < lines[1].toks.size(); ++i) names.push_back(lines[1].toks[i].text);
  FiniteStructure a;
  try {
    a = FiniteStructure(sig, names);
  } catch (const ArgumentError& e) {
    fail(lines[1], e.what());
  }
  std::vector<std::vector<Tuple>> tuples(sig.size());
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const Line& l = lines[li];
    auto p = sig.find(l.toks[0].text);
    if (!p) fail(l, l.toks[0], "unknown predicate '" + l.toks[0].text + "'");
    if (l.toks.size() - 1 != sig[*p].arity)
      fail(l, l.toks[0], sig[*p].name + " has arity " + std::to_string(sig[*p].arity));
    Tuple t;
    for (std::size_t i = 1; i < l.toks.size(); ++i) {
      auto e = a.find(l.toks[i].text);
      if (!e) fail(l, l.toks[i], "unknown element '" + l.toks[i].text + "'");
      t.push_back(*e);
    }
    tuples[*p].push_back(std::move(t));
  }
  for (std::size_t p = 0; p < sig.size(); ++p) a.set_tuples(p, std::move(tuples[p]));
  return a;
}

std::string format_structure(const FiniteStructure& a) {
  std::ostringstream os;
  os << "signature";
  for (const auto& p : a.signature().predicates()) os << " " << p.name << "/" << p.arity;
  os << "\ndomain";
  for (const auto& n : a.names()) os << " " << n;
  os << "\n";
  for (std::size_t p = 0; p < a.signature().size(); ++p)
    for (const auto& t : a.tuples(p)) {
      os << a.signature()[p].name;
      for (Element e : t) os << " " << a.name(e);
      os << "\n";
    }
  return os.str();
}

// ---- automata -------------------------------------------------------------

SyncAutomaton parse_automaton(std::string_view text, const Alphabet* inherited) {
  auto lines = split_lines(text);
  RawAutomaton r = parse_raw(lines, inherited);
  for (std::size_t s = 0; s < r.names.size(); ++s)
    if (r.label[s]) throw ParseError("labels are only allowed in classifiers and colorings", lines.front().number, 1);
  return to_sync(r);
}

std::string format_automaton(const SyncAutomaton& a, bool with_alphabet) {
  std::ostringstream os;
  os << "arity " << a.arity() << "\n";
  if (with_alphabet) os << alphabet_line(a.alphabet());
  for (State s = 0; s < a.num_states(); ++s) {
    os << "state q" << s;
    if (a.is_initial(s)) os << " initial";
    if (a.is_accepting(s)) os << " accepting";
    os << "\n";
  }
  for (State s = 0; s < a.num_states(); ++s)
    for (const auto& [l, t] : a.edges(s))
      os << "trans q" << s << " "
         << format_column(a.alphabet(), decode_letter(l, a.alphabet().size(), a.arity())) << " q" << t << "\n";
  return os.str();
}

// ---- presentations --------------------------------------------------------

Presentation parse_presentation(std::string_view text, const std::string& base_dir) {
  auto lines = split_lines(text);
  Presentation p;
  std::optional<Signature> sig;
  std::optional<SyncAutomaton> domain;
  std::map<std::string, SyncAutomaton> rels;

  auto block = [&](std::size_t& li, std::size_t at) -> SyncAutomaton {
    const Line& l = lines[li];
    if (l.toks.size() != at + 1) fail(l, "expected '{' or @PATH");
    const Tok& t = l.toks[at];
    if (t.text.size() > 1 && t.text[0] == '@') {
      std::string path = t.text.substr(1);
      if (path[0] != '/') path = base_dir + "/" + path;
      try {
        return parse_automaton(read_input(path), &p.alphabet);
      } catch (const ParseError& e) {
        fail(l, t, path + ":" + e.what());
      }
    }
    if (t.text != "{") fail(l, t, "expected '{' or @PATH");
    std::vector<Line> inner;
    for (++li; li < lines.size() && lines[li].toks[0].text != "}"; ++li) inner.push_back(lines[li]);
    if (li == lines.size()) fail(l, t, "unterminated block");
    if (inner.empty()) fail(l, t, "empty block");
    return to_sync(parse_raw(inner, &p.alphabet));
  };

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const Line& l = lines[li];
    const std::string& kw = l.toks[0].text;
    if (kw == "signature") {
      std::string s = "signature";
      for (std::size_t i = 1; i < l.toks.size(); ++i) s += " " + l.toks[i].text;
      try {
        sig = parse_structure(s + "\ndomain\n").signature();
      } catch (const ParseError& e) {
        fail(l, e.what());
      }
    } else if (kw == "alphabet") {
      std::vector<std::string> syms;
      for (std::size_t i = 1; i < l.toks.size(); ++i) syms.push_back(l.toks[i].text);
      try {
        p.alphabet = Alphabet(syms);
      } catch (const ArgumentError& e) {
        fail(l, e.what());
      }
    } else if (kw == "domain") {
      if (domain) fail(l, "duplicate domain");
      domain = block(li, 1);
    } else if (kw == "relation") {
      if (l.toks.size() < 2) fail(l, "usage: relation NAME {..} | relation NAME @PATH");
      std::string name = l.toks[1].text;
      if (rels.count(name)) fail(l, l.toks[1], "duplicate relation " + name);
      rels[name] = block(li, 2);
    } else {
      fail(l, l.toks[0], "unknown keyword '" + kw + "'");
    }
  }
  std::size_t last = lines.empty() ? 1 : lines.back().number;
  if (!sig) throw ParseError("missing signature", last, 1);
  if (!domain) throw ParseError("missing domain", last, 1);
  p.signature = *sig;
  p.domain = *domain;
  for (const auto& pred : sig->predicates()) {
    auto it = rels.find(pred.name);
    if (it == rels.end()) throw ParseError("missing relation " + pred.name, last, 1);
    p.relations.push_back(it->second);
    rels.erase(it);
  }
  if (!rels.empty()) throw ParseError("relation " + rels.begin()->first + " is not in the signature", last, 1);
  require_valid(p);
  return p;
}

std::string format_presentation(const Presentation& p) {
  std::ostringstream os;
  os << "signature";
  for (const auto& pr : p.signature.predicates()) os << " " << pr.name << "/" << pr.arity;
  os << "\n" << alphabet_line(p.alphabet);
  auto block = [&](const SyncAutomaton& a) {
    os << " {\n";
    std::istringstream in(format_automaton(a, false));
    for (std::string line; std::getline(in, line);) os << "  " << line << "\n";
    os << "}\n";
  };
  os << "domain";
  block(p.domain);
  for (std::size_t i = 0; i < p.signature.size(); ++i) {
    os << "relation " << p.signature[i].name;
    block(p.relations[i]);
  }
  return os.str();
}

// ---- classifiers and colorings --------------------------------------------

Classifier parse_classifier(std::string_view text, const FiniteStructure& b) {
  auto lines = split_lines(text);
  RawAutomaton r = parse_raw(lines, nullptr);
  Classifier c = to_machine(r, lines, b, true, kOutside);
  c.next.pop_back();
  c.label.pop_back();
  return c;
}

std::string format_classifier(const Classifier& c, const FiniteStructure& b) { return format_machine(c, b, kOutside); }

RegularColoring parse_coloring(std::string_view text, const FiniteStructure& b) {
  auto lines = split_lines(text);
  RawAutomaton r = parse_raw(lines, nullptr);
  Classifier c = to_machine(r, lines, b, false, 0);
  RegularColoring out;
  for (Element e = 0; e < b.size(); ++e) {
    SyncAutomaton a(c.alphabet, 1);
    for (State s = 0; s < c.num_states(); ++s) a.add_state(s == c.initial, (c.label[s] >> e) & 1);
    for (State s = 0; s < c.num_states(); ++s)
      for (Symbol x = 0; x < c.alphabet.size(); ++x) a.add_transition(s, x, c.next[s][x]);
    out.classes.push_back(canonical(a));
  }
  return out;
}

std::string format_coloring(const RegularColoring& c, const FiniteStructure& b) {
  if (c.classes.size() != b.size()) throw ArgumentError("format_coloring: one class per target element expected");
  if (c.classes.empty()) throw ArgumentError("format_coloring: empty target");
  return format_machine(coloring_machine(c, c.classes[0].alphabet()), b, 0);
}

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path);
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace autohom
