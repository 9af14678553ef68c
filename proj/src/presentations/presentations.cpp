#include "autohom/presentations.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace autohom {

namespace {

constexpr const char* kDomainSymbol = "__dom";

Alphabet ab_alphabet() { return Alphabet({"a", "b"}); }

std::vector<Symbol> column_of(Letter l, const SyncAutomaton& a) {
  return decode_letter(l, a.alphabet().size(), a.arity());
}

// Deterministic automaton that may additionally read all-pad columns after
// acceptance, ending in a final state F (index num_states()).
struct Padded {
  SyncAutomaton aut;
  State finished;
};

Padded padded(const SyncAutomaton& a) {
  SyncAutomaton c = canonical(normalize(a));
  return {c, State(c.num_states())};
}

// Convolution-level product of automata over alphabets of sizes m and n.
SyncAutomaton pair_product(const SyncAutomaton& x, const SyncAutomaton& y, const Alphabet& pair) {
  const std::size_t k = x.arity();
  const std::size_t m = x.alphabet().size(), n = y.alphabet().size();
  Padded px = padded(x), py = padded(y);
  SyncAutomaton out(pair, k);
  const std::vector<Symbol> all_pad_x(k, Symbol(m)), all_pad_y(k, Symbol(n));

  auto moves = [](const Padded& p, State s, const std::vector<Symbol>& allpad) {
    std::vector<std::pair<std::vector<Symbol>, State>> r;
    if (s != p.finished)
      for (const auto& [l, t] : p.aut.edges(s)) r.push_back({column_of(l, p.aut), t});
    if (s == p.finished || p.aut.is_accepting(s)) r.push_back({allpad, p.finished});
    return r;
  };
  auto accepting = [](const Padded& p, State s) { return s == p.finished || p.aut.is_accepting(s); };

  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> queue;
  auto get = [&](State a, State b) {
    auto [it, fresh] = index.emplace(std::make_pair(a, b), State(queue.size()));
    if (fresh) {
      queue.push_back({a, b});
      out.add_state(false, accepting(px, a) && accepting(py, b));
    }
    return it->second;
  };
  for (State a : px.aut.initial_states())
    for (State b : py.aut.initial_states()) out.set_initial(get(a, b));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto [a, b] = queue[i];
    auto mx = moves(px, a, all_pad_x);
    auto my = moves(py, b, all_pad_y);
    for (const auto& [cx, ta] : mx)
      for (const auto& [cy, tb] : my) {
        if (cx == all_pad_x && cy == all_pad_y) continue;
        std::vector<Symbol> col(k);
        for (std::size_t j = 0; j < k; ++j) col[j] = Symbol(cx[j] * (n + 1) + cy[j]);
        State target = get(ta, tb);
        out.add_transition(State(i), col, target);
      }
  }
  return canonical(normalize(out));
}

Formula relativize(const Formula& f) {
  using K = Formula::Kind;
  if (f.kind == K::Atom && f.name == kDomainSymbol)
    throw ArgumentError(std::string("formula uses the reserved symbol ") + kDomainSymbol);
  Formula g = f;
  for (auto& c : g.children) c = relativize(c);
  if (f.kind == K::Exists)
    return Formula::exists(f.name, Formula::conj({Formula::atom(kDomainSymbol, {f.name}), g.children[0]}));
  if (f.kind == K::Forall)
    return Formula::forall(f.name, Formula::implies(Formula::atom(kDomainSymbol, {f.name}), g.children[0]));
  return g;
}

Environment environment(const Presentation& p) {
  Environment env;
  for (std::size_t i = 0; i < p.signature.size(); ++i) env[p.signature[i].name] = p.relations[i];
  env[kDomainSymbol] = p.domain;
  return env;
}

std::string var(Element e) { return "x" + std::to_string(e); }

}  // namespace

const SyncAutomaton& Presentation::relation(std::string_view name) const {
  return relations.at(signature.index_of(name));
}

std::vector<Violation> validate(const Presentation& p) {
  std::vector<Violation> out;
  if (p.domain.arity() != 1) out.push_back({"", "domain automaton has arity " + std::to_string(p.domain.arity())});
  if (p.domain.alphabet() != p.alphabet) out.push_back({"", "domain automaton uses another alphabet"});
  if (p.alphabet.size() == 0) out.push_back({"", "empty alphabet"});
  if (p.relations.size() != p.signature.size()) {
    out.push_back({"", "expected " + std::to_string(p.signature.size()) + " relations, got " +
                           std::to_string(p.relations.size())});
    return out;
  }
  if (!out.empty()) return out;
  for (std::size_t i = 0; i < p.signature.size(); ++i) {
    const Predicate& pred = p.signature[i];
    const SyncAutomaton& r = p.relations[i];
    if (r.alphabet() != p.alphabet) {
      out.push_back({pred.name, "uses another alphabet"});
      continue;
    }
    if (r.arity() != pred.arity) {
      out.push_back({pred.name, "arity " + std::to_string(r.arity()) + " but the predicate has arity " +
                                    std::to_string(pred.arity)});
      continue;
    }
    auto outside = shortest_accepted(difference(r, domain_power(p, pred.arity)));
    if (outside) {
      std::string t;
      for (const auto& w : *outside) t += (t.empty() ? "" : ",") + p.alphabet.format_word(w);
      out.push_back({pred.name, "accepts (" + t + ") outside the domain"});
    }
  }
  return out;
}

void require_valid(const Presentation& p) {
  auto v = validate(p);
  if (v.empty()) return;
  std::string msg = "invalid presentation:";
  for (const auto& x : v) msg += " [" + (x.relation.empty() ? std::string() : x.relation + ": ") + x.message + "]";
  throw ArgumentError(msg);
}

SyncAutomaton domain_power(const Presentation& p, std::size_t k) {
  SyncAutomaton r = valid_convolutions(p.alphabet, k);
  for (std::size_t i = 0; i < k; ++i) r = intersect(r, cylindrify(p.domain, k, {i}));
  return canonical(r);
}

Word finite_word(Element i) { return Word(i, Symbol(0)); }

Presentation from_finite(const FiniteStructure& a) {
  Presentation p;
  p.signature = a.signature();
  p.alphabet = ab_alphabet();
  std::vector<WordTuple> dom;
  for (Element e = 0; e < a.size(); ++e) dom.push_back({finite_word(e)});
  p.domain = finite_relation(p.alphabet, 1, dom);
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    std::vector<WordTuple> ts;
    for (const auto& t : a.tuples(r)) {
      WordTuple w;
      for (Element e : t) w.push_back(finite_word(e));
      ts.push_back(std::move(w));
    }
    p.relations.push_back(finite_relation(p.alphabet, a.signature()[r].arity, ts));
  }
  return p;
}

FiniteStructure materialize(const Presentation& p, std::size_t max_elements) {
  require_valid(p);
  std::vector<Word> words;
  for (auto& t : enumerate_language(p.domain, max_elements)) words.push_back(std::move(t[0]));
  std::sort(words.begin(), words.end(), [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  std::map<Word, Element> index;
  std::vector<std::string> names;
  for (const auto& w : words) {
    index.emplace(w, Element(names.size()));
    names.push_back(p.alphabet.format_word(w));
  }
  FiniteStructure s(p.signature, names);
  for (std::size_t r = 0; r < p.signature.size(); ++r) {
    std::vector<Tuple> ts;
    for (const auto& wt : enumerate_language(p.relations[r], max_elements * max_elements)) {
      Tuple t;
      for (const auto& w : wt) t.push_back(index.at(w));
      ts.push_back(std::move(t));
    }
    s.set_tuples(r, std::move(ts));
  }
  return s;
}

Alphabet pair_alphabet(const Alphabet& a, const Alphabet& b) {
  const std::size_t m = a.size(), n = b.size();
  std::vector<std::string> names;
  for (std::size_t x = 0; x <= m; ++x)
    for (std::size_t y = 0; y <= n; ++y) {
      if (x == m && y == n) continue;
      names.push_back("<" + (x < m ? a.symbol(Symbol(x)) : "") + "|" + (y < n ? b.symbol(Symbol(y)) : "") + ">");
    }
  return Alphabet(std::move(names));
}

Word pair_word(const Word& u, const Word& v, std::size_t m, std::size_t n) {
  Word w(std::max(u.size(), v.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::size_t x = i < u.size() ? u[i] : m;
    std::size_t y = i < v.size() ? v[i] : n;
    w[i] = Symbol(x * (n + 1) + y);
  }
  return w;
}

Presentation product_presentation(const Presentation& p, const Presentation& q) {
  if (p.signature != q.signature)
    throw SignatureMismatch("product_presentation: " + p.signature.to_string() + " vs " + q.signature.to_string());
  require_valid(p);
  require_valid(q);
  Presentation r;
  r.signature = p.signature;
  r.alphabet = pair_alphabet(p.alphabet, q.alphabet);
  letter_count(r.alphabet.size(), std::max<std::size_t>(1, p.signature.max_arity()));  // size guard
  r.domain = pair_product(p.domain, q.domain, r.alphabet);
  for (std::size_t i = 0; i < p.signature.size(); ++i)
    r.relations.push_back(pair_product(p.relations[i], q.relations[i], r.alphabet));
  return r;
}

Presentation link_gadget(const Presentation& g, const Signature& sig) {
  if (g.signature.size() != 1 || g.signature[0].arity != 2)
    throw SignatureMismatch("link_gadget: source must have a single binary predicate, got " + g.signature.to_string());
  if (sig.max_arity() < 2) throw ArgumentError("link_gadget: target signature needs a predicate of arity at least 2");
  require_valid(g);
  Environment env{{"E", g.relations[0]}};
  Presentation r;
  r.signature = sig;
  r.alphabet = g.alphabet;
  r.domain = canonical(normalize(g.domain));
  for (const auto& pred : sig.predicates()) {
    std::vector<std::string> xs;
    std::vector<Formula> body{Formula::atom("E", {"u", "v"})};
    for (std::size_t i = 0; i < pred.arity; ++i) {
      xs.push_back("y" + std::to_string(i));
      body.push_back(Formula::disj({Formula::equal(xs.back(), "u"), Formula::equal(xs.back(), "v")}));
    }
    Formula f = Formula::exists("u", Formula::exists("v", Formula::conj(std::move(body))));
    r.relations.push_back(compile(f, g.alphabet, env, xs));
  }
  return r;
}

Presentation undec_gadget(const Presentation& a, const FiniteStructure& b, const Word& s, const Word& t) {
  if (a.signature != b.signature())
    throw SignatureMismatch("undec_gadget: " + a.signature.to_string() + " vs " + b.signature().to_string());
  if (b.empty()) throw ArgumentError("undec_gadget: empty target");
  if (!accepts(a.domain, {s})) throw ArgumentError("undec_gadget: s is not in the domain");
  if (!accepts(a.domain, {t})) throw ArgumentError("undec_gadget: t is not in the domain");
  Presentation r = product_presentation(a, from_finite(product(b, b)));
  r.signature = marked_signature(b);
  const std::size_t n = b.size(), m = a.alphabet.size(), q = ab_alphabet().size();
  for (Element b0 = 0; b0 < n; ++b0) {
    std::vector<WordTuple> marks;
    for (Element y = 0; y < n; ++y) {
      marks.push_back({pair_word(s, finite_word(Element(b0 * n + y)), m, q)});
      marks.push_back({pair_word(t, finite_word(Element(y * n + b0)), m, q)});
    }
    r.relations.push_back(finite_relation(r.alphabet, 1, marks));
  }
  return r;
}

SyncAutomaton define(const Presentation& p, const Formula& f, const std::vector<std::string>& free_order) {
  std::vector<Formula> parts{relativize(f)};
  for (const auto& x : free_order) parts.push_back(Formula::atom(kDomainSymbol, {x}));
  return compile(Formula::conj(std::move(parts)), p.alphabet, environment(p), free_order);
}

bool model_check(const Presentation& p, const Formula& sentence) {
  auto fv = free_variables(sentence);
  if (!fv.empty()) throw ArgumentError("model_check: free variable " + fv[0]);
  return !is_empty(define(p, sentence, {}));
}

Formula canonical_query(const FiniteStructure& d) {
  if (d.empty()) throw ArgumentError("canonical_query: empty structure");
  // factors: (variables, formula); eliminate variables one by one, cheapest first
  struct Factor {
    std::set<Element> vars;
    Formula f;
  };
  std::vector<Factor> factors;
  for (std::size_t r = 0; r < d.signature().size(); ++r)
    for (const auto& t : d.tuples(r)) {
      std::vector<std::string> args;
      for (Element e : t) args.push_back(var(e));
      factors.push_back({std::set<Element>(t.begin(), t.end()), Formula::atom(d.signature()[r].name, args)});
    }
  std::set<Element> left;
  for (Element e = 0; e < d.size(); ++e) left.insert(e);
  while (!left.empty()) {
    Element best = *left.begin();
    std::size_t best_width = SIZE_MAX;
    for (Element e : left) {
      std::set<Element> nb;
      for (const auto& fc : factors)
        if (fc.vars.count(e)) nb.insert(fc.vars.begin(), fc.vars.end());
      if (nb.size() < best_width) {
        best_width = nb.size();
        best = e;
      }
    }
    left.erase(best);
    std::vector<Formula> body;
    std::set<Element> vars;
    std::vector<Factor> rest;
    for (auto& fc : factors) {
      if (fc.vars.count(best)) {
        body.push_back(std::move(fc.f));
        vars.insert(fc.vars.begin(), fc.vars.end());
      } else {
        rest.push_back(std::move(fc));
      }
    }
    vars.erase(best);
    Formula g = body.empty() ? Formula::truth() : body.size() == 1 ? body[0] : Formula::conj(std::move(body));
    rest.push_back({vars, Formula::exists(var(best), std::move(g))});
    factors = std::move(rest);
  }
  std::vector<Formula> all;
  for (auto& fc : factors) all.push_back(std::move(fc.f));
  return all.size() == 1 ? all[0] : Formula::conj(std::move(all));
}

bool exists_hom_from_finite(const Presentation& p, const FiniteStructure& d) {
  if (d.signature() != p.signature)
    throw SignatureMismatch("exists_hom_from_finite: " + d.signature().to_string() + " vs " + p.signature.to_string());
  return model_check(p, canonical_query(d));
}

bool hom_with_dual(const Presentation& p, const std::vector<FiniteStructure>& dual) {
  for (const auto& d : dual)
    if (exists_hom_from_finite(p, d)) return false;
  return true;
}

Presentation binary_tree() {
  Presentation p;
  p.signature = Signature::graph();
  p.alphabet = Alphabet({"0", "1"});
  p.domain = all_words(p.alphabet);
  p.relations.push_back(successor_relation(p.alphabet));
  return p;
}

Presentation infinite_matching() {
  Presentation p;
  p.signature = Signature::graph();
  p.alphabet = ab_alphabet();
  const Symbol a = 0, b = 1, pad = p.alphabet.pad();
  SyncAutomaton dom(p.alphabet, 1);
  // a* together with b a*
  State d0 = dom.add_state(true, true), da = dom.add_state(false, true), db = dom.add_state(false, true);
  dom.add_transition(d0, a, da);
  dom.add_transition(da, a, da);
  dom.add_transition(d0, b, db);
  dom.add_transition(db, a, db);
  p.domain = dom;
  SyncAutomaton e(p.alphabet, 2);
  State q0 = e.add_state(true, false), q1 = e.add_state(), q2 = e.add_state(false, true);
  e.add_transition(q0, {pad, b}, q2);
  e.add_transition(q0, {a, b}, q1);
  e.add_transition(q1, {a, a}, q1);
  e.add_transition(q1, {pad, a}, q2);
  p.relations.push_back(e);
  return p;
}

Presentation infinite_path() {
  Presentation p;
  p.signature = Signature::graph();
  p.alphabet = ab_alphabet();
  const Symbol a = 0, pad = p.alphabet.pad();
  SyncAutomaton dom(p.alphabet, 1);
  State d0 = dom.add_state(true, true);
  dom.add_transition(d0, a, d0);
  p.domain = dom;
  SyncAutomaton e(p.alphabet, 2);
  State q0 = e.add_state(true, false), q1 = e.add_state(false, true);
  e.add_transition(q0, {a, a}, q0);
  e.add_transition(q0, {pad, a}, q1);
  p.relations.push_back(e);
  return p;
}

std::vector<std::string> builtin_names() { return {"binary-tree", "infinite-matching", "infinite-path"}; }

Presentation builtin(std::string_view name) {
  if (name == "binary-tree") return binary_tree();
  if (name == "infinite-matching") return infinite_matching();
  if (name == "infinite-path") return infinite_path();
  throw ArgumentError("unknown builtin presentation " + std::string(name));
}

}  // namespace autohom
