#include "autohom/autohom.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <mutex>
#include <set>

#include "autohom/canonical.hpp"

namespace autohom {

namespace {

Mask full_mask(std::size_t n) { return n == 0 ? 0 : (Mask(1) << n) - 1; }

void require_target(const Presentation& p, const FiniteStructure& b, const char* op) {
  if (p.signature != b.signature())
    throw SignatureMismatch(std::string(op) + ": " + p.signature.to_string() + " vs " + b.signature().to_string());
  if (b.size() > kMaxTarget) throw SizeGuardExceeded(std::string(op) + ": target has more than 63 elements");
}

// Complete DFA of a unary automaton; state num_states() of the result is dead.
struct CompleteDfa {
  std::vector<std::vector<State>> next;
  std::vector<bool> accepting;
  State initial = 0;
};

CompleteDfa complete_dfa(const SyncAutomaton& a) {
  SyncAutomaton c = canonical(normalize(a));
  const std::size_t m = c.alphabet().size(), n = c.num_states();
  CompleteDfa d;
  d.next.assign(n + 1, std::vector<State>(m, State(n)));
  d.accepting.assign(n + 1, false);
  for (State s = 0; s < n; ++s) {
    d.accepting[s] = c.is_accepting(s);
    for (const auto& [l, t] : c.edges(s)) d.next[s][l] = t;
  }
  return d;
}

// Moore machine as a product of complete DFAs of unary automata; bit j of
// the label is set when automaton j accepts.
Classifier product_machine(const Alphabet& alphabet, const std::vector<SyncAutomaton>& auts) {
  std::vector<CompleteDfa> ds;
  for (const auto& a : auts) ds.push_back(complete_dfa(a));
  Classifier c;
  c.alphabet = alphabet;
  const std::size_t m = alphabet.size();
  std::map<std::vector<State>, State> index;
  std::vector<std::vector<State>> queue;
  auto get = [&](const std::vector<State>& v) {
    auto [it, fresh] = index.emplace(v, State(queue.size()));
    if (fresh) {
      queue.push_back(v);
      Mask l = 0;
      for (std::size_t j = 0; j < ds.size(); ++j)
        if (ds[j].accepting[v[j]]) l |= Mask(1) << j;
      c.label.push_back(l);
      c.next.emplace_back(m);
    }
    return it->second;
  };
  std::vector<State> init;
  for (const auto& d : ds) init.push_back(d.initial);
  c.initial = get(init);
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Symbol x = 0; x < m; ++x) {
      std::vector<State> v = queue[i];
      for (std::size_t j = 0; j < ds.size(); ++j) v[j] = ds[j].next[v[j]][x];
      State t = get(v);
      c.next[i][x] = t;
    }
  return c;
}

// Moore machine combining two classifiers state-wise.
template <class F>
Classifier combine(const Classifier& a, const Classifier& b, F label) {
  Classifier c;
  c.alphabet = a.alphabet;
  c.targets = a.targets;
  const std::size_t m = a.alphabet.size();
  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> queue;
  auto get = [&](State x, State y) {
    auto [it, fresh] = index.emplace(std::make_pair(x, y), State(queue.size()));
    if (fresh) {
      queue.push_back({x, y});
      c.label.push_back(label(a.label[x], b.label[y]));
      c.next.emplace_back(m);
    }
    return it->second;
  };
  c.initial = get(a.initial, b.initial);
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Symbol x = 0; x < m; ++x) {
      State t = get(a.next[queue[i].first][x], b.next[queue[i].second][x]);
      c.next[i][x] = t;
    }
  return c;
}

// For words x: union over tuples t of R with t_i = x of the target elements
// that no tuple of R(B) supports at coordinate i given f's labels elsewhere.
Classifier bad_machine(const SyncAutomaton& rel, std::size_t pred, std::size_t i, const Classifier& f,
                       const FiniteStructure& b) {
  const std::size_t k = rel.arity(), m = f.alphabet.size();
  const Symbol pad = f.alphabet.pad();
  const Mask full = full_mask(b.size());

  std::map<std::vector<Mask>, Mask> memo;
  auto bad_for = [&](const std::vector<Mask>& labels) {
    auto it = memo.find(labels);
    if (it != memo.end()) return it->second;
    Mask allowed = 0;
    for (const auto& s : b.tuples(pred)) {
      bool ok = true;
      for (std::size_t l = 0; l < k && ok; ++l)
        if (l != i) ok = (labels[l] >> s[l]) & 1;
      if (ok) allowed |= Mask(1) << s[i];
    }
    return memo[labels] = full & ~allowed;
  };

  // product states (r, q_1..q_k)
  std::map<std::vector<State>, std::uint32_t> index;
  std::vector<std::vector<State>> states;
  std::vector<std::vector<std::pair<Symbol, std::uint32_t>>> moves;
  std::vector<std::vector<std::uint32_t>> tail;
  std::vector<Mask> own;
  auto get = [&](const std::vector<State>& v) {
    auto [it, fresh] = index.emplace(v, std::uint32_t(states.size()));
    if (fresh) {
      states.push_back(v);
      moves.emplace_back();
      tail.emplace_back();
      Mask o = 0;
      if (rel.is_accepting(v[0])) {
        std::vector<Mask> labels(k);
        bool inside = true;
        for (std::size_t l = 0; l < k; ++l) {
          labels[l] = f.label[v[l + 1]];
          inside = inside && labels[l] != kOutside;
        }
        if (inside) o = bad_for(labels);
      }
      own.push_back(o);
    }
    return it->second;
  };
  std::vector<std::uint32_t> init;
  for (State r : rel.initial_states()) {
    std::vector<State> v(k + 1, f.initial);
    v[0] = r;
    init.push_back(get(v));
  }
  for (std::size_t id = 0; id < states.size(); ++id) {
    for (const auto& [l, r2] : rel.edges(states[id][0])) {
      auto col = decode_letter(l, m, k);
      std::vector<State> v = states[id];
      v[0] = r2;
      for (std::size_t j = 0; j < k; ++j)
        if (col[j] != pad) v[j + 1] = f.next[v[j + 1]][col[j]];
      std::uint32_t t = get(v);
      if (col[i] == pad) tail[id].push_back(t);
      else moves[id].push_back({col[i], t});
    }
  }
  // close the bad sets under the tail moves (coordinate i already ended)
  std::vector<Mask> tb = own;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t id = 0; id < states.size(); ++id)
      for (std::uint32_t t : tail[id])
        if ((tb[id] | tb[t]) != tb[id]) {
          tb[id] |= tb[t];
          changed = true;
        }
  }
  // subset construction over coordinate i
  Classifier c;
  c.alphabet = f.alphabet;
  c.targets = f.targets;
  std::map<std::vector<std::uint32_t>, State> sindex;
  std::vector<std::vector<std::uint32_t>> sets;
  auto sget = [&](std::vector<std::uint32_t> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto [it, fresh] = sindex.emplace(s, State(sets.size()));
    if (fresh) {
      Mask l = 0;
      for (auto x : s) l |= tb[x];
      sets.push_back(std::move(s));
      c.label.push_back(l);
      c.next.emplace_back(m);
    }
    return it->second;
  };
  c.initial = sget(init);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    std::vector<std::vector<std::uint32_t>> succ(m);
    for (auto id : sets[s])
      for (const auto& [x, t] : moves[id]) succ[x].push_back(t);
    for (Symbol x = 0; x < m; ++x) {
      State t = sget(std::move(succ[x]));
      c.next[s][x] = t;
    }
  }
  return c;
}

std::vector<std::uint32_t> structure_key(const FiniteStructure& b) {
  std::vector<std::uint32_t> key{std::uint32_t(b.size())};
  for (const auto& p : b.signature().predicates()) {
    key.push_back(std::uint32_t(p.arity));
    for (char ch : p.name) key.push_back(std::uint32_t(std::uint8_t(ch)));
    key.push_back(~0u);
  }
  for (std::size_t r = 0; r < b.signature().size(); ++r) {
    key.push_back(~0u);
    for (const auto& t : b.tuples(r)) key.insert(key.end(), t.begin(), t.end());
  }
  return key;
}

// Shortest tuple of R whose words' classes form a pattern missing from R(B).
// cls(state) gives the class of the state reached by a word, or nullopt when
// the word is not classified (such tuples are skipped).
struct EdgeWitness {
  Tuple pattern;
  WordTuple words;
};

template <class Cls>
std::optional<EdgeWitness> edge_violation(const SyncAutomaton& rel_in, std::size_t pred, const Classifier& machine,
                                          Cls cls, const FiniteStructure& b) {
  SyncAutomaton rel = canonical(normalize(rel_in));
  const std::size_t k = rel.arity(), m = machine.alphabet.size();
  const Symbol pad = machine.alphabet.pad();
  std::map<std::vector<State>, std::uint32_t> index;
  std::vector<std::vector<State>> states;
  std::vector<std::pair<std::uint32_t, Letter>> parent;
  auto get = [&](const std::vector<State>& v, std::uint32_t from, Letter l) {
    auto [it, fresh] = index.emplace(v, std::uint32_t(states.size()));
    if (fresh) {
      states.push_back(v);
      parent.push_back({from, l});
    }
    return fresh;
  };
  for (State r : rel.initial_states()) {
    std::vector<State> v(k + 1, machine.initial);
    v[0] = r;
    get(v, ~0u, 0);
  }
  for (std::size_t id = 0; id < states.size(); ++id) {
    const auto v = states[id];
    if (rel.is_accepting(v[0])) {
      Tuple pattern(k);
      bool classified = true;
      for (std::size_t l = 0; l < k && classified; ++l) {
        auto c = cls(v[l + 1]);
        if (c) pattern[l] = *c;
        else classified = false;
      }
      if (classified && !b.contains(pred, pattern)) {
        std::vector<Letter> letters;
        for (std::uint32_t x = std::uint32_t(id); parent[x].first != ~0u; x = parent[x].first)
          letters.push_back(parent[x].second);
        std::reverse(letters.begin(), letters.end());
        return EdgeWitness{pattern, deconvolve(letters, m, k)};
      }
    }
    for (const auto& [l, r2] : rel.edges(v[0])) {
      auto col = decode_letter(l, m, k);
      std::vector<State> w = v;
      w[0] = r2;
      for (std::size_t j = 0; j < k; ++j)
        if (col[j] != pad) w[j + 1] = machine.next[w[j + 1]][col[j]];
      get(w, std::uint32_t(id), l);
    }
  }
  return std::nullopt;
}

std::string format_tuple(const Alphabet& a, const WordTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + a.format_word(t[i]);
  return s + ")";
}

}  // namespace

Mask to_mask(const ElementSet& s) {
  if (s.universe() > kMaxTarget) throw SizeGuardExceeded("to_mask: more than 63 elements");
  Mask m = 0;
  for (Element e : s.elements()) m |= Mask(1) << e;
  return m;
}

ElementSet from_mask(Mask m, std::size_t universe) {
  ElementSet s(universe);
  for (std::size_t e = 0; e < universe; ++e)
    if ((m >> e) & 1) s.set(Element(e));
  return s;
}

std::string mask_to_string(Mask m, const FiniteStructure& b) {
  if (m == kOutside) return "outside";
  std::string s = "{";
  bool first = true;
  for (Element e = 0; e < b.size(); ++e)
    if ((m >> e) & 1) {
      s += (first ? "" : ",") + b.name(e);
      first = false;
    }
  return s + "}";
}

Mask Classifier::classify(const Word& w) const {
  State s = initial;
  for (Symbol x : w) {
    if (x >= alphabet.size()) throw ArgumentError("classify: symbol out of range");
    s = next[s][x];
  }
  return label[s];
}

SyncAutomaton Classifier::level_set(Mask y) const {
  SyncAutomaton a(alphabet, 1);
  for (State s = 0; s < num_states(); ++s) a.add_state(s == initial, label[s] == y);
  for (State s = 0; s < num_states(); ++s)
    for (Symbol x = 0; x < alphabet.size(); ++x) a.add_transition(s, x, next[s][x]);
  return canonical(a);
}

std::vector<Mask> Classifier::labels() const {
  Classifier c = canonical(*this);
  std::set<Mask> out;
  for (Mask l : c.label)
    if (l != kOutside) out.insert(l);
  return {out.begin(), out.end()};
}

Classifier canonical(const Classifier& c) {
  const std::size_t m = c.alphabet.size();
  // reachable part
  std::vector<State> order{c.initial};
  std::vector<bool> seen(c.num_states(), false);
  seen[c.initial] = true;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Symbol x = 0; x < m; ++x) {
      State t = c.next[order[i]][x];
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
    }
  // Moore refinement
  std::vector<std::uint32_t> block(c.num_states(), 0);
  {
    std::map<Mask, std::uint32_t> ids;
    for (State s : order) block[s] = ids.emplace(c.label[s], std::uint32_t(ids.size())).first->second;
  }
  for (std::size_t blocks = 0;;) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> nb(c.num_states(), 0);
    for (State s : order) {
      std::vector<std::uint32_t> sig{block[s]};
      for (Symbol x = 0; x < m; ++x) sig.push_back(block[c.next[s][x]]);
      nb[s] = ids.emplace(std::move(sig), std::uint32_t(ids.size())).first->second;
    }
    block = std::move(nb);
    if (ids.size() == blocks) break;
    blocks = ids.size();
  }
  // breadth-first numbering of blocks
  std::map<std::uint32_t, State> num;
  std::vector<State> rep;
  auto id = [&](State s) {
    auto [it, fresh] = num.emplace(block[s], State(rep.size()));
    if (fresh) rep.push_back(s);
    return it->second;
  };
  Classifier out;
  out.alphabet = c.alphabet;
  out.targets = c.targets;
  out.initial = id(c.initial);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    out.label.push_back(c.label[rep[i]]);
    out.next.emplace_back(m);
    for (Symbol x = 0; x < m; ++x) {
      State t = id(c.next[rep[i]][x]);
      out.next[i][x] = t;
    }
  }
  return out;
}

Classifier top_classifier(const Presentation& p, const FiniteStructure& b) {
  require_target(p, b, "top_classifier");
  Classifier c = product_machine(p.alphabet, {p.domain});
  c.targets = b.size();
  for (Mask& l : c.label) l = l ? full_mask(b.size()) : kOutside;
  return canonical(c);
}

Classifier hc_step_auto(const Presentation& p, const FiniteStructure& b, const Classifier& f) {
  require_target(p, b, "hc_step_auto");
  Classifier cur = f;
  for (std::size_t r = 0; r < p.signature.size(); ++r) {
    SyncAutomaton rel = canonical(normalize(p.relations[r]));
    if (is_empty(rel)) continue;
    for (std::size_t i = 0; i < rel.arity(); ++i) {
      Classifier bad = canonical(bad_machine(rel, r, i, f, b));
      cur = canonical(combine(cur, bad, [](Mask x, Mask y) { return x == kOutside ? kOutside : x & ~y; }));
    }
  }
  return canonical(cur);
}

const TargetAnalysis& analyze_target(const FiniteStructure& b) {
  static std::mutex mu;
  static std::map<std::vector<std::uint32_t>, TargetAnalysis> memo;
  auto key = structure_key(b);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  TargetAnalysis ta;
  try {
    ta.tree = tree_duality(b);
  } catch (const SizeGuardExceeded&) {
    ta.tree = {};
  }
  ta.finite = has_finite_duality(b);
  std::lock_guard<std::mutex> lock(mu);
  return memo.emplace(key, std::move(ta)).first->second;
}

HcAutoResult hc_auto(const Presentation& p, const FiniteStructure& b, std::size_t max_rounds, bool keep_trace,
                     bool analyze) {
  require_target(p, b, "hc_auto");
  require_valid(p);
  HcAutoResult res;
  if (analyze) {
    const TargetAnalysis& ta = analyze_target(b);
    res.terminates = ta.finite;
    res.sound = ta.tree.holds;
  }
  Classifier cur = top_classifier(p, b);
  auto empty_witness = [&](const Classifier& c) -> std::optional<Word> {
    if (!std::count(c.label.begin(), c.label.end(), Mask(0))) return std::nullopt;
    auto w = shortest_accepted(c.level_set(0));
    return w ? std::optional<Word>((*w)[0]) : std::nullopt;
  };
  if (keep_trace) res.trace.push_back(cur);
  for (std::size_t r = 0;; ++r) {
    if (auto w = empty_witness(cur)) {
      res.status = HcAutoStatus::NoHom;
      res.rounds = r;
      res.witness = w;
      res.sound = true;
      res.classifier = std::move(cur);
      return res;
    }
    if (r == max_rounds) break;
    Classifier next = hc_step_auto(p, b, cur);
    if (next == cur) {
      res.status = HcAutoStatus::Fixpoint;
      res.rounds = r;
      res.all_nonempty = true;
      res.classifier = std::move(cur);
      return res;
    }
    cur = std::move(next);
    if (keep_trace) res.trace.push_back(cur);
  }
  res.status = HcAutoStatus::BudgetExhausted;
  res.rounds = max_rounds;
  res.sound = false;
  res.classifier = std::move(cur);
  return res;
}

SynthResult synth_regular_hom(const Presentation& p, const FiniteStructure& b, std::size_t max_rounds) {
  SynthResult res;
  HcAutoResult hc = hc_auto(p, b, max_rounds);
  res.rounds = hc.rounds;
  if (hc.status == HcAutoStatus::NoHom) {
    res.status = SynthStatus::NoHom;
    res.witness = hc.witness;
    return res;
  }
  if (hc.status == HcAutoStatus::BudgetExhausted) {
    res.note = "no fixpoint within " + std::to_string(max_rounds) + " rounds";
    return res;
  }
  const TargetAnalysis& ta = analyze_target(b);
  if (!ta.tree.holds) {
    res.note = "fixpoint reached but the target has no tree duality";
    return res;
  }
  if (ta.finite != Tristate::Yes) res.note = "warning: target not known to have finite duality";
  const Classifier& f = hc.classifier;
  for (Element c = 0; c < b.size(); ++c) {
    SyncAutomaton a(p.alphabet, 1);
    for (State s = 0; s < f.num_states(); ++s) {
      Mask y = f.label[s];
      a.add_state(s == f.initial, y != kOutside && y != 0 && ta.tree.retraction[y - 1] == c);
    }
    for (State s = 0; s < f.num_states(); ++s)
      for (Symbol x = 0; x < p.alphabet.size(); ++x) a.add_transition(s, x, f.next[s][x]);
    res.coloring.classes.push_back(canonical(a));
  }
  auto check = check_regular_hom(p, b, res.coloring);
  if (!check.ok()) throw std::logic_error("synth_regular_hom: produced an invalid coloring: " + check.message);
  res.status = SynthStatus::Found;
  return res;
}

Classifier coloring_machine(const RegularColoring& c, const Alphabet& alphabet) {
  if (c.classes.size() > kMaxTarget) throw SizeGuardExceeded("coloring_machine: more than 63 classes");
  Classifier m = canonical(product_machine(alphabet, c.classes));
  m.targets = c.classes.size();
  return m;
}

ColoringCheck check_regular_hom(const Presentation& p, const FiniteStructure& b, const RegularColoring& col) {
  require_target(p, b, "check_regular_hom");
  ColoringCheck res;
  if (col.classes.size() != b.size()) {
    res.violation = ColoringViolation::WrongShape;
    res.message = "expected " + std::to_string(b.size()) + " classes, got " + std::to_string(col.classes.size());
    return res;
  }
  for (Element c = 0; c < b.size(); ++c)
    if (col.classes[c].arity() != 1 || col.classes[c].alphabet() != p.alphabet) {
      res.violation = ColoringViolation::WrongShape;
      res.message = "class " + b.name(c) + " is not a unary automaton over the presentation alphabet";
      return res;
    }
  const std::size_t n = b.size();
  std::vector<SyncAutomaton> auts = col.classes;
  auts.push_back(p.domain);
  Classifier machine = canonical(product_machine(p.alphabet, auts));
  const Mask dom_bit = Mask(1) << n;

  // partition, via the shortest word reaching each offending state
  {
    std::vector<std::optional<Word>> word(machine.num_states());
    word[machine.initial] = Word{};
    std::deque<State> q{machine.initial};
    while (!q.empty()) {
      State s = q.front();
      q.pop_front();
      const Mask l = machine.label[s], cls = l & ~dom_bit;
      const Word& w = *word[s];
      auto fail = [&](ColoringViolation v, std::string msg) {
        res.violation = v;
        res.message = std::move(msg);
        res.witness = {w};
        return res;
      };
      if (cls && !(l & dom_bit))
        return fail(ColoringViolation::OutsideDomain,
                    "word " + p.alphabet.format_word(w) + " is outside the domain but in class " +
                        b.name(Element(std::countr_zero(cls))));
      if (std::popcount(cls) > 1) {
        for (Element c = 0; c < n; ++c)
          if ((cls >> c) & 1) res.classes.push_back(c);
        return fail(ColoringViolation::Overlap, "word " + p.alphabet.format_word(w) + " lies in several classes " +
                                                    mask_to_string(cls, b));
      }
      if ((l & dom_bit) && !cls)
        return fail(ColoringViolation::Uncovered, "domain word " + p.alphabet.format_word(w) + " has no class");
      for (Symbol x = 0; x < p.alphabet.size(); ++x) {
        State t = machine.next[s][x];
        if (!word[t]) {
          Word v = w;
          v.push_back(x);
          word[t] = std::move(v);
          q.push_back(t);
        }
      }
    }
  }
  auto cls = [&](State s) -> std::optional<Element> {
    Mask l = machine.label[s];
    if (!(l & dom_bit)) return std::nullopt;
    return Element(std::countr_zero(l & ~dom_bit));
  };
  for (std::size_t r = 0; r < p.signature.size(); ++r) {
    auto v = edge_violation(p.relations[r], r, machine, cls, b);
    if (v) {
      res.violation = ColoringViolation::Edge;
      res.predicate = p.signature[r].name;
      res.pattern = v->pattern;
      res.witness = v->words;
      std::string pat;
      for (std::size_t i = 0; i < v->pattern.size(); ++i) pat += (i ? "," : "") + b.name(v->pattern[i]);
      res.message = res.predicate + format_tuple(p.alphabet, v->words) + " maps to (" + pat + "), not a " +
                    res.predicate + "-tuple of the target";
      return res;
    }
  }
  return res;
}

RefuteResult refute_hom_semi(const Presentation& p, const FiniteStructure& b, std::size_t budget,
                             std::size_t max_size) {
  require_target(p, b, "refute_hom_semi");
  require_valid(p);
  RefuteResult res;
  std::set<std::vector<std::uint32_t>> tried;
  for (std::size_t size = 1; size <= max_size; ++size) {
    std::vector<FiniteStructure> obs;
    try {
      obs = critical_obstructions(b, size, size);
    } catch (const SizeGuardExceeded& e) {
      res.note = e.what();
      return res;
    }
    for (const auto& d : obs) {
      auto key = canonical_form(d).key;
      key.insert(key.begin(), std::uint32_t(d.size()));
      if (!tried.insert(key).second) continue;
      if (res.tested >= budget) {
        res.note = "budget of " + std::to_string(budget) + " candidates exhausted";
        return res;
      }
      ++res.tested;
      if (exists_hom_from_finite(p, d)) {
        res.status = SemiStatus::Found;
        res.obstruction = d;
        return res;
      }
    }
  }
  res.note = "no obstruction with at most " + std::to_string(max_size) + " elements and tuples maps into the source";
  return res;
}

EnumResult enumerate_reghom_semi(const Presentation& p, const FiniteStructure& b, std::size_t budget) {
  require_target(p, b, "enumerate_reghom_semi");
  require_valid(p);
  EnumResult res;
  const std::size_t m = p.alphabet.size(), nb = b.size();
  if (nb == 0) return res;
  for (std::size_t n = 1;; ++n) {
    std::vector<State> table(n * m, 0);
    for (;;) {
      // every state reachable from state 0
      std::vector<bool> seen(n, false);
      std::vector<State> stack{0};
      seen[0] = true;
      std::size_t reached = 1;
      while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (std::size_t x = 0; x < m; ++x)
          if (!seen[table[s * m + x]]) {
            seen[table[s * m + x]] = true;
            ++reached;
            stack.push_back(table[s * m + x]);
          }
      }
      if (reached == n) {
        Classifier machine;
        machine.alphabet = p.alphabet;
        machine.targets = nb;
        for (State s = 0; s < n; ++s) machine.next.emplace_back(table.begin() + s * m, table.begin() + (s + 1) * m);
        std::vector<Element> out(n, 0);
        for (;;) {
          if (res.candidates >= budget) return res;
          ++res.candidates;
          machine.label.assign(out.begin(), out.end());
          bool ok = true;
          for (std::size_t r = 0; r < p.signature.size() && ok; ++r)
            ok = !edge_violation(p.relations[r], r, machine,
                                 [&](State s) -> std::optional<Element> { return Element(machine.label[s]); }, b);
          if (ok) {
            for (Element c = 0; c < nb; ++c) {
              SyncAutomaton a(p.alphabet, 1);
              for (State s = 0; s < n; ++s) a.add_state(s == 0, out[s] == c);
              for (State s = 0; s < n; ++s)
                for (Symbol x = 0; x < m; ++x) a.add_transition(s, x, machine.next[s][x]);
              res.coloring.classes.push_back(canonical(intersect(a, p.domain)));
            }
            if (!check_regular_hom(p, b, res.coloring).ok())
              throw std::logic_error("enumerate_reghom_semi: candidate passed the edge test but not the checker");
            res.status = SemiStatus::Found;
            res.states = n;
            return res;
          }
          std::size_t j = n;
          while (j > 0 && out[j - 1] == nb - 1) out[--j] = 0;
          if (j == 0) break;
          ++out[j - 1];
        }
      }
      std::size_t j = table.size();
      while (j > 0 && table[j - 1] == n - 1) table[--j] = 0;
      if (j == 0) break;
      ++table[j - 1];
    }
  }
}

}  // namespace autohom
