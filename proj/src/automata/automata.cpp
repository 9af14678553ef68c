#include "autohom/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace autohom {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw ArgumentError("alphabet: empty symbol");
    if (s == kPadGlyph || s == kEmptyWordGlyph) throw ArgumentError("alphabet: reserved symbol " + s);
    for (char c : s)
      if (std::string_view(" \t\r\n(),{}#.").find(c) != std::string_view::npos)
        throw ArgumentError("alphabet: symbol '" + s + "' contains a reserved character");
    if (!seen.insert(s).second) throw ArgumentError("alphabet: duplicate symbol " + s);
  }
}

std::optional<Symbol> Alphabet::find(std::string_view s) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == s) return Symbol(i);
  return std::nullopt;
}

namespace {

bool single_char(const Alphabet& a) {
  return std::all_of(a.symbols().begin(), a.symbols().end(),
                     [](const std::string& s) { return s.size() == 1; });
}

}  // namespace

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  if (text.empty() || text == kEmptyWordGlyph) return w;
  auto lookup = [&](std::string_view s) {
    auto sym = find(s);
    if (!sym) throw ArgumentError("word '" + std::string(text) + "': unknown symbol '" + std::string(s) + "'");
    return *sym;
  };
  if (single_char(*this)) {
    for (char c : text) w.push_back(lookup(std::string_view(&c, 1)));
  } else {
    std::size_t start = 0;
    for (;;) {
      auto dot = text.find('.', start);
      w.push_back(lookup(text.substr(start, dot == std::string_view::npos ? dot : dot - start)));
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
  }
  return w;
}

std::string Alphabet::format_word(const Word& w) const {
  if (w.empty()) return std::string(kEmptyWordGlyph);
  const bool compact = single_char(*this);
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !compact) out += '.';
    out += symbols_.at(w[i]);
  }
  return out;
}

std::size_t letter_count(std::size_t symbols, std::size_t arity) {
  std::size_t total = 1;
  for (std::size_t j = 0; j < arity; ++j) {
    total *= symbols + 1;
    if (total > kMaxLetters + 1)
      throw SizeGuardExceeded("letter alphabet of arity " + std::to_string(arity) + " over " +
                              std::to_string(symbols) + " symbols is too large");
  }
  return total - 1;
}

std::vector<Symbol> decode_letter(Letter l, std::size_t symbols, std::size_t arity) {
  std::vector<Symbol> c(arity);
  for (std::size_t j = 0; j < arity; ++j) {
    c[j] = Symbol(l % (symbols + 1));
    l /= Letter(symbols + 1);
  }
  return c;
}

Letter encode_letter(const std::vector<Symbol>& column, std::size_t symbols) {
  Letter l = 0;
  for (std::size_t j = column.size(); j-- > 0;) l = l * Letter(symbols + 1) + column[j];
  return l;
}

SyncAutomaton::SyncAutomaton(Alphabet alphabet, std::size_t arity)
    : alphabet_(std::move(alphabet)), arity_(arity), letters_(letter_count(alphabet_.size(), arity)) {}

State SyncAutomaton::add_state(bool initial, bool accepting) {
  initial_.push_back(initial);
  accepting_.push_back(accepting);
  trans_.emplace_back();
  return State(accepting_.size() - 1);
}

std::vector<State> SyncAutomaton::initial_states() const {
  std::vector<State> out;
  for (State s = 0; s < num_states(); ++s)
    if (initial_[s]) out.push_back(s);
  return out;
}

void SyncAutomaton::add_transition(State from, Letter l, State to) {
  if (from >= num_states() || to >= num_states()) throw ArgumentError("transition: state out of range");
  if (l >= letters_) throw ArgumentError("transition: letter out of range (all-pad or too large)");
  auto& e = trans_[from];
  Edge x{l, to};
  auto it = std::lower_bound(e.begin(), e.end(), x);
  if (it == e.end() || *it != x) e.insert(it, x);
}

void SyncAutomaton::add_transition(State from, const std::vector<Symbol>& column, State to) {
  if (column.size() != arity_) throw ArgumentError("transition: column of wrong arity");
  for (Symbol s : column)
    if (s > alphabet_.size()) throw ArgumentError("transition: symbol out of range");
  add_transition(from, encode_letter(column, alphabet_.size()), to);
}

void SyncAutomaton::set_edges(State s, std::vector<Edge> edges) {
  for (const auto& [l, t] : edges)
    if (l >= letters_ || t >= num_states()) throw ArgumentError("set_edges: out of range");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  trans_[s] = std::move(edges);
}

std::size_t SyncAutomaton::num_transitions() const {
  std::size_t n = 0;
  for (const auto& e : trans_) n += e.size();
  return n;
}

bool SyncAutomaton::is_deterministic() const {
  if (initial_states().size() > 1) return false;
  for (const auto& e : trans_)
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i].first == e[i - 1].first) return false;
  return true;
}

void require_compatible(const SyncAutomaton& a, const SyncAutomaton& b, const char* op) {
  if (a.arity() != b.arity())
    throw ArgumentError(std::string(op) + ": arity mismatch (" + std::to_string(a.arity()) + " vs " +
                        std::to_string(b.arity()) + ")");
  if (a.alphabet() != b.alphabet()) throw ArgumentError(std::string(op) + ": alphabet mismatch");
}

std::vector<Letter> convolve(const WordTuple& words, std::size_t symbols) {
  std::size_t len = 0;
  for (const auto& w : words) len = std::max(len, w.size());
  std::vector<Letter> out;
  std::vector<Symbol> col(words.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < words.size(); ++j)
      col[j] = i < words[j].size() ? words[j][i] : Symbol(symbols);
    out.push_back(encode_letter(col, symbols));
  }
  return out;
}

WordTuple deconvolve(const std::vector<Letter>& conv, std::size_t symbols, std::size_t arity) {
  WordTuple out(arity);
  for (Letter l : conv) {
    auto c = decode_letter(l, symbols, arity);
    for (std::size_t j = 0; j < arity; ++j)
      if (c[j] != symbols) out[j].push_back(c[j]);
  }
  return out;
}

bool accepts(const SyncAutomaton& a, const WordTuple& words) {
  if (words.size() != a.arity())
    throw ArgumentError("accepts: expected " + std::to_string(a.arity()) + " words, got " +
                        std::to_string(words.size()));
  for (const auto& w : words)
    for (Symbol s : w)
      if (s >= a.alphabet().size()) throw ArgumentError("accepts: symbol out of range");
  std::vector<State> cur = a.initial_states();
  for (Letter l : convolve(words, a.alphabet().size())) {
    std::vector<State> next;
    for (State s : cur)
      for (auto it = std::lower_bound(a.edges(s).begin(), a.edges(s).end(), SyncAutomaton::Edge{l, 0});
           it != a.edges(s).end() && it->first == l; ++it)
        next.push_back(it->second);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    cur = std::move(next);
  }
  return std::any_of(cur.begin(), cur.end(), [&](State s) { return a.is_accepting(s); });
}

namespace {

// padmask[l] = set of coordinates reading pad in letter l
std::vector<std::uint32_t> pad_masks(std::size_t symbols, std::size_t arity) {
  const std::size_t n = letter_count(symbols, arity);
  std::vector<std::uint32_t> m(n, 0);
  for (Letter l = 0; l < n; ++l) {
    Letter x = l;
    for (std::size_t j = 0; j < arity; ++j) {
      if (x % (symbols + 1) == symbols) m[l] |= std::uint32_t(1) << j;
      x /= Letter(symbols + 1);
    }
  }
  return m;
}

void require_small_arity(std::size_t arity) {
  if (arity > 30) throw SizeGuardExceeded("arity too large");
}

}  // namespace

SyncAutomaton valid_convolutions(const Alphabet& alphabet, std::size_t arity) {
  require_small_arity(arity);
  SyncAutomaton v(alphabet, arity);
  const auto masks = pad_masks(alphabet.size(), arity);
  std::map<std::uint32_t, State> id;
  std::deque<std::uint32_t> q{0};
  id[0] = v.add_state(true, true);
  while (!q.empty()) {
    auto s = q.front();
    q.pop_front();
    std::vector<SyncAutomaton::Edge> edges;
    for (Letter l = 0; l < masks.size(); ++l) {
      if ((masks[l] & s) != s) continue;
      std::uint32_t t = s | masks[l];
      auto it = id.find(t);
      if (it == id.end()) {
        it = id.emplace(t, v.add_state(false, true)).first;
        q.push_back(t);
      }
      edges.emplace_back(l, it->second);
    }
    v.set_edges(id[s], std::move(edges));
  }
  return v;
}

SyncAutomaton trim(const SyncAutomaton& a) {
  const std::size_t n = a.num_states();
  std::vector<bool> fwd(n, false), bwd(n, false);
  std::vector<State> stack = a.initial_states();
  for (State s : stack) fwd[s] = true;
  std::vector<std::vector<State>> rev(n);
  for (State s = 0; s < n; ++s)
    for (const auto& [l, t] : a.edges(s)) rev[t].push_back(s);
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (const auto& [l, t] : a.edges(s))
      if (!fwd[t]) {
        fwd[t] = true;
        stack.push_back(t);
      }
  }
  for (State s = 0; s < n; ++s)
    if (a.is_accepting(s) && fwd[s]) {
      bwd[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    State s = stack.back();
    stack.pop_back();
    for (State p : rev[s])
      if (fwd[p] && !bwd[p]) {
        bwd[p] = true;
        stack.push_back(p);
      }
  }
  SyncAutomaton out(a.alphabet(), a.arity());
  std::vector<State> id(n, kNoState);
  for (State s = 0; s < n; ++s)
    if (fwd[s] && bwd[s]) id[s] = out.add_state(a.is_initial(s), a.is_accepting(s));
  for (State s = 0; s < n; ++s) {
    if (id[s] == kNoState) continue;
    std::vector<SyncAutomaton::Edge> edges;
    for (const auto& [l, t] : a.edges(s))
      if (id[t] != kNoState) edges.emplace_back(l, id[t]);
    out.set_edges(id[s], std::move(edges));
  }
  return out;
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<State>& v) const {
    std::size_t h = v.size();
    for (State s : v) h = h * 1000003u ^ s;
    return h;
  }
};

// Breadth-first renumbering from the (unique) initial state.
SyncAutomaton renumber_bfs(const SyncAutomaton& d) {
  SyncAutomaton out(d.alphabet(), d.arity());
  auto init = d.initial_states();
  if (init.empty()) {
    out.add_state(true, false);
    return out;
  }
  std::vector<State> id(d.num_states(), kNoState);
  std::vector<State> order{init[0]};
  id[init[0]] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& [l, t] : d.edges(order[i]))
      if (id[t] == kNoState) {
        id[t] = State(order.size());
        order.push_back(t);
      }
  for (State s : order) out.add_state(s == init[0], d.is_accepting(s));
  for (State s : order) {
    std::vector<SyncAutomaton::Edge> edges;
    for (const auto& [l, t] : d.edges(s)) edges.emplace_back(l, id[t]);
    out.set_edges(id[s], std::move(edges));
  }
  return out;
}

// Moore partition refinement of a trimmed partial DFA; a missing transition
// plays the role of the dead state, which is distinct from every live state.
SyncAutomaton minimize_trimmed(const SyncAutomaton& d) {
  const std::size_t n = d.num_states();
  std::vector<std::uint32_t> cls(n);
  for (State s = 0; s < n; ++s) cls[s] = d.is_accepting(s) ? 1 : 0;
  std::size_t classes = 0;
  for (;;) {
    std::vector<std::vector<std::uint32_t>> sig(n);
    for (State s = 0; s < n; ++s) {
      sig[s].push_back(cls[s]);
      for (const auto& [l, t] : d.edges(s)) {
        sig[s].push_back(l);
        sig[s].push_back(cls[t]);
      }
    }
    std::map<std::vector<std::uint32_t>, std::uint32_t> rank;
    for (State s = 0; s < n; ++s) rank.emplace(sig[s], 0);
    std::uint32_t r = 0;
    for (auto& [k, v] : rank) v = r++;
    for (State s = 0; s < n; ++s) cls[s] = rank[sig[s]];
    if (rank.size() == classes) break;
    classes = rank.size();
  }
  SyncAutomaton q(d.alphabet(), d.arity());
  for (std::size_t c = 0; c < classes; ++c) q.add_state();
  std::vector<bool> done(classes, false);
  for (State s = 0; s < n; ++s) {
    if (d.is_initial(s)) q.set_initial(cls[s]);
    if (done[cls[s]]) continue;
    done[cls[s]] = true;
    q.set_accepting(cls[s], d.is_accepting(s));
    std::vector<SyncAutomaton::Edge> edges;
    for (const auto& [l, t] : d.edges(s)) edges.emplace_back(l, cls[t]);
    q.set_edges(cls[s], std::move(edges));
  }
  return q;
}

}  // namespace

SyncAutomaton determinize(const SyncAutomaton& a) {
  SyncAutomaton d(a.alphabet(), a.arity());
  std::unordered_map<std::vector<State>, State, VectorHash> id;
  std::vector<std::vector<State>> sets;
  auto intern = [&](std::vector<State> s) {
    auto it = id.find(s);
    if (it != id.end()) return it->second;
    bool acc = std::any_of(s.begin(), s.end(), [&](State x) { return a.is_accepting(x); });
    State n = d.add_state(false, acc);
    id.emplace(s, n);
    sets.push_back(std::move(s));
    return n;
  };
  State start = intern(a.initial_states());
  d.set_initial(start);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<SyncAutomaton::Edge> all;
    for (State s : sets[i]) all.insert(all.end(), a.edges(s).begin(), a.edges(s).end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<SyncAutomaton::Edge> edges;
    for (std::size_t j = 0; j < all.size();) {
      std::size_t k = j;
      std::vector<State> target;
      while (k < all.size() && all[k].first == all[j].first) target.push_back(all[k++].second);
      edges.emplace_back(all[j].first, intern(std::move(target)));
      j = k;
    }
    d.set_edges(State(i), std::move(edges));
  }
  return d;
}

SyncAutomaton canonical(const SyncAutomaton& a) {
  SyncAutomaton d = trim(determinize(trim(a)));
  if (d.num_states() == 0) return renumber_bfs(d);
  return renumber_bfs(minimize_trimmed(d));
}

SyncAutomaton intersect(const SyncAutomaton& a, const SyncAutomaton& b) {
  require_compatible(a, b, "intersect");
  SyncAutomaton out(a.alphabet(), a.arity());
  std::map<std::pair<State, State>, State> id;
  std::deque<std::pair<State, State>> q;
  auto intern = [&](State x, State y) {
    auto it = id.find({x, y});
    if (it != id.end()) return it->second;
    State n = out.add_state(false, a.is_accepting(x) && b.is_accepting(y));
    id.emplace(std::make_pair(x, y), n);
    q.emplace_back(x, y);
    return n;
  };
  for (State x : a.initial_states())
    for (State y : b.initial_states()) out.set_initial(intern(x, y));
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    State src = id[{x, y}];
    const auto& ea = a.edges(x);
    const auto& eb = b.edges(y);
    std::vector<SyncAutomaton::Edge> edges;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
      if (ea[i].first < eb[j].first) {
        ++i;
      } else if (eb[j].first < ea[i].first) {
        ++j;
      } else {
        Letter l = ea[i].first;
        std::size_t j0 = j;
        for (; i < ea.size() && ea[i].first == l; ++i)
          for (j = j0; j < eb.size() && eb[j].first == l; ++j)
            edges.emplace_back(l, intern(ea[i].second, eb[j].second));
      }
    }
    out.set_edges(src, std::move(edges));
  }
  return trim(out);
}

SyncAutomaton unite(const SyncAutomaton& a, const SyncAutomaton& b) {
  require_compatible(a, b, "union");
  SyncAutomaton out(a.alphabet(), a.arity());
  for (const SyncAutomaton* x : {&a, &b}) {
    const State off = State(out.num_states());
    for (State s = 0; s < x->num_states(); ++s) out.add_state(x->is_initial(s), x->is_accepting(s));
    for (State s = 0; s < x->num_states(); ++s) {
      std::vector<SyncAutomaton::Edge> edges;
      for (const auto& [l, t] : x->edges(s)) edges.emplace_back(l, t + off);
      out.set_edges(s + off, std::move(edges));
    }
  }
  return out;
}

SyncAutomaton complement(const SyncAutomaton& a) {
  require_small_arity(a.arity());
  const SyncAutomaton d = canonical(a);
  const auto masks = pad_masks(a.alphabet().size(), a.arity());
  SyncAutomaton out(a.alphabet(), a.arity());
  // product of the completed DFA with the pad tracker; kNoState is the dead state
  std::map<std::pair<State, std::uint32_t>, State> id;
  std::deque<std::pair<State, std::uint32_t>> q;
  auto intern = [&](State x, std::uint32_t s) {
    auto it = id.find({x, s});
    if (it != id.end()) return it->second;
    State n = out.add_state(false, x == kNoState || !d.is_accepting(x));
    id.emplace(std::make_pair(x, s), n);
    q.emplace_back(x, s);
    return n;
  };
  out.set_initial(intern(d.initial_states().at(0), 0));
  std::size_t total = 0;
  while (!q.empty()) {
    auto [x, s] = q.front();
    q.pop_front();
    State src = id[{x, s}];
    std::vector<SyncAutomaton::Edge> edges;
    std::size_t k = 0;
    const auto* ed = x == kNoState ? nullptr : &d.edges(x);
    for (Letter l = 0; l < masks.size(); ++l) {
      State nx = kNoState;
      if (ed) {
        while (k < ed->size() && (*ed)[k].first < l) ++k;
        if (k < ed->size() && (*ed)[k].first == l) nx = (*ed)[k].second;
      }
      if ((masks[l] & s) != s) continue;
      edges.emplace_back(l, intern(nx, s | masks[l]));
    }
    total += edges.size();
    if (total > kMaxComplementEdges)
      throw SizeGuardExceeded("complement: more than " + std::to_string(kMaxComplementEdges) + " transitions");
    out.set_edges(src, std::move(edges));
  }
  return canonical(out);
}

SyncAutomaton difference(const SyncAutomaton& a, const SyncAutomaton& b) {
  require_compatible(a, b, "difference");
  return intersect(a, complement(b));
}

SyncAutomaton normalize(const SyncAutomaton& a) {
  return trim(intersect(a, valid_convolutions(a.alphabet(), a.arity())));
}

bool pad_consistent(const SyncAutomaton& a) {
  require_small_arity(a.arity());
  SyncAutomaton t = trim(a);
  const std::size_t m = a.alphabet().size();
  std::set<std::pair<State, std::uint32_t>> seen;
  std::vector<std::pair<State, std::uint32_t>> stack;
  for (State s : t.initial_states()) {
    seen.insert({s, 0});
    stack.emplace_back(s, 0);
  }
  while (!stack.empty()) {
    auto [s, pads] = stack.back();
    stack.pop_back();
    for (const auto& [l, x] : t.edges(s)) {
      auto c = decode_letter(l, m, a.arity());
      std::uint32_t now = 0;
      for (std::size_t j = 0; j < c.size(); ++j)
        if (c[j] == m) now |= std::uint32_t(1) << j;
      // every state of the trimmed automaton reaches acceptance
      if ((now & pads) != pads) return false;
      if (seen.insert({x, pads | now}).second) stack.emplace_back(x, pads | now);
    }
  }
  return true;
}

SyncAutomaton erase_coordinates(const SyncAutomaton& a, const std::vector<std::size_t>& keep) {
  for (auto j : keep)
    if (j >= a.arity()) throw ArgumentError("erase_coordinates: coordinate out of range");
  const std::size_t m = a.alphabet().size();
  const std::size_t n = a.num_states();
  std::vector<std::vector<State>> eps(n);
  std::vector<std::vector<SyncAutomaton::Edge>> real(n);
  for (State s = 0; s < n; ++s)
    for (const auto& [l, t] : a.edges(s)) {
      auto c = decode_letter(l, m, a.arity());
      std::vector<Symbol> kept;
      bool all_pad = true;
      for (auto j : keep) {
        kept.push_back(c[j]);
        all_pad = all_pad && c[j] == m;
      }
      if (all_pad)
        eps[s].push_back(t);
      else
        real[s].emplace_back(encode_letter(kept, m), t);
    }
  // erased coordinates that outlive the kept ones leave all-pad columns at
  // the tail; contract them into epsilon moves
  SyncAutomaton out(a.alphabet(), keep.size());
  for (State s = 0; s < n; ++s) out.add_state(a.is_initial(s), false);
  for (State s = 0; s < n; ++s) {
    std::vector<bool> in(n, false);
    std::vector<State> stack{s};
    in[s] = true;
    std::vector<SyncAutomaton::Edge> edges;
    bool acc = false;
    while (!stack.empty()) {
      State u = stack.back();
      stack.pop_back();
      acc = acc || a.is_accepting(u);
      edges.insert(edges.end(), real[u].begin(), real[u].end());
      for (State v : eps[u])
        if (!in[v]) {
          in[v] = true;
          stack.push_back(v);
        }
    }
    out.set_accepting(s, acc);
    out.set_edges(s, std::move(edges));
  }
  return trim(out);
}

SyncAutomaton project(const SyncAutomaton& a, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw ArgumentError("project: empty coordinate set");
  for (std::size_t i = 1; i < keep.size(); ++i)
    if (keep[i] <= keep[i - 1]) throw ArgumentError("project: coordinates must be increasing");
  return erase_coordinates(a, keep);
}

SyncAutomaton cylindrify(const SyncAutomaton& a, std::size_t n, const std::vector<std::size_t>& positions) {
  const std::size_t k = a.arity();
  if (positions.size() != k) throw ArgumentError("cylindrify: one position per coordinate required");
  std::vector<int> owner(n, -1);
  for (std::size_t j = 0; j < k; ++j) {
    if (positions[j] >= n || owner[positions[j]] != -1)
      throw ArgumentError("cylindrify: positions must be distinct and below the new arity");
    owner[positions[j]] = int(j);
  }
  std::vector<std::size_t> fresh;
  for (std::size_t i = 0; i < n; ++i)
    if (owner[i] == -1) fresh.push_back(i);
  const std::size_t m = a.alphabet().size();
  std::size_t fillings = 1;
  for (std::size_t i = 0; i < fresh.size(); ++i) fillings *= m + 1;
  letter_count(m, n);  // size guard

  SyncAutomaton out(a.alphabet(), n);
  for (State s = 0; s < a.num_states(); ++s) out.add_state(a.is_initial(s), a.is_accepting(s));
  // reached once every old coordinate has ended
  const State tail = out.add_state(false, true);
  auto column = [&](const std::vector<Symbol>& old, std::size_t fill) {
    std::vector<Symbol> c(n);
    for (std::size_t j = 0; j < k; ++j) c[positions[j]] = old[j];
    for (std::size_t i : fresh) {
      c[i] = Symbol(fill % (m + 1));
      fill /= m + 1;
    }
    return c;
  };
  auto all_pad = [&](const std::vector<Symbol>& c) {
    return std::all_of(c.begin(), c.end(), [&](Symbol x) { return x == m; });
  };
  std::vector<std::vector<SyncAutomaton::Edge>> edges(out.num_states());
  for (State s = 0; s < a.num_states(); ++s)
    for (const auto& [l, t] : a.edges(s)) {
      auto old = decode_letter(l, m, k);
      for (std::size_t f = 0; f < fillings; ++f) edges[s].emplace_back(encode_letter(column(old, f), m), t);
    }
  const std::vector<Symbol> pads(k, Symbol(m));
  for (std::size_t f = 0; f < fillings; ++f) {
    auto c = column(pads, f);
    if (all_pad(c)) continue;
    Letter l = encode_letter(c, m);
    edges[tail].emplace_back(l, tail);
    for (State s = 0; s < a.num_states(); ++s)
      if (a.is_accepting(s)) edges[s].emplace_back(l, tail);
  }
  for (State s = 0; s < out.num_states(); ++s) out.set_edges(s, std::move(edges[s]));
  return trim(intersect(out, valid_convolutions(a.alphabet(), n)));
}

bool is_empty(const SyncAutomaton& a) { return trim(a).num_states() == 0; }

bool equivalent(const SyncAutomaton& a, const SyncAutomaton& b) {
  require_compatible(a, b, "equivalent");
  return canonical(a) == canonical(b);
}

bool included(const SyncAutomaton& a, const SyncAutomaton& b) {
  require_compatible(a, b, "included");
  return is_empty(intersect(a, complement(b)));
}

std::optional<WordTuple> shortest_accepted(const SyncAutomaton& a) {
  const std::size_t n = a.num_states();
  std::vector<std::pair<State, Letter>> parent(n, {kNoState, 0});
  std::vector<bool> seen(n, false);
  std::deque<State> q;
  for (State s : a.initial_states()) {
    seen[s] = true;
    q.push_back(s);
  }
  while (!q.empty()) {
    State s = q.front();
    q.pop_front();
    if (a.is_accepting(s)) {
      std::vector<Letter> conv;
      for (State x = s; parent[x].first != kNoState; x = parent[x].first) conv.push_back(parent[x].second);
      std::reverse(conv.begin(), conv.end());
      return deconvolve(conv, a.alphabet().size(), a.arity());
    }
    for (const auto& [l, t] : a.edges(s))
      if (!seen[t]) {
        seen[t] = true;
        parent[t] = {s, l};
        q.push_back(t);
      }
  }
  return std::nullopt;
}

bool is_finite_language(const SyncAutomaton& a) {
  SyncAutomaton t = trim(a);
  std::vector<int> color(t.num_states(), 0);
  std::function<bool(State)> cyclic = [&](State s) {
    color[s] = 1;
    for (const auto& [l, x] : t.edges(s)) {
      if (color[x] == 1) return true;
      if (color[x] == 0 && cyclic(x)) return true;
    }
    color[s] = 2;
    return false;
  };
  for (State s = 0; s < t.num_states(); ++s)
    if (color[s] == 0 && cyclic(s)) return false;
  return true;
}

std::vector<WordTuple> enumerate_language(const SyncAutomaton& a, std::size_t guard) {
  if (!is_finite_language(a)) throw ArgumentError("enumerate_language: infinite language");
  SyncAutomaton t = trim(a);
  std::set<std::vector<Letter>> words;
  std::vector<Letter> cur;
  std::function<void(State)> dfs = [&](State s) {
    if (t.is_accepting(s)) {
      words.insert(cur);
      if (words.size() > guard) throw SizeGuardExceeded("enumerate_language: language too large");
    }
    for (const auto& [l, x] : t.edges(s)) {
      cur.push_back(l);
      dfs(x);
      cur.pop_back();
    }
  };
  for (State s : t.initial_states()) dfs(s);
  std::vector<WordTuple> out;
  for (const auto& w : words) out.push_back(deconvolve(w, a.alphabet().size(), a.arity()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SyncAutomaton all_words(const Alphabet& alphabet) {
  SyncAutomaton a(alphabet, 1);
  State s = a.add_state(true, true);
  for (Symbol x = 0; x < alphabet.size(); ++x) a.add_transition(s, x, s);
  return a;
}

SyncAutomaton empty_language(const Alphabet& alphabet, std::size_t arity) {
  SyncAutomaton a(alphabet, arity);
  a.add_state(true, false);
  return a;
}

SyncAutomaton equality_relation(const Alphabet& alphabet) {
  SyncAutomaton a(alphabet, 2);
  State s = a.add_state(true, true);
  for (Symbol x = 0; x < alphabet.size(); ++x) a.add_transition(s, {x, x}, s);
  return a;
}

SyncAutomaton equal_length_relation(const Alphabet& alphabet) {
  SyncAutomaton a(alphabet, 2);
  State s = a.add_state(true, true);
  for (Symbol x = 0; x < alphabet.size(); ++x)
    for (Symbol y = 0; y < alphabet.size(); ++y) a.add_transition(s, {x, y}, s);
  return a;
}

SyncAutomaton prefix_relation(const Alphabet& alphabet) {
  // one state reading (a,a) and (pad,a); pad consistency rules out (pad,a)(b,b)
  SyncAutomaton a(alphabet, 2);
  State s = a.add_state(true, true);
  const Symbol pad = alphabet.pad();
  for (Symbol x = 0; x < alphabet.size(); ++x) {
    a.add_transition(s, {x, x}, s);
    a.add_transition(s, {pad, x}, s);
  }
  return normalize(a);
}

SyncAutomaton successor_relation(const Alphabet& alphabet) {
  SyncAutomaton a(alphabet, 2);
  State q0 = a.add_state(true, false);
  State q1 = a.add_state(false, true);
  for (Symbol x = 0; x < alphabet.size(); ++x) {
    a.add_transition(q0, {x, x}, q0);
    a.add_transition(q0, {alphabet.pad(), x}, q1);
  }
  return a;
}

SyncAutomaton last_letter_relation(const Alphabet& alphabet, Symbol letter) {
  if (letter >= alphabet.size()) throw ArgumentError("last_letter: symbol out of range");
  SyncAutomaton a(alphabet, 1);
  State q0 = a.add_state(true, false);
  State q1 = a.add_state(false, true);
  for (Symbol x = 0; x < alphabet.size(); ++x) {
    a.add_transition(q0, x, x == letter ? q1 : q0);
    a.add_transition(q1, x, x == letter ? q1 : q0);
  }
  return a;
}

SyncAutomaton finite_relation(const Alphabet& alphabet, std::size_t arity,
                              const std::vector<WordTuple>& tuples) {
  SyncAutomaton a(alphabet, arity);
  State root = a.add_state(true, false);
  // a trie over convolutions
  std::map<std::pair<State, Letter>, State> child;
  for (const auto& t : tuples) {
    if (t.size() != arity) throw ArgumentError("finite_relation: tuple of wrong arity");
    State s = root;
    for (Letter l : convolve(t, alphabet.size())) {
      auto it = child.find({s, l});
      if (it == child.end()) {
        State n = a.add_state();
        a.add_transition(s, l, n);
        it = child.emplace(std::make_pair(s, l), n).first;
      }
      s = it->second;
    }
    a.set_accepting(s);
  }
  return canonical(a);
}

}  // namespace autohom
