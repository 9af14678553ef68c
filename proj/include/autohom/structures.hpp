#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace autohom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Predicate {
  std::string name;
  std::size_t arity = 0;

  bool operator==(const Predicate&) const = default;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<Predicate> predicates);

  // single binary predicate E
  static Signature graph();

  std::size_t size() const { return preds_.size(); }
  const Predicate& operator[](std::size_t i) const { return preds_[i]; }
  const std::vector<Predicate>& predicates() const { return preds_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  bool unary_only() const;
  std::size_t max_arity() const;
  std::string to_string() const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<Predicate> preds_;
};

// Tuples of every relation are kept sorted and duplicate-free, so two
// structures with the same names and tuples compare equal.
class FiniteStructure {
 public:
  FiniteStructure() = default;
  FiniteStructure(Signature sig, std::vector<std::string> names);
  FiniteStructure(Signature sig, std::size_t n);  // elements named 0..n-1

  const Signature& signature() const { return sig_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(Element e) const { return names_[e]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Element> find(std::string_view name) const;
  Element element(std::string_view name) const;

  void add_tuple(std::size_t pred, Tuple t);
  void add_tuple(std::string_view pred, const std::vector<std::string>& elems);
  void set_tuples(std::size_t pred, std::vector<Tuple> tuples);
  const std::vector<Tuple>& tuples(std::size_t pred) const { return rels_[pred]; }
  bool contains(std::size_t pred, const Tuple& t) const;
  std::size_t tuple_count() const;

  bool operator==(const FiniteStructure&) const = default;

 private:
  void check_tuple(std::size_t pred, const Tuple& t) const;

  Signature sig_;
  std::vector<std::string> names_;
  std::vector<std::vector<Tuple>> rels_;
};

// Generators. Domains are 0..k-1 for cliques and 0..k for paths and
// transitive tournaments.
FiniteStructure clique(int k);
FiniteStructure path(int k);
FiniteStructure transitive_tournament(int k);
// Elements in order a'0 a0 b0 a1 b1 ... an bn b'n.
FiniteStructure zigzag(int n);
FiniteStructure link(int n, const Signature& sig = Signature::graph());
FiniteStructure unary_singleton(const Signature& sig, const std::vector<std::string>& tau);

enum class GeneratorKind { Clique, Path, TransitiveTournament, Zigzag, Link };
FiniteStructure generate(GeneratorKind kind, int n);

FiniteStructure product(const FiniteStructure& a, const FiniteStructure& b);
FiniteStructure disjoint_union(const FiniteStructure& a, const FiniteStructure& b);

// Substructure induced by the given elements (kept in the given order).
FiniteStructure induced(const FiniteStructure& a, const std::vector<Element>& keep);
FiniteStructure remove_tuple(const FiniteStructure& a, std::size_t pred, std::size_t index);

// A marked structure is a FiniteStructure over sigma extended with one unary
// predicate P_<b> per target element, appended in element order.
using MarkedStructure = FiniteStructure;

Signature marked_signature(const FiniteStructure& b);
MarkedStructure mark_target(const FiniteStructure& b);
FiniteStructure collapse_marks(const MarkedStructure& a, const FiniteStructure& b);

// pos is 0-based. Returns the sorted (k-1)-tuples completing elem at pos.
std::vector<Tuple> adjacency(const FiniteStructure& a, Element elem, std::size_t pred,
                             std::size_t pos);

inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

struct IncidenceGraph {
  // vertices 0..n-1 are elements, n.. are hyperedges (pred, tuple index)
  std::size_t elements = 0;
  std::vector<std::pair<std::size_t, std::size_t>> hyperedges;
  std::vector<std::vector<std::size_t>> adj;
};

IncidenceGraph incidence_graph(const FiniteStructure& a);
std::vector<std::size_t> distances_from(const FiniteStructure& a, Element x);
std::size_t distance(const FiniteStructure& a, Element x, Element y);
std::size_t diameter(const FiniteStructure& a);  // kInfinite when disconnected
std::vector<std::vector<Element>> connected_components(const FiniteStructure& a);
bool is_connected(const FiniteStructure& a);
FiniteStructure ball(const FiniteStructure& a, Element center, std::size_t radius);
bool is_sigma_tree(const FiniteStructure& a);

}  // namespace autohom
