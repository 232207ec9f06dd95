#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "atemp/learner.hpp"

namespace atemp::freesmc {

using Word = std::vector<std::string>;

std::string word_str(const Word& w);

struct GenDecl {
  Word dom, cod;
};

class Signature {
 public:
  void add_object(const std::string& name);
  void add_morphism(const std::string& name, Word dom, Word cod);

  bool has_object(const std::string& name) const;
  const GenDecl* morphism(const std::string& name) const;
  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<std::pair<std::string, GenDecl>>& morphisms() const { return morphisms_; }

  void validate_word(const Word& w) const;

 private:
  std::vector<std::string> objects_;
  std::vector<std::pair<std::string, GenDecl>> morphisms_;
  std::unordered_map<std::string, int> object_pos_, morphism_pos_;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { id, gen, seq, par, sym };
  Kind kind;
  Word w1, w2;      // id: w1; sym: w1 | w2
  std::string gen;  // gen
  TermPtr lhs, rhs; // seq / par
};

TermPtr make_id(Word w);
TermPtr make_gen(std::string name);
TermPtr make_seq(TermPtr a, TermPtr b);
TermPtr make_par(TermPtr a, TermPtr b);
TermPtr make_sym(Word w1, Word w2);

struct ParseError : Error {
  ParseError(const std::string& what, size_t position) : Error(what), position(position) {}
  size_t position;
};

/// Grammar: `;` sequences (loose), `*` tensors (tight), `id[w]`,
/// `sym[w1|w2]`, generator names, parentheses.
TermPtr parse_term(const std::string& text, const Signature& sig);
std::string print_term(const TermPtr& t);

/// Returns (dom, cod); throws Error naming the offending words on a
/// composition mismatch, or on unknown generators.
std::pair<Word, Word> typecheck(const TermPtr& t, const Signature& sig);

/// An open hypergraph: labeled wires, generator nodes with ordered ports,
/// and input/output boundary lists. Wires are linear (one producer, one
/// consumer, boundaries included).
struct Hypergraph {
  struct Node {
    std::string gen;
    std::vector<int> ins, outs;
  };
  std::vector<Node> nodes;
  std::vector<std::string> wire_label;
  std::vector<int> inputs, outputs;
};

Hypergraph to_hypergraph(const TermPtr& t, const Signature& sig);

/// A printable canonical form: equal strings exactly when the terms denote
/// the same morphism of the free symmetric monoidal category. Node order
/// comes from breadth-first wire tracing anchored at the boundary.
std::string hypergraph_canonical(const Hypergraph& h);

/// Both terms must share dom and cod words.
bool structural_eq(const TermPtr& t1, const TermPtr& t2, const Signature& sig);

/// A finite-set interpretation: carriers per object generator and a function
/// per morphism generator between the word carriers.
struct Interp {
  std::unordered_map<std::string, FinSet> objects;
  std::unordered_map<std::string, FinFun> morphisms;
};

/// Carrier of a word: the unit for the empty word, the base carrier for one
/// letter, flat tuple labels "(x1,...,xn)" beyond.
FinSet word_carrier(const Word& w, const Interp& in);

/// Strict monoidal evaluation.
FinFun eval(const TermPtr& t, const Signature& sig, const Interp& in);

struct FormalLearner {
  Word a, a_back, b, b_back, param, residual;
  TermPtr forward;   // param·a -> residual·b
  TermPtr backward;  // residual·b_back -> param·a_back
};

void typecheck(const FormalLearner& fl, const Signature& sig);
Learner eval_learner(const FormalLearner& fl, const Signature& sig, const Interp& in);

enum class FormalVerdict { distinguished, consistent };
/// Distinguished when some interpretation's semantics relation separates the
/// two; consistent otherwise (never a proof of equality).
FormalVerdict atemp_check_formal(const FormalLearner& f1, const FormalLearner& f2,
                                 const Signature& sig, const std::vector<Interp>& interps);

/// Text format: `obj a b c`, `gen f : a b -> c`, `term name = ...`,
/// `#` comments.
struct SigFile {
  Signature sig;
  std::vector<std::pair<std::string, TermPtr>> terms;
  const TermPtr* term(const std::string& name) const;
};

SigFile parse_sig_file(const std::string& text);

}  // namespace atemp::freesmc
