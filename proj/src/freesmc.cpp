#include "atemp/freesmc.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include "atemp/semantics.hpp"

namespace atemp::freesmc {

std::string word_str(const Word& w) {
  if (w.empty()) return "()";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    s += w[i];
  }
  return s;
}

void Signature::add_object(const std::string& name) {
  if (object_pos_.count(name) || morphism_pos_.count(name))
    throw Error("signature: duplicate generator '" + name + "'");
  object_pos_[name] = static_cast<int>(objects_.size());
  objects_.push_back(name);
}

void Signature::add_morphism(const std::string& name, Word dom, Word cod) {
  if (object_pos_.count(name) || morphism_pos_.count(name))
    throw Error("signature: duplicate generator '" + name + "'");
  validate_word(dom);
  validate_word(cod);
  morphism_pos_[name] = static_cast<int>(morphisms_.size());
  morphisms_.emplace_back(name, GenDecl{std::move(dom), std::move(cod)});
}

bool Signature::has_object(const std::string& name) const { return object_pos_.count(name) > 0; }

const GenDecl* Signature::morphism(const std::string& name) const {
  auto it = morphism_pos_.find(name);
  return it == morphism_pos_.end() ? nullptr : &morphisms_[it->second].second;
}

void Signature::validate_word(const Word& w) const {
  for (const auto& x : w)
    if (!has_object(x)) throw Error("signature: unknown object '" + x + "'");
}

TermPtr make_id(Word w) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::id;
  t->w1 = std::move(w);
  return t;
}

TermPtr make_gen(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::gen;
  t->gen = std::move(name);
  return t;
}

TermPtr make_seq(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::seq;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}

TermPtr make_par(TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::par;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}

TermPtr make_sym(Word w1, Word w2) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::sym;
  t->w1 = std::move(w1);
  t->w2 = std::move(w2);
  return t;
}

// ---------------------------------------------------------------------------
// Parser.

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos);
  }

  static bool ident_start(char c) { return isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos]))
      throw ParseError("expected a name", pos);
    size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    return text.substr(start, pos - start);
  }

  Word word_until(char stop1, char stop2) {
    Word w;
    while (true) {
      skip_ws();
      if (pos >= text.size()) throw ParseError("unterminated word", pos);
      if (text[pos] == stop1 || text[pos] == stop2) return w;
      w.push_back(ident());
    }
  }
};

struct Parser {
  Lexer lex;
  const Signature& sig;

  TermPtr term() {
    TermPtr t = par();
    while (lex.accept(';')) t = make_seq(t, par());
    return t;
  }

  TermPtr par() {
    TermPtr t = atom();
    while (lex.accept('*')) t = make_par(t, atom());
    return t;
  }

  TermPtr atom() {
    if (lex.accept('(')) {
      TermPtr t = term();
      lex.expect(')');
      return t;
    }
    size_t at = lex.pos;
    std::string name = lex.ident();
    if (name == "id") {
      lex.expect('[');
      Word w = lex.word_until(']', ']');
      lex.expect(']');
      sig.validate_word(w);
      return make_id(std::move(w));
    }
    if (name == "sym") {
      lex.expect('[');
      Word w1 = lex.word_until('|', '|');
      lex.expect('|');
      Word w2 = lex.word_until(']', ']');
      lex.expect(']');
      sig.validate_word(w1);
      sig.validate_word(w2);
      return make_sym(std::move(w1), std::move(w2));
    }
    if (!sig.morphism(name)) throw ParseError("unknown generator '" + name + "'", at);
    return make_gen(std::move(name));
  }
};

}  // namespace

TermPtr parse_term(const std::string& text, const Signature& sig) {
  Parser p{Lexer{text, 0}, sig};
  TermPtr t = p.term();
  if (!p.lex.eof()) throw ParseError("trailing input", p.lex.pos);
  return t;
}

std::string print_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::id: return "id[" + word_str(t->w1) + "]";
    case Term::Kind::gen: return t->gen;
    case Term::Kind::sym: return "sym[" + word_str(t->w1) + "|" + word_str(t->w2) + "]";
    case Term::Kind::seq: return "(" + print_term(t->lhs) + " ; " + print_term(t->rhs) + ")";
    case Term::Kind::par: return "(" + print_term(t->lhs) + " * " + print_term(t->rhs) + ")";
  }
  return "?";
}

std::pair<Word, Word> typecheck(const TermPtr& t, const Signature& sig) {
  switch (t->kind) {
    case Term::Kind::id: sig.validate_word(t->w1); return {t->w1, t->w1};
    case Term::Kind::gen: {
      const GenDecl* d = sig.morphism(t->gen);
      if (!d) throw Error("typecheck: unknown generator '" + t->gen + "'");
      return {d->dom, d->cod};
    }
    case Term::Kind::sym: {
      sig.validate_word(t->w1);
      sig.validate_word(t->w2);
      Word dom = t->w1, cod = t->w2;
      dom.insert(dom.end(), t->w2.begin(), t->w2.end());
      cod.insert(cod.end(), t->w1.begin(), t->w1.end());
      return {dom, cod};
    }
    case Term::Kind::seq: {
      auto [d1, c1] = typecheck(t->lhs, sig);
      auto [d2, c2] = typecheck(t->rhs, sig);
      if (c1 != d2)
        throw Error("typecheck: cannot compose, '" + word_str(c1) + "' meets '" + word_str(d2) +
                    "'");
      return {d1, c2};
    }
    case Term::Kind::par: {
      auto [d1, c1] = typecheck(t->lhs, sig);
      auto [d2, c2] = typecheck(t->rhs, sig);
      Word d = d1, c = c1;
      d.insert(d.end(), d2.begin(), d2.end());
      c.insert(c.end(), c2.begin(), c2.end());
      return {d, c};
    }
  }
  throw Error("typecheck: bad term");
}

// ---------------------------------------------------------------------------
// Hypergraph construction.

namespace {

struct Builder {
  const Signature& sig;
  std::vector<std::string> labels;
  std::vector<int> uf;
  std::vector<Hypergraph::Node> nodes;

  int fresh(const std::string& label) {
    labels.push_back(label);
    uf.push_back(static_cast<int>(uf.size()));
    return static_cast<int>(uf.size()) - 1;
  }

  int find(int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  }

  void unite(int a, int b) { uf[find(a)] = find(b); }

  std::pair<std::vector<int>, std::vector<int>> build(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::id: {
        std::vector<int> ws;
        for (const auto& x : t->w1) ws.push_back(fresh(x));
        return {ws, ws};
      }
      case Term::Kind::sym: {
        std::vector<int> left, right;
        for (const auto& x : t->w1) left.push_back(fresh(x));
        for (const auto& x : t->w2) right.push_back(fresh(x));
        std::vector<int> ins = left, outs = right;
        ins.insert(ins.end(), right.begin(), right.end());
        outs.insert(outs.end(), left.begin(), left.end());
        return {ins, outs};
      }
      case Term::Kind::gen: {
        const GenDecl* d = sig.morphism(t->gen);
        std::vector<int> ins, outs;
        for (const auto& x : d->dom) ins.push_back(fresh(x));
        for (const auto& x : d->cod) outs.push_back(fresh(x));
        nodes.push_back(Hypergraph::Node{t->gen, ins, outs});
        return {ins, outs};
      }
      case Term::Kind::seq: {
        auto [i1, o1] = build(t->lhs);
        auto [i2, o2] = build(t->rhs);
        if (o1.size() != i2.size()) throw Error("hypergraph: ill-typed composition");
        for (size_t k = 0; k < o1.size(); ++k) unite(o1[k], i2[k]);
        return {i1, o2};
      }
      case Term::Kind::par: {
        auto [i1, o1] = build(t->lhs);
        auto [i2, o2] = build(t->rhs);
        i1.insert(i1.end(), i2.begin(), i2.end());
        o1.insert(o1.end(), o2.begin(), o2.end());
        return {i1, o1};
      }
    }
    throw Error("hypergraph: bad term");
  }
};

}  // namespace

Hypergraph to_hypergraph(const TermPtr& t, const Signature& sig) {
  typecheck(t, sig);
  Builder b{sig, {}, {}, {}};
  auto [ins, outs] = b.build(t);

  std::vector<int> compact(b.uf.size(), -1);
  Hypergraph h;
  auto resolve = [&](int w) {
    int r = b.find(w);
    if (compact[r] < 0) {
      compact[r] = static_cast<int>(h.wire_label.size());
      h.wire_label.push_back(b.labels[r]);
    }
    return compact[r];
  };
  for (int w : ins) h.inputs.push_back(resolve(w));
  for (auto& n : b.nodes) {
    Hypergraph::Node out{n.gen, {}, {}};
    for (int w : n.ins) out.ins.push_back(resolve(w));
    for (int w : n.outs) out.outs.push_back(resolve(w));
    h.nodes.push_back(std::move(out));
  }
  for (int w : outs) h.outputs.push_back(resolve(w));
  return h;
}

// ---------------------------------------------------------------------------
// Canonicalization: breadth-first wire tracing anchored at the boundary.

namespace {

struct CanonState {
  const Hypergraph& h;
  std::vector<int> wire_rank;
  std::vector<char> done;
  int next_rank = 0;
  std::string out;

  explicit CanonState(const Hypergraph& h_)
      : h(h_), wire_rank(h_.wire_label.size(), -1), done(h_.nodes.size(), 0) {}

  void rank_wire(int w) {
    if (wire_rank[w] < 0) wire_rank[w] = next_rank++;
  }

  void emit_node(int i) {
    const auto& n = h.nodes[i];
    out += n.gen;
    out += "(";
    for (int w : n.ins) out += std::to_string(wire_rank[w]) + ",";
    out += ")->(";
    for (int w : n.outs) rank_wire(w);
    for (int w : n.outs) out += std::to_string(wire_rank[w]) + ",";
    out += ");";
    done[i] = 1;
  }

  void emit_node_backward(int i) {
    const auto& n = h.nodes[i];
    for (int w : n.ins) rank_wire(w);
    emit_node(i);
  }

  // key used to order candidates; smaller is processed first
  std::vector<int> fwd_key(int i) const {
    const auto& n = h.nodes[i];
    std::vector<int> key;
    int least = INT_MAX;
    for (int w : n.ins) least = std::min(least, wire_rank[w]);
    key.push_back(least);
    for (char c : n.gen) key.push_back(c);
    key.push_back(-1);
    for (int w : n.ins) key.push_back(wire_rank[w]);
    return key;
  }

  std::vector<int> bwd_key(int i) const {
    const auto& n = h.nodes[i];
    std::vector<int> key;
    int least = INT_MAX;
    for (int w : n.outs) least = std::min(least, wire_rank[w]);
    key.push_back(least);
    for (char c : n.gen) key.push_back(c);
    key.push_back(-1);
    for (int w : n.outs) key.push_back(wire_rank[w]);
    return key;
  }

  bool fwd_ready(int i) const {
    if (done[i]) return false;
    for (int w : h.nodes[i].ins)
      if (wire_rank[w] < 0) return false;
    return true;
  }

  bool bwd_ready(int i) const {
    if (done[i]) return false;
    for (int w : h.nodes[i].outs)
      if (wire_rank[w] < 0) return false;
    return true;
  }
};

std::string canon_run(CanonState s, bool outputs_seeded);

// Continues the traversal, branching on genuine ties (same generator with no
// anchored ports on either candidate); returns the least serialization.
std::string canon_run(CanonState s, bool outputs_seeded) {
  while (true) {
    // forward-ready nodes first
    std::vector<int> ready;
    for (size_t i = 0; i < s.h.nodes.size(); ++i)
      if (s.fwd_ready(static_cast<int>(i))) ready.push_back(static_cast<int>(i));
    bool backward = false;
    if (ready.empty() && outputs_seeded) {
      for (size_t i = 0; i < s.h.nodes.size(); ++i)
        if (s.bwd_ready(static_cast<int>(i))) ready.push_back(static_cast<int>(i));
      backward = true;
    }
    if (ready.empty()) {
      bool remaining = false;
      for (char d : s.done) remaining = remaining || !d;
      if (!remaining) {
        if (!outputs_seeded) {
          for (int w : s.h.outputs) s.rank_wire(w);
          outputs_seeded = true;
          continue;
        }
        // all nodes placed: serialize boundary and labels
        std::string fin = s.out;
        fin += "|in:";
        for (int w : s.h.inputs) fin += std::to_string(s.wire_rank[w]) + ",";
        fin += "|out:";
        for (int w : s.h.outputs) fin += std::to_string(s.wire_rank[w]) + ",";
        std::vector<std::pair<int, std::string>> lbl;
        for (size_t w = 0; w < s.h.wire_label.size(); ++w)
          lbl.emplace_back(s.wire_rank[w], s.h.wire_label[w]);
        std::sort(lbl.begin(), lbl.end());
        fin += "|wires:";
        for (auto& [r, l] : lbl) fin += l + ",";
        return fin;
      }
      if (!outputs_seeded) {
        for (int w : s.h.outputs) s.rank_wire(w);
        outputs_seeded = true;
        continue;
      }
      throw Error("canonical form: unreachable nodes");  // cycles cannot happen
    }

    auto key_of = [&](int i) { return backward ? s.bwd_key(i) : s.fwd_key(i); };
    int best = ready[0];
    std::vector<int> best_key = key_of(best);
    std::vector<int> tied{best};
    for (size_t k = 1; k < ready.size(); ++k) {
      auto key = key_of(ready[k]);
      if (key < best_key) {
        best = ready[k];
        best_key = std::move(key);
        tied = {best};
      } else if (key == best_key) {
        tied.push_back(ready[k]);
      }
    }

    if (tied.size() == 1 || best_key[0] != INT_MAX) {
      // unique, or anchored by a wire (linearity makes anchored keys unique)
      if (backward)
        s.emit_node_backward(best);
      else
        s.emit_node(best);
      continue;
    }
    // floating tie (no anchored ports): branch and keep the least outcome
    std::string least;
    for (int cand : tied) {
      CanonState branch = s;
      if (backward)
        branch.emit_node_backward(cand);
      else
        branch.emit_node(cand);
      std::string r = canon_run(std::move(branch), outputs_seeded);
      if (least.empty() || r < least) least = std::move(r);
    }
    return least;
  }
}

}  // namespace

std::string hypergraph_canonical(const Hypergraph& h) {
  CanonState s(h);
  for (int w : h.inputs) s.rank_wire(w);
  return canon_run(std::move(s), false);
}

bool structural_eq(const TermPtr& t1, const TermPtr& t2, const Signature& sig) {
  auto [d1, c1] = typecheck(t1, sig);
  auto [d2, c2] = typecheck(t2, sig);
  if (d1 != d2 || c1 != c2)
    throw BoundaryMismatch("structural_eq: terms have different boundaries");
  return hypergraph_canonical(to_hypergraph(t1, sig)) ==
         hypergraph_canonical(to_hypergraph(t2, sig));
}

// ---------------------------------------------------------------------------
// Evaluation.

FinSet word_carrier(const Word& w, const Interp& in) {
  if (w.empty()) return FinSet::unit();
  std::vector<const FinSet*> parts;
  for (const auto& x : w) {
    auto it = in.objects.find(x);
    if (it == in.objects.end()) throw Error("interpretation: missing object '" + x + "'");
    parts.push_back(&it->second);
  }
  if (parts.size() == 1) return *parts[0];
  int total = 1;
  for (auto* p : parts) total *= p->size();
  std::vector<std::string> labels;
  labels.reserve(total);
  std::vector<int> digits(parts.size(), 0);
  for (int i = 0; i < total; ++i) {
    std::string l = "(";
    for (size_t k = 0; k < parts.size(); ++k) {
      if (k) l += ",";
      l += parts[k]->label(digits[k]);
    }
    l += ")";
    labels.push_back(std::move(l));
    for (int k = static_cast<int>(parts.size()) - 1; k >= 0; --k) {
      if (++digits[k] < parts[k]->size()) break;
      digits[k] = 0;
    }
  }
  return FinSet(std::move(labels));
}

namespace {

int word_size(const Word& w, const Interp& in) {
  int total = 1;
  for (const auto& x : w) {
    auto it = in.objects.find(x);
    if (it == in.objects.end()) throw Error("interpretation: missing object '" + x + "'");
    total *= it->second.size();
  }
  return total;
}

}  // namespace

FinFun eval(const TermPtr& t, const Signature& sig, const Interp& in) {
  switch (t->kind) {
    case Term::Kind::id: return FinFun::identity(word_carrier(t->w1, in));
    case Term::Kind::gen: {
      const GenDecl* d = sig.morphism(t->gen);
      if (!d) throw Error("eval: unknown generator '" + t->gen + "'");
      auto it = in.morphisms.find(t->gen);
      if (it == in.morphisms.end())
        throw Error("interpretation: missing morphism '" + t->gen + "'");
      const FinFun& f = it->second;
      if (f.dom() != word_carrier(d->dom, in) || f.cod() != word_carrier(d->cod, in))
        throw Error("interpretation: carrier mismatch for '" + t->gen + "'");
      return f;
    }
    case Term::Kind::sym: {
      int n1 = word_size(t->w1, in), n2 = word_size(t->w2, in);
      Word dom_w = t->w1, cod_w = t->w2;
      dom_w.insert(dom_w.end(), t->w2.begin(), t->w2.end());
      cod_w.insert(cod_w.end(), t->w1.begin(), t->w1.end());
      FinSet dom = word_carrier(dom_w, in), cod = word_carrier(cod_w, in);
      std::vector<int> table(dom.size());
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) table[i * n2 + j] = j * n1 + i;
      return FinFun(std::move(dom), std::move(cod), std::move(table));
    }
    case Term::Kind::seq: {
      FinFun f = eval(t->lhs, sig, in);
      FinFun g = eval(t->rhs, sig, in);
      return f.then(g);
    }
    case Term::Kind::par: {
      auto [d1, c1] = typecheck(t->lhs, sig);
      auto [d2, c2] = typecheck(t->rhs, sig);
      FinFun f = eval(t->lhs, sig, in);
      FinFun g = eval(t->rhs, sig, in);
      Word dom_w = d1, cod_w = c1;
      dom_w.insert(dom_w.end(), d2.begin(), d2.end());
      cod_w.insert(cod_w.end(), c2.begin(), c2.end());
      FinSet dom = word_carrier(dom_w, in), cod = word_carrier(cod_w, in);
      const int gn = g.dom().size();
      const int gc = g.cod().size();
      std::vector<int> table(dom.size());
      for (int i = 0; i < f.dom().size(); ++i)
        for (int j = 0; j < gn; ++j) table[i * gn + j] = f(i) * gc + g(j);
      return FinFun(std::move(dom), std::move(cod), std::move(table));
    }
  }
  throw Error("eval: bad term");
}

void typecheck(const FormalLearner& fl, const Signature& sig) {
  auto cat = [](const Word& x, const Word& y) {
    Word w = x;
    w.insert(w.end(), y.begin(), y.end());
    return w;
  };
  auto [fd, fc] = typecheck(fl.forward, sig);
  if (fd != cat(fl.param, fl.a) || fc != cat(fl.residual, fl.b))
    throw BoundaryMismatch("formal learner: forward term has the wrong boundary");
  auto [bd, bc] = typecheck(fl.backward, sig);
  if (bd != cat(fl.residual, fl.b_back) || bc != cat(fl.param, fl.a_back))
    throw BoundaryMismatch("formal learner: backward term has the wrong boundary");
}

Learner eval_learner(const FormalLearner& fl, const Signature& sig, const Interp& in) {
  typecheck(fl, sig);
  FinSet ca = word_carrier(fl.a, in), cab = word_carrier(fl.a_back, in);
  FinSet cb = word_carrier(fl.b, in), cbb = word_carrier(fl.b_back, in);
  FinSet cp = word_carrier(fl.param, in), cq = word_carrier(fl.residual, in);

  // the flat carriers and the binary products share index math, so the
  // tables transfer unchanged
  FinFun fwd_flat = eval(fl.forward, sig, in);
  FinFun bwd_flat = eval(fl.backward, sig, in);
  FinFun fwd(product(cp, ca), product(cq, cb), fwd_flat.table());
  FinFun bwd(product(cq, cbb), product(cp, cab), bwd_flat.table());
  return Learner(Obj{ca, cab}, Obj{cb, cbb}, cp, cq, std::move(fwd), std::move(bwd));
}

FormalVerdict atemp_check_formal(const FormalLearner& f1, const FormalLearner& f2,
                                 const Signature& sig, const std::vector<Interp>& interps) {
  if (f1.a != f2.a || f1.a_back != f2.a_back || f1.b != f2.b || f1.b_back != f2.b_back)
    throw BoundaryMismatch("atemp_check_formal: boundaries differ");
  for (const Interp& in : interps) {
    Learner l1 = eval_learner(f1, sig, in);
    Learner l2 = eval_learner(f2, sig, in);
    if (fhat_rel(l1) != fhat_rel(l2)) return FormalVerdict::distinguished;
  }
  return FormalVerdict::consistent;
}

const TermPtr* SigFile::term(const std::string& name) const {
  for (const auto& [n, t] : terms)
    if (n == name) return &t;
  return nullptr;
}

SigFile parse_sig_file(const std::string& text) {
  SigFile out;
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    try {
      if (kw == "obj") {
        std::string name;
        while (ls >> name) out.sig.add_object(name);
      } else if (kw == "gen") {
        std::string name, tok;
        ls >> name;
        ls >> tok;
        if (tok != ":") throw Error("expected ':'");
        Word dom, cod;
        bool after_arrow = false;
        while (ls >> tok) {
          if (tok == "->") {
            after_arrow = true;
          } else if (after_arrow) {
            cod.push_back(tok);
          } else {
            dom.push_back(tok);
          }
        }
        if (!after_arrow) throw Error("expected '->'");
        out.sig.add_morphism(name, std::move(dom), std::move(cod));
      } else if (kw == "term") {
        std::string name, eq;
        ls >> name >> eq;
        if (eq != "=") throw Error("expected '='");
        std::string rest;
        std::getline(ls, rest);
        out.terms.emplace_back(name, parse_term(rest, out.sig));
      } else {
        throw Error("unknown directive '" + kw + "'");
      }
    } catch (const Error& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace atemp::freesmc
