#include "gkat/syntax.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace gkat {

struct ExpNode {
  Exp::Kind kind;
  BExp guard;
  std::uint32_t a;
  std::int32_t v;
  const ExpNode* l;
  const ExpNode* r;
  std::size_t hash;
  std::uint64_t id;
  std::size_t size;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

struct NodeHash {
  std::size_t operator()(const ExpNode* n) const { return n->hash; }
};
struct NodeEq {
  bool operator()(const ExpNode* x, const ExpNode* y) const {
    return x->kind == y->kind && x->guard == y->guard && x->a == y->a && x->v == y->v &&
           x->l == y->l && x->r == y->r;
  }
};

class InternTable {
 public:
  const ExpNode* intern(Exp::Kind kind, BExp guard, std::uint32_t a, std::int32_t v,
                        const ExpNode* l, const ExpNode* r) {
    ExpNode key{kind, guard, a, v, l, r, 0, 0, 0};
    std::size_t h = mix(static_cast<std::size_t>(kind) + 101, guard.hash());
    h = mix(h, a);
    h = mix(h, static_cast<std::uint32_t>(v));
    h = mix(h, l ? l->hash : 0);
    h = mix(h, r ? r->hash : 0);
    key.hash = h;
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = set_.find(&key); it != set_.end()) return *it;
    constexpr std::size_t cap = std::size_t{1} << 40;
    key.size = std::min(cap, 1 + (l ? l->size : 0) + (r ? r->size : 0));
    key.id = nodes_.size();
    nodes_.push_back(key);
    const ExpNode* stored = &nodes_.back();
    set_.insert(stored);
    return stored;
  }

  std::size_t count() {
    std::lock_guard<std::mutex> lock(mu_);
    return nodes_.size();
  }

 private:
  std::mutex mu_;
  std::deque<ExpNode> nodes_;
  std::unordered_set<const ExpNode*, NodeHash, NodeEq> set_;
};

InternTable& table() {
  static InternTable t;
  return t;
}

}  // namespace

Exp make_exp(Exp::Kind kind, BExp guard, std::uint32_t a, std::int32_t v, const ExpNode* l,
             const ExpNode* r) {
  return Exp(table().intern(kind, guard, a, v, l, r));
}

Exp::Exp() : Exp(skip()) {}

Exp Exp::test(BExp b) { return make_exp(Kind::Test, b, 0, 0, nullptr, nullptr); }
Exp Exp::action(ActionId p) { return make_exp(Kind::Action, BExp::zero(), p, 0, nullptr, nullptr); }
Exp Exp::assign(VarId x, Value i) { return make_exp(Kind::Assign, BExp::zero(), x, i, nullptr, nullptr); }
Exp Exp::seq(Exp e, Exp f) { return make_exp(Kind::Seq, BExp::zero(), 0, 0, e.node_, f.node_); }
Exp Exp::unfold(Exp e, Exp f) { return make_exp(Kind::Unfold, BExp::zero(), 0, 0, e.node_, f.node_); }
Exp Exp::ite(BExp b, Exp e, Exp f) { return make_exp(Kind::If, b, 0, 0, e.node_, f.node_); }
Exp Exp::loop(BExp b, Exp e) { return make_exp(Kind::While, b, 0, 0, e.node_, nullptr); }
Exp Exp::brk() { return make_exp(Kind::Break, BExp::zero(), 0, 0, nullptr, nullptr); }
Exp Exp::cont() { return make_exp(Kind::Continue, BExp::zero(), 0, 0, nullptr, nullptr); }
Exp Exp::ret() { return make_exp(Kind::Return, BExp::zero(), 0, 0, nullptr, nullptr); }
Exp Exp::go(LabelId l) { return make_exp(Kind::Goto, BExp::zero(), l, 0, nullptr, nullptr); }
Exp Exp::label(LabelId l) { return make_exp(Kind::Label, BExp::zero(), l, 0, nullptr, nullptr); }

Exp::Kind Exp::kind() const { return node_->kind; }
BExp Exp::guard() const { return node_->guard; }
ActionId Exp::action_id() const { return node_->a; }
VarId Exp::var() const { return node_->a; }
Value Exp::value() const { return node_->v; }
LabelId Exp::label_id() const { return node_->a; }
Exp Exp::lhs() const { return Exp(node_->l); }
Exp Exp::rhs() const { return Exp(node_->r); }
std::uint64_t Exp::id() const { return node_->id; }
std::size_t Exp::hash() const { return node_->hash; }
std::size_t Exp::size() const { return node_->size; }

Exp smart_seq(Exp e, Exp f) { return e.is_skip() ? f : Exp::seq(e, f); }
Exp smart_unfold(Exp e, Exp f) { return e.is_skip() ? f : Exp::unfold(e, f); }

std::size_t exp_intern_count() { return table().count(); }

bool is_gkat(Exp e) {
  switch (e.kind()) {
    case Exp::Kind::Test: return e.guard().is_pure();
    case Exp::Kind::Action: return true;
    case Exp::Kind::Seq: return is_gkat(e.lhs()) && is_gkat(e.rhs());
    case Exp::Kind::If: return e.guard().is_pure() && is_gkat(e.lhs()) && is_gkat(e.rhs());
    case Exp::Kind::While: return e.guard().is_pure() && is_gkat(e.body());
    default: return false;
  }
}

namespace {

void count_labels_rec(Exp e, LabelId l, std::size_t& n) {
  switch (e.kind()) {
    case Exp::Kind::Label:
      if (e.label_id() == l) ++n;
      return;
    case Exp::Kind::Seq:
    case Exp::Kind::Unfold:
    case Exp::Kind::If:
      count_labels_rec(e.lhs(), l, n);
      count_labels_rec(e.rhs(), l, n);
      return;
    case Exp::Kind::While: count_labels_rec(e.body(), l, n); return;
    default: return;
  }
}

struct WfWalk {
  const std::vector<std::string>* names;
  std::vector<Violation> out;
  std::vector<std::size_t> label_count;
  std::vector<Exp> label_node;
  std::vector<Exp> gotos;

  std::string name(LabelId l) const {
    if (names && l < names->size()) return (*names)[l];
    return "#" + std::to_string(l);
  }

  void walk(Exp e, bool in_loop) {
    switch (e.kind()) {
      case Exp::Kind::Label:
        if (label_count.size() <= e.label_id()) {
          label_count.resize(e.label_id() + 1, 0);
          label_node.resize(e.label_id() + 1);
        }
        if (++label_count[e.label_id()] == 2)
          out.push_back({1, "label " + name(e.label_id()) + " appears more than once", e});
        label_node[e.label_id()] = e;
        return;
      case Exp::Kind::Goto: gotos.push_back(e); return;
      case Exp::Kind::Break:
        if (!in_loop) out.push_back({3, "break outside of any loop", e});
        return;
      case Exp::Kind::Continue:
        if (!in_loop) out.push_back({3, "continue outside of any loop", e});
        return;
      case Exp::Kind::Seq:
      case Exp::Kind::If:
        walk(e.lhs(), in_loop);
        walk(e.rhs(), in_loop);
        return;
      case Exp::Kind::Unfold:
        walk(e.lhs(), true);
        walk(e.rhs(), in_loop);
        return;
      case Exp::Kind::While: walk(e.body(), true); return;
      default: return;
    }
  }
};

bool ends_in_return(Exp e) {
  while (e.kind() == Exp::Kind::Seq) e = e.rhs();
  return e.kind() == Exp::Kind::Return;
}

Exp extract_rec(Exp e, LabelId l) {
  switch (e.kind()) {
    case Exp::Kind::Label: return Exp::skip();
    case Exp::Kind::Seq:
      if (contains_label(e.lhs(), l)) return smart_seq(extract_rec(e.lhs(), l), e.rhs());
      return extract_rec(e.rhs(), l);
    case Exp::Kind::Unfold:
      if (contains_label(e.lhs(), l)) return smart_unfold(extract_rec(e.lhs(), l), e.rhs());
      return extract_rec(e.rhs(), l);
    case Exp::Kind::If:
      if (contains_label(e.lhs(), l)) return extract_rec(e.lhs(), l);
      return extract_rec(e.rhs(), l);
    case Exp::Kind::While: return smart_unfold(extract_rec(e.body(), l), e);
    default: throw InternalError("label_extract: label vanished during descent");
  }
}

}  // namespace

std::size_t count_labels(Exp e, LabelId l) {
  std::size_t n = 0;
  count_labels_rec(e, l, n);
  return n;
}

bool contains_label(Exp e, LabelId l) {
  switch (e.kind()) {
    case Exp::Kind::Label: return e.label_id() == l;
    case Exp::Kind::Seq:
    case Exp::Kind::Unfold:
    case Exp::Kind::If: return contains_label(e.lhs(), l) || contains_label(e.rhs(), l);
    case Exp::Kind::While: return contains_label(e.body(), l);
    default: return false;
  }
}

std::vector<Violation> well_formed(Exp e, const std::vector<std::string>* label_names) {
  WfWalk w{label_names, {}, {}, {}, {}};
  w.walk(e, false);
  for (Exp g : w.gotos) {
    const LabelId l = g.label_id();
    if (l >= w.label_count.size() || w.label_count[l] == 0)
      w.out.push_back({2, "goto " + w.name(l) + " has no matching label", g});
  }
  if (!ends_in_return(e)) w.out.push_back({4, "program does not end in return", e});
  std::stable_sort(w.out.begin(), w.out.end(),
                   [](const Violation& a, const Violation& b) { return a.condition < b.condition; });
  return w.out;
}

Exp label_extract(Exp e, LabelId l) {
  const std::size_t n = count_labels(e, l);
  if (n == 0) throw InputError("label_extract: label #" + std::to_string(l) + " does not occur");
  if (n > 1) throw InputError("label_extract: label #" + std::to_string(l) + " occurs " + std::to_string(n) + " times");
  return extract_rec(e, l);
}

namespace {

void print(std::ostream& os, Exp e, const Registry* reg, const std::vector<std::string>* labels) {
  auto bx = [&](BExp b) { return reg ? reg->show(b) : to_string(b); };
  auto lbl = [&](LabelId l) {
    return labels && l < labels->size() ? (*labels)[l] : "l" + std::to_string(l);
  };
  switch (e.kind()) {
    case Exp::Kind::Test:
      if (e.is_skip()) os << "skip";
      else os << "assert(" << bx(e.guard()) << ")";
      return;
    case Exp::Kind::Action:
      os << (reg && e.action_id() < reg->num_actions() ? reg->action_name(e.action_id())
                                                       : "p" + std::to_string(e.action_id()));
      return;
    case Exp::Kind::Assign:
      os << (reg && e.var() < reg->num_vars() ? reg->var_name(e.var()) : "x" + std::to_string(e.var()))
         << " := " << e.value();
      return;
    case Exp::Kind::Seq:
      os << '(';
      print(os, e.lhs(), reg, labels);
      os << "; ";
      print(os, e.rhs(), reg, labels);
      os << ')';
      return;
    case Exp::Kind::Unfold:
      os << '(';
      print(os, e.lhs(), reg, labels);
      os << " <| ";
      print(os, e.rhs(), reg, labels);
      os << ')';
      return;
    case Exp::Kind::If:
      os << "if (" << bx(e.guard()) << ") {";
      print(os, e.lhs(), reg, labels);
      os << "} else {";
      print(os, e.rhs(), reg, labels);
      os << '}';
      return;
    case Exp::Kind::While:
      os << "while (" << bx(e.guard()) << ") {";
      print(os, e.body(), reg, labels);
      os << '}';
      return;
    case Exp::Kind::Break: os << "break"; return;
    case Exp::Kind::Continue: os << "continue"; return;
    case Exp::Kind::Return: os << "return"; return;
    case Exp::Kind::Goto: os << "goto " << lbl(e.label_id()); return;
    case Exp::Kind::Label: os << "label " << lbl(e.label_id()); return;
  }
}

}  // namespace

std::string to_string(Exp e, const Registry* reg, const std::vector<std::string>* labels) {
  std::ostringstream os;
  print(os, e, reg, labels);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, Exp e) { return os << to_string(e); }

}  // namespace gkat
