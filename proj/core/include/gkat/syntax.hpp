#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gkat/bexp.hpp"
#include "gkat/registry.hpp"

namespace gkat {

struct ExpNode;

/// Hash-consed CF-GKAT expression. GKAT is the fragment without indicator
/// tests, assignments, unfoldings and non-local control flow.
class Exp {
 public:
  enum class Kind : std::uint8_t {
    Test,  // assert b; skip is Test(1)
    Action,
    Assign,
    Seq,
    Unfold,  // e <| f
    If,
    While,
    Break,
    Continue,
    Return,
    Goto,
    Label
  };

  Exp();  // skip

  static Exp test(BExp b);
  static Exp skip() { return test(BExp::one()); }
  static Exp action(ActionId p);
  static Exp assign(VarId x, Value i);
  static Exp seq(Exp e, Exp f);
  static Exp unfold(Exp e, Exp f);
  static Exp ite(BExp b, Exp e, Exp f);
  static Exp loop(BExp b, Exp e);
  static Exp brk();
  static Exp cont();
  static Exp ret();
  static Exp go(LabelId l);
  static Exp label(LabelId l);

  Kind kind() const;
  BExp guard() const;  // Test, If, While
  ActionId action_id() const;
  VarId var() const;
  Value value() const;
  LabelId label_id() const;  // Goto, Label
  Exp lhs() const;           // Seq/Unfold left, If then-branch, While body
  Exp rhs() const;           // Seq/Unfold right, If else-branch
  Exp body() const { return lhs(); }

  bool is_skip() const { return kind() == Kind::Test && guard().is_one_const(); }

  std::uint64_t id() const;
  std::size_t hash() const;
  std::size_t size() const;  // tree size, saturating

  friend bool operator==(Exp a, Exp b) { return a.node_ == b.node_; }
  friend bool operator!=(Exp a, Exp b) { return a.node_ != b.node_; }
  const ExpNode* node() const { return node_; }

 private:
  explicit Exp(const ExpNode* n) : node_(n) {}
  friend Exp make_exp(Kind, BExp, std::uint32_t, std::int32_t, const ExpNode*, const ExpNode*);
  const ExpNode* node_;
};

/// 1;e => e, otherwise Seq.
Exp smart_seq(Exp e, Exp f);
/// 1<|e => e, otherwise Unfold.
Exp smart_unfold(Exp e, Exp f);

std::size_t exp_intern_count();

/// True when e uses only GKAT constructs and pure guards.
bool is_gkat(Exp e);

bool contains_label(Exp e, LabelId l);
std::size_t count_labels(Exp e, LabelId l);

struct Violation {
  int condition;  // 1..4
  std::string message;
  Exp node;
};

/// Checks the four program conditions: unique labels, goto targets exist,
/// break/continue only under a loop or the left side of an unfolding, and
/// the program ends in return. Never rewrites.
std::vector<Violation> well_formed(Exp e, const std::vector<std::string>* label_names = nullptr);

/// The expression at the location of `label l`. Throws InputError when the
/// label is absent or occurs more than once.
Exp label_extract(Exp e, LabelId l);

struct Program {
  Exp body;
  std::vector<std::string> labels;  // LabelId -> name
  std::shared_ptr<Registry> registry;
};

std::string to_string(Exp e, const Registry* reg = nullptr,
                      const std::vector<std::string>* labels = nullptr);
std::ostream& operator<<(std::ostream& os, Exp e);

}  // namespace gkat

template <>
struct std::hash<gkat::Exp> {
  std::size_t operator()(gkat::Exp e) const noexcept { return e.hash(); }
};
