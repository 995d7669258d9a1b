#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gkat/bexp.hpp"

namespace gkat {

/// Name tables for primitive tests, actions and indicator variables.
/// One registry is shared by both sides of a check so ids line up.
class Registry {
 public:
  enum class Role { Test, Action, Var };

  TestId test(std::string_view name);      // declares on first use
  ActionId action(std::string_view name);  // declares on first use
  VarId var(std::string_view name);        // declares on first use

  std::size_t num_tests() const { return tests_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  std::size_t num_vars() const { return vars_.size(); }

  const std::string& test_name(TestId t) const { return tests_.at(t); }
  const std::string& action_name(ActionId a) const { return actions_.at(a); }
  const std::string& var_name(VarId x) const { return vars_.at(x); }

  /// Looks up without declaring; returns false when absent.
  bool find(std::string_view name, Role& role, std::uint32_t& id) const;

  std::string show(BExp b) const;
  std::string show(const Atom& a) const;

 private:
  std::uint32_t declare(std::string_view name, Role role, std::vector<std::string>& names);

  std::vector<std::string> tests_, actions_, vars_;
  std::unordered_map<std::string, std::pair<Role, std::uint32_t>> roles_;
};

std::string_view role_name(Registry::Role r);

}  // namespace gkat
