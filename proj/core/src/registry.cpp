#include "gkat/registry.hpp"

namespace gkat {

std::string_view role_name(Registry::Role r) {
  switch (r) {
    case Registry::Role::Test: return "test";
    case Registry::Role::Action: return "action";
    case Registry::Role::Var: return "indicator variable";
  }
  return "?";
}

std::uint32_t Registry::declare(std::string_view name, Role role, std::vector<std::string>& names) {
  std::string key(name);
  if (auto it = roles_.find(key); it != roles_.end()) {
    if (it->second.first != role)
      throw InputError("identifier '" + key + "' used as " + std::string(role_name(role)) +
                       " but already declared as " + std::string(role_name(it->second.first)));
    return it->second.second;
  }
  const auto id = static_cast<std::uint32_t>(names.size());
  names.push_back(key);
  roles_.emplace(std::move(key), std::make_pair(role, id));
  return id;
}

TestId Registry::test(std::string_view name) { return declare(name, Role::Test, tests_); }
ActionId Registry::action(std::string_view name) { return declare(name, Role::Action, actions_); }
VarId Registry::var(std::string_view name) { return declare(name, Role::Var, vars_); }

bool Registry::find(std::string_view name, Role& role, std::uint32_t& id) const {
  auto it = roles_.find(std::string(name));
  if (it == roles_.end()) return false;
  role = it->second.first;
  id = it->second.second;
  return true;
}

std::string Registry::show(BExp b) const {
  return to_string(
      b,
      [this](TestId t) {
        if (t < tests_.size()) return tests_[t];
        if (is_fresh_test(t)) return "f" + std::to_string(t - kFreshTestBase);
        return "t" + std::to_string(t);
      },
      [this](VarId x) { return x < vars_.size() ? vars_[x] : "x" + std::to_string(x); });
}

std::string Registry::show(const Atom& a) const {
  std::string out;
  for (TestId t = 0; t < a.size(); ++t) {
    if (!out.empty()) out += ' ';
    if (!a[t]) out += '!';
    out += t < tests_.size() ? tests_[t] : "t" + std::to_string(t);
  }
  return out.empty() ? "1" : out;
}

}  // namespace gkat
