#include "gkat/derivative.hpp"

#include <atomic>

namespace gkat {

namespace {
std::atomic<std::uint64_t> g_invariant_checks{0};

void check_state(const StateEntries& e, SolverHandle& h, const std::string& where) {
  if (auto bad = check_disjoint(e, h)) throw InternalError("disjointedness violated at " + where + ": " + *bad);
  if (!check_total_coverage(e, h)) throw InternalError("coverage violated at " + where);
  if (!check_no_blocked(e, h)) throw InternalError("blocked entry stored at " + where);
  ++g_invariant_checks;
}
}  // namespace

std::uint64_t invariant_checks() { return g_invariant_checks.load(); }

BExp CfDerivatives::resolve_guard(BExp b, const IndicatorState& pi) {
  if (b.is_pure()) return b;
  return instantiate_encoded(h_.encode_indicators(b), pi);
}

const CfEntries& CfDerivatives::step(const IndicatorState& pi, Exp e) {
  CfState key{pi, e};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  CfEntries r = compute(pi, e);
  return cache_.emplace(std::move(key), std::move(r)).first->second;
}

void CfDerivatives::continue_into(CfEntries& out, BExp b, const IndicatorState& pi, Exp f) {
  const CfEntries& next = step(pi, f);
  for (const auto& x : next.eps) {
    const BExp g = conj(b, x.guard);
    if (live(g)) out.eps.push_back({g, x.cont});
  }
  for (const auto& d : next.delta) {
    const BExp g = conj(b, d.guard);
    if (live(g)) out.delta.push_back({g, d.target, d.action});
  }
}

CfEntries CfDerivatives::compute(const IndicatorState& pi, Exp e) {
  CfEntries out;
  switch (e.kind()) {
    case Exp::Kind::Test: {
      const BExp g = resolve_guard(e.guard(), pi);
      if (live(g)) out.eps.push_back({g, Continuation::acc(pi)});
      break;
    }
    case Exp::Kind::Action:
      out.delta.push_back({BExp::one(), CfState{pi, Exp::skip()}, e.action_id()});
      break;
    case Exp::Kind::Assign:
      out.eps.push_back({BExp::one(), Continuation::acc(reassign(pi, e.var(), e.value()))});
      break;
    case Exp::Kind::Break: out.eps.push_back({BExp::one(), Continuation::brk(pi)}); break;
    case Exp::Kind::Continue: out.eps.push_back({BExp::one(), Continuation::cont(pi)}); break;
    case Exp::Kind::Return: out.eps.push_back({BExp::one(), Continuation::ret()}); break;
    case Exp::Kind::Goto: out.eps.push_back({BExp::one(), Continuation::jmp(e.label_id(), pi)}); break;
    case Exp::Kind::Label: out.eps.push_back({BExp::one(), Continuation::acc(pi)}); break;
    case Exp::Kind::Seq: {
      const Exp f = e.rhs();
      const CfEntries first = step(pi, e.lhs());
      for (const auto& x : first.eps) {
        if (x.cont.kind == ContKind::Acc) continue_into(out, x.guard, x.cont.pi, f);
        else out.eps.push_back(x);
      }
      for (const auto& d : first.delta)
        out.delta.push_back({d.guard, CfState{d.target.pi, smart_seq(d.target.exp, f)}, d.action});
      break;
    }
    case Exp::Kind::Unfold: {
      const Exp f = e.rhs();
      const CfEntries first = step(pi, e.lhs());
      for (const auto& x : first.eps) {
        switch (x.cont.kind) {
          case ContKind::Brk: out.eps.push_back({x.guard, Continuation::acc(x.cont.pi)}); break;
          case ContKind::Cont:
          case ContKind::Acc: continue_into(out, x.guard, x.cont.pi, f); break;
          case ContKind::Ret:
          case ContKind::Jmp: out.eps.push_back(x); break;
        }
      }
      for (const auto& d : first.delta)
        out.delta.push_back({d.guard, CfState{d.target.pi, smart_unfold(d.target.exp, f)}, d.action});
      break;
    }
    case Exp::Kind::If: {
      const BExp b = resolve_guard(e.guard(), pi);
      if (!b.is_zero_const()) continue_into(out, b, pi, e.lhs());
      if (!b.is_one_const()) continue_into(out, neg(b), pi, e.rhs());
      break;
    }
    case Exp::Kind::While: out = loop_step(pi, e.body(), e.guard()); break;
  }
  return out;
}

CfEntries CfDerivatives::loop_step(const IndicatorState& pi, Exp body, BExp b) {
  const Exp loop = Exp::loop(b, body);
  auto con = [&](const IndicatorState& n) {
    std::vector<std::pair<IndicatorState, BExp>> out;
    const BExp bn = resolve_guard(b, n);
    if (bn.is_zero_const()) return out;
    for (const auto& x : step(n, body).eps) {
      if (x.cont.kind != ContKind::Acc && x.cont.kind != ContKind::Cont) continue;
      const BExp g = conj(bn, x.guard);
      if (live(g)) out.emplace_back(x.cont.pi, g);
    }
    return out;
  };

  AccuProblem<IndicatorState, CfDelta> dp;
  dp.res = [&](const IndicatorState& n) {
    std::vector<CfDelta> out;
    const BExp bn = resolve_guard(b, n);
    if (bn.is_zero_const()) return out;
    for (const auto& d : step(n, body).delta) {
      const BExp g = conj(bn, d.guard);
      if (live(g)) out.push_back({g, CfState{d.target.pi, smart_unfold(d.target.exp, loop)}, d.action});
    }
    return out;
  };
  dp.con = con;
  dp.prepend = [](BExp g, const CfDelta& d) { return CfDelta{conj(g, d.guard), d.target, d.action}; };
  dp.keep = [&](const CfDelta& d) { return live(d.guard); };

  AccuProblem<IndicatorState, CfEps> ep;
  ep.res = [&](const IndicatorState& n) {
    std::vector<CfEps> out;
    const BExp bn = resolve_guard(b, n);
    const BExp exit = neg(bn);
    if (live(exit)) out.push_back({exit, Continuation::acc(n)});
    if (bn.is_zero_const()) return out;
    for (const auto& x : step(n, body).eps) {
      const BExp g = conj(bn, x.guard);
      switch (x.cont.kind) {
        case ContKind::Brk:
          if (live(g)) out.push_back({g, Continuation::acc(x.cont.pi)});
          break;
        case ContKind::Ret:
        case ContKind::Jmp:
          if (live(g)) out.push_back({g, x.cont});
          break;
        default: break;
      }
    }
    return out;
  };
  ep.con = con;
  ep.prepend = [](BExp g, const CfEps& x) { return CfEps{conj(g, x.guard), x.cont}; };
  ep.keep = [&](const CfEps& x) { return live(x.guard); };

  CfEntries out;
  out.eps = accumulate(ep, pi, &loop_stats_);
  out.delta = accumulate(dp, pi, &loop_stats_);
  return out;
}

const GkatEntries& GkatDerivatives::step(Exp e) {
  if (auto it = cache_.find(e); it != cache_.end()) return it->second;
  GkatEntries r = compute(e);
  return cache_.emplace(e, std::move(r)).first->second;
}

GkatEntries GkatDerivatives::compute(Exp e) {
  GkatEntries out;
  auto guarded = [&](BExp b, Exp sub) {
    const GkatEntries& s = step(sub);
    for (BExp a : s.eps) {
      const BExp g = conj(b, a);
      if (live(g)) out.eps.push_back(g);
    }
    for (const auto& d : s.delta) {
      const BExp g = conj(b, d.guard);
      if (live(g)) out.delta.push_back({g, d.target, d.action});
    }
  };
  switch (e.kind()) {
    case Exp::Kind::Test:
      if (!e.guard().is_pure()) throw InputError("gkat_step: indicator test outside CF-GKAT");
      if (live(e.guard())) out.eps.push_back(e.guard());
      break;
    case Exp::Kind::Action: out.delta.push_back({BExp::one(), Exp::skip(), e.action_id()}); break;
    case Exp::Kind::Seq: {
      const GkatEntries first = step(e.lhs());
      for (BExp a : first.eps) guarded(a, e.rhs());
      for (const auto& d : first.delta) out.delta.push_back({d.guard, smart_seq(d.target, e.rhs()), d.action});
      break;
    }
    case Exp::Kind::If:
      if (!e.guard().is_pure()) throw InputError("gkat_step: indicator test outside CF-GKAT");
      guarded(e.guard(), e.lhs());
      guarded(neg(e.guard()), e.rhs());
      break;
    case Exp::Kind::While: {
      if (!e.guard().is_pure()) throw InputError("gkat_step: indicator test outside CF-GKAT");
      const BExp exit = neg(e.guard());
      if (live(exit)) out.eps.push_back(exit);
      for (const auto& d : step(e.body()).delta) {
        const BExp g = conj(e.guard(), d.guard);
        if (live(g)) out.delta.push_back({g, smart_seq(d.target, e), d.action});
      }
      break;
    }
    default: throw InputError("gkat_step: construct outside the GKAT fragment: " + to_string(e));
  }
  return out;
}

GkatEntries gkat_step(Exp e, SolverHandle& h) {
  GkatDerivatives d(h);
  return d.step(e);
}

CfEntries cf_step(const IndicatorState& pi, Exp e, SolverHandle& h) {
  CfDerivatives d(h);
  return d.step(pi, e);
}

GkatAutomaton::GkatAutomaton(Exp e, SolverHandle& h, InvariantOptions opt) : h_(h), deriv_(h), opt_(opt) {
  intern(e);
}

StateId GkatAutomaton::intern(Exp e) {
  auto [it, fresh] = ids_.emplace(e, static_cast<StateId>(states_.size()));
  if (fresh) {
    states_.push_back(e);
    entries_.emplace_back();
    done_.push_back(0);
  }
  return it->second;
}

const StateEntries& GkatAutomaton::entries(StateId s) {
  if (done_.at(s)) return entries_[s];
  const GkatEntries ge = deriv_.step(states_[s]);
  StateEntries e;
  e.eps = ge.eps;
  for (const auto& d : ge.delta) e.delta.push_back({d.guard, intern(d.target), d.action});
  if (opt_.check) check_state(e, h_, "state " + std::to_string(s));
  entries_[s] = std::move(e);
  done_[s] = 1;
  ++materialized_;
  return entries_[s];
}

std::string GkatAutomaton::describe(StateId s) const { return to_string(states_.at(s)); }

CfgkatAutomaton::CfgkatAutomaton(const Program& p, IndicatorState start, SolverHandle& h, InvariantOptions opt)
    : prog_(p), h_(h), deriv_(h), opt_(opt) {
  intern(CfState{std::move(start), p.body});
}

StateId CfgkatAutomaton::intern(const CfState& s) {
  auto [it, fresh] = ids_.emplace(s, static_cast<StateId>(states_.size()));
  if (fresh) {
    states_.push_back(s);
    entries_.emplace_back();
    done_.push_back(0);
  }
  return it->second;
}

Exp CfgkatAutomaton::extracted(LabelId l) {
  if (auto it = labels_.find(l); it != labels_.end()) return it->second;
  const Exp e = label_extract(prog_.body, l);
  labels_.emplace(l, e);
  return e;
}

ResolvedEntries CfgkatAutomaton::resolve_jumps(const CfState& s) {
  auto con = [&](const CfState& n) {
    std::vector<std::pair<CfState, BExp>> out;
    for (const auto& x : deriv_.step(n.pi, n.exp).eps)
      if (x.cont.kind == ContKind::Jmp) out.emplace_back(CfState{x.cont.pi, extracted(x.cont.label)}, x.guard);
    return out;
  };
  auto live = [&](BExp g) { return !h_.is_zero(g); };

  AccuProblem<CfState, BExp> ep;
  ep.res = [&](const CfState& n) {
    std::vector<BExp> out;
    for (const auto& x : deriv_.step(n.pi, n.exp).eps)
      if (x.cont.kind == ContKind::Ret || x.cont.kind == ContKind::Acc) out.push_back(x.guard);
    return out;
  };
  ep.con = con;
  ep.prepend = [](BExp g, BExp r) { return conj(g, r); };
  ep.keep = live;

  AccuProblem<CfState, CfDelta> dp;
  dp.res = [&](const CfState& n) { return deriv_.step(n.pi, n.exp).delta; };
  dp.con = con;
  dp.prepend = [](BExp g, const CfDelta& d) { return CfDelta{conj(g, d.guard), d.target, d.action}; };
  dp.keep = [&](const CfDelta& d) { return live(d.guard); };

  ResolvedEntries out;
  out.eps = accumulate(ep, s, &jump_stats_);
  out.delta = accumulate(dp, s, &jump_stats_);
  return out;
}

const StateEntries& CfgkatAutomaton::entries(StateId s) {
  if (done_.at(s)) return entries_[s];
  const CfState st = states_[s];
  ResolvedEntries r = resolve_jumps(st);
  StateEntries e;
  e.eps = std::move(r.eps);
  for (const auto& d : r.delta) e.delta.push_back({d.guard, intern(d.target), d.action});
  if (opt_.check) check_state(e, h_, "state " + std::to_string(s));
  entries_[s] = std::move(e);
  done_[s] = 1;
  ++materialized_;
  return entries_[s];
}

std::string CfgkatAutomaton::describe(StateId s) const {
  const CfState& st = states_.at(s);
  std::string pi = "{";
  for (std::size_t i = 0; i < st.pi.size(); ++i) pi += (i ? "," : "") + std::to_string(st.pi.values()[i]);
  return pi + "} " + to_string(st.exp, prog_.registry.get(), &prog_.labels);
}

}  // namespace gkat
