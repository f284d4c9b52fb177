#include "focal/machines.hpp"

#include <deque>

#include "focal/printer.hpp"
#include "focal/subst.hpp"

namespace focal {

std::optional<CbnState> cbn_step(const CbnState& s) {
  const TermPtr& m = s.focus;
  switch (m->kind) {
    case Kind::App: {
      CbnState n;
      n.focus = m->kids[0];
      n.stack = s.stack;
      n.stack.insert(n.stack.begin(), m->kids[1]);
      return n;
    }
    case Kind::Lam: {
      if (s.stack.empty()) return std::nullopt;
      CbnState n;
      n.focus = subst1(m->kids[0], m->names[0], false, s.stack.front());
      n.stack.assign(s.stack.begin() + 1, s.stack.end());
      return n;
    }
    case Kind::CtrlC: {
      CbnState n;
      n.focus = m->kids[0];
      n.stack = {mk::reify_stk(s.stack)};
      return n;
    }
    case Kind::ReifyStk: {
      if (s.stack.empty()) return std::nullopt;
      CbnState n;
      n.focus = s.stack.front();
      n.stack = m->kids;
      return n;
    }
    default:
      return std::nullopt;
  }
}

bool cbn_final(const CbnState& s) {
  if (s.focus->kind == Kind::Lam && s.stack.empty()) return true;
  if (s.focus->kind == Kind::Var) return true;  // free head variable
  return false;
}

std::string show(const CbnState& s) {
  std::string out = "< " + show(s.focus) + " | ";
  for (auto& m : s.stack) out += show(m) + " . ";
  return out + "[] >";
}

bool cbv_is_value(const TermPtr& m) { return m->kind == Kind::Var || m->kind == Kind::Lam; }

std::optional<CbvState> cbv_step(const CbvState& s) {
  const TermPtr& m = s.focus;
  if (m->kind == Kind::App) {
    CbvState n;
    n.focus = m->kids[1];
    n.stack = s.stack;
    n.stack.insert(n.stack.begin(), CbvFrame{false, m->kids[0]});
    return n;
  }
  if (cbv_is_value(m) && !s.stack.empty() && !s.stack.front().is_arg) {
    CbvState n;
    n.focus = s.stack.front().t;
    n.stack = s.stack;
    n.stack.front() = CbvFrame{true, m};
    return n;
  }
  if (m->kind == Kind::Lam && !s.stack.empty() && s.stack.front().is_arg) {
    CbvState n;
    n.focus = subst1(m->kids[0], m->names[0], false, s.stack.front().t);
    n.stack.assign(s.stack.begin() + 1, s.stack.end());
    return n;
  }
  return std::nullopt;
}

bool cbv_final(const CbvState& s) { return cbv_is_value(s.focus) && s.stack.empty(); }

std::string show(const CbvState& s) {
  std::string out = "< " + show(s.focus) + " | ";
  for (auto& f : s.stack) out += (f.is_arg ? show(f.t) + " . " : show(f.t) + " (.) ");
  return out + "[] >";
}

std::optional<TermPtr> lbar_step(const TermPtr& command) {
  if (!same_calc(command, Calc::LbarQ) || command->kind != Kind::Cut) return std::nullopt;
  const TermPtr& v = command->kids[0];
  const TermPtr& e = command->kids[1];
  if (v->kind == Kind::Mu) return subst1(v->kids[0], v->names[0], true, e);
  if (v->kind == Kind::ValOf) {
    const TermPtr& V = v->kids[0];
    if (e->kind == Kind::MuTilde) return subst1(e->kids[0], e->names[0], false, V);
    if (V->kind == Kind::Lam && e->kind == Kind::StackCons) {
      TermPtr body = subst1(V->kids[0], V->names[0], false, e->kids[0]);
      return mk::cut(body, e->kids[1]);
    }
  }
  return std::nullopt;
}

std::string show_status(MachineStatus s) {
  switch (s) {
    case MachineStatus::Halted: return "Halted";
    case MachineStatus::FuelExhausted: return "FuelExhausted";
    case MachineStatus::LoopDetected: return "LoopDetected";
  }
  return "?";
}

namespace {

std::string cbn_key(const CbnState& s) {
  std::string k = alpha_key(s.focus);
  for (auto& m : s.stack) k += "||" + alpha_key(m);
  return k;
}

std::string cbv_key(const CbvState& s) {
  std::string k = alpha_key(s.focus);
  for (auto& f : s.stack) k += (f.is_arg ? "|a|" : "|f|") + alpha_key(f.t);
  return k;
}

template <typename State, typename StepFn, typename KeyFn>
MachineRun<State> run_generic(const State& init, int fuel, int window, StepFn stepfn,
                              KeyFn keyfn) {
  MachineRun<State> run;
  run.states.push_back(init);
  std::deque<std::string> seen{keyfn(init)};
  State cur = init;
  for (int i = 0; i < fuel; ++i) {
    auto next = stepfn(cur);
    if (!next) {
      run.status = MachineStatus::Halted;
      return run;
    }
    cur = *next;
    run.states.push_back(cur);
    std::string key = keyfn(cur);
    for (auto& k : seen)
      if (k == key) {
        run.status = MachineStatus::LoopDetected;
        return run;
      }
    seen.push_back(std::move(key));
    while (static_cast<int>(seen.size()) > window) seen.pop_front();
  }
  run.status = MachineStatus::FuelExhausted;
  return run;
}

}  // namespace

MachineRun<CbnState> run_cbn(const CbnState& s, int fuel, int loop_window) {
  return run_generic(s, fuel, loop_window, cbn_step, cbn_key);
}

MachineRun<CbvState> run_cbv(const CbvState& s, int fuel, int loop_window) {
  return run_generic(s, fuel, loop_window, cbv_step, cbv_key);
}

MachineRun<TermPtr> run_lbar(const TermPtr& command, int fuel, int loop_window) {
  return run_generic(command, fuel, loop_window, lbar_step,
                     [](const TermPtr& t) { return alpha_key(t); });
}

}  // namespace focal
