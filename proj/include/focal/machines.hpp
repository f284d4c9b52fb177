#pragma once

#include <optional>
#include <string>
#include <vector>

#include "focal/term.hpp"

namespace focal {

// Krivine machine (call-by-name), with the control operator and reified
// stacks. The stack front is the top.
struct CbnState {
  TermPtr focus;
  std::vector<TermPtr> stack;
};
std::optional<CbnState> cbn_step(const CbnState& s);
bool cbn_final(const CbnState& s);  // abstraction on the empty stack, or free head
std::string show(const CbnState& s);

// call-by-value variant: frames are either a pending function M or a value
struct CbvFrame {
  bool is_arg = false;  // true: V.e frame, false: M (.) e frame
  TermPtr t;
};
struct CbvState {
  TermPtr focus;
  std::vector<CbvFrame> stack;
};
bool cbv_is_value(const TermPtr& m);
std::optional<CbvState> cbv_step(const CbvState& s);
bool cbv_final(const CbvState& s);
std::string show(const CbvState& s);

// lambda-bar-mu-mu-tilde-Q: one-step reduction of commands
std::optional<TermPtr> lbar_step(const TermPtr& command);

enum class MachineStatus { Halted, FuelExhausted, LoopDetected };
std::string show_status(MachineStatus s);

template <typename State>
struct MachineRun {
  std::vector<State> states;  // includes the initial state
  MachineStatus status = MachineStatus::Halted;
};

MachineRun<CbnState> run_cbn(const CbnState& s, int fuel, int loop_window = 64);
MachineRun<CbvState> run_cbv(const CbvState& s, int fuel, int loop_window = 64);
MachineRun<TermPtr> run_lbar(const TermPtr& command, int fuel, int loop_window = 64);

}  // namespace focal
