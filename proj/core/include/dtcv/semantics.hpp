#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dtcv/network.hpp"
#include "dtcv/zone.hpp"

namespace dtcv {

/// Symbolic state. Zones are kept delay-closed (unless a location is committed),
/// canonical, non-empty and extrapolated.
struct SymState {
  std::vector<std::int32_t> locations;
  std::vector<std::int64_t> values;
  Zone zone;

  friend bool operator==(const SymState&, const SymState&) = default;
};

/// One discrete step: an internal edge, or a sender/receiver pair on a channel.
struct Transition {
  SymState target;
  std::array<std::pair<std::int32_t, std::int32_t>, 2> parts{};  // (template, edge)
  std::int32_t count = 1;
};

SymState initial_state(const Network& net);

/// Discrete successors, each already closed under delay within the target invariants.
std::vector<Transition> successors(const Network& net, const SymState& s);

bool has_committed(const Network& net, std::span<const std::int32_t> locations);

/// State predicate over location and variable atoms.
bool eval_pred(const Network& net, const SymState& s, const Expr& predicate);

std::string transition_label(const Network& net, const Transition& t);

/// `(Lamp.off, User.idle)`.
std::string format_locations(const Network& net, std::span<const std::int32_t> locations);
/// `x=1 y=0`; empty when there are no variables.
std::string format_values(const Network& net, std::span<const std::int64_t> values);
std::string format_zone(const Network& net, const Zone& z);

}  // namespace dtcv
