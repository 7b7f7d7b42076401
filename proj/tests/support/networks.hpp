#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "dtcv/network.hpp"

namespace dtcv::testing {

/// Lamp with off/low/bright and a user pressing a button. When `slow`, every press
/// after the first waits until y >= 5.
NetworkSpec lamp_spec(bool slow);

struct RandomNetwork {
  NetworkSpec spec;
  std::string predicate;  // clock-free state predicate
};

/// Closed clock constraints only, at most 3 templates of at most 4 locations,
/// constants in [0, 5], updates that stay within variable ranges.
RandomNetwork random_network(std::mt19937_64& rng);

}  // namespace dtcv::testing
