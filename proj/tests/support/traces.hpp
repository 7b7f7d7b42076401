#pragma once

#include <cstdint>
#include <random>

#include "dtcv/contracts.hpp"
#include "dtcv/trace.hpp"

namespace dtcv::testing {

/// Thresholds and timers small enough to matter within a couple of hundred rows.
ContractParams random_contract_params(std::mt19937_64& rng);

/// A trace with every column, regime-switching random walks around the thresholds
/// in `p`, and predictions that copy the truth with occasional corruption.
Trace random_contract_trace(std::mt19937_64& rng, const ContractParams& p, std::size_t max_rows = 200);

/// Builds a trace from per-row values of the listed columns; other columns stay zero.
Trace trace_from_columns(const std::vector<std::pair<Signal, std::vector<std::int64_t>>>& cols,
                         std::int64_t period = 1);

}  // namespace dtcv::testing
