#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dtcv {

/// Fixed-point scale of continuous signals: 150.00 degC is stored as 15000.
inline constexpr std::int64_t kScale = 100;

enum class Signal : std::uint8_t {
  t,
  B_T,
  Bo_T,
  W_M,
  Wo_M,
  W_A,
  Wo_A,
  Wo_R,
  Wo_D,
  burner_on,
  critical_alarm,
  T_env,
  pred_B_T,
  pred_Bo_T,
  pred_W_M,
  pred_Wo_M,
  pred_W_A,
  pred_Wo_A,
  pred_Wo_R,
  pred_Wo_D,
};

inline constexpr std::size_t kSignalCount = 20;
inline constexpr std::size_t kTruthCount = 12;  // t .. T_env
inline constexpr std::size_t kPredCount = 8;

std::string_view signal_name(Signal s);
std::optional<Signal> signal_from_name(std::string_view name);
bool is_boolean(Signal s);
bool is_prediction(Signal s);
/// pred_X -> X.
Signal truth_of(Signal pred);
/// X -> pred_X for the eight predicted observables.
std::optional<Signal> prediction_of(Signal truth);

/// The eight twin outputs, in column order.
const std::array<Signal, kPredCount>& predicted_signals();

struct TraceRow {
  std::array<std::int64_t, kSignalCount> v{};

  std::int64_t& operator[](Signal s) { return v[static_cast<std::size_t>(s)]; }
  std::int64_t operator[](Signal s) const { return v[static_cast<std::size_t>(s)]; }
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Trace {
  /// Columns present, in file order. Always starts with the truth columns.
  std::vector<Signal> columns;
  std::vector<TraceRow> rows;
  std::int64_t period = 1;

  bool has(Signal s) const;
  std::size_t size() const { return rows.size(); }
  std::vector<std::int64_t> series(Signal s) const;
  void add_predictions();

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// Truth-only schema with the given number of zeroed rows.
Trace make_trace(std::size_t rows, std::int64_t period = 1, bool with_predictions = false);

/// Throws TraceError naming the first missing column.
void require_columns(const Trace& trace, std::span<const Signal> needed, std::string_view who);

std::string write_trace_csv(const Trace& trace);
Trace read_trace_csv(std::string_view text);

Trace ingest_trace(const std::filesystem::path& path);
void save_trace(const Trace& trace, const std::filesystem::path& path);

}  // namespace dtcv
