#include "dtcv/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

constexpr std::array<std::string_view, kSignalCount> kNames{
    "t",         "B_T",        "Bo_T",      "W_M",       "Wo_M",      "W_A",      "Wo_A",
    "Wo_R",      "Wo_D",       "burner_on", "critical_alarm", "T_env", "pred_B_T", "pred_Bo_T",
    "pred_W_M",  "pred_Wo_M",  "pred_W_A",  "pred_Wo_A", "pred_Wo_R", "pred_Wo_D"};

constexpr std::array<Signal, kPredCount> kPredicted{
    Signal::pred_B_T, Signal::pred_Bo_T, Signal::pred_W_M,  Signal::pred_Wo_M,
    Signal::pred_W_A, Signal::pred_Wo_A, Signal::pred_Wo_R, Signal::pred_Wo_D};

}  // namespace

std::string_view signal_name(Signal s) { return kNames[static_cast<std::size_t>(s)]; }

std::optional<Signal> signal_from_name(std::string_view name) {
  for (std::size_t k = 0; k < kNames.size(); ++k)
    if (kNames[k] == name) return static_cast<Signal>(k);
  return std::nullopt;
}

bool is_boolean(Signal s) {
  switch (s) {
    case Signal::W_A:
    case Signal::Wo_A:
    case Signal::Wo_R:
    case Signal::Wo_D:
    case Signal::burner_on:
    case Signal::critical_alarm:
    case Signal::pred_W_A:
    case Signal::pred_Wo_A:
    case Signal::pred_Wo_R:
    case Signal::pred_Wo_D:
      return true;
    default:
      return false;
  }
}

bool is_prediction(Signal s) { return static_cast<std::size_t>(s) >= kTruthCount; }

Signal truth_of(Signal pred) {
  if (!is_prediction(pred)) return pred;
  return static_cast<Signal>(static_cast<std::size_t>(pred) - kTruthCount + 1);
}

std::optional<Signal> prediction_of(Signal truth) {
  const auto k = static_cast<std::size_t>(truth);
  if (k < 1 || k > kPredCount) return std::nullopt;
  return static_cast<Signal>(k + kTruthCount - 1);
}

const std::array<Signal, kPredCount>& predicted_signals() { return kPredicted; }

bool Trace::has(Signal s) const {
  return std::find(columns.begin(), columns.end(), s) != columns.end();
}

std::vector<std::int64_t> Trace::series(Signal s) const {
  std::vector<std::int64_t> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[s]);
  return out;
}

void Trace::add_predictions() {
  for (const Signal p : kPredicted)
    if (!has(p)) columns.push_back(p);
}

Trace make_trace(std::size_t rows, std::int64_t period, bool with_predictions) {
  Trace t;
  for (std::size_t k = 0; k < kTruthCount; ++k) t.columns.push_back(static_cast<Signal>(k));
  if (with_predictions) t.add_predictions();
  t.period = period;
  t.rows.resize(rows);
  for (std::size_t k = 0; k < rows; ++k) t.rows[k][Signal::t] = static_cast<std::int64_t>(k) * period;
  return t;
}

void require_columns(const Trace& trace, std::span<const Signal> needed, std::string_view who) {
  for (const Signal s : needed)
    if (!trace.has(s))
      throw TraceError(std::string(who) + " needs column '" + std::string(signal_name(s)) +
                           "', which the trace does not have",
                       0);
}

std::string write_trace_csv(const Trace& trace) {
  std::string out;
  for (std::size_t c = 0; c < trace.columns.size(); ++c) {
    if (c) out += ',';
    out += signal_name(trace.columns[c]);
  }
  out += '\n';
  for (const auto& row : trace.rows) {
    for (std::size_t c = 0; c < trace.columns.size(); ++c) {
      if (c) out += ',';
      out += std::to_string(row[trace.columns[c]]);
    }
    out += '\n';
  }
  return out;
}

Trace read_trace_csv(std::string_view text) {
  Trace trace;
  std::size_t lineno = 0;
  std::size_t start = 0;
  bool header = true;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> cells;
    std::size_t s = 0;
    for (;;) {
      const std::size_t comma = line.find(',', s);
      cells.push_back(line.substr(s, comma == std::string_view::npos ? std::string_view::npos : comma - s));
      if (comma == std::string_view::npos) break;
      s = comma + 1;
    }

    if (header) {
      header = false;
      for (const auto cell : cells) {
        const auto sig = signal_from_name(cell);
        if (!sig) throw TraceError("unknown column '" + std::string(cell) + "'", lineno);
        if (trace.has(*sig)) throw TraceError("duplicate column '" + std::string(cell) + "'", lineno);
        trace.columns.push_back(*sig);
      }
      for (std::size_t k = 0; k < kTruthCount; ++k) {
        const auto sig = static_cast<Signal>(k);
        if (!trace.has(sig))
          throw TraceError("missing column '" + std::string(signal_name(sig)) + "'", lineno);
      }
      continue;
    }

    if (cells.size() != trace.columns.size())
      throw TraceError("expected " + std::to_string(trace.columns.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       lineno);
    TraceRow row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::int64_t v = 0;
      const auto cell = cells[c];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty())
        throw TraceError("malformed value '" + std::string(cell) + "' in column " +
                             std::string(signal_name(trace.columns[c])),
                         lineno);
      const Signal sig = trace.columns[c];
      if (is_boolean(sig) && v != 0 && v != 1)
        throw TraceError("boolean column " + std::string(signal_name(sig)) + " holds " +
                             std::to_string(v),
                         lineno);
      row[sig] = v;
    }
    if (!trace.rows.empty()) {
      const std::int64_t prev = trace.rows.back()[Signal::t];
      if (row[Signal::t] <= prev) throw TraceError("non-monotone time", lineno);
      const std::int64_t step = row[Signal::t] - prev;
      if (trace.rows.size() == 1)
        trace.period = step;
      else if (step != trace.period)
        throw TraceError("irregular time step " + std::to_string(step) + " (period is " +
                             std::to_string(trace.period) + ")",
                         lineno);
    }
    trace.rows.push_back(row);
  }
  if (header) throw TraceError("missing header", 0);
  if (trace.rows.empty()) throw TraceError("empty trace", 0);
  return trace;
}

Trace ingest_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open trace file " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_trace_csv(buf.str());
}

void save_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file " + path.string());
  out << write_trace_csv(trace);
  if (!out) throw Error("failed writing trace file " + path.string());
}

}  // namespace dtcv
