// Evaluates each contract's assumption/guarantee predicates directly on the stabilized
// series. Shares no code with the automata builders beyond the trace schema.

#include <algorithm>
#include <map>

#include "dtcv/contracts.hpp"
#include "dtcv/error.hpp"

namespace dtcv {

namespace {

enum class Trend { None, Inc, Dec, Flat };

class View {
 public:
  View(const Trace& trace, const ContractParams& p) : trace_(trace), p_(p) {}

  /// Value the driver publishes for row r: windowed mean or raw sample.
  std::int64_t operator()(Signal s, std::int64_t r) const {
    const bool raw = is_boolean(s) || s == Signal::T_env;
    if (raw) return trace_.rows[static_cast<std::size_t>(r)][s];
    std::int64_t sum = 0;
    for (std::int64_t i = r - p_.m; i < r; ++i) sum += trace_.rows[static_cast<std::size_t>(i)][s];
    const std::int64_t den = 2 * static_cast<std::int64_t>(p_.m);
    const std::int64_t num = 2 * sum + p_.m;
    std::int64_t q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
  }

  Trend trend(Signal s, std::int64_t r) const {
    const std::int64_t now = (*this)(s, r);
    const std::int64_t before = (*this)(s, r - 1);
    if (now > before + p_.epsilon) return Trend::Inc;
    if (now < before - p_.epsilon) return Trend::Dec;
    return Trend::Flat;
  }

 private:
  const Trace& trace_;
  const ContractParams& p_;
};

struct Sink {
  ContractId id;
  std::vector<ViolationRecord>& out;
  const View& view;

  void add(const std::string& query, std::int64_t row) {
    ViolationRecord v;
    v.contract = id;
    v.query = query;
    v.row = row;
    for (const Signal s : contract_signals(id)) v.signals.emplace_back(std::string(signal_name(s)), view(s, row));
    out.push_back(std::move(v));
  }
};

}  // namespace

std::vector<ViolationRecord> direct_oracle(ContractId id, const Trace& trace,
                                           const ContractParams& params) {
  // Building the contract performs the same validation as the automata path.
  const Contract contract = build_contract(id, trace, params);
  const auto& q = contract.queries;

  std::vector<ViolationRecord> out;
  const View v(trace, params);
  Sink sink{id, out, v};
  const std::int64_t first = params.m;
  const std::int64_t last = static_cast<std::int64_t>(trace.size());
  const std::int64_t P = params.period;
  using S = Signal;

  auto lagged = [&](std::int64_t& counter, bool mismatch) {
    counter = mismatch ? std::min(counter + 1, params.lag + 1) : 0;
    return counter > params.lag;
  };

  switch (id) {
    case ContractId::MC1: {
      std::int64_t mism = 0;
      for (std::int64_t r = first; r < last; ++r) {
        if (r == first) continue;
        const bool boiling = v(S::B_T, r) >= params.T_Boil;
        const Trend a = boiling ? Trend::None : v.trend(S::B_T, r);
        const Trend g = v.trend(S::pred_Bo_T, r);
        const bool bad = (a == Trend::Inc && g != Trend::Inc) || (a == Trend::Dec && g != Trend::Dec);
        const bool over = lagged(mism, bad);
        if (a == Trend::Inc && g != Trend::Inc && over) sink.add(q[0].invariance, r);
        if (a == Trend::Dec && g != Trend::Dec && over) sink.add(q[1].invariance, r);
      }
      break;
    }
    case ContractId::MC2: {
      std::int64_t mism = 0;
      for (std::int64_t r = first + 1; r < last; ++r) {
        const bool above = v(S::Bo_T, r) > params.T_Boil;
        const Trend g = v.trend(S::pred_W_M, r);
        const bool bad = above ? g == Trend::Inc : g != Trend::Flat;
        const bool over = lagged(mism, bad);
        if (above && g == Trend::Inc && over) sink.add(q[0].invariance, r);
        if (!above && g != Trend::Flat && over) sink.add(q[1].invariance, r);
      }
      break;
    }
    case ContractId::MC3: {
      std::int64_t mism = 0;
      for (std::int64_t r = first + 1; r < last; ++r) {
        const Trend a = v(S::burner_on, r) == 1 ? v.trend(S::Wo_M, r) : Trend::None;
        const Trend g = v.trend(S::pred_B_T, r);
        const bool bad = (a == Trend::Inc && g == Trend::Dec) || (a == Trend::Dec && g == Trend::Inc);
        const bool over = lagged(mism, bad);
        if (a == Trend::Inc && g == Trend::Dec && over) sink.add(q[0].invariance, r);
        if (a == Trend::Dec && g == Trend::Inc && over) sink.add(q[1].invariance, r);
      }
      break;
    }
    case ContractId::FC1:
      for (std::int64_t r = first; r < last; ++r)
        if (v(S::Wo_M, r) < params.Wo_min && v(S::pred_Wo_R, r) != 1) sink.add(q[0].invariance, r);
      break;
    case ContractId::FC2: {
      std::optional<std::int64_t> since;
      bool starved = false;
      for (std::int64_t r = first; r < last; ++r) {
        const bool requesting = v(S::Wo_R, r) == 1 && v(S::Wo_D, r) == 0;
        if (!requesting) {
          since.reset();
          starved = false;
        } else if (!since) {
          since = r;
        } else if ((r - *since) * P >= params.wood_wait) {
          starved = true;
        }
        if (starved && v(S::Wo_M, r) < params.Wo_min && v(S::pred_W_A, r) != 1)
          sink.add(q[0].invariance, r);
      }
      break;
    }
    case ContractId::FC3:
      for (std::int64_t r = first; r < last; ++r)
        if (v(S::Wo_M, r) > params.Wo_min && (v(S::pred_Wo_R, r) == 1 || v(S::pred_Wo_D, r) == 1))
          sink.add(q[0].invariance, r);
      break;
    case ContractId::FC4: {
      bool reached = false;
      for (std::int64_t r = first; r < last; ++r) {
        const std::int64_t b = v(S::B_T, r);
        const bool in = b >= params.ideal_lo && b <= params.ideal_hi;
        reached = reached || in;
        if (reached && !in && v(S::critical_alarm, r) != 1) sink.add(q[0].invariance, r);
      }
      break;
    }
    case ContractId::FC5:
      for (std::int64_t r = first; r < last; ++r)
        if (v(S::W_A, r) == 1 && v(S::burner_on, r) != 0) sink.add(q[0].invariance, r);
      break;
    case ContractId::FC6:
      for (std::int64_t r = first; r < last; ++r)
        if (v(S::W_M, r) > params.W_min && v(S::pred_Wo_M, r) <= 0) sink.add(q[0].invariance, r);
      break;
    case ContractId::FC7: {
      bool reached = false;
      for (std::int64_t r = first; r < last; ++r) {
        reached = reached || v(S::Bo_T, r) >= params.T_Boil;
        const std::int64_t bo = v(S::pred_Bo_T, r);
        const bool around = bo >= params.T_Boil - params.epsilon && bo <= params.T_Boil + params.epsilon;
        if (reached && v(S::W_M, r) > params.W_min && !around) sink.add(q[0].invariance, r);
      }
      break;
    }
    case ContractId::FC8:
      for (std::int64_t r = first; r < last; ++r)
        if (v(S::W_M, r) < params.W_min && v(S::pred_W_A, r) != 1) sink.add(q[0].invariance, r);
      break;
    case ContractId::FC9:
      for (std::int64_t r = first; r < last; ++r)
        if (v(S::W_M, r) > params.W_min && v(S::pred_W_A, r) == 1) sink.add(q[0].invariance, r);
      break;
    case ContractId::FC10:
      for (std::int64_t r = first; r < last; ++r) {
        const std::int64_t env = v(S::T_env, r);
        if (v(S::burner_on, r) == 0 && (v(S::pred_B_T, r) < env || v(S::pred_Bo_T, r) < env))
          sink.add(q[0].invariance, r);
      }
      break;
    case ContractId::IC1: {
      std::optional<std::int64_t> since;
      bool critical = false;
      for (std::int64_t r = first; r < last; ++r) {
        if (v(S::critical_alarm, r) == 0) {
          since.reset();
          critical = false;
        } else if (!since) {
          since = r;
        } else if ((r - *since) * P >= params.alarm_hold) {
          critical = true;
        }
        if (critical && v(S::burner_on, r) != 0) sink.add(q[0].invariance, r);
      }
      break;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ViolationRecord& a, const ViolationRecord& b) { return a.row < b.row; });
  return out;
}

}  // namespace dtcv
