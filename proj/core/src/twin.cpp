#include "dtcv/twin.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "B_T", "Bo_T", "W_M", "Wo_M", "W_A", "Wo_A", "Wo_R", "Wo_D", "burner_on", "critical_alarm",
    "T_env", "Alpha", "Beta", "Delta"};

constexpr std::int64_t kTempMax = 100000;
constexpr std::int64_t kMassMax = 100000000;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t output_index(Signal s) {
  const auto& outs = predicted_signals();
  for (std::size_t k = 0; k < outs.size(); ++k)
    if (outs[k] == s) return k;
  throw Error("signal '" + std::string(signal_name(s)) + "' is not a twin output");
}

// ---------------------------------------------------------------------------

class PerfectTwin final : public Surrogate {
 public:
  Prediction predict(const Trace& truth, std::size_t t, const PlantParams& p) const override {
    return evaluate(features_of(truth.rows.at(t), p));
  }
  std::string kind() const override { return "identity"; }
  json to_json() const override { return json{{"kind", "identity"}}; }

 protected:
  Prediction evaluate(const Features& x) const override {
    Prediction out{};
    for (std::size_t k = 0; k < kPredCount; ++k) out[k] = static_cast<std::int64_t>(std::llround(x[k]));
    return out;
  }
};

class ConstantSurrogate final : public Surrogate {
 public:
  explicit ConstantSurrogate(const Prediction& v) : value_(v) {}
  std::string kind() const override { return "constant"; }
  json to_json() const override { return json{{"kind", "constant"}, {"value", value_}}; }

 protected:
  Prediction evaluate(const Features&) const override { return value_; }

 private:
  Prediction value_;
};

class AffineSurrogate final : public Surrogate {
 public:
  AffineSurrogate(std::vector<double> w, std::vector<double> b, std::string kind)
      : w_(std::move(w)), b_(std::move(b)), kind_(std::move(kind)) {
    if (w_.size() != kPredCount * kFeatureCount || b_.size() != kPredCount)
      throw Error("affine surrogate needs " + std::to_string(kPredCount * kFeatureCount) +
                  " weights and " + std::to_string(kPredCount) + " biases");
  }
  std::string kind() const override { return kind_; }
  json to_json() const override {
    return json{{"kind", "affine"}, {"label", kind_}, {"weights", w_}, {"bias", b_}};
  }

 protected:
  Prediction evaluate(const Features& x) const override {
    std::array<double, kPredCount> y{};
    for (std::size_t o = 0; o < kPredCount; ++o) {
      double acc = b_[o];
      for (std::size_t i = 0; i < kFeatureCount; ++i) acc += w_[o * kFeatureCount + i] * x[i];
      y[o] = acc;
    }
    return finish(y);
  }

 private:
  std::vector<double> w_;
  std::vector<double> b_;
  std::string kind_;
};

/// Inputs seen by the fitted model: raw features plus interaction terms.
constexpr std::size_t kExpanded = kFeatureCount + 5;

std::array<double, kExpanded> expand(const Features& x) {
  std::array<double, kExpanded> e{};
  std::copy(x.begin(), x.end(), e.begin());
  const double on = x[8];
  const double b = x[0], bo = x[1], env = x[10], beta = x[12], delta = x[13];
  e[kFeatureCount + 0] = on * (b - env);
  e[kFeatureCount + 1] = (1.0 - on) * (b - env);
  e[kFeatureCount + 2] = on * beta * (b - delta - bo);
  e[kFeatureCount + 3] = (1.0 - on) * (bo - env);
  e[kFeatureCount + 4] = on * bo;
  return e;
}

class LinearSurrogate final : public Surrogate {
 public:
  LinearSurrogate(std::vector<double> mean, std::vector<double> scale, std::vector<double> w,
                  std::vector<double> b)
      : mean_(std::move(mean)), scale_(std::move(scale)), w_(std::move(w)), b_(std::move(b)) {
    if (mean_.size() != kExpanded || scale_.size() != kExpanded ||
        w_.size() != kPredCount * kExpanded || b_.size() != kPredCount)
      throw Error("linear surrogate weights do not match the feature schema");
  }
  std::string kind() const override { return "linear"; }
  json to_json() const override {
    return json{{"kind", "linear"}, {"mean", mean_}, {"scale", scale_}, {"weights", w_}, {"bias", b_}};
  }

 protected:
  Prediction evaluate(const Features& x) const override {
    const auto e = expand(x);
    std::array<double, kPredCount> y{};
    for (std::size_t o = 0; o < kPredCount; ++o) {
      double acc = b_[o];
      for (std::size_t i = 0; i < kExpanded; ++i)
        acc += w_[o * kExpanded + i] * (e[i] - mean_[i]) / scale_[i];
      y[o] = acc;
    }
    return finish(y);
  }

 private:
  std::vector<double> mean_, scale_, w_, b_;
};

class FaultySurrogate final : public Surrogate {
 public:
  FaultySurrogate(SurrogatePtr inner, FaultSpec f)
      : inner_(std::move(inner)), f_(f), out_(output_index(f.signal)) {}

  Prediction predict(const Trace& truth, std::size_t t, const PlantParams& p) const override {
    Prediction y = inner_->predict(truth, t, p);
    const auto step = static_cast<std::int64_t>(t);
    if (step < f_.t_from || step > f_.t_to) return y;
    const bool boolean = is_boolean(f_.signal);
    switch (f_.kind) {
      case FaultKind::StuckOutput:
        y[out_] = inner_->predict(truth, static_cast<std::size_t>(f_.t_from), p)[out_];
        break;
      case FaultKind::AdditiveNoise: {
        const std::uint64_t h = splitmix(f_.seed ^ splitmix(static_cast<std::uint64_t>(t) + 1));
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
        y[out_] = perturb(y[out_], f_.amplitude * (2.0 * u - 1.0), boolean);
        break;
      }
      case FaultKind::Bias:
        y[out_] = perturb(y[out_], f_.offset, boolean);
        break;
      case FaultKind::Lag: {
        const std::int64_t src = std::max<std::int64_t>(0, step - f_.steps);
        y[out_] = inner_->predict(truth, static_cast<std::size_t>(src), p)[out_];
        break;
      }
    }
    return y;
  }
  std::string kind() const override {
    return inner_->kind() + "+" + std::string(fault_kind_name(f_.kind));
  }

 protected:
  Prediction evaluate(const Features& x) const override { return inner_->predict_features(x); }

 private:
  static std::int64_t perturb(std::int64_t v, double delta, bool boolean) {
    const double raw = static_cast<double>(v) + delta;
    if (boolean) return std::clamp(raw, 0.0, 1.0) >= 0.5 ? 1 : 0;
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::llround(raw)));
  }

  SurrogatePtr inner_;
  FaultSpec f_;
  std::size_t out_;
};

std::vector<double> doubles(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw Error(std::string("surrogate file lacks '") + key + "'");
  return j.at(key).get<std::vector<double>>();
}

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_names() { return kFeatureNames; }

Features features_of(const TraceRow& row, const PlantParams& p) {
  Features x{};
  for (std::size_t k = 0; k < 11; ++k) x[k] = static_cast<double>(row[static_cast<Signal>(k + 1)]);
  x[11] = p.alpha;
  x[12] = p.beta;
  x[13] = static_cast<double>(p.delta);
  return x;
}

Prediction finish(std::span<const double> raw) {
  if (raw.size() != kPredCount) throw Error("prediction has wrong arity");
  Prediction out{};
  const auto& outs = predicted_signals();
  for (std::size_t k = 0; k < kPredCount; ++k) {
    const double v = std::isfinite(raw[k]) ? raw[k] : 0.0;
    if (is_boolean(outs[k])) {
      out[k] = std::clamp(v, 0.0, 1.0) >= 0.5 ? 1 : 0;
    } else {
      const bool temp = outs[k] == Signal::pred_B_T || outs[k] == Signal::pred_Bo_T;
      const double hi = static_cast<double>(temp ? kTempMax : kMassMax);
      out[k] = static_cast<std::int64_t>(std::llround(std::clamp(v, 0.0, hi)));
    }
  }
  return out;
}

Prediction Surrogate::predict(const Trace& truth, std::size_t t, const PlantParams& p) const {
  const std::size_t src = t == 0 ? 0 : t - 1;
  return evaluate(features_of(truth.rows.at(src), p));
}

Prediction Surrogate::predict_features(std::span<const double> input) const {
  if (input.size() != kFeatureCount)
    throw Error("twin input has " + std::to_string(input.size()) + " features, expected " +
                std::to_string(kFeatureCount));
  Features x{};
  std::copy(input.begin(), input.end(), x.begin());
  return evaluate(x);
}

json Surrogate::to_json() const { throw Error("surrogate '" + kind() + "' cannot be serialized"); }

SurrogatePtr perfect_twin() { return std::make_shared<PerfectTwin>(); }

SurrogatePtr constant_surrogate(const Prediction& value) {
  return std::make_shared<ConstantSurrogate>(value);
}

SurrogatePtr affine_surrogate(std::vector<double> weights, std::vector<double> bias, std::string kind) {
  return std::make_shared<AffineSurrogate>(std::move(weights), std::move(bias), std::move(kind));
}

SurrogatePtr monotone_surrogate(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::vector<double> weights(kPredCount * kFeatureCount);
  for (auto& v : weights) v = w(rng);
  std::vector<double> bias(kPredCount, 0.0);
  return affine_surrogate(std::move(weights), std::move(bias), "monotone");
}

SurrogatePtr anti_monotone_surrogate(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::vector<double> weights(kPredCount * kFeatureCount);
  for (auto& v : weights) v = -w(rng);
  std::vector<double> bias(kPredCount, static_cast<double>(kTempMax) / 2.0);
  return affine_surrogate(std::move(weights), std::move(bias), "anti-monotone");
}

SurrogatePtr fit(const std::vector<Trace>& traces, const std::vector<PlantParams>& params,
                 std::uint64_t /*seed*/, double ridge) {
  if (traces.empty()) throw Error("empty training set");
  if (traces.size() != params.size()) throw Error("one parameter set per training trace is required");
  std::vector<std::array<double, kExpanded>> xs;
  std::vector<std::array<double, kPredCount>> ys;
  const auto& outs = predicted_signals();
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const Trace& tr = traces[k];
    for (std::size_t t = 1; t < tr.size(); ++t) {
      xs.push_back(expand(features_of(tr.rows[t - 1], params[k])));
      std::array<double, kPredCount> y{};
      for (std::size_t o = 0; o < kPredCount; ++o) y[o] = static_cast<double>(tr.rows[t][truth_of(outs[o])]);
      ys.push_back(y);
    }
  }
  if (xs.empty()) throw Error("training traces need at least two rows");

  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto d = static_cast<Eigen::Index>(kExpanded);
  Eigen::MatrixXd X(n, d);
  Eigen::MatrixXd Y(n, static_cast<Eigen::Index>(kPredCount));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) X(r, c) = xs[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (Eigen::Index c = 0; c < Y.cols(); ++c) Y(r, c) = ys[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  const Eigen::RowVectorXd mean = X.colwise().mean();
  X.rowwise() -= mean;
  Eigen::RowVectorXd scale = (X.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt();
  for (Eigen::Index c = 0; c < d; ++c)
    if (scale(c) < 1e-12) scale(c) = 1.0;
  for (Eigen::Index c = 0; c < d; ++c) X.col(c) /= scale(c);
  const Eigen::RowVectorXd ymean = Y.colwise().mean();
  Y.rowwise() -= ymean;

  Eigen::MatrixXd gram = X.transpose() * X;
  gram.diagonal().array() += ridge * static_cast<double>(n);
  const Eigen::MatrixXd W = gram.ldlt().solve(X.transpose() * Y);  // d x outputs

  std::vector<double> mv(kExpanded), sv(kExpanded), wv(kPredCount * kExpanded), bv(kPredCount);
  for (std::size_t c = 0; c < kExpanded; ++c) {
    mv[c] = mean(static_cast<Eigen::Index>(c));
    sv[c] = scale(static_cast<Eigen::Index>(c));
  }
  for (std::size_t o = 0; o < kPredCount; ++o) {
    bv[o] = ymean(static_cast<Eigen::Index>(o));
    for (std::size_t c = 0; c < kExpanded; ++c)
      wv[o * kExpanded + c] = W(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(o));
  }
  return std::make_shared<LinearSurrogate>(std::move(mv), std::move(sv), std::move(wv), std::move(bv));
}

SurrogatePtr surrogate_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "identity") return perfect_twin();
  if (kind == "constant") return constant_surrogate(j.at("value").get<Prediction>());
  if (kind == "affine")
    return affine_surrogate(doubles(j, "weights"), doubles(j, "bias"), j.value("label", "affine"));
  if (kind == "linear")
    return std::make_shared<LinearSurrogate>(doubles(j, "mean"), doubles(j, "scale"),
                                             doubles(j, "weights"), doubles(j, "bias"));
  throw Error("unknown surrogate kind '" + kind + "'");
}

SurrogatePtr load_surrogate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open surrogate file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("surrogate file " + path.string() + ": " + e.what());
  }
  return surrogate_from_json(j);
}

void save_surrogate(const Surrogate& s, const std::filesystem::path& path) {
  json j = s.to_json();
  j["features"] = std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end());
  std::vector<std::string> outs;
  for (const Signal o : predicted_signals()) outs.emplace_back(signal_name(o));
  j["outputs"] = outs;
  std::ofstream out(path);
  if (!out) throw Error("cannot write surrogate file " + path.string());
  out << j.dump(2) << '\n';
}

std::string_view fault_kind_name(FaultKind k) {
  switch (k) {
    case FaultKind::StuckOutput: return "stuck_output";
    case FaultKind::AdditiveNoise: return "additive_noise";
    case FaultKind::Bias: return "bias";
    case FaultKind::Lag: return "lag";
  }
  return "";
}

FaultKind fault_kind_from_name(std::string_view name) {
  for (const FaultKind k : {FaultKind::StuckOutput, FaultKind::AdditiveNoise, FaultKind::Bias, FaultKind::Lag})
    if (fault_kind_name(k) == name) return k;
  throw Error("unknown fault kind '" + std::string(name) + "'");
}

SurrogatePtr inject_fault(SurrogatePtr inner, const FaultSpec& f) {
  if (!inner) throw Error("no surrogate to wrap");
  if (!is_prediction(f.signal))
    throw Error("fault signal '" + std::string(signal_name(f.signal)) + "' is not a twin output");
  if (f.t_from < 0 || f.t_to < f.t_from) throw Error("fault window is empty or negative");
  if (f.kind == FaultKind::Lag && f.steps < 0) throw Error("lag must be non-negative");
  if (f.kind == FaultKind::AdditiveNoise && f.amplitude < 0) throw Error("noise amplitude must be non-negative");
  return std::make_shared<FaultySurrogate>(std::move(inner), f);
}

namespace {

void store(TraceRow& row, const Prediction& y) {
  const auto& outs = predicted_signals();
  for (std::size_t k = 0; k < kPredCount; ++k) row[outs[k]] = y[k];
}

}  // namespace

Trace rollout(const Surrogate& s, const PlantParams& p, std::int64_t horizon, std::uint64_t /*seed*/,
              const RolloutOptions& opts) {
  if (horizon < 1) throw ModelError("horizon must be at least 1");
  Trace trace = make_trace(0, p.period, true);
  trace.rows.reserve(static_cast<std::size_t>(horizon));
  PlantState st = initial_state(p);
  for (std::int64_t k = 0; k < horizon; ++k) {
    if (k > 0) st = step(st, p);
    trace.rows.push_back(observe(st, p));
    const Prediction y = s.predict(trace, static_cast<std::size_t>(k), p);
    store(trace.rows.back(), y);
    if (opts.alarm_feedback && y[output_index(Signal::pred_W_A)] == 1) st.forced_off = true;
  }
  return trace;
}

Trace apply_twin(const Surrogate& s, Trace truth, const PlantParams& p) {
  truth.add_predictions();
  for (std::size_t t = 0; t < truth.size(); ++t) store(truth.rows[t], s.predict(truth, t, p));
  return truth;
}

}  // namespace dtcv
