#include "networks.hpp"

namespace dtcv::testing {

NetworkSpec lamp_spec(bool slow) {
  NetworkSpec s;
  s.clock("y").channel("press");
  s.add_template("Lamp")
      .location("off")
      .location("low")
      .location("bright")
      .edge("off", "low", "", "press?", "y = 0")
      .edge("low", "bright", "y < 5", "press?")
      .edge("low", "off", "y >= 5", "press?")
      .edge("bright", "off", "", "press?");
  auto& user = s.add_template("User").location("idle").location("pressed");
  user.edge("idle", "pressed", "", "press!");
  user.edge("pressed", "pressed", slow ? "y >= 5" : "", "press!");
  return s;
}

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

RandomNetwork random_network(std::mt19937_64& rng) {
  RandomNetwork out;
  NetworkSpec& s = out.spec;
  s.var("v", 0, 3, pick(rng, 0, 3));
  s.channel("a");
  s.constant("K", pick(rng, 0, 5));
  const int ntemplates = pick(rng, 1, 3);
  std::vector<int> nlocs;
  for (int k = 0; k < ntemplates; ++k) {
    const std::string name = "T" + std::to_string(k);
    auto& t = s.add_template(name);
    t.clock("x");
    const int nl = pick(rng, 1, 4);
    nlocs.push_back(nl);
    for (int l = 0; l < nl; ++l) {
      const std::string loc = "L" + std::to_string(l);
      if (l > 0 && coin(rng, 0.15))
        t.committed(loc);
      else if (coin(rng, 0.4))
        t.location(loc, "x <= " + std::to_string(pick(rng, 0, 5)));
      else
        t.location(loc);
    }
    const int nedges = pick(rng, 1, 5);
    for (int e = 0; e < nedges; ++e) {
      const std::string src = "L" + std::to_string(pick(rng, 0, nl - 1));
      const std::string dst = "L" + std::to_string(pick(rng, 0, nl - 1));
      std::string guard;
      auto conj = [&](const std::string& g) { guard = guard.empty() ? g : guard + " && " + g; };
      switch (pick(rng, 0, 4)) {
        case 0: conj("x >= " + std::to_string(pick(rng, 0, 5))); break;
        case 1: conj("x <= " + std::to_string(pick(rng, 0, 5))); break;
        case 2: conj("x >= K"); break;
        default: break;
      }
      if (coin(rng, 0.3)) conj("v == " + std::to_string(pick(rng, 0, 3)));
      if (coin(rng, 0.2)) conj("v < K");
      std::string sync;
      if (coin(rng, 0.3)) sync = coin(rng, 0.5) ? "a!" : "a?";
      std::string update;
      auto upd = [&](const std::string& u) { update = update.empty() ? u : update + ", " + u; };
      if (coin(rng, 0.5)) upd("x = 0");
      switch (pick(rng, 0, 3)) {
        case 0: upd("v = " + std::to_string(pick(rng, 0, 3))); break;
        case 1: upd("v = (v + 1) % 4"); break;
        default: break;
      }
      t.edge(src, dst, guard, sync, update);
    }
  }

  auto atom = [&]() -> std::string {
    if (coin(rng, 0.6)) {
      const int k = pick(rng, 0, ntemplates - 1);
      return "T" + std::to_string(k) + ".L" + std::to_string(pick(rng, 0, nlocs[k] - 1));
    }
    static const char* ops[] = {"==", "!=", "<=", ">"};
    return "v " + std::string(ops[pick(rng, 0, 3)]) + " " + std::to_string(pick(rng, 0, 3));
  };
  std::string p = atom();
  const int extra = pick(rng, 0, 2);
  for (int k = 0; k < extra; ++k) p = "(" + p + (coin(rng, 0.5) ? " && " : " || ") + atom() + ")";
  if (coin(rng, 0.3)) p = "!" + p;
  out.predicate = p;
  return out;
}

}  // namespace dtcv::testing
