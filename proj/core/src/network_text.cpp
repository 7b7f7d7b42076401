#include "dtcv/network_text.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dtcv/error.hpp"

namespace dtcv {

namespace {

std::vector<std::string> split_words(std::string_view line, std::size_t lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    if (line[i] == '"') {
      const std::size_t close = line.find('"', i + 1);
      if (close == std::string_view::npos)
        throw ModelError("line " + std::to_string(lineno) + ": unterminated string");
      out.emplace_back(line.substr(i + 1, close - i - 1));
      i = close + 1;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::int64_t to_int(const std::string& s, std::size_t lineno) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ModelError("line " + std::to_string(lineno) + ": expected an integer, got '" + s + "'");
  return v;
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

NetworkSpec read_network_text(std::string_view text) {
  NetworkSpec spec;
  TemplateSpec* tmpl = nullptr;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    const auto w = split_words(line, lineno);
    if (w.empty()) continue;
    auto fail = [&](const std::string& msg) -> ModelError {
      return ModelError("line " + std::to_string(lineno) + ": " + msg);
    };
    auto need = [&](std::size_t n) {
      if (w.size() < n) throw fail("'" + w[0] + "' expects " + std::to_string(n - 1) + " arguments");
    };
    const std::string& kw = w[0];
    if (kw == "var") {
      need(4);
      VarSpec v{w[1], to_int(w[2], lineno), to_int(w[3], lineno),
                w.size() > 4 ? to_int(w[4], lineno) : to_int(w[2], lineno), false};
      (tmpl ? tmpl->vars : spec.vars).push_back(v);
    } else if (kw == "bool") {
      need(2);
      VarSpec v{w[1], 0, 1, w.size() > 2 ? to_int(w[2], lineno) : 0, true};
      (tmpl ? tmpl->vars : spec.vars).push_back(v);
    } else if (kw == "clock") {
      need(2);
      (tmpl ? tmpl->clocks : spec.clocks).push_back(w[1]);
    } else if (kw == "chan") {
      need(2);
      if (tmpl) throw fail("channels must be declared globally");
      spec.channels.push_back(w[1]);
    } else if (kw == "const") {
      need(3);
      if (tmpl) throw fail("constants must be declared globally");
      spec.constants.push_back({w[1], to_int(w[2], lineno)});
    } else if (kw == "table") {
      need(2);
      if (tmpl) throw fail("tables must be declared globally");
      TableSpec t{w[1], {}};
      for (std::size_t k = 2; k < w.size(); ++k) t.values.push_back(to_int(w[k], lineno));
      spec.tables.push_back(std::move(t));
    } else if (kw == "trace") {
      need(3);
      spec.trace = TraceBinding{w[1], to_int(w[2], lineno)};
    } else if (kw == "template") {
      need(2);
      if (tmpl) throw fail("nested template");
      tmpl = &spec.add_template(w[1]);
    } else if (kw == "end") {
      if (!tmpl) throw fail("'end' outside a template");
      tmpl = nullptr;
    } else if (kw == "location") {
      need(2);
      if (!tmpl) throw fail("location outside a template");
      LocationSpec l{w[1], {}, false};
      for (std::size_t k = 2; k < w.size(); ++k) {
        if (w[k] == "committed") {
          l.committed = true;
        } else if (w[k] == "inv" && k + 1 < w.size()) {
          l.invariant = w[++k];
        } else {
          throw fail("unexpected '" + w[k] + "' in location");
        }
      }
      tmpl->locations.push_back(std::move(l));
    } else if (kw == "initial") {
      need(2);
      if (!tmpl) throw fail("initial outside a template");
      tmpl->initial = w[1];
    } else if (kw == "edge") {
      need(3);
      if (!tmpl) throw fail("edge outside a template");
      EdgeSpec e{w[1], w[2], {}, {}, {}};
      for (std::size_t k = 3; k < w.size(); k += 2) {
        if (k + 1 >= w.size()) throw fail("missing value after '" + w[k] + "'");
        if (w[k] == "guard")
          e.guard = w[k + 1];
        else if (w[k] == "sync")
          e.sync = w[k + 1];
        else if (w[k] == "update")
          e.update = w[k + 1];
        else
          throw fail("unexpected '" + w[k] + "' in edge");
      }
      tmpl->edges.push_back(std::move(e));
    } else {
      throw fail("unknown keyword '" + kw + "'");
    }
  }
  if (tmpl) throw ModelError("template " + tmpl->name + " is missing 'end'");
  return spec;
}

std::string write_network_text(const NetworkSpec& spec) {
  std::ostringstream out;
  auto write_vars = [&](const std::vector<VarSpec>& vars, const char* indent) {
    for (const auto& v : vars) {
      if (v.boolean)
        out << indent << "bool " << v.name << ' ' << v.init << '\n';
      else
        out << indent << "var " << v.name << ' ' << v.lo << ' ' << v.hi << ' ' << v.init << '\n';
    }
  };
  write_vars(spec.vars, "");
  for (const auto& c : spec.clocks) out << "clock " << c << '\n';
  for (const auto& c : spec.channels) out << "chan " << c << '\n';
  for (const auto& c : spec.constants) out << "const " << c.name << ' ' << c.value << '\n';
  for (const auto& t : spec.tables) {
    out << "table " << t.name;
    for (const auto v : t.values) out << ' ' << v;
    out << '\n';
  }
  if (spec.trace) out << "trace " << spec.trace->row_var << ' ' << spec.trace->offset << '\n';
  for (const auto& t : spec.templates) {
    out << "\ntemplate " << t.name << '\n';
    write_vars(t.vars, "  ");
    for (const auto& c : t.clocks) out << "  clock " << c << '\n';
    for (const auto& l : t.locations) {
      out << "  location " << l.name;
      if (l.committed) out << " committed";
      if (!l.invariant.empty()) out << " inv " << quote(l.invariant);
      out << '\n';
    }
    if (!t.initial.empty()) out << "  initial " << t.initial << '\n';
    for (const auto& e : t.edges) {
      out << "  edge " << e.source << ' ' << e.target;
      if (!e.guard.empty()) out << " guard " << quote(e.guard);
      if (!e.sync.empty()) out << " sync " << quote(e.sync);
      if (!e.update.empty()) out << " update " << quote(e.update);
      out << '\n';
    }
    out << "end\n";
  }
  return out.str();
}

NetworkSpec load_network_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open network file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_network_text(buf.str());
}

void save_network_file(const NetworkSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write network file " + path.string());
  out << write_network_text(spec);
}

}  // namespace dtcv
