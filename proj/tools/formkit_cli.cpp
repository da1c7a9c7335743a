// formkit: command-line front end over the core library. Every invocation
// prints one JSON envelope on stdout; expensive results are cached on disk.
#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "formkit/acceptance.hpp"
#include "formkit/glcase.hpp"
#include "formkit/strength.hpp"
#include "formkit/torsor.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace formkit;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---- input parsing helpers -------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Variables of a form: the identifiers in the text that are not generators of
/// the coefficient field, in order of first appearance.
std::vector<std::string> infer_vars(const std::string& text, const FieldPtr& K) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string id = text.substr(i, j - i);
      if (!K->has_generator(id) && std::find(out.begin(), out.end(), id) == out.end())
        out.push_back(id);
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

PolyRingPtr ring_for(const FieldPtr& K, const std::string& form_text,
                     const std::string& vars_opt) {
  std::vector<std::string> vars =
      vars_opt.empty() ? infer_vars(form_text, K) : split(vars_opt, ',');
  if (vars.empty()) throw ParseError("no variables found; pass --vars");
  return make_ring(K, vars);
}

Covector parse_covector(const std::string& text, const FieldPtr& K) {
  Covector r;
  for (const auto& item : split(text, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("covector entries look like name=value");
    r[item.substr(0, eq)] = parse_field_element(item.substr(eq + 1), K);
  }
  return r;
}

json covector_json(const Covector& r) {
  json j = json::object();
  for (const auto& [k, v] : r) j[k] = v.str();
  return j;
}

// ---- serialization ---------------------------------------------------------

json witness_json(const Witness& w) {
  json a = json::array();
  for (const auto& [g, h] : w) a.push_back({g.str(), h.str()});
  return a;
}

json certificate_json(const StrengthCertificate& c) {
  static const char* reasons[] = {"closure_strength", "rank", "irreducibility", "exhaustion"};
  json j;
  j["status"] = c.status == StrengthCertificate::Status::Exact ? "exact" : "bounds";
  j["lower"] = c.lower;
  j["lower_reason"] = reasons[static_cast<int>(c.reason)];
  j["upper"] = c.upper;
  j["witness"] = witness_json(c.witness);
  if (c.extension)
    j["extension"] = {{"field", c.extension->field->spec_string()},
                      {"witness", witness_json(c.extension->witness)}};
  return j;
}

// ---- result cache ----------------------------------------------------------

std::string cache_dir() {
  if (const char* d = std::getenv("FORMKIT_CACHE_DIR")) return d;
  std::string home = std::getenv("HOME") ? std::getenv("HOME") : ".";
  return home + "/.cache/formkit";
}

std::string cache_key(const json& inputs) {
  // FNV-1a over version + canonical input dump (nlohmann objects are key-sorted)
  std::string s = std::string(kVersion) + "\n" + inputs.dump();
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::optional<json> cache_read(const std::string& key) {
  std::string path = cache_dir() + "/" + key + ".json";
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) return std::nullopt;
  ::flock(fd, LOCK_SH);
  std::ostringstream os;
  char buf[4096];
  ssize_t n;
  while ((n = ::read(fd, buf, sizeof buf)) > 0) os.write(buf, n);
  ::flock(fd, LOCK_UN);
  ::close(fd);
  try {
    return json::parse(os.str());
  } catch (const json::exception&) {
    return std::nullopt;  // corrupt entry: recompute
  }
}

void cache_write(const std::string& key, const json& payload) {
  std::string dir = cache_dir();
  ::mkdir(dir.c_str(), 0755);  // best effort
  std::string path = dir + "/" + key + ".json";
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT, 0644);
  if (fd < 0) return;
  ::flock(fd, LOCK_EX);
  std::string text = payload.dump();
  if (::ftruncate(fd, 0) == 0) {
    ssize_t off = 0;
    while (off < static_cast<ssize_t>(text.size())) {
      ssize_t n = ::write(fd, text.data() + off, text.size() - off);
      if (n <= 0) break;
      off += n;
    }
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

// ---- command state ---------------------------------------------------------

struct Options {
  std::string field = "QQ";
  std::string form, vars, mode = "bounds";
  unsigned long max_s = 0;
  unsigned long budget = 4000000;
  unsigned long target_s = 1, degree_budget = 3;
  std::string base, fiber, f_text, covector, phi, ideal;
  std::string shift_units, fiber_units;
  unsigned d = 2;
  unsigned long level = 1;
  unsigned long a = 2, m = 1, n = 1;
};

struct Outcome {
  json payload;
  bool falsified = false;
};

/// Falsification status recoverable from a (possibly cached) payload.
bool falsified_from(const json& payload) {
  if (payload.contains("pass")) return !payload["pass"].get<bool>();
  if (payload.contains("within_max_s")) return !payload["within_max_s"].get<bool>();
  if (payload.contains("all_pass")) return !payload["all_pass"].get<bool>();
  return false;
}

// describe_*: cheap canonicalization of the inputs (parse and re-serialize),
// used for the cache key and the envelope echo. compute_*: the actual work.

json describe_form_cmd(const char* cmd, const Options& o) {
  auto K = parse_field_spec(o.field);
  auto R = ring_for(K, o.form, o.vars);
  Poly f = parse_poly(o.form, R);
  json j = {{"command", cmd},
            {"field", K->spec_string()},
            {"form", f.str()},
            {"vars", R->vars}};
  return j;
}

json describe_strength(const Options& o) {
  json j = describe_form_cmd("strength", o);
  j["mode"] = o.mode;
  j["budget"] = o.budget;
  j["max_s"] = o.max_s;
  return j;
}

Outcome compute_strength(const Options& o) {
  auto K = parse_field_spec(o.field);
  auto R = ring_for(K, o.form, o.vars);
  Form f(parse_poly(o.form, R));
  Outcome out;
  unsigned long lower;
  if (o.mode == "astr") {
    auto a = astr(f);
    out.payload = {{"astr", a.s}, {"zero_input", a.zero_input}};
    if (a.pattern) out.payload["pattern"] = a.pattern->str();
    lower = a.s;
  } else if (o.mode == "exact") {
    auto c = str_exact_finite_field(f, o.budget);
    out.payload = certificate_json(c);
    lower = c.lower;
  } else if (o.mode == "bounds") {
    auto c = str_bounds(f);
    out.payload = certificate_json(c);
    lower = c.lower;
  } else {
    throw ParseError("mode must be astr, exact, or bounds");
  }
  if (o.max_s > 0) {
    out.payload["max_s"] = o.max_s;
    out.payload["within_max_s"] = lower <= o.max_s;
    out.falsified = lower > o.max_s;
  }
  return out;
}

json describe_extend(const Options& o) {
  json j = describe_form_cmd("extend", o);
  j["target_s"] = o.target_s;
  j["degree_budget"] = o.degree_budget;
  return j;
}

Outcome compute_extend(const Options& o) {
  auto K = parse_field_spec(o.field);
  auto R = ring_for(K, o.form, o.vars);
  Form f(parse_poly(o.form, R));
  Outcome out;
  auto ext = extension_lift_search(f, o.target_s, o.degree_budget);
  out.payload["found"] = ext.has_value();
  if (ext) {
    auto deg = ext->field->degree_over(*K);
    out.payload["extension_field"] = ext->field->spec_string();
    out.payload["degree"] = deg ? *deg : 0;
    out.payload["witness"] = witness_json(ext->witness);
  }
  return out;
}

TorsorAlgebra torsor_for(const Options& o, const FieldPtr& K) {
  return make_torsor(K, split(o.base, ','), split(o.fiber, ','));
}

json describe_torsor(const char* cmd, const Options& o) {
  auto K = parse_field_spec(o.field);
  auto T = torsor_for(o, K);
  Poly f = parse_poly(o.f_text, T.ring());
  json j = {{"command", cmd},
            {"field", K->spec_string()},
            {"base", T.base_vars()},
            {"fiber", T.fiber_vars()},
            {"f", f.str()}};
  if (!o.covector.empty()) j["covector"] = covector_json(parse_covector(o.covector, K));
  return j;
}

Outcome compute_torsor_delta(const Options& o) {
  auto K = parse_field_spec(o.field);
  auto T = torsor_for(o, K);
  auto dx = delta(parse_poly(o.f_text, T.ring()), T);
  json comps = json::object();
  for (const auto& [i, p] : dx.components) comps[std::to_string(i)] = p.str();
  return {{{"components", comps}}, false};
}

Outcome compute_torsor_derive(const Options& o) {
  auto K = parse_field_spec(o.field);
  auto T = torsor_for(o, K);
  Poly f = parse_poly(o.f_text, T.ring());
  Covector r = parse_covector(o.covector, K);
  return {{{"derivative", directional_derivative(f, r, T).str()}}, false};
}

Outcome compute_torsor_descend(const Options& o) {
  auto K = parse_field_spec(o.field);
  auto T = torsor_for(o, K);
  auto fd = frobenius_descend(parse_poly(o.f_text, T.ring()), T);
  json rw = json::array();
  for (const auto& [a, b] : fd.rewrite) rw.push_back({a.str(), b.str()});
  return {{{"q", fd.q}, {"rewrite", rw}}, false};
}

json describe_witness(const Options& o) {
  auto K = parse_field_spec(o.field);
  SymShiftModel M(K, o.d, split(o.shift_units, ','), split(o.fiber_units, ','));
  Poly f = parse_poly(o.form, M.ring());
  json ideal = json::array();
  for (const auto& g : split(o.ideal, ';')) ideal.push_back(parse_poly(g, M.ring()).str());
  return {{"command", "torsor-witness"},
          {"field", K->spec_string()},
          {"d", o.d},
          {"shift_units", M.shift_units()},
          {"fiber_units", M.fiber_units()},
          {"form", f.str()},
          {"phi", split(o.phi, ',')},
          {"covector", covector_json(parse_covector(o.covector, K))},
          {"ideal", ideal}};
}

Outcome compute_torsor_witness(const Options& o) {
  auto K = parse_field_spec(o.field);
  SymShiftModel M(K, o.d, split(o.shift_units, ','), split(o.fiber_units, ','));
  Poly f = parse_poly(o.form, M.ring());
  Covector r0 = parse_covector(o.covector, K);
  UnitMap phi;
  for (const auto& item : split(o.phi, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("phi entries look like shift=fiber");
    phi[item.substr(0, eq)] = item.substr(eq + 1);
  }
  std::vector<Poly> J;
  for (const auto& g : split(o.ideal, ';')) J.push_back(parse_poly(g, M.ring()));
  auto ew = embed_witness(f, r0, phi, M, J);
  Outcome out;
  out.payload = {{"level_ok", ew.report.level_ok},
                 {"ideal_ok", ew.report.ideal_ok},
                 {"identity_ok", ew.report.identity_ok},
                 {"pass", ew.report.pass()},
                 {"detail", ew.report.detail},
                 {"h", ew.h.str()},
                 {"w", ew.w.str()}};
  out.falsified = !ew.report.pass();
  return out;
}

json describe_shift_dims(const Options& o) {
  return {{"command", "glcase-shift-dims"}, {"a", o.a}, {"m", o.m}, {"n", o.n}};
}

Outcome compute_shift_dims(const Options& o) {
  json pieces = json::array();
  unsigned long total = 0;
  for (const auto& p : shift_decompose(static_cast<unsigned>(o.a), o.m, o.n)) {
    pieces.push_back({{"i", p.i},
                      {"dim_first", p.dim_first},
                      {"dim_second", p.dim_second},
                      {"dim", p.dim}});
    total += p.dim;
  }
  return {{{"pieces", pieces}, {"total", total}}, false};
}

json describe_ns_check(const Options& o) {
  return {{"command", "glcase-ns-check"}, {"n", o.level}};
}

Outcome compute_ns_check(const Options& o) {
  auto rep = ns_example_check(o.level);
  Outcome out;
  out.payload = {{"injective", rep.injective},
                 {"f_surjective", rep.f_surjective},
                 {"pass", rep.pass()},
                 {"detail", rep.detail}};
  out.falsified = !rep.pass();
  return out;
}

Outcome compute_verify(const Options&) {
  auto results = run_acceptance();
  Outcome out;
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back({{"name", r.name}, {"pass", r.pass}, {"details", r.details}, {"ms", r.ms}});
    all = all && r.pass;
  }
  out.payload = {{"criteria", arr}, {"all_pass", all}};
  out.falsified = !all;
  return out;
}

struct Command {
  CLI::App* sub;
  json (*describe)(const Options&);
  Outcome (*compute)(const Options&);
  bool cacheable;
};

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"exact strength, torsor, and symmetric-power computations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  bool pretty = false, no_cache = false;
  app.add_flag("--pretty", pretty, "indent the output envelope");
  app.add_flag("--no-cache", no_cache, "skip the result cache");

  std::vector<Command> commands;
  auto common = [&](CLI::App* c) {
    c->add_option("--field", o.field, "coefficient field spec");
  };
  auto form_opts = [&](CLI::App* c) {
    c->add_option("--form", o.form, "homogeneous form")->required();
    c->add_option("--vars", o.vars, "comma-separated ring variables (default: inferred)");
  };

  auto* s = app.add_subcommand("strength", "strength certificates for a form");
  common(s);
  form_opts(s);
  s->add_option("--mode", o.mode, "astr | exact | bounds");
  s->add_option("--max-s", o.max_s, "flag results whose lower bound exceeds this");
  s->add_option("--budget", o.budget, "enumeration budget for exact mode");
  commands.push_back({s, describe_strength, compute_strength, true});

  auto* e = app.add_subcommand("extend", "search field extensions lowering the strength");
  common(e);
  form_opts(e);
  e->add_option("--target-s", o.target_s, "strength to reach");
  e->add_option("--degree-budget", o.degree_budget, "maximum extension degree");
  commands.push_back({e, describe_extend, compute_extend, true});

  auto* t = app.add_subcommand("torsor", "translation calculus");
  t->require_subcommand(1);
  auto torsor_common = [&](CLI::App* c) {
    common(c);
    c->add_option("--base", o.base, "comma-separated base variables");
    c->add_option("--fiber", o.fiber, "comma-separated fiber variables")->required();
    c->add_option("--f", o.f_text, "polynomial")->required();
  };
  auto* td = t->add_subcommand("delta", "comultiplication components");
  torsor_common(td);
  commands.push_back({td, [](const Options& o) { return describe_torsor("torsor-delta", o); },
                      compute_torsor_delta, true});
  auto* tv = t->add_subcommand("derive", "directional derivative along a covector");
  torsor_common(tv);
  tv->add_option("--covector", o.covector, "name=value,... on fiber variables")->required();
  commands.push_back({tv, [](const Options& o) { return describe_torsor("torsor-derive", o); },
                      compute_torsor_derive, true});
  auto* ts = t->add_subcommand("descend", "Frobenius descent rewrite");
  torsor_common(ts);
  commands.push_back({ts, [](const Options& o) { return describe_torsor("torsor-descend", o); },
                      compute_torsor_descend, true});
  auto* tw = t->add_subcommand("witness", "embedding witness checks");
  common(tw);
  tw->add_option("--d", o.d, "symmetric power degree");
  tw->add_option("--shift-units", o.shift_units, "comma-separated shift units")->required();
  tw->add_option("--fiber-units", o.fiber_units, "comma-separated fiber units")->required();
  tw->add_option("--form", o.form, "form in the model coordinates")->required();
  tw->add_option("--phi", o.phi, "shift=fiber,... unit map")->required();
  tw->add_option("--covector", o.covector, "name=value,... on inner coordinates")->required();
  tw->add_option("--ideal", o.ideal, "semicolon-separated ideal generators")->required();
  commands.push_back({tw, describe_witness, compute_torsor_witness, true});

  auto* g = app.add_subcommand("glcase", "symmetric-power case studies");
  g->require_subcommand(1);
  auto* gs = g->add_subcommand("shift-dims", "graded dimensions of a two-block symmetric power");
  gs->add_option("--a", o.a, "symmetric power")->required();
  gs->add_option("--m", o.m, "first block level")->required();
  gs->add_option("--n", o.n, "second block level")->required();
  commands.push_back({gs, describe_shift_dims, compute_shift_dims, true});
  auto* gn = g->add_subcommand("ns-check", "squaring-relation coordinate ring checks");
  gn->add_option("--n", o.level, "level")->required();
  commands.push_back({gn, describe_ns_check, compute_ns_check, true});

  auto* v = app.add_subcommand("verify", "run the acceptance criteria");
  commands.push_back(
      {v, [](const Options&) { return json{{"command", "verify"}}; }, compute_verify, false});

  for (const auto& c : commands) c.sub->fallthrough();
  t->fallthrough();
  g->fallthrough();

  CLI11_PARSE(app, argc, argv);

  const Command* cmd = nullptr;
  for (const auto& c : commands)
    if (c.sub->parsed()) cmd = &c;
  if (!cmd) {
    std::cerr << "no command selected\n";
    return 1;
  }

  try {
    auto t0 = std::chrono::steady_clock::now();
    json inputs = cmd->describe(o);
    std::string key = cache_key(inputs);
    Outcome out;
    bool hit = false;
    if (!no_cache && cmd->cacheable) {
      if (auto cached = cache_read(key)) {
        out.payload = *cached;
        out.falsified = falsified_from(out.payload);
        hit = true;
      }
    }
    if (!hit) {
      out = cmd->compute(o);
      if (!no_cache && cmd->cacheable) cache_write(key, out.payload);
    }
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    json envelope = {{"command", inputs["command"]}, {"version", kVersion},
                     {"inputs", inputs},            {"payload", out.payload},
                     {"cache_hit", hit},            {"ms", ms}};
    std::cout << (pretty ? envelope.dump(2) : envelope.dump()) << "\n";
    return out.falsified ? 2 : 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
