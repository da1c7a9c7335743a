// End-to-end checks of the command-line tool: envelope shape, determinism,
// cache soundness, and exit codes. Talks to the real binary via popen.
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string cli_path() {
#ifdef FORMKIT_CLI_PATH
  return FORMKIT_CLI_PATH;
#else
  const char* p = std::getenv("FORMKIT_CLI_PATH");
  REQUIRE(p != nullptr);
  return p;
#endif
}

std::string cache_root() {
  static std::string dir = [] {
    std::string d = "/tmp/formkit_cli_test_cache_" + std::to_string(::getpid());
    return d;
  }();
  return dir;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = "FORMKIT_CACHE_DIR='" + cache_root() + "' '" + cli_path() + "' " + args +
                    " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = ::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json envelope(const RunResult& r) {
  json j = json::parse(r.out);
  CHECK(j.contains("command"));
  CHECK(j.contains("version"));
  CHECK(j.contains("inputs"));
  CHECK(j.contains("payload"));
  CHECK(j.contains("cache_hit"));
  CHECK(j.contains("ms"));
  return j;
}

}  // namespace

TEST_CASE("absolute strength over the rationals") {
  auto r = run("strength --field QQ --form x1^2+x2^2 --mode astr --no-cache");
  CHECK(r.exit_code == 0);
  json j = envelope(r);
  CHECK(j["command"] == "strength");
  CHECK(j["inputs"]["vars"] == json::array({"x1", "x2"}));
  CHECK(j["payload"]["astr"] == 1);
}

TEST_CASE("exact strength with witness over GF(2)") {
  auto r = run("strength --field 'GF(2)' --form 'x1*x2+x3*x4' --mode exact --no-cache");
  CHECK(r.exit_code == 0);
  json j = envelope(r);
  CHECK(j["payload"]["status"] == "exact");
  CHECK(j["payload"]["lower"] == 2);
  CHECK(j["payload"]["upper"] == 2);
  CHECK(j["payload"]["witness"].size() == 2);
}

TEST_CASE("comultiplication components of a square") {
  auto r = run("torsor delta --field QQ --fiber x --f x^2 --no-cache");
  CHECK(r.exit_code == 0);
  json j = envelope(r);
  auto& comps = j["payload"]["components"];
  CHECK(comps.size() == 3);
  CHECK(comps.contains("0"));
  CHECK(comps.contains("1"));
  CHECK(comps.contains("2"));
  CHECK(comps["2"] == "x_y^2");
}

TEST_CASE("extension search finds a quadratic extension") {
  auto r = run("extend --field QQ --form x1^2+x2^2 --target-s 1 --no-cache");
  CHECK(r.exit_code == 0);
  json j = envelope(r);
  CHECK(j["payload"]["found"] == true);
  CHECK(j["payload"]["degree"] == 2);
}

TEST_CASE("shift dimensions satisfy the binomial count") {
  auto r = run("glcase shift-dims --a 2 --m 1 --n 2 --no-cache");
  CHECK(r.exit_code == 0);
  json j = envelope(r);
  CHECK(j["payload"]["total"] == 6);  // dim Sym^2 of a 3-dimensional space
  CHECK(j["payload"]["pieces"].size() == 3);
}

TEST_CASE("squaring-relation check passes at small level") {
  auto r = run("glcase ns-check --n 1 --no-cache");
  CHECK(r.exit_code == 0);
  json j = envelope(r);
  CHECK(j["payload"]["pass"] == true);
}

TEST_CASE("deterministic payloads across runs") {
  const std::string args =
      "strength --field 'GF(3)' --form 'x1^2+x2^2+x3^2' --mode exact --no-cache";
  auto a = run(args);
  auto b = run(args);
  CHECK(a.exit_code == 0);
  json ja = envelope(a), jb = envelope(b);
  ja.erase("ms"), jb.erase("ms");  // only the timing may differ
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("cached result matches the computed one") {
  const std::string args = "strength --field 'GF(2)' --form 'x1*x2*x3+x4^3' --mode exact";
  auto cold = run(args);
  auto warm = run(args);
  CHECK(cold.exit_code == 0);
  CHECK(warm.exit_code == 0);
  json jc = envelope(cold), jw = envelope(warm);
  CHECK(jc["cache_hit"] == false);
  CHECK(jw["cache_hit"] == true);
  CHECK(jc["payload"] == jw["payload"]);
  CHECK(jc["inputs"] == jw["inputs"]);

  // whitespace is canonicalized away, so a reformatted form hits the same entry
  auto spaced = run("strength --field 'GF(2)' --form 'x1 * x2 * x3 + x4^3' --mode exact");
  CHECK(envelope(spaced)["cache_hit"] == true);
}

TEST_CASE("falsified bound exits with code 2") {
  auto r = run("strength --field 'GF(3)' --form 'x1^2+x2^2+x3^2+x4^2' --mode exact --max-s 1 "
               "--no-cache");
  CHECK(r.exit_code == 2);
  json j = envelope(r);
  CHECK(j["payload"]["within_max_s"] == false);
}

TEST_CASE("parse errors exit with code 1") {
  CHECK(run("strength --field QQ --form 'x1^2+'").exit_code == 1);
  CHECK(run("strength --field 'GF(7^^)' --form x1^2").exit_code == 1);
  CHECK(run("bogus-command").exit_code != 0);
}

TEST_CASE("embedding witness via the command line") {
  auto r = run("torsor witness --field QQ --d 2 --shift-units u --fiber-units e1,e2 "
               "--form 5*z_u_u --phi u=e1 --covector z_u_u=1 "
               "--ideal 'z_u_u;z_u_e1;z_u_e2;z_e1_e1;z_e1_e2;z_e2_e2' --no-cache");
  CHECK(r.exit_code == 0);
  json j = envelope(r);
  CHECK(j["payload"]["pass"] == true);
  CHECK(j["payload"]["w"] == "5*z_e1_e1");
}
