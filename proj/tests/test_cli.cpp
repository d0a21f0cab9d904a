#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>

#ifndef MNM_CLI_PATH
#define MNM_CLI_PATH "./mnm"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(MNM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("exit codes follow the holds/fails/usage contract") {
  CHECK(run("valid --system Tm \"[]p -> p\"").exit_code == 0);
  CHECK(run("valid --system Km \"[]p -> p\"").exit_code == 1);
  CHECK(run("valid --system Nope \"p\"").exit_code == 2);
  CHECK(run("valid --system Tm \"p ->\"").exit_code == 2);
  CHECK(run("nonsense-subcommand").exit_code == 2);

  RunResult entail =
      run("entail --system Km -p \"[](p->q)\" -p \"[]p\" -c \"[]q\"");
  CHECK(entail.exit_code == 1);
  CHECK(entail.out.find("p = I+") != std::string::npos);
  CHECK(entail.out.find("q = C+") != std::string::npos);

  CHECK(run("dugundji falsify --system T45m -n 3").exit_code == 1);
  CHECK(run("proof dmt /nonexistent/x.drv").exit_code == 3);
}

TEST_CASE("text and JSON verdicts agree") {
  RunResult text = run("valid --system Tm \"[]p -> p\"");
  RunResult json = run("valid --system Tm \"[]p -> p\" --json");
  CHECK(text.exit_code == json.exit_code);
  CHECK(text.out.find("valid") != std::string::npos);
  CHECK(json.out.find("\"verdict\": \"holds\"") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical JSON") {
  std::string cmd =
      "entail --system Km -p \"[](p->q)\" -p \"[]p\" -c \"[]q\" --json";
  RunResult a = run(cmd);
  RunResult b = run(cmd);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"time_ms\": 0") != std::string::npos);

  std::string scan = "dugundji scan --system Km --size 3 -n 3 --budget 500 "
                     "--seed 9 --json";
  CHECK(run(scan).out == run(scan).out);

  // worker count changes the exploration, not the verdict or witness choice
  std::string par =
      "entail --system Km -p \"[](p->q)\" -p \"[]p\" -c \"[]q\" --jobs 4 "
      "--json";
  RunResult p1 = run(par);
  RunResult p2 = run(par);
  CHECK(p1.out == p2.out);
  CHECK(p1.out.find("\"p\": \"I+\"") != std::string::npos);
}

TEST_CASE("environment variable supplies the system") {
  RunResult r = run("valid \"[]p -> p\"");
  CHECK(r.exit_code == 2);  // no system anywhere
  std::string cmd = "MNM_SYSTEM=Tm " + std::string(MNM_CLI_PATH) +
                    " valid \"[]p -> p\" 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(out.find("valid") != std::string::npos);
}

TEST_CASE("strict-paper switches the documented cells") {
  RunResult normal = run("table imp --system Tm --json");
  RunResult strict = run("table imp --system Tm --strict-paper --json");
  CHECK(normal.out.find("\"C- F-\": \"{C+}\"") != std::string::npos);
  CHECK(strict.out.find("\"C- F-\": \"{C-}\"") != std::string::npos);
  RunResult d45 = run("table box --system D45m --json");
  RunResult d45s = run("table box --system D45m --strict-paper --json");
  CHECK(d45.out.find("\"T-\": \"{T+}\"") != std::string::npos);
  CHECK(d45s.out.find("\"T-\": \"{F-}\"") != std::string::npos);
}

TEST_CASE("table and derive-table surfaces") {
  RunResult t = run("table box --system T45m");
  CHECK(t.exit_code == 0);
  CHECK(t.out.find("C+ : {F-}") != std::string::npos);

  RunResult d = run("derive-table --system Km \"~A -> B\" --json");
  CHECK(d.exit_code == 0);
  CHECK(d.out.find("\"C+ C+\": \"{T+ C+}\"") != std::string::npos);

  RunResult one = run("derive-table --system Tm \"circ A\"");
  CHECK(one.exit_code == 0);
  CHECK(one.out.find("C+ : {T+ C+}") != std::string::npos);
}

TEST_CASE("JSON shapes carry the documented keys") {
  RunResult v = run("valid --system Km \"[]p -> p\" --json");
  for (const char* key : {"\"query\"", "\"system\"", "\"verdict\"",
                          "\"witness\"", "\"nodes_explored\"", "\"time_ms\""})
    CHECK(v.out.find(key) != std::string::npos);

  RunResult s =
      run("dugundji scan --system Km --size 3 -n 3 --budget 200 --json");
  for (const char* key : {"\"size\"", "\"system\"", "\"formula\"",
                          "\"candidates\"", "\"models\"", "\"violations\"",
                          "\"seed\""})
    CHECK(s.out.find(key) != std::string::npos);

  RunResult dat =
      run("dat search --kind both -c \"[]p -> p\" --json");
  for (const char* key :
       {"\"source\"", "\"target\"", "\"upsilon\"", "\"upsilon_prime\"",
        "\"verified\""})
    CHECK(dat.out.find(key) != std::string::npos);
  CHECK(dat.out.find("\"source\": \"Tm\"") != std::string::npos);
  CHECK(dat.out.find("\"target\": \"Km\"") != std::string::npos);
}

TEST_CASE("export, proof and dat round trips") {
  CHECK(run("export-tables --format nmx -o /tmp/mnm_cli_export").exit_code ==
        0);
  RunResult dev = run("export-tables --format nmx");
  CHECK(dev.out.find("deviations:") != std::string::npos);
  CHECK(dev.out.find("Tm imp(C-,F-)") != std::string::npos);

  RunResult p = run("parse \"circ p\"");
  CHECK(p.out == "[]p -> <>p\n");

  RunResult dat = run("dat search --kind circ -p \"[]p\" -c \"<>p\" --json");
  CHECK(dat.exit_code == 0);
  CHECK(dat.out.find("\"upsilon\": [") != std::string::npos);
  CHECK(dat.out.find("\"verified\": true") != std::string::npos);

  RunResult lem = run("lemmas");
  CHECK(lem.exit_code == 0);
}
