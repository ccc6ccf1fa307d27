#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ncx/jobs.hpp"

using namespace ncx;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(NCX_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult cli(const std::string& args) {
  std::string cmd = std::string(NCX_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("ring literals round trip") {
  for (std::string lit : {"Z", "Z/12", "F7", "F7[q=2]", "Z[z3]", "Z[z4]", "Z[1/2,1/3]"}) {
    Ring R = parse_ring_literal(lit);
    CHECK(ring_literal(R) == lit);
    CHECK(parse_ring_literal(ring_literal(R)) == R);
  }
  CHECK(parse_ring_literal("F7:q=2") == parse_ring_literal("F7[q=2]"));
  CHECK(parse_ring_literal("Z[zeta3]") == Ring::cyclotomic(3));
  CHECK_THROWS_AS(parse_ring_literal("Q"), SchemaError);
  CHECK_THROWS_AS(parse_ring_literal("F6"), SchemaError);
}

TEST_CASE("element literals") {
  Ring Zz = Ring::cyclotomic(3);
  CHECK(parse_elem(Zz, json("1-z")) == Zz.cyclo(1, -1));
  CHECK(parse_elem(Zz, json("z")) == Zz.cyclo(0, 1));
  CHECK(parse_elem(Zz, json("-3z")) == Zz.cyclo(0, -3));
  CHECK(parse_elem(Zz, json::array({2, 5})) == Zz.cyclo(2, 5));
  for (auto e : {Zz.cyclo(1, -1), Zz.cyclo(0, 1), Zz.cyclo(-4, 0), Zz.cyclo(3, 2)})
    CHECK(parse_elem(Zz, elem_json(Zz, e)) == e);
  Ring L = Ring::localized({2});
  CHECK(parse_elem(L, json("3/4")) == L.frac(3, 4));
  CHECK_THROWS_AS(parse_elem(L, json("1/3")), SchemaError);
  Ring F = Ring::prime_field(7);
  CHECK(parse_elem(F, json(-1)) == F.from_int(6));
  CHECK_THROWS_AS(parse_elem(Ring::integers(), json("1/2")), SchemaError);
  CHECK_THROWS_AS(parse_elem(Ring::integers(), json(1.5)), SchemaError);
  CHECK(parse_elem_list(Ring::integers(), "2, -4").size() == 2);
  CHECK(parse_range("-3..2") == std::pair<int, int>{-3, 2});
  CHECK_THROWS_AS(parse_range("3..2"), SchemaError);
}

TEST_CASE("the documented job parses") {
  JobSpec job = parse_input(R"({"command":"koszul","ring":{"kind":"Z"},"N":3,"elements":[2,3],"t":"all"})");
  CHECK(job.command == "koszul");
  CHECK(job.ring == Ring::integers());
  CHECK(job.N == 3);
  REQUIRE(job.elements.size() == 2);
  CHECK(job.elements[1] == Ring::integers().from_int(3));
  CHECK(!job.t);
}

TEST_CASE("schema errors name the field") {
  auto field_of = [](const std::string& text) {
    try {
      parse_input(text);
    } catch (const SchemaError& e) {
      return e.field;
    }
    return std::string("<none>");
  };
  CHECK(field_of(R"({"command":"koszul","ring":{"kind":"Z"},"elements":[2]})") == "N");
  CHECK(field_of(R"({"command":"koszul","N":3})") == "elements");
  CHECK(field_of(R"({"command":"frobnicate","N":3})") == "command");
  CHECK(field_of(R"({"command":"koszul","N":3,"elements":[2],"colour":1})") == "colour");
  CHECK(field_of(R"({"command":"koszul","N":1,"elements":[2]})") == "N");
  CHECK(field_of(R"({"command":"koszul","N":3,"elements":[2],"t":3})") == "t");
  CHECK(field_of(R"({"command":"localcoh","N":3,"elements":[2]})") == "module");
  CHECK(field_of(R"({"command":"check","suite":"les","count":5})") == "seed");
  CHECK(field_of(R"({"command":"check","suite":"nope","seed":1,"count":5})") == "suite");
  CHECK(field_of(R"({"command":"telescope","N":3,"elements":[2,3],"stage":2})") == "elements");
  CHECK(field_of(R"({"command":"coh","N":3})") == "complex");
  CHECK(field_of(R"({"command":"coh","N":3,"complex":{"lo":0,"modules":[{"gens":1},{"gens":1}],"differentials":[[[1,2]]]}})") ==
        "complex.differentials[0]");
  CHECK(field_of(R"({"command":"koszul","ring":{"kind":"Fp","p":9},"N":3,"elements":[2]})") == "ring");
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_input("{\"command\": \"koszul\",\n \"N\": 3,\n \"elements\": [2, }");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column == 18);  // the closing brace
  }
  CHECK_THROWS_AS(parse_input(slurp(data("bad_syntax.json"))), ParseError);
}

TEST_CASE("jobs survive a JSON round trip") {
  std::vector<std::string> docs = {
      R"({"command":"koszul","ring":"Z[zeta3]","N":3,"elements":["1-z"],"witnesses":true,"n":"-2..0"})",
      R"({"command":"localcoh","ring":{"kind":"Z"},"N":4,"elements":[2,3],"module":{"cyclic":[12,0]},"stages":7,"t":2})",
      R"({"command":"check","suite":"homotopy","seed":18446744073709551615,"count":3})",
      R"({"command":"proregular","ring":"Z[1/3]","N":3,"elements":["2/3"],"stages":5})",
      R"({"command":"telescope","ring":"F5:q=2","N":4,"elements":[3],"stage":2})",
      slurp(data("disk3.json")).replace(0, 1, R"({"command":"coh",)"),
      slurp(data("bad_nilpotent.json")).replace(0, 1, R"({"command":"validate",)"),
  };
  for (const auto& d : docs) {
    CAPTURE(d);
    JobSpec job = parse_input(d);
    json once = job_to_json(job);
    JobSpec again = job_from_json(once);
    CHECK(again == job);
    CHECK(job_to_json(again).dump() == once.dump());
  }
}

TEST_CASE("module documents") {
  auto [R, M] = parse_module_document(slurp(data("z12.json")));
  CHECK(R == Ring::integers());
  CHECK(M.classify().str() == "Z/12");
  auto [R2, F] = parse_module_document(slurp(data("z_free.json")));
  CHECK(R2 == Ring::integers());
  CHECK(F.classify().free_rank == 1);
  CHECK_THROWS_AS(parse_module_document(R"({"ring":"Z"})"), SchemaError);
}

TEST_CASE("reports: verdicts and exit codes") {
  auto report = [](const std::string& text) { return run(parse_input(text)); };
  Report ok = report(slurp(data("disk3.json")).replace(0, 1, R"({"command":"coh",)"));
  CHECK(ok.body["verdict"] == "PASS");
  CHECK(ok.exit_code() == 0);
  Report bad = report(slurp(data("bad_nilpotent.json")).replace(0, 1, R"({"command":"validate",)"));
  CHECK(bad.body["verdict"] == "FAIL");
  CHECK(bad.body["violation"]["kind"] == "nilpotence");
  CHECK(bad.body["violation"]["degree"] == 0);
  CHECK(bad.exit_code() == 1);
  // engine errors surface with their code
  Report err = report(R"({"command":"cech","ring":"Z/12","N":3,"elements":[2,3,5,7]})");
  CHECK(err.body["verdict"] == "ERROR");
  CHECK(err.body["error"]["code"].is_string());
  CHECK(err.exit_code() == 1);
  Report seeded = report(R"({"command":"check","suite":"les","seed":11,"count":4})");
  CHECK(seeded.body["seed"] == 11);
  CHECK(seeded.body["input"]["seed"] == 11);
}

TEST_CASE("text rendering aligns the cohomology table") {
  Report r = run(parse_input(R"({"command":"koszul","ring":"Z","N":3,"elements":[2]})"));
  std::string text = render(r, "text");
  CHECK(text.find("H^{-1}_{1} = 0\n") != std::string::npos);
  CHECK(text.find("H^{0}_{1}  = Z/2\n") != std::string::npos);
  CHECK(text.rfind("verdict: PASS\n") == text.size() - 14);
  CHECK_THROWS_AS(render(r, "yaml"), SchemaError);
}

TEST_CASE("JSON reports are byte stable") {
  std::string job = R"({"command":"localcoh","ring":"Z","N":3,"elements":[2],"module":{"cyclic":[12,0]},"stages":6})";
  std::string a = render(run(parse_input(job)), "json");
  std::string b = render(run(parse_input(job)), "json");
  CHECK(a == b);
  json j = json::parse(a);
  CHECK(j.dump(2) + "\n" == a);  // keys already sorted
}

TEST_CASE("command line front end") {
  auto r = cli("coh " + data("disk3.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("H^{2}_{1} = Z/6") != std::string::npos);
  CHECK(cli("validate " + data("bad_nilpotent.json")).code == 1);
  CHECK(cli("run " + data("bad_syntax.json")).code == 2);
  CHECK(cli("run " + data("missing_n.json")).code == 2);
  CHECK(cli("run " + data("no_such_file.json")).code == 2);
  CHECK(cli("koszul --N 3").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("check --suite prop --seed 1 --count 1").code == 2);
  CHECK(cli("koszul --ring Q --N 3 --elements 2").code == 2);
  CHECK(cli("localcoh --ring F7 --ideal 2 --module " + data("z12.json") + " --N 3").code == 2);
  auto k = cli("--format json run " + data("job_koszul.json"));
  CHECK(k.code == 0);
  CHECK(json::parse(k.out)["verdict"] == "PASS");
  auto k2 = cli("koszul --format json --ring Z --N 3 --elements 2,3 --t all");
  CHECK(k2.code == 0);
  CHECK(json::parse(k2.out)["H"] == json::parse(k.out)["H"]);
  auto c1 = cli("--format json check --suite les --seed 5 --count 10");
  auto c2 = cli("check --suite les --seed 5 --count 10 --format json");
  CHECK(c1.code == 0);
  CHECK(c1.out == c2.out);
}
