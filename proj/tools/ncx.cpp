// ncx: command line front end. Every subcommand builds a JSON job, so flags and job files
// go through the same schema checks.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ncx/jobs.hpp"

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  std::string text = slurp(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    ncx::parse_input(text);  // throws ParseError with line and column
    throw;
  }
}

json csv(const std::string& s) {
  json a = json::array();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) a.push_back(item);
  return a;
}

struct Flags {
  std::string ring, elements, module_file, file, n, t, suite;
  int N = 0;
  unsigned stages = 0, stage = 0;
  uint64_t seed = 0;
  size_t count = 0;
  bool witnesses = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncx: exact computations with N-complexes"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  Flags f;

  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto ring_opt = [&](CLI::App* s) { s->add_option("--ring", f.ring, "ring literal: Z, Z/12, F7, F7:q=2, Z[zeta3], Z[1/2]"); };
  auto window = [&](CLI::App* s) {
    s->add_option("--n", f.n, "degree window A..B");
    s->add_option("--t", f.t, "amplitude: all or k");
  };

  CLI::App* run_c = sub("run", "run a JSON job file");
  run_c->add_option("file", f.file)->required();

  CLI::App* validate_c = sub("validate", "check relations and d^N = 0 for a complex file");
  validate_c->add_option("file", f.file)->required();
  CLI::App* coh_c = sub("coh", "cohomology table of a complex file");
  coh_c->add_option("file", f.file)->required();
  window(coh_c);

  CLI::App* koszul_c = sub("koszul", "Koszul N-complex of a sequence");
  ring_opt(koszul_c);
  koszul_c->add_option("--N", f.N)->required();
  koszul_c->add_option("--elements", f.elements, "comma separated")->required();
  koszul_c->add_option("--module", f.module_file, "module document; defaults to R");
  koszul_c->add_flag("--witnesses", f.witnesses, "print the differentials");
  window(koszul_c);

  CLI::App* cech_c = sub("cech", "Cech N-complex: displays and cohomology");
  ring_opt(cech_c);
  cech_c->add_option("--N", f.N)->required();
  cech_c->add_option("--elements", f.elements)->required();
  cech_c->add_option("--module", f.module_file);
  cech_c->add_option("--stages", f.stages);
  window(cech_c);

  CLI::App* tel_c = sub("telescope", "truncated telescope on one element");
  ring_opt(tel_c);
  tel_c->add_option("--x", f.elements)->required();
  tel_c->add_option("--N", f.N)->required();
  tel_c->add_option("--stage", f.stage)->required();
  tel_c->add_option("--stages", f.stages, "window for the comparison");
  window(tel_c);

  CLI::App* pro_c = sub("proregular", "pro-zero probe for the negative Koszul cohomology");
  ring_opt(pro_c);
  pro_c->add_option("--elements", f.elements)->required();
  pro_c->add_option("--stages", f.stages)->required();
  pro_c->add_option("--N", f.N, "defaults to 3");

  auto ideal_cmd = [&](const std::string& name, const std::string& help) {
    CLI::App* s = sub(name, help);
    ring_opt(s);
    s->add_option("--ideal", f.elements, "comma separated generators")->required();
    s->add_option("--module", f.module_file, "module document")->required();
    s->add_option("--N", f.N)->required();
    s->add_option("--stages", f.stages);
    window(s);
    return s;
  };
  ideal_cmd("localcoh", "local cohomology H^i_t");
  ideal_cmd("complete", "derived completion, cross-checked three ways");
  ideal_cmd("mgm", "torsion/completion comparisons");
  ideal_cmd("invariants", "inf/sup of depth and width style invariants");

  CLI::App* check_c = sub("check", "seeded property suites");
  check_c->add_option("--suite", f.suite)->required();
  check_c->add_option("--seed", f.seed)->required();
  check_c->add_option("--count", f.count)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    const std::string cmd = chosen->get_name();
    json j;
    if (cmd == "run") {
      j = read_json(f.file);
    } else if (cmd == "validate" || cmd == "coh") {
      j = read_json(f.file);
      if (!j.is_object()) throw ncx::SchemaError("", "a complex file is a JSON object");
      j["command"] = cmd;
    } else {
      j["command"] = cmd;
      std::optional<ncx::Ring> doc_ring;
      if (!f.module_file.empty()) {
        json doc = read_json(f.module_file);
        doc_ring = ncx::parse_module_document(doc.dump()).first;  // schema check
        j["module"] = doc["module"];
        j["ring"] = doc.contains("ring") ? doc["ring"] : json("Z");
      }
      if (!f.ring.empty()) {
        if (doc_ring && ncx::parse_ring_literal(f.ring) != *doc_ring)
          throw ncx::SchemaError("ring", "--ring disagrees with the module document");
        j["ring"] = f.ring;
      }
      if (cmd == "proregular" && f.N == 0) f.N = 3;
      if (f.N) j["N"] = f.N;
      if (!f.elements.empty()) j["elements"] = csv(f.elements);
      if (f.stages) j["stages"] = f.stages;
      if (f.stage) j["stage"] = f.stage;
      if (f.witnesses) j["witnesses"] = true;
      if (cmd == "check") {
        j["suite"] = f.suite;
        j["seed"] = f.seed;
        j["count"] = f.count;
      }
    }
    if (!f.n.empty()) j["n"] = f.n;
    if (!f.t.empty()) {
      if (f.t == "all") j["t"] = "all";
      else {
        try {
          j["t"] = std::stoi(f.t);
        } catch (const std::exception&) {
          throw ncx::SchemaError("t", "expected all or an integer");
        }
      }
    }
    ncx::JobSpec job = ncx::job_from_json(j);
    ncx::Report rep = ncx::run(job);
    std::cout << ncx::render(rep, format);
    if (rep.exit_code() != 0 && rep.body.contains("error"))
      std::cerr << "error: " << rep.body["error"]["code"].get<std::string>() << ": "
                << rep.body["error"]["message"].get<std::string>() << "\n";
    return rep.exit_code();
  } catch (const ncx::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ncx::SchemaError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
}
