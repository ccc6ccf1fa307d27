#include "ncx/jobs.hpp"

#include <algorithm>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>

#include "ncx/cech.hpp"
#include "ncx/koszul.hpp"
#include "ncx/suites.hpp"
#include "ncx/torsion.hpp"

namespace ncx {

using nlohmann::json;

ParseError::ParseError(size_t l, size_t c, const std::string& msg)
    : std::runtime_error("ParseError at line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
      line(l),
      column(c) {}

SchemaError::SchemaError(std::string f, const std::string& msg)
    : std::runtime_error("SchemaError in field '" + f + "': " + msg), field(std::move(f)) {}

bool JobSpec::operator==(const JobSpec& o) const {
  auto same_complex = [](const std::optional<NComplex>& a, const std::optional<NComplex>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    if (a->N() != b->N() || a->ring() != b->ring() || a->lo() != b->lo() || a->hi() != b->hi()) return false;
    for (int n = a->lo(); n <= a->hi(); ++n)
      if (!(a->module(n) == b->module(n)) || !(a->d(n) == b->d(n))) return false;
    return true;
  };
  return command == o.command && ring == o.ring && N == o.N && elements == o.elements && module == o.module &&
         same_complex(complex, o.complex) && stages == o.stages && stage == o.stage && seed == o.seed &&
         count == o.count && suite == o.suite && t == o.t && degrees == o.degrees && witnesses == o.witnesses;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"validate", "coh",      "koszul",   "cech",      "telescope", "proregular",
                                             "localcoh", "complete", "mgm",      "invariants", "check"};
  return c;
}

namespace {

Int parse_int(const std::string& s, const std::string& field) {
  static const std::regex re("[+-]?[0-9]+");
  if (!std::regex_match(s, re)) throw SchemaError(field, "expected an integer, got '" + s + "'");
  return Int(s[0] == '+' ? s.substr(1) : s);
}

Int json_int(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Int(j.dump());
  if (j.is_string()) return parse_int(j.get<std::string>(), field);
  throw SchemaError(field, "expected an integer");
}

long json_small(const json& j, const std::string& field, long lo, long hi) {
  if (!j.is_number_integer()) throw SchemaError(field, "expected an integer");
  long v = j.get<long>();
  if (v < lo || v > hi)
    throw SchemaError(field, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
  return v;
}

// a, a/b, a+bz, bz
Elem parse_elem_text(const Ring& R, const std::string& raw, const std::string& field) {
  std::string s;
  for (char c : raw)
    if (!isspace(static_cast<unsigned char>(c))) s += c;
  try {
    if (R.kind() == RingKind::Cyclotomic && s.find('z') != std::string::npos) {
      static const std::regex re("(?:([+-]?[0-9]+)(?=[+-]))?([+-]?)([0-9]*)z");
      std::smatch m;
      if (!std::regex_match(s, m, re)) throw SchemaError(field, "bad cyclotomic element '" + raw + "'");
      Int a = m[1].matched ? parse_int(m[1].str(), field) : Int(0);
      Int b = m[3].length() ? parse_int(m[3].str(), field) : Int(1);
      if (m[2].str() == "-") b = -b;
      return R.cyclo(a, b);
    }
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      if (R.kind() != RingKind::Localized) throw SchemaError(field, "fractions need a localized ring");
      return R.frac(parse_int(s.substr(0, slash), field), parse_int(s.substr(slash + 1), field));
    }
    return R.from_int(parse_int(s, field));
  } catch (const MathError& e) {
    throw SchemaError(field, e.what());
  }
}

const json& need(const json& j, const std::string& key) {
  if (!j.contains(key)) throw SchemaError(key, "required field is missing");
  return j.at(key);
}

Ring ring_from_json(const json& j) {
  if (j.is_string()) return parse_ring_literal(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw SchemaError("ring", "expected a literal or an object with a 'kind'");
  std::string k = j["kind"].get<std::string>();
  try {
    if (k == "Z") return Ring::integers();
    if (k == "Zmod") return Ring::integers_mod(json_int(need(j, "m"), "ring.m"));
    if (k == "Fp") {
      std::optional<Int> q;
      if (j.contains("q")) q = json_int(j["q"], "ring.q");
      return Ring::prime_field(json_int(need(j, "p"), "ring.p"), q);
    }
    if (k == "cyclotomic") return Ring::cyclotomic(static_cast<int>(json_small(need(j, "n"), "ring.n", 3, 4)));
    if (k == "localized") {
      const json& inv = need(j, "inverted");
      if (!inv.is_array()) throw SchemaError("ring.inverted", "expected an array");
      std::vector<Int> ps;
      for (const auto& p : inv) ps.push_back(json_int(p, "ring.inverted"));
      return Ring::localized(ps);
    }
  } catch (const MathError& e) {
    throw SchemaError("ring", e.what());
  }
  throw SchemaError("ring.kind", "unknown ring kind '" + k + "'");
}

json ring_to_json(const Ring& R) {
  json j;
  switch (R.kind()) {
    case RingKind::Integers: j["kind"] = "Z"; break;
    case RingKind::IntegersMod:
      j["kind"] = "Zmod";
      j["m"] = R.modulus().get_str();
      break;
    case RingKind::PrimeField:
      j["kind"] = "Fp";
      j["p"] = R.modulus().get_str();
      if (R.designated_root()) j["q"] = R.designated_root()->get_str();
      break;
    case RingKind::Cyclotomic:
      j["kind"] = "cyclotomic";
      j["n"] = R.cyclotomic_order();
      break;
    case RingKind::Localized: {
      j["kind"] = "localized";
      json a = json::array();
      for (const auto& p : R.inverted_primes()) a.push_back(p.get_str());
      j["inverted"] = a;
      break;
    }
  }
  return j;
}

// rows x cols; an empty array stands for the zero matrix of the expected shape
Matrix matrix_from_json(const Ring& R, const json& j, size_t rows, std::optional<size_t> cols,
                        const std::string& field) {
  if (!j.is_array()) throw SchemaError(field, "expected an array of rows");
  if (j.empty()) return Matrix(R, rows, cols.value_or(0));
  if (j.size() != rows)
    throw SchemaError(field, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  size_t c = j[0].is_array() ? j[0].size() : 0;
  if (cols && c != *cols)
    throw SchemaError(field, "expected " + std::to_string(*cols) + " columns, got " + std::to_string(c));
  Matrix m(R, rows, c);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != c) throw SchemaError(field, "ragged row " + std::to_string(r));
    for (size_t k = 0; k < c; ++k) m(r, k) = parse_elem(R, j[r][k]);
  }
  return m;
}

json matrix_to_json(const Ring& R, const Matrix& m) {
  json a = json::array();
  for (size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(elem_json(R, m(r, c)));
    a.push_back(row);
  }
  return a;
}

FPModule module_from_json(const Ring& R, const json& j, const std::string& field) {
  if (!j.is_object()) throw SchemaError(field, "expected an object");
  if (j.contains("cyclic")) {
    const json& c = j["cyclic"];
    if (!c.is_array()) throw SchemaError(field + ".cyclic", "expected an array");
    FPModule M = FPModule::free(R, 0);
    for (const auto& d : c) M = direct_sum(M, FPModule::cyclic(R, parse_elem(R, d)));
    return M;
  }
  long g = json_small(need(j, "gens"), field + ".gens", 0, 1000);
  Matrix rel = j.contains("rel") ? matrix_from_json(R, j["rel"], static_cast<size_t>(g), std::nullopt, field + ".rel")
                                 : Matrix(R, static_cast<size_t>(g), 0);
  return FPModule(R, static_cast<size_t>(g), rel);
}

json module_to_json(const Ring& R, const FPModule& M) {
  json j;
  j["gens"] = M.gens;
  j["rel"] = matrix_to_json(R, M.rel);
  return j;
}

NComplex complex_from_json(const Ring& R, int N, const json& j) {
  if (!j.is_object()) throw SchemaError("complex", "expected an object");
  long lo = json_small(need(j, "lo"), "complex.lo", -10000, 10000);
  const json& mods = need(j, "modules");
  if (!mods.is_array()) throw SchemaError("complex.modules", "expected an array");
  std::vector<FPModule> ms;
  for (size_t k = 0; k < mods.size(); ++k)
    ms.push_back(module_from_json(R, mods[k], "complex.modules[" + std::to_string(k) + "]"));
  std::vector<Matrix> ds;
  if (j.contains("differentials")) {
    const json& d = j["differentials"];
    if (!d.is_array() || d.size() > ms.size()) throw SchemaError("complex.differentials", "too many differentials");
    for (size_t k = 0; k < d.size(); ++k) {
      size_t rows = k + 1 < ms.size() ? ms[k + 1].gens : 0;
      ds.push_back(matrix_from_json(R, d[k], rows, ms[k].gens, "complex.differentials[" + std::to_string(k) + "]"));
    }
  }
  for (size_t k = ds.size(); k < ms.size(); ++k)
    ds.push_back(Matrix(R, k + 1 < ms.size() ? ms[k + 1].gens : 0, ms[k].gens));
  return NComplex(N, R, static_cast<int>(lo), ms, ds);
}

json complex_to_json(const NComplex& X) {
  json j;
  j["lo"] = X.lo();
  json mods = json::array(), ds = json::array();
  for (int n = X.lo(); n <= X.hi(); ++n) {
    mods.push_back(module_to_json(X.ring(), X.module(n)));
    ds.push_back(matrix_to_json(X.ring(), n < X.hi() ? X.d(n) : Matrix(X.ring(), 0, X.gens(n))));
  }
  j["modules"] = mods;
  j["differentials"] = ds;
  return j;
}

bool needs_elements(const std::string& c) {
  return c != "validate" && c != "coh" && c != "check";
}
bool needs_module(const std::string& c) {
  return c == "localcoh" || c == "complete" || c == "mgm" || c == "invariants";
}

}  // namespace

Ring parse_ring_literal(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!isspace(static_cast<unsigned char>(c))) s += c;
  std::smatch m;
  try {
    if (s == "Z") return Ring::integers();
    if (std::regex_match(s, m, std::regex("Z/([0-9]+)"))) return Ring::integers_mod(Int(m[1].str()));
    if (std::regex_match(s, m, std::regex("F([0-9]+)(?::q=([0-9]+)|\\[q=([0-9]+)\\])?"))) {
      std::optional<Int> q;
      if (m[2].matched) q = Int(m[2].str());
      if (m[3].matched) q = Int(m[3].str());
      return Ring::prime_field(Int(m[1].str()), q);
    }
    if (std::regex_match(s, m, std::regex("Z\\[(?:z|zeta)([0-9]+)\\]"))) return Ring::cyclotomic(std::stoi(m[1].str()));
    if (std::regex_match(s, m, std::regex("Z\\[(1/[0-9]+(?:,1/[0-9]+)*)\\]"))) {
      std::vector<Int> ps;
      std::regex item("1/([0-9]+)");
      std::string body = m[1].str();
      for (std::sregex_iterator it(body.begin(), body.end(), item), end; it != end; ++it) ps.push_back(Int((*it)[1].str()));
      return Ring::localized(ps);
    }
  } catch (const MathError& e) {
    throw SchemaError("ring", e.what());
  }
  throw SchemaError("ring", "unknown ring literal '" + raw + "'");
}

std::string ring_literal(const Ring& R) { return R.name(); }

Elem parse_elem(const Ring& R, const json& j) {
  if (j.is_number_integer()) return R.from_int(Int(j.dump()));
  if (j.is_string()) return parse_elem_text(R, j.get<std::string>(), "element");
  if (j.is_array() && j.size() == 2) {
    Int a = json_int(j[0], "element"), b = json_int(j[1], "element");
    try {
      if (R.kind() == RingKind::Cyclotomic) return R.cyclo(a, b);
      if (R.kind() == RingKind::Localized) return R.frac(a, b);
    } catch (const MathError& e) {
      throw SchemaError("element", e.what());
    }
  }
  throw SchemaError("element", "cannot read " + j.dump() + " as an element of " + R.name());
}

json elem_json(const Ring& R, const Elem& e) { return R.str(e); }

std::vector<Elem> parse_elem_list(const Ring& R, const std::string& csv) {
  std::vector<Elem> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_elem_text(R, item, "elements"));
  if (out.empty()) throw SchemaError("elements", "empty element list");
  return out;
}

std::pair<int, int> parse_range(const std::string& s) {
  std::smatch m;
  if (!std::regex_match(s, m, std::regex("\\s*([+-]?[0-9]+)\\s*\\.\\.\\s*([+-]?[0-9]+)\\s*")))
    throw SchemaError("n", "expected a range A..B, got '" + s + "'");
  int a = std::stoi(m[1].str()), b = std::stoi(m[2].str());
  if (a > b) throw SchemaError("n", "empty range '" + s + "'");
  return {a, b};
}

JobSpec job_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "a job is a JSON object");
  static const std::set<std::string> known = {"command", "ring", "N",     "elements", "module", "complex", "stages",
                                              "stage",   "seed", "count", "suite",    "t",      "n",       "witnesses"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw SchemaError(k, "unknown field");

  JobSpec job;
  const json& c = need(j, "command");
  if (!c.is_string()) throw SchemaError("command", "expected a string");
  job.command = c.get<std::string>();
  const auto& cs = commands();
  if (std::find(cs.begin(), cs.end(), job.command) == cs.end())
    throw SchemaError("command", "unknown command '" + job.command + "'");
  bool check = job.command == "check";

  if (j.contains("ring")) job.ring = ring_from_json(j["ring"]);
  if (!check) job.N = static_cast<int>(json_small(need(j, "N"), "N", 2, 64));
  else if (j.contains("N")) job.N = static_cast<int>(json_small(j["N"], "N", 2, 64));

  if (j.contains("elements")) {
    const json& e = j["elements"];
    if (!e.is_array() || e.empty()) throw SchemaError("elements", "expected a nonempty array");
    for (const auto& x : e) job.elements.push_back(parse_elem(job.ring, x));
  } else if (needs_elements(job.command)) {
    throw SchemaError("elements", "required field is missing");
  }
  if (j.contains("module")) job.module = module_from_json(job.ring, j["module"], "module");
  else if (needs_module(job.command)) throw SchemaError("module", "required field is missing");
  if (j.contains("complex")) job.complex = complex_from_json(job.ring, job.N, j["complex"]);
  else if (job.command == "validate" || job.command == "coh") throw SchemaError("complex", "required field is missing");

  if (j.contains("stages")) job.stages = static_cast<unsigned>(json_small(j["stages"], "stages", 1, 64));
  if (j.contains("stage")) job.stage = static_cast<unsigned>(json_small(j["stage"], "stage", 1, 64));
  else if (job.command == "telescope") throw SchemaError("stage", "required field is missing");
  if (job.command == "telescope" && job.elements.size() != 1)
    throw SchemaError("elements", "the telescope takes exactly one element");

  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned()) throw SchemaError("seed", "expected a nonnegative integer");
    job.seed = s.get<uint64_t>();
  } else if (check) {
    throw SchemaError("seed", "randomized suites need an explicit seed");
  }
  if (j.contains("count")) job.count = static_cast<size_t>(json_small(j["count"], "count", 1, 100000));
  else if (check) throw SchemaError("count", "required field is missing");
  if (j.contains("suite")) {
    if (!j["suite"].is_string()) throw SchemaError("suite", "expected a string");
    job.suite = j["suite"].get<std::string>();
    auto names = suite_names();
    if (std::find(names.begin(), names.end(), *job.suite) == names.end())
      throw SchemaError("suite", "unknown suite '" + *job.suite + "'");
  } else if (check) {
    throw SchemaError("suite", "required field is missing");
  }

  if (j.contains("t")) {
    const json& t = j["t"];
    if (t.is_string() && t.get<std::string>() == "all") job.t.reset();
    else job.t = static_cast<int>(json_small(t, "t", 1, std::max(1, job.N - 1)));
  }
  if (j.contains("n")) {
    const json& n = j["n"];
    if (n.is_string()) job.degrees = parse_range(n.get<std::string>());
    else if (n.is_array() && n.size() == 2)
      job.degrees = {static_cast<int>(json_small(n[0], "n", -10000, 10000)),
                     static_cast<int>(json_small(n[1], "n", -10000, 10000))};
    else throw SchemaError("n", "expected \"A..B\" or [A, B]");
  }
  if (j.contains("witnesses")) {
    if (!j["witnesses"].is_boolean()) throw SchemaError("witnesses", "expected true or false");
    job.witnesses = j["witnesses"].get<bool>();
  }
  return job;
}

json job_to_json(const JobSpec& job) {
  json j;
  j["command"] = job.command;
  j["ring"] = ring_to_json(job.ring);
  if (job.N) j["N"] = job.N;
  if (!job.elements.empty()) {
    json e = json::array();
    for (const auto& x : job.elements) e.push_back(elem_json(job.ring, x));
    j["elements"] = e;
  }
  if (job.module) j["module"] = module_to_json(job.ring, *job.module);
  if (job.complex) j["complex"] = complex_to_json(*job.complex);
  if (job.stages) j["stages"] = *job.stages;
  if (job.stage) j["stage"] = *job.stage;
  if (job.seed) j["seed"] = *job.seed;
  if (job.count) j["count"] = *job.count;
  if (job.suite) j["suite"] = *job.suite;
  j["t"] = job.t ? json(*job.t) : json("all");
  if (job.degrees) j["n"] = std::to_string(job.degrees->first) + ".." + std::to_string(job.degrees->second);
  if (job.witnesses) j["witnesses"] = true;
  return j;
}

namespace {

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    size_t line = 1, col = 1;
    std::smatch m;
    if (std::regex_search(msg, m, std::regex("line ([0-9]+), column ([0-9]+)"))) {
      line = std::stoul(m[1].str());
      col = std::stoul(m[2].str());
    } else {
      for (size_t i = 0; i + 1 < std::min<size_t>(e.byte, text.size() + 1); ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    }
    auto p = msg.find("parse error");
    if (p != std::string::npos) p = msg.find(": ", p);
    throw ParseError(line, col, p == std::string::npos ? msg : msg.substr(p + 2));
  }
}

}  // namespace

JobSpec parse_input(const std::string& text) { return job_from_json(parse_json_text(text)); }

std::pair<Ring, FPModule> parse_module_document(const std::string& text) {
  json j = parse_json_text(text);
  if (!j.is_object()) throw SchemaError("", "a module document is a JSON object");
  Ring R = j.contains("ring") ? ring_from_json(j["ring"]) : Ring::integers();
  return {R, module_from_json(R, need(j, "module"), "module")};
}

// ---------------------------------------------------------------------------------------------
// running jobs

namespace {

std::vector<int> t_range(const JobSpec& job) {
  if (job.t) return {*job.t};
  std::vector<int> ts;
  for (int t = 1; t < job.N; ++t) ts.push_back(t);
  return ts;
}

bool in_window(const JobSpec& job, int n, int t) {
  if (job.degrees && (n < job.degrees->first || n > job.degrees->second)) return false;
  return !job.t || *job.t == t;
}

json entry(int n, int t, const std::string& value) { return json{{"n", n}, {"t", t}, {"value", value}}; }

json fg_table(const JobSpec& job, const NComplex& X) {
  json a = json::array();
  int lo = job.degrees ? job.degrees->first : X.lo(), hi = job.degrees ? job.degrees->second : X.hi();
  for (int n = lo; n <= hi; ++n)
    for (int t : t_range(job)) a.push_back(entry(n, t, cohomology(X, n, t).str()));
  return a;
}

json module_table(const JobSpec& job, const std::map<Slot, CanonicalModule>& tab, bool& classified) {
  json a = json::array();
  for (const auto& [slot, v] : tab) {
    if (!in_window(job, slot.first, slot.second)) continue;
    classified = classified && v.classified();
    a.push_back(entry(slot.first, slot.second, v.str()));
  }
  return a;
}

json violation_json(const ValidationReport& v) {
  return json{{"kind", v.kind}, {"degree", v.degree}, {"message", v.message}};
}

json mismatches_json(const TableComparison& c) { return json(c.mismatches); }

SequenceSpec seq(const JobSpec& job) { return SequenceSpec{job.ring, job.elements, job.N}; }

FPModule module_or_ring(const JobSpec& job) { return job.module ? *job.module : FPModule::free(job.ring, 1); }

unsigned stages_or(const JobSpec& job, unsigned d) { return job.stages.value_or(d); }

void run_validate(const JobSpec& job, json& out, bool& ok) {
  ValidationReport v = validate(*job.complex);
  out["valid"] = v.ok;
  if (!v.ok) out["violation"] = violation_json(v);
  ok = v.ok;
}

void run_coh(const JobSpec& job, json& out, bool& ok) {
  run_validate(job, out, ok);
  if (ok) out["H"] = fg_table(job, *job.complex);
}

void run_koszul(const JobSpec& job, json& out, bool& ok) {
  SequenceSpec s = seq(job);
  NComplex K = job.module ? koszul_on(s, *job.module) : koszul_ring(s);
  ValidationReport v = validate(K);
  out["valid"] = v.ok;
  if (!v.ok) out["violation"] = violation_json(v);
  out["H"] = fg_table(job, K);
  json closed = json::array();
  bool agree = true;
  FPModule M = module_or_ring(job);
  if (job.ring.is_pid()) {
    for (int n = K.lo(); n <= K.hi(); ++n)
      for (int t : t_range(job)) {
        if (!in_window(job, n, t)) continue;
        KoszulValue kv = koszul_cohomology(s, M, n, t);
        if (!kv.predicted) continue;
        agree = agree && kv.agrees();
        closed.push_back(json{{"n", n}, {"t", t}, {"formula", kv.formula}, {"value", kv.predicted->str()},
                              {"agrees", kv.agrees()}});
      }
  }
  out["closed_forms"] = closed;
  if (job.witnesses) {
    json d = json::array();
    for (int n = K.lo(); n < K.hi(); ++n) d.push_back(json{{"n", n}, {"matrix", matrix_to_json(job.ring, K.d(n))}});
    out["differentials"] = d;
  }
  ok = v.ok && agree;
}

void run_cech(const JobSpec& job, json& out, bool& ok) {
  SequenceSpec s = seq(job);
  MixedComplex C = cech_ring(s);
  ValidationReport v = C.validate();
  out["valid"] = v.ok;
  if (!v.ok) out["violation"] = violation_json(v);
  json disp = json::array(), pieces = json::array();
  for (int n = C.coeff.lo(); n <= C.coeff.hi(); ++n) {
    json names = json::array();
    auto it = C.mask.find(n);
    if (it != C.mask.end())
      for (unsigned m : it->second) names.push_back(C.piece_name(m));
    pieces.push_back(json{{"n", n}, {"modules", names}});
    if (n < C.coeff.hi()) disp.push_back(json{{"n", n}, {"matrix", C.display(n)}});
  }
  out["pieces"] = pieces;
  out["differentials"] = disp;
  bool classified = true;
  out["H"] = module_table(job, cech_table(s, module_or_ring(job), stages_or(job, 8)), classified);
  ok = v.ok && classified;
}

void run_telescope(const JobSpec& job, json& out, bool& ok) {
  SequenceSpec s = seq(job);
  NComplex T = telescope(s, *job.stage);
  ValidationReport v = validate(T);
  out["valid"] = v.ok;
  out["H"] = fg_table(job, T);
  TelescopeComparison cmp = telescope_comparison(s, std::max(stages_or(job, 8), *job.stage));
  json colim = json::array();
  for (const auto& [slot, pr] : cmp.colimits) {
    if (!in_window(job, slot.first, slot.second)) continue;
    colim.push_back(json{{"n", slot.first}, {"t", slot.second}, {"telescope", pr.first.str()}, {"cech", pr.second.str()}});
  }
  out["comparison"] = json{{"pass", cmp.pass}, {"stable_from", cmp.stable_from}, {"detail", cmp.detail}, {"colimits", colim}};
  ok = v.ok && cmp.pass;
}

void run_proregular(const JobSpec& job, json& out, bool& ok) {
  ProReport rep = proregular_probe(seq(job), stages_or(job, 4));
  json slots = json::array();
  for (const auto& sl : rep.slots) {
    json st = json::array();
    for (const auto& p : sl.stages) {
      json e{{"s", p.s}, {"module", p.module.str()}};
      e["transition"] = p.transition.empty() ? json(nullptr) : json(p.transition);
      e["dies_by"] = p.dies_by ? json(*p.dies_by) : json(nullptr);
      st.push_back(e);
    }
    slots.push_back(json{{"n", sl.i}, {"t", sl.t}, {"stages", st}});
  }
  out["slots"] = slots;
  out["probe"] = to_string(rep.verdict);
  out["summary"] = rep.summary();
  out["ladders_commute"] = rep.ladders_commute;
  if (rep.witness_slot)
    out["witness"] = json{{"n", rep.witness_slot->first}, {"t", rep.witness_slot->second}, {"stage", rep.witness_stage}};
  ok = rep.ladders_commute;
}

void run_localcoh(const JobSpec& job, json& out, bool& ok) {
  SequenceSpec s = seq(job);
  unsigned S = stages_or(job, 8);
  auto tab = local_cohomology_table(s, *job.module, S);
  bool classified = true;
  out["H"] = module_table(job, tab, classified);
  ok = classified;
  if (job.elements.size() <= 2 && job.ring.kind() == RingKind::Integers) {
    TableComparison c = compare_tables(tab, cech_table(s, *job.module, S));
    out["cech_agrees"] = c.pass;
    if (!c.pass) out["cech_mismatches"] = mismatches_json(c);
    ok = ok && c.pass;
  }
}

void run_complete(const JobSpec& job, json& out, bool& ok) {
  SequenceSpec s = seq(job);
  unsigned S = stages_or(job, 8);
  auto tab = derived_completion_table(s, *job.module, S);
  bool classified = true;
  out["H"] = module_table(job, tab, classified);
  out["adic_completion"] = adic_completion(*job.module, s, S).str();
  TableComparison cone = compare_tables(tab, lambda_table(s, disk(job.N, *job.module, 0, 1), S));
  out["cone_route_agrees"] = cone.pass;
  if (!cone.pass) out["cone_route_mismatches"] = mismatches_json(cone);
  ok = classified && cone.pass;
  if (job.elements.size() == 1) {
    TableComparison tel = compare_tables(tab, telescope_completion_table(s, *job.module, S));
    out["telescope_route_agrees"] = tel.pass;
    if (!tel.pass) out["telescope_route_mismatches"] = mismatches_json(tel);
    ok = ok && tel.pass;
  }
}

void run_mgm(const JobSpec& job, json& out, bool& ok) {
  MgmReport rep = mgm_report(seq(job), *job.module, stages_or(job, 8));
  json cmps = json::array();
  for (const auto& c : rep.comparisons) {
    json slots = json::array();
    for (const auto& sl : c.slots) {
      if (!in_window(job, sl.slot.first, sl.slot.second)) continue;
      slots.push_back(json{{"n", sl.slot.first}, {"t", sl.slot.second}, {"lhs", sl.lhs.str()}, {"rhs", sl.rhs.str()},
                           {"equal", sl.equal}});
    }
    cmps.push_back(json{{"name", c.name}, {"pass", c.pass}, {"slots", slots}});
  }
  out["comparisons"] = cmps;
  ok = rep.pass;
}

void run_invariants(const JobSpec& job, json& out, bool& ok) {
  InvariantsReport rep = invariants(seq(job), *job.module, stages_or(job, 8));
  json rows = json::array();
  for (const auto& r : rep.rows) {
    if (job.t && *job.t != r.t) continue;
    rows.push_back(json{{"t", r.t},
                        {"inf_rhom", show(r.inf_rhom)},
                        {"inf_local", show(r.inf_local)},
                        {"inf_koszul", show(r.inf_koszul)},
                        {"sup_tensor", show(r.sup_tensor)},
                        {"sup_completion", show(r.sup_completion)},
                        {"sup_koszul", show(r.sup_koszul)},
                        {"inf_equal", r.inf_equal()},
                        {"sup_equal", r.sup_equal()}});
  }
  out["rows"] = rows;
  ok = rep.pass;
}

void run_check(const JobSpec& job, json& out, bool& ok) {
  SuiteReport rep = run_suite(*job.suite, *job.seed, *job.count);
  out["suite"] = rep.suite;
  out["seed"] = rep.seed;
  out["count"] = rep.count;
  out["passed"] = rep.passed;
  out["failures"] = rep.failures;
  ok = rep.pass();
}

}  // namespace

int Report::exit_code() const {
  const std::string v = body.value("verdict", "ERROR");
  if (v == "PASS" || v == "OK") return 0;
  if (v == "USAGE") return 2;
  return 1;
}

Report run(const JobSpec& job) {
  json out;
  out["command"] = job.command;
  out["input"] = job_to_json(job);
  bool ok = false;
  try {
    const std::string& c = job.command;
    if (c == "validate") run_validate(job, out, ok);
    else if (c == "coh") run_coh(job, out, ok);
    else if (c == "koszul") run_koszul(job, out, ok);
    else if (c == "cech") run_cech(job, out, ok);
    else if (c == "telescope") run_telescope(job, out, ok);
    else if (c == "proregular") run_proregular(job, out, ok);
    else if (c == "localcoh") run_localcoh(job, out, ok);
    else if (c == "complete") run_complete(job, out, ok);
    else if (c == "mgm") run_mgm(job, out, ok);
    else if (c == "invariants") run_invariants(job, out, ok);
    else if (c == "check") run_check(job, out, ok);
    else throw SchemaError("command", "unknown command '" + c + "'");
    // the probe reports a finding, not a pass/fail verdict
    out["verdict"] = ok ? (c == "proregular" ? "OK" : "PASS") : "FAIL";
  } catch (const MathError& e) {
    out["verdict"] = "ERROR";
    out["error"] = json{{"code", e.code}, {"message", e.what()}};
  }
  return Report{out};
}

namespace {

bool is_table(const json& a) {
  return a.is_array() && !a.empty() &&
         std::all_of(a.begin(), a.end(), [](const json& e) {
           return e.is_object() && e.size() == 3 && e.contains("n") && e.contains("t") && e.contains("value");
         });
}

std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_value(std::ostringstream& os, const std::string& key, const json& v, const std::string& indent);

void render_object_line(std::ostringstream& os, const json& o, const std::string& indent) {
  std::string line;
  std::vector<std::pair<std::string, const json*>> nested;
  for (const auto& [k, v] : o.items()) {
    if (v.is_structured() && !(v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) {
                                 return e.is_primitive();
                               }))) {
      nested.push_back({k, &v});
      continue;
    }
    if (!line.empty()) line += "  ";
    line += k + "=" + (v.is_array() ? v.dump() : scalar(v));
  }
  os << indent << "- " << line << "\n";
  for (const auto& [k, v] : nested) render_value(os, k, *v, indent + "    ");
}

void render_value(std::ostringstream& os, const std::string& key, const json& v, const std::string& indent) {
  if (is_table(v)) {
    os << indent << key << ":\n";
    std::vector<std::string> labels;
    size_t w = 0;
    for (const auto& e : v) {
      labels.push_back("H^{" + e["n"].dump() + "}_{" + e["t"].dump() + "}");
      w = std::max(w, labels.back().size());
    }
    for (size_t i = 0; i < v.size(); ++i)
      os << indent << "  " << std::left << std::setw(static_cast<int>(w)) << labels[i] << " = " << scalar(v[i]["value"])
         << "\n";
  } else if (v.is_object()) {
    os << indent << key << ":\n";
    for (const auto& [k, x] : v.items()) render_value(os, k, x, indent + "  ");
  } else if (v.is_array() && !v.empty() && !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); })) {
    os << indent << key << ":\n";
    for (const auto& e : v) {
      if (e.is_object()) render_object_line(os, e, indent + "  ");
      else os << indent << "  - " << e.dump() << "\n";
    }
  } else {
    os << indent << key << ": " << (v.is_array() ? v.dump() : scalar(v)) << "\n";
  }
}

}  // namespace

std::string render(const Report& rep, const std::string& format) {
  if (format == "json") return rep.body.dump(2) + "\n";
  if (format != "text") throw SchemaError("format", "expected text or json");
  std::ostringstream os;
  os << "command: " << scalar(rep.body.value("command", json(""))) << "\n";
  for (const auto& [k, v] : rep.body.items()) {
    if (k == "input" || k == "verdict" || k == "command") continue;
    render_value(os, k, v, "");
  }
  os << "verdict: " << scalar(rep.body.value("verdict", json("ERROR"))) << "\n";
  return os.str();
}

}  // namespace ncx
