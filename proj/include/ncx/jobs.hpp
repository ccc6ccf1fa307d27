#pragma once

// Declarative jobs for the command line front end: a JSON document is parsed into a JobSpec,
// run against the engine, and the resulting report rendered as text or JSON.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ncx/ncomplex.hpp"

namespace ncx {

struct ParseError : std::runtime_error {
  size_t line = 0, column = 0;
  ParseError(size_t l, size_t c, const std::string& msg);
};

struct SchemaError : std::runtime_error {
  std::string field;
  SchemaError(std::string f, const std::string& msg);
};

struct JobSpec {
  std::string command;  // validate, coh, koszul, cech, telescope, proregular, localcoh, complete, mgm, invariants, check
  Ring ring = Ring::integers();
  int N = 0;
  std::vector<Elem> elements;       // the sequence, the ideal generators, or the telescope element
  std::optional<FPModule> module;   // defaults to R where a module is optional
  std::optional<NComplex> complex;  // validate, coh
  std::optional<unsigned> stages;   // S
  std::optional<unsigned> stage;    // telescope truncation
  std::optional<uint64_t> seed;
  std::optional<size_t> count;
  std::optional<std::string> suite;
  std::optional<int> t;                      // nullopt: every t
  std::optional<std::pair<int, int>> degrees;  // n window
  bool witnesses = false;

  bool operator==(const JobSpec& o) const;
};

const std::vector<std::string>& commands();

// literals shared by files and flags
Ring parse_ring_literal(const std::string& s);  // Z, Z/12, F7, F7:q=2, Z[zeta3], Z[1/2,1/3]
std::string ring_literal(const Ring& R);
Elem parse_elem(const Ring& R, const nlohmann::json& j);
nlohmann::json elem_json(const Ring& R, const Elem& e);
std::vector<Elem> parse_elem_list(const Ring& R, const std::string& csv);  // "2,3" or "2, -4"
std::pair<int, int> parse_range(const std::string& s);                    // "A..B"

JobSpec parse_input(const std::string& text);
JobSpec job_from_json(const nlohmann::json& j);
nlohmann::json job_to_json(const JobSpec& job);
// a module document: {"ring": ..., "module": ...}; the ring defaults to Z
std::pair<Ring, FPModule> parse_module_document(const std::string& text);

struct Report {
  nlohmann::json body;  // keys sorted; contains "command" and "verdict"
  int exit_code() const;
};
Report run(const JobSpec& job);

std::string render(const Report& rep, const std::string& format);  // "text" or "json"

}  // namespace ncx
