// Python bindings with a JSON-string surface: every function takes and
// returns canonical JSON text, mirroring the CLI formats one to one.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symsig/chain.hpp"
#include "symsig/errors.hpp"
#include "symsig/fixtures.hpp"
#include "symsig/json_io.hpp"
#include "symsig/scenario.hpp"
#include "symsig/sigma.hpp"
#include "symsig/structures.hpp"

namespace py = pybind11;
using namespace symsig;

namespace {

Json value_of(const std::string& text, const char* kind) {
  Json j = parse_json(text);
  if (j.is_object() && j.contains("kind") && j.contains("value")) {
    if (j.at("kind") != kind)
      throw ParseError(std::string("expected an envelope of kind '") + kind +
                       "', got '" + j.at("kind").get<std::string>() + "'");
    return j.at("value");
  }
  return j;
}

std::string wrap(const char* kind, Json value) {
  return canonical_dump(Json{{"kind", kind}, {"value", std::move(value)}});
}

}  // namespace

PYBIND11_MODULE(_symsig, m) {
  m.doc() =
      "Exact chain-level workbench for symmetric Poincare complexes; all "
      "functions speak canonical JSON strings.";

  py::register_exception<Error>(m, "SymsigError");

  m.def("version", [] { return std::string("0.1.0"); });

  m.def("fixture_names", [] { return fixture_names(); });

  m.def(
      "fixture",
      [](const std::string& name) {
        return canonical_dump(fixture_json(name));
      },
      py::arg("name"), "Serialized canonical fixture by registry name");

  m.def(
      "validate",
      [](const std::string& doc) {
        return canonical_dump(
            report_to_json(validate_candidate_json(parse_json(doc))));
      },
      py::arg("json"),
      "Candidate-level validation of a structure or pair JSON document");

  m.def(
      "sigma_even",
      [](const std::string& pair, int pivot) {
        PoincarePair P = pair_from_json(value_of(pair, "pair"));
        return wrap("sigma", sigma_to_json(sigma_even(P, pivot)));
      },
      py::arg("pair"), py::arg("pivot") = 0,
      "Cap an even-dimensional pair into a closed representative");

  m.def(
      "sigma_odd",
      [](const std::string& pair, const std::string& lagrangian, int pivot) {
        PoincarePair P = pair_from_json(value_of(pair, "pair"));
        Mat L = mat_from_json(value_of(lagrangian, "matrix"));
        return wrap("sigma", sigma_to_json(sigma_odd(P, L, pivot)));
      },
      py::arg("pair"), py::arg("lagrangian"), py::arg("pivot") = 0,
      "Cap an odd-dimensional pair along a middle Lagrangian");

  m.def(
      "glue",
      [](const std::string& left, const std::string& right,
         const std::string& map_json) {
        PoincarePair P = pair_from_json(value_of(left, "pair"));
        PoincarePair Q = pair_from_json(value_of(right, "pair"));
        ChainMap u = map_json.empty() ? identity_map(P.boundary.C)
                                      : map_from_json(parse_json(map_json));
        return wrap("structure", structure_to_json(glue_pairs(P, Q, u)));
      },
      py::arg("left"), py::arg("right"), py::arg("map") = std::string(),
      "Glue two pairs along a boundary equivalence (identity by default)");

  m.def(
      "torus",
      [](const std::string& structure, const std::string& map_json) {
        SymmetricStructure x =
            structure_from_json(value_of(structure, "structure"));
        ChainMap w = map_from_json(parse_json(map_json));
        return wrap("structure", structure_to_json(mapping_torus(x, w)));
      },
      py::arg("structure"), py::arg("map"),
      "Algebraic mapping torus of a self-equivalence");

  m.def(
      "fingerprint",
      [](const std::string& structure) {
        SymmetricStructure x =
            structure_from_json(value_of(structure, "structure"));
        return wrap("fingerprint", fingerprint_to_json(fingerprint(x)));
      },
      py::arg("structure"),
      "Homology ranks, torsion counts, and evaluation signatures");

  m.def(
      "random_pair",
      [](std::uint64_t seed, int dimension, int max_rank) {
        return wrap("pair",
                    pair_to_json(random_pair(seed, dimension, max_rank)));
      },
      py::arg("seed"), py::arg("dimension"), py::arg("max_rank") = 4,
      "Seeded validator-passing pair over Q");

  m.def(
      "run_scenario",
      [](const std::string& path, std::uint64_t seed) {
        return canonical_dump(
            scenario_report_to_json(run_scenario_file(path, seed)));
      },
      py::arg("path"), py::arg("seed") = 0,
      "Execute a scenario file and return the deterministic report");

  m.def(
      "run_scenario_text",
      [](const std::string& text, std::uint64_t seed) {
        return canonical_dump(scenario_report_to_json(
            run_scenario(parse_scenario(parse_json(text)), seed)));
      },
      py::arg("text"), py::arg("seed") = 0,
      "Execute a scenario given inline as JSON text");
}
