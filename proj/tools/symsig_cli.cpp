// Command-line workbench: validate chain-level data, run the capping
// constructions, glue pairs, build mapping tori, analyze forms, emit
// canonical fixtures, and execute scenario files.
//
// Exit codes: 0 success; 1 usage, I/O, or parse errors; 2 definite
// mathematical failure; 3 inconclusive (always when the operation cannot
// produce a result, and for undecided certificates when --strict is set).

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <string>

#include "symsig/chain.hpp"
#include "symsig/errors.hpp"
#include "symsig/fixtures.hpp"
#include "symsig/json_io.hpp"
#include "symsig/scenario.hpp"
#include "symsig/sigma.hpp"

namespace {

using namespace symsig;

struct Common {
  std::uint64_t seed = 0;
  bool strict = false;
  std::string out;
  std::string format = "json";
  bool timing = false;
};

void add_common(CLI::App* cmd, Common& opt) {
  cmd->add_option("--seed", opt.seed, "Seed for randomized steps");
  cmd->add_flag("--strict", opt.strict,
                "Treat undecided certificates as exit code 3");
  cmd->add_option("--out", opt.out, "Write the report here instead of stdout");
  cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--timing", opt.timing,
                "Include wall-clock milliseconds in the report");
}

void emit(const Common& opt, const std::string& text) {
  if (opt.out.empty())
    std::cout << text;
  else
    write_text_file(opt.out, text);
}

std::string report_text(const ValidationReport& rep) {
  std::ostringstream os;
  os << (rep.ok ? "ok" : "FAILED") << "\n";
  for (const CheckResult& c : rep.checks) {
    os << "  " << (c.pass ? "+" : "-") << " " << c.check;
    if (c.degree >= 0) os << " @" << c.degree;
    if (!c.note.empty()) os << ": " << c.note;
    os << "\n";
  }
  return os.str();
}

Json unwrap(const Json& j, const char* kind) {
  if (j.is_object() && j.contains("kind") && j.contains("value")) {
    if (j.at("kind") != kind)
      throw ParseError(std::string("expected an envelope of kind '") + kind +
                       "', got '" + j.at("kind").get<std::string>() + "'");
    return j.at("value");
  }
  return j;
}

int finish_report(const Common& opt, const ValidationReport& rep) {
  emit(opt, opt.format == "text" ? report_text(rep)
                                 : canonical_dump(report_to_json(rep)));
  if (rep.ok) return 0;
  if (report_is_inconclusive(rep)) return opt.strict ? 3 : 0;
  return 2;
}

int emit_sigma(const Common& opt, const SigmaResult& res) {
  if (opt.format == "text") {
    std::ostringstream os;
    os << "dimension " << res.rep.x.n << ", "
       << fingerprint_text(res.rep.fp) << "\n"
       << "stabilization " << res.provenance.stabilization << ", input "
       << res.provenance.input_digest << ", witness "
       << res.provenance.witness_digest << "\n";
    emit(opt, os.str());
  } else {
    emit(opt, canonical_dump(
                  Json{{"kind", "sigma"}, {"value", sigma_to_json(res)}}));
  }
  if (opt.strict &&
      is_equivalence_cert(duality_map(res.rep.x)) == Cert::Unknown)
    return 3;
  return 0;
}

int emit_structure(const Common& opt, const SymmetricStructure& x) {
  if (opt.format == "text") {
    std::ostringstream os;
    os << "dimension " << x.n << ", ranks [";
    for (size_t i = 0; i < x.C.ranks.size(); ++i)
      os << (i ? "," : "") << x.C.ranks[i];
    os << "], " << fingerprint_text(fingerprint(x)) << "\n";
    emit(opt, os.str());
  } else {
    emit(opt, canonical_dump(Json{{"kind", "structure"},
                                  {"value", structure_to_json(x)}}));
  }
  if (opt.strict && is_equivalence_cert(duality_map(x)) == Cert::Unknown)
    return 3;
  return 0;
}

int cmd_witt(const Common& opt, const std::string& path) {
  Json doc = load_json_file(path);
  std::string kind =
      doc.is_object() ? doc.value("kind", std::string()) : std::string();
  if (kind == "formation") {
    Formation phi = formation_from_json(doc.at("value"));
    TrivialityVerdict v = is_trivial_formation(phi);
    std::string verdict = v.verdict == Cert::Yes
                              ? "trivial"
                              : (v.verdict == Cert::No ? "nontrivial"
                                                       : "unknown");
    Json out{{"kind", "witt"},
             {"value", Json{{"verdict", verdict},
                            {"certificate", v.certificate}}}};
    emit(opt, opt.format == "text"
                  ? "formation: " + verdict + " (" + v.certificate + ")\n"
                  : canonical_dump(out));
    return (opt.strict && v.verdict == Cert::Unknown) ? 3 : 0;
  }
  EpsForm F = form_from_json(unwrap(doc, "form"));
  Json sigs = Json::array();
  if (F.ring.is_scalar()) {
    sigs.push_back(Json::array({0, F.eps == 1 ? signature(F) : 0}));
  } else if (F.ring.is_laurent()) {
    for (int omega : {1, -1})
      sigs.push_back(Json::array(
          {omega, F.eps == 1 ? evaluation_signature(F, omega) : 0}));
  }
  std::string status = "inconclusive";
  Json witness;
  std::string note;
  try {
    LagrangianSearch search = find_lagrangian(F);
    note = search.note;
    if (search.status == LagrangianSearch::Status::Found) {
      status = "found";
      witness = mat_to_json(*search.j);
    } else if (search.status == LagrangianSearch::Status::NoLagrangian) {
      status = "none";
    }
  } catch (const UnsupportedRing& e) {
    note = e.what();
  }
  Json out{{"kind", "witt"},
           {"value", Json{{"signatures", sigs},
                          {"lagrangian", witness},
                          {"status", status},
                          {"note", note}}}};
  if (opt.format == "text") {
    std::ostringstream os;
    os << "rank " << F.rank() << ", eps " << F.eps << ", lagrangian "
       << status;
    if (!note.empty()) os << " (" << note << ")";
    os << "\n";
    emit(opt, os.str());
  } else {
    emit(opt, canonical_dump(out));
  }
  return (opt.strict && status == "inconclusive") ? 3 : 0;
}

int cmd_run(const Common& opt, const std::string& path) {
  auto start = std::chrono::steady_clock::now();
  Report rep = run_scenario_file(path, opt.seed);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  if (opt.format == "text") {
    std::string text = scenario_report_text(rep);
    if (opt.timing) text += "  wall " + std::to_string(ms) + " ms\n";
    emit(opt, text);
  } else {
    Json j = scenario_report_to_json(rep);
    if (opt.timing) j["wall_ms"] = ms;
    emit(opt, canonical_dump(j));
  }
  if (!rep.ok) return 2;
  if (opt.strict && rep.inconclusive) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact chain-level workbench for symmetric Poincare data"};
  app.require_subcommand(1);

  Common v_opt, se_opt, so_opt, gl_opt, to_opt, wi_opt, fx_opt, rn_opt;
  std::string v_in, se_in, so_in, so_lag, gl_left, gl_right, gl_map, to_in,
      to_map, wi_in, fx_name, rn_in;
  int se_pivot = 0, so_pivot = 0;
  bool fx_list = false;

  CLI::App* c_validate = app.add_subcommand(
      "validate", "Check a structure or pair against the chain relations");
  c_validate->add_option("input", v_in, "JSON file")->required();
  add_common(c_validate, v_opt);

  CLI::App* c_se = app.add_subcommand(
      "sigma-even", "Cap an even-dimensional pair into a closed complex");
  c_se->add_option("pair", se_in, "Pair JSON file")->required();
  c_se->add_option("--pivot", se_pivot, "Pivot tie-breaking variant (0 or 1)");
  add_common(c_se, se_opt);

  CLI::App* c_so = app.add_subcommand(
      "sigma-odd", "Cap an odd-dimensional pair using a middle Lagrangian");
  c_so->add_option("pair", so_in, "Pair JSON file")->required();
  c_so->add_option("lagrangian", so_lag, "Lagrangian matrix JSON file")
      ->required();
  c_so->add_option("--pivot", so_pivot, "Pivot tie-breaking variant (0 or 1)");
  add_common(c_so, so_opt);

  CLI::App* c_glue = app.add_subcommand(
      "glue", "Glue two pairs along a boundary equivalence");
  c_glue->add_option("left", gl_left, "First pair JSON file")->required();
  c_glue->add_option("right", gl_right, "Second pair JSON file")->required();
  c_glue->add_option("--map", gl_map,
                     "Chain map JSON file (defaults to the identity)");
  add_common(c_glue, gl_opt);

  CLI::App* c_torus = app.add_subcommand(
      "torus", "Algebraic mapping torus of a self-equivalence");
  c_torus->add_option("structure", to_in, "Structure JSON file")->required();
  c_torus->add_option("map", to_map, "Chain map JSON file")->required();
  add_common(c_torus, to_opt);

  CLI::App* c_witt = app.add_subcommand(
      "witt", "Signatures, Lagrangian search, and formation triviality");
  c_witt->add_option("input", wi_in, "Form or formation JSON file")
      ->required();
  add_common(c_witt, wi_opt);

  CLI::App* c_fixture =
      app.add_subcommand("fixture", "Emit a canonical fixture");
  c_fixture->add_option("name", fx_name, "Fixture name");
  c_fixture->add_flag("--list", fx_list, "List fixture names");
  add_common(c_fixture, fx_opt);

  CLI::App* c_run = app.add_subcommand("run", "Execute a scenario file");
  c_run->add_option("scenario", rn_in, "Scenario JSON file")->required();
  add_common(c_run, rn_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_validate->parsed()) {
      return finish_report(v_opt,
                           validate_candidate_json(load_json_file(v_in)));
    }
    if (c_se->parsed()) {
      PoincarePair P = pair_from_json(unwrap(load_json_file(se_in), "pair"));
      return emit_sigma(se_opt, sigma_even(P, se_pivot));
    }
    if (c_so->parsed()) {
      PoincarePair P = pair_from_json(unwrap(load_json_file(so_in), "pair"));
      Mat L = mat_from_json(unwrap(load_json_file(so_lag), "matrix"));
      return emit_sigma(so_opt, sigma_odd(P, L, so_pivot));
    }
    if (c_glue->parsed()) {
      PoincarePair P = pair_from_json(unwrap(load_json_file(gl_left), "pair"));
      PoincarePair Q =
          pair_from_json(unwrap(load_json_file(gl_right), "pair"));
      ChainMap u = gl_map.empty()
                       ? identity_map(P.boundary.C)
                       : map_from_json(load_json_file(gl_map));
      return emit_structure(gl_opt, glue_pairs(P, Q, u));
    }
    if (c_torus->parsed()) {
      SymmetricStructure x =
          structure_from_json(unwrap(load_json_file(to_in), "structure"));
      ChainMap w = map_from_json(load_json_file(to_map));
      return emit_structure(to_opt, mapping_torus(x, w));
    }
    if (c_witt->parsed()) return cmd_witt(wi_opt, wi_in);
    if (c_fixture->parsed()) {
      if (fx_list || fx_name.empty()) {
        if (fx_opt.format == "text") {
          std::string text;
          for (const std::string& n : fixture_names()) text += n + "\n";
          emit(fx_opt, text);
        } else {
          emit(fx_opt, canonical_dump(Json(fixture_names())));
        }
        return 0;
      }
      emit(fx_opt, canonical_dump(fixture_json(fx_name)));
      return 0;
    }
    if (c_run->parsed()) return cmd_run(rn_opt, rn_in);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnknownFixture& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const StepFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedRing& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
