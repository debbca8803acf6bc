#include "symsig/scenario.hpp"

#include <set>
#include <sstream>
#include <unordered_map>

#include "symsig/chain.hpp"
#include "symsig/errors.hpp"
#include "symsig/fixtures.hpp"
#include "symsig/sigma.hpp"

namespace symsig {

namespace {

struct Engine {
  std::uint64_t seed = 0;
  std::unordered_map<std::string, Json> env;

  [[noreturn]] void fail(const std::string& id, const std::string& msg) const {
    throw StepFailure("step '" + id + "': " + msg);
  }

  Json resolve(const std::string& id, const Json& ref) const {
    if (ref.is_string()) {
      std::string s = ref.get<std::string>();
      if (s.rfind("$", 0) == 0) {
        auto it = env.find(s.substr(1));
        if (it == env.end()) fail(id, "unresolved reference '" + s + "'");
        return it->second;
      }
      if (s.rfind("fixture:", 0) == 0) {
        try {
          return fixture_json(s.substr(8));
        } catch (const UnknownFixture& e) {
          fail(id, e.what());
        }
      }
      fail(id, "references are '$<step>' or 'fixture:<name>', got '" + s + "'");
    }
    if (ref.is_object() && ref.contains("kind") && ref.contains("value"))
      return ref;
    fail(id, "expected a reference or an envelope with kind and value");
  }

  Json arg(const std::string& id, const Json& args, const char* key) const {
    if (!args.is_object() || !args.contains(key))
      fail(id, std::string("missing argument '") + key + "'");
    return args.at(key);
  }

  std::string kind_of(const Json& envelope) const {
    return envelope.value("kind", std::string());
  }

  PoincarePair need_pair(const std::string& id, const Json& ref) const {
    Json e = resolve(id, ref);
    if (kind_of(e) != "pair") fail(id, "expected a pair, got " + kind_of(e));
    return pair_from_json(e.at("value"));
  }

  SymmetricStructure need_structure(const std::string& id,
                                    const Json& ref) const {
    Json e = resolve(id, ref);
    if (kind_of(e) == "structure") return structure_from_json(e.at("value"));
    if (kind_of(e) == "sigma")
      return structure_from_json(e.at("value").at("representative"));
    fail(id, "expected a structure, got " + kind_of(e));
  }

  EpsForm need_form(const std::string& id, const Json& ref) const {
    Json e = resolve(id, ref);
    if (kind_of(e) != "form") fail(id, "expected a form, got " + kind_of(e));
    return form_from_json(e.at("value"));
  }

  Mat need_mat(const std::string& id, const Json& ref) const {
    if (ref.is_object() && ref.contains("entries")) return mat_from_json(ref);
    Json e = resolve(id, ref);
    if (kind_of(e) != "matrix") fail(id, "expected a matrix");
    return mat_from_json(e.at("value"));
  }

  ChainMap boundary_map(const Json& args, const PoincarePair& left) const {
    if (!args.contains("map") || (args.at("map").is_string() &&
                                  args.at("map").get<std::string>() ==
                                      "identity"))
      return identity_map(left.boundary.C);
    return map_from_json(args.at("map"));
  }

  Json execute(const std::string& id, const std::string& op, const Json& args,
               StepOutcome& out) {
    if (op == "fixture") {
      Json name = arg(id, args, "name");
      if (!name.is_string()) fail(id, "fixture name must be a string");
      try {
        return fixture_json(name.get<std::string>());
      } catch (const UnknownFixture& e) {
        fail(id, e.what());
      }
    }
    if (op == "random_pair") {
      std::uint64_t eff = seed;
      if (args.contains("seed"))
        eff = args.at("seed").get<std::uint64_t>();
      else if (args.contains("seed_offset"))
        eff += args.at("seed_offset").get<std::uint64_t>();
      int dim = arg(id, args, "dimension").get<int>();
      int mr = args.value("max_rank", 4);
      return Json{{"kind", "pair"},
                  {"value", pair_to_json(random_pair(eff, dim, mr))}};
    }
    if (op == "enlarge_pair") {
      PoincarePair P = need_pair(id, arg(id, args, "pair"));
      std::uint64_t eff = seed;
      if (args.contains("seed"))
        eff = args.at("seed").get<std::uint64_t>();
      else if (args.contains("seed_offset"))
        eff += args.at("seed_offset").get<std::uint64_t>();
      int mr = args.value("max_rank", 4);
      PoincarePair Q =
          pair_sum(P, closed_pair(random_closed(eff, P.n, mr)));
      std::mt19937_64 rng(eff ^ 0xd1b54a32d192ed03ull);
      Q = conjugate_ambient(Q, rng);
      return Json{{"kind", "pair"}, {"value", pair_to_json(Q)}};
    }
    if (op == "validate") {
      Json e = resolve(id, arg(id, args, "target"));
      ValidationReport rep;
      if (kind_of(e) == "pair")
        rep = validate_pair(pair_from_json(e.at("value")));
      else if (kind_of(e) == "structure")
        rep = validate_symmetric_complex(structure_from_json(e.at("value")));
      else
        fail(id, "validate expects a pair or a structure");
      bool soft = report_is_inconclusive(rep);
      out.pass = rep.ok || soft;
      out.inconclusive = soft;
      if (!rep.ok) {
        const CheckResult* f = rep.first_failure();
        out.detail = f ? f->check + ": " + f->note : "failed";
      }
      return Json{{"kind", "report"}, {"value", report_to_json(rep)}};
    }
    if (op == "sigma_even") {
      PoincarePair P = need_pair(id, arg(id, args, "pair"));
      SigmaResult res = sigma_even(P, args.value("pivot", 0));
      return Json{{"kind", "sigma"}, {"value", sigma_to_json(res)}};
    }
    if (op == "sigma_odd") {
      PoincarePair P = need_pair(id, arg(id, args, "pair"));
      Mat L = need_mat(id, arg(id, args, "lagrangian"));
      SigmaResult res = sigma_odd(P, L, args.value("pivot", 0));
      return Json{{"kind", "sigma"}, {"value", sigma_to_json(res)}};
    }
    if (op == "glue") {
      PoincarePair P = need_pair(id, arg(id, args, "left"));
      PoincarePair Q = need_pair(id, arg(id, args, "right"));
      SymmetricStructure g = glue_pairs(P, Q, boundary_map(args, P));
      return Json{{"kind", "structure"}, {"value", structure_to_json(g)}};
    }
    if (op == "torus") {
      SymmetricStructure x = need_structure(id, arg(id, args, "structure"));
      ChainMap w = map_from_json(arg(id, args, "map"));
      SymmetricStructure t = mapping_torus(x, w);
      return Json{{"kind", "structure"}, {"value", structure_to_json(t)}};
    }
    if (op == "difference_formation") {
      EpsForm F = need_form(id, arg(id, args, "form"));
      Mat K = need_mat(id, arg(id, args, "kernel"));
      Mat A = need_mat(id, arg(id, args, "automorphism"));
      Formation d = difference_formation(F, K, A);
      return Json{{"kind", "formation"}, {"value", formation_to_json(d)}};
    }
    if (op == "fingerprint") {
      SymmetricStructure x = need_structure(id, arg(id, args, "target"));
      return Json{{"kind", "fingerprint"},
                  {"value", fingerprint_to_json(fingerprint(x))}};
    }
    if (op == "gluing_formula") {
      PoincarePair P = need_pair(id, arg(id, args, "left"));
      PoincarePair Q = need_pair(id, arg(id, args, "right"));
      auto plain = [](const Fingerprint& fp) {
        for (const auto& [omega, s] : fp.signatures)
          if (omega == 0) return s;
        return 0;
      };
      int glued =
          plain(fingerprint(glue_pairs(P, Q, boundary_map(args, P))));
      int left = plain(sigma_even(P).rep.fp);
      int right = plain(sigma_even(Q).rep.fp);
      bool holds = glued == left - right;
      out.pass = holds;
      if (!holds)
        out.detail = "signature of the glued complex is " +
                     std::to_string(glued) + ", capped difference is " +
                     std::to_string(left - right);
      return Json{{"kind", "check"},
                  {"value", Json{{"glued", glued},
                                 {"left", left},
                                 {"right", right},
                                 {"holds", holds}}}};
    }
    if (op == "expect_equal") {
      Json l = resolve(id, arg(id, args, "left"));
      Json r = resolve(id, arg(id, args, "right"));
      bool equal = canonical_dump(l.at("value")) == canonical_dump(r.at("value"));
      out.pass = equal;
      if (!equal) out.detail = "values differ";
      return Json{{"kind", "check"}, {"value", Json{{"equal", equal}}}};
    }
    fail(id, "unknown operation '" + op + "'");
  }
};

}  // namespace

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw ParseError("scenario: expected an object");
  Scenario sc;
  sc.name = j.value("name", std::string());
  std::set<std::string> ids;
  for (const Json& s : j.value("steps", Json::array())) {
    if (!s.is_object() || !s.contains("id") || !s.at("id").is_string() ||
        !s.contains("op") || !s.at("op").is_string())
      throw ParseError("scenario: each step needs a string id and op");
    ScenarioStep step;
    step.id = s.at("id").get<std::string>();
    step.op = s.at("op").get<std::string>();
    step.args = s.value("args", Json::object());
    if (s.contains("expect")) step.expect = s.at("expect");
    if (!ids.insert(step.id).second)
      throw ParseError("scenario: duplicate step id '" + step.id + "'");
    sc.steps.push_back(std::move(step));
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(load_json_file(path));
}

Report run_scenario(const Scenario& sc, std::uint64_t seed) {
  Engine eng;
  eng.seed = seed;
  Report rep;
  rep.scenario = sc.name;
  rep.seed = seed;
  for (const ScenarioStep& step : sc.steps) {
    StepOutcome out;
    out.id = step.id;
    out.op = step.op;
    out.pass = true;
    try {
      out.output = eng.execute(step.id, step.op, step.args, out);
    } catch (const StepFailure&) {
      throw;
    } catch (const ParseError& e) {
      eng.fail(step.id, e.what());
    } catch (const UnsupportedRing& e) {
      out.inconclusive = true;
      out.detail = e.what();
      out.output = Json{{"kind", "inconclusive"}, {"value", nullptr}};
    } catch (const Error& e) {
      out.pass = false;
      out.detail = e.what();
      out.output = Json{{"kind", "error"}, {"value", e.what()}};
    }
    if (step.expect && out.pass && !out.inconclusive) {
      Json want = *step.expect;
      if (want.is_string())
        want = eng.resolve(step.id, want).at("value");
      if (canonical_dump(want) != canonical_dump(out.output.at("value"))) {
        out.pass = false;
        out.detail = "output does not match the pinned expectation";
      }
    }
    rep.ok = rep.ok && out.pass;
    rep.inconclusive = rep.inconclusive || out.inconclusive;
    eng.env[step.id] = out.output;
    rep.steps.push_back(std::move(out));
  }
  return rep;
}

Report run_scenario_file(const std::string& path, std::uint64_t seed) {
  return run_scenario(load_scenario(path), seed);
}

Json scenario_report_to_json(const Report& r) {
  Json steps = Json::array();
  for (const StepOutcome& s : r.steps)
    steps.push_back(Json{{"id", s.id},
                         {"op", s.op},
                         {"pass", s.pass},
                         {"inconclusive", s.inconclusive},
                         {"detail", s.detail},
                         {"output", s.output}});
  return Json{{"scenario", r.scenario},
              {"seed", r.seed},
              {"ok", r.ok},
              {"inconclusive", r.inconclusive},
              {"steps", std::move(steps)}};
}

std::string scenario_report_text(const Report& r) {
  std::ostringstream os;
  os << "scenario " << (r.scenario.empty() ? "(unnamed)" : r.scenario)
     << " seed=" << r.seed << (r.ok ? " ok" : " FAILED")
     << (r.inconclusive ? " (with inconclusive steps)" : "") << "\n";
  for (const StepOutcome& s : r.steps) {
    os << "  " << (s.pass ? (s.inconclusive ? "~" : "+") : "-") << " "
       << s.id << " [" << s.op << "]";
    if (!s.detail.empty()) os << ": " << s.detail;
    os << "\n";
  }
  return os.str();
}

}  // namespace symsig
