#include "symsig/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace symsig {

namespace {

Json int_to_json(const Int& v) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  if (v >= lo && v <= hi) return Json(v.convert_to<std::int64_t>());
  return Json(v.str());
}

Int int_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      throw ParseError(where + ": bad integer literal '" +
                       j.get<std::string>() + "'");
    }
  }
  throw ParseError(where + ": expected an integer or a decimal string");
}

Rat rat_from_json(const Json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2)
      throw ParseError(where + ": a rational is [numerator, denominator]");
    Int num = int_from_json(j[0], where);
    Int den = int_from_json(j[1], where);
    if (den == 0) throw ParseError(where + ": zero denominator");
    return Rat(num, den);
  }
  return Rat(int_from_json(j, where));
}

Json rat_terms_json(const Elem& e) {
  Json out = Json::array();
  for (const auto& [exp, coeff] : e.coeffs)
    out.push_back(Json::array({Json(exp), int_to_json(numerator(coeff)),
                               int_to_json(denominator(coeff))}));
  return out;
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ParseError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

Ring ring_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_string())
    throw ParseError(where + ": field '" + key + "' must be a ring tag");
  try {
    return Ring::from_tag(v.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

std::vector<int> int_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<int> out;
  for (const Json& v : j) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw ParseError(where + ": expected integers");
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<Mat> mat_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a matrix array");
  std::vector<Mat> out;
  for (const Json& v : j) out.push_back(mat_from_json(v));
  return out;
}

StructureLayers layers_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected layer tables");
  StructureLayers out;
  for (const Json& layer : j) out.push_back(mat_vector(layer, where));
  return out;
}

Json layers_to_json(const StructureLayers& layers) {
  Json out = Json::array();
  for (const auto& layer : layers) {
    Json row = Json::array();
    for (const Mat& m : layer) row.push_back(mat_to_json(m));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << text;
}

Json elem_to_json(const Elem& e) {
  switch (e.ring.kind) {
    case RingKind::Z:
      return int_to_json(numerator(scalar_value(e)));
    case RingKind::Q: {
      Rat v = scalar_value(e);
      return Json::array({int_to_json(numerator(v)),
                          int_to_json(denominator(v))});
    }
    default:
      return rat_terms_json(e);
  }
}

Elem elem_from_json(const Ring& R, const Json& j) {
  const std::string where = "element over " + R.tag();
  switch (R.kind) {
    case RingKind::Z:
      return from_int(R, int_from_json(j, where));
    case RingKind::Q:
      return from_rat(R, rat_from_json(j, where));
    default: {
      if (!j.is_array())
        throw ParseError(where + ": expected a list of [exp, num, den] terms");
      Elem out = zero(R);
      for (const Json& term : j) {
        if (!term.is_array() || term.size() != 3)
          throw ParseError(where + ": each term is [exp, num, den]");
        if (!term[0].is_number_integer() && !term[0].is_number_unsigned())
          throw ParseError(where + ": exponent must be an integer");
        Int num = int_from_json(term[1], where);
        Int den = int_from_json(term[2], where);
        if (den == 0) throw ParseError(where + ": zero denominator");
        out = add(out, monomial(R, term[0].get<std::int64_t>(),
                                Rat(num, den)));
      }
      return out;
    }
  }
}

Json mat_to_json(const Mat& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) entries.push_back(elem_to_json(m.at(i, j)));
  return Json{{"ring", m.ring.tag()},
              {"rows", m.rows},
              {"cols", m.cols},
              {"entries", std::move(entries)}};
}

Mat mat_from_json(const Json& j) {
  const std::string where = "matrix";
  Ring R = ring_field(j, "ring", where);
  int rows = int_field(j, "rows", where);
  int cols = int_field(j, "cols", where);
  if (rows < 0 || cols < 0) throw ParseError(where + ": negative shape");
  const Json& entries = field(j, "entries", where);
  if (!entries.is_array() ||
      entries.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols))
    throw ParseError(where + ": expected " + std::to_string(rows * cols) +
                     " entries");
  Mat out = mat_zero(R, rows, cols);
  size_t k = 0;
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) out.at(i, c) = elem_from_json(R, entries[k++]);
  return out;
}

Json complex_to_json(const ChainComplex& C) {
  Json diffs = Json::array();
  for (int i = 1; i <= C.top; ++i) diffs.push_back(mat_to_json(C.diff(i)));
  return Json{{"ring", C.ring.tag()},
              {"top", C.top},
              {"ranks", C.ranks},
              {"differentials", std::move(diffs)}};
}

ChainComplex complex_from_json(const Json& j) {
  const std::string where = "chain complex";
  Ring R = ring_field(j, "ring", where);
  std::vector<int> ranks = int_vector(field(j, "ranks", where), where);
  std::vector<Mat> diffs = mat_vector(field(j, "differentials", where), where);
  for (const Mat& m : diffs)
    if (!(m.ring == R)) throw ParseError(where + ": mixed rings");
  return ChainComplex(R, std::move(ranks), std::move(diffs));
}

Json map_to_json(const ChainMap& f) {
  Json comps = Json::array();
  for (int i = 0; i <= f.source.top; ++i) comps.push_back(mat_to_json(f.f(i)));
  return Json{{"source", complex_to_json(f.source)},
              {"target", complex_to_json(f.target)},
              {"components", std::move(comps)}};
}

ChainMap map_from_json(const Json& j) {
  const std::string where = "chain map";
  ChainComplex src = complex_from_json(field(j, "source", where));
  ChainComplex tgt = complex_from_json(field(j, "target", where));
  std::vector<Mat> comps = mat_vector(field(j, "components", where), where);
  return ChainMap(std::move(src), std::move(tgt), std::move(comps));
}

Json structure_to_json(const SymmetricStructure& x) {
  return Json{{"complex", complex_to_json(x.C)},
              {"n", x.n},
              {"layers", layers_to_json(x.phis)}};
}

SymmetricStructure structure_from_json(const Json& j) {
  const std::string where = "symmetric structure";
  ChainComplex C = complex_from_json(field(j, "complex", where));
  int n = int_field(j, "n", where);
  StructureLayers phis = layers_from_json(field(j, "layers", where), where);
  return SymmetricStructure(std::move(C), n, std::move(phis));
}

Json pair_to_json(const PoincarePair& P) {
  Json incl = Json::array();
  for (int i = 0; i <= P.boundary.C.top; ++i)
    incl.push_back(mat_to_json(P.incl.f(i)));
  return Json{{"boundary", structure_to_json(P.boundary)},
              {"ambient", complex_to_json(P.ambient)},
              {"inclusion", std::move(incl)},
              {"n", P.n},
              {"dlayers", layers_to_json(P.dphis)}};
}

PoincarePair pair_from_json(const Json& j) {
  const std::string where = "pair";
  SymmetricStructure bd = structure_from_json(field(j, "boundary", where));
  ChainComplex amb = complex_from_json(field(j, "ambient", where));
  std::vector<Mat> incl = mat_vector(field(j, "inclusion", where), where);
  int n = int_field(j, "n", where);
  StructureLayers dphis = layers_from_json(field(j, "dlayers", where), where);
  ChainMap inc(bd.C, amb, std::move(incl));
  return PoincarePair(std::move(bd), std::move(amb), std::move(inc), n,
                      std::move(dphis));
}

Json form_to_json(const EpsForm& F) {
  return Json{{"ring", F.ring.tag()}, {"eps", F.eps}, {"mu", mat_to_json(F.mu)}};
}

EpsForm form_from_json(const Json& j) {
  const std::string where = "form";
  Ring R = ring_field(j, "ring", where);
  int eps = int_field(j, "eps", where);
  Mat mu = mat_from_json(field(j, "mu", where));
  if (!(mu.ring == R)) throw ParseError(where + ": matrix ring mismatch");
  return EpsForm(eps, std::move(mu));
}

Json formation_to_json(const Formation& phi) {
  return Json{{"form", form_to_json(phi.form)},
              {"K", mat_to_json(phi.K)},
              {"L", mat_to_json(phi.L)}};
}

Formation formation_from_json(const Json& j) {
  const std::string where = "formation";
  EpsForm F = form_from_json(field(j, "form", where));
  Mat K = mat_from_json(field(j, "K", where));
  Mat L = mat_from_json(field(j, "L", where));
  return Formation(std::move(F), std::move(K), std::move(L));
}

Json fingerprint_to_json(const Fingerprint& fp) {
  Json sigs = Json::array();
  for (const auto& [omega, s] : fp.signatures)
    sigs.push_back(Json::array({omega, s}));
  return Json{{"free_ranks", fp.free_ranks},
              {"torsion_counts", fp.torsion_counts},
              {"signatures", std::move(sigs)}};
}

Json sigma_to_json(const SigmaResult& res) {
  return Json{{"representative", structure_to_json(res.rep.x)},
              {"fingerprint", fingerprint_to_json(res.rep.fp)},
              {"provenance",
               Json{{"input_digest", res.provenance.input_digest},
                    {"witness_digest", res.provenance.witness_digest},
                    {"lagrangian_digest", res.provenance.lagrangian_digest},
                    {"stabilization", res.provenance.stabilization}}}};
}

Json report_to_json(const ValidationReport& rep) {
  Json checks = Json::array();
  for (const CheckResult& c : rep.checks) {
    Json entry{{"check", c.check},
               {"degree", c.degree},
               {"pass", c.pass},
               {"note", c.note}};
    entry["residual"] = c.residual ? mat_to_json(*c.residual) : Json();
    checks.push_back(std::move(entry));
  }
  return Json{{"ok", rep.ok}, {"checks", std::move(checks)}};
}

ValidationReport validate_candidate_json(const Json& doc) {
  Json j = doc;
  if (j.is_object() && j.contains("kind") && j.contains("value"))
    j = j.at("value");
  try {
    if (j.contains("boundary")) {
      const Json& bd = j.at("boundary");
      const Json& bc = bd.at("complex");
      Ring R = ring_field(bc, "ring", "boundary complex");
      return validate_pair_candidate(
          R, int_vector(bc.at("ranks"), "boundary ranks"),
          mat_vector(bc.at("differentials"), "boundary differentials"),
          layers_from_json(bd.at("layers"), "boundary layers"),
          int_vector(j.at("ambient").at("ranks"), "ambient ranks"),
          mat_vector(j.at("ambient").at("differentials"),
                     "ambient differentials"),
          mat_vector(j.at("inclusion"), "inclusion"),
          layers_from_json(j.at("dlayers"), "relative layers"),
          int_field(j, "n", "pair"));
    }
    if (j.contains("complex")) {
      const Json& c = j.at("complex");
      Ring R = ring_field(c, "ring", "complex");
      return validate_complex_candidate(
          R, int_vector(c.at("ranks"), "ranks"),
          mat_vector(c.at("differentials"), "differentials"),
          int_field(j, "n", "structure"),
          layers_from_json(j.at("layers"), "layers"));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("validate: malformed input: ") + e.what());
  }
  throw ParseError("validate: input is neither a structure nor a pair");
}

bool report_is_inconclusive(const ValidationReport& rep) {
  if (rep.ok) return false;
  bool any = false;
  for (const CheckResult& c : rep.checks) {
    if (c.pass) continue;
    if (c.note.rfind("undecided", 0) != 0) return false;
    any = true;
  }
  return any;
}

}  // namespace symsig
