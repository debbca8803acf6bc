#pragma once

#include <json.hpp>
#include <string>

#include "symsig/chain.hpp"
#include "symsig/forms.hpp"
#include "symsig/linalg.hpp"
#include "symsig/rings.hpp"
#include "symsig/sigma.hpp"
#include "symsig/structures.hpp"

namespace symsig {

using Json = nlohmann::json;

// Canonical bytes: two-space indent, keys in sorted order (the map-backed
// default), trailing newline.  All determinism checks compare these bytes.
std::string canonical_dump(const Json& j);

// Parsing wrappers that convert syntax errors into ParseError.
Json parse_json(const std::string& text);
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Element values are serialized without a ring tag (the container carries
// it): Z as an integer (decimal string beyond 64 bits), Q as [num, den],
// Laurent and group rings as a sorted list of [exponent, num, den] terms.
Json elem_to_json(const Elem& e);
Elem elem_from_json(const Ring& R, const Json& j);

Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j);

Json complex_to_json(const ChainComplex& C);
ChainComplex complex_from_json(const Json& j);

// Chain maps embed both endpoint complexes so a file is self-contained.
Json map_to_json(const ChainMap& f);
ChainMap map_from_json(const Json& j);

Json structure_to_json(const SymmetricStructure& x);
SymmetricStructure structure_from_json(const Json& j);

Json pair_to_json(const PoincarePair& P);
PoincarePair pair_from_json(const Json& j);

Json form_to_json(const EpsForm& F);
EpsForm form_from_json(const Json& j);

Json formation_to_json(const Formation& phi);
Formation formation_from_json(const Json& j);

Json fingerprint_to_json(const Fingerprint& fp);
Json sigma_to_json(const SigmaResult& res);

Json report_to_json(const ValidationReport& rep);

// Candidate-level validation straight from JSON (envelope or bare value,
// structure or pair): matrices are read raw so corrupted data is reported
// by the validator instead of being rejected during construction.
ValidationReport validate_candidate_json(const Json& doc);

// A failing report counts as inconclusive when every failing check is an
// undecided certificate rather than a definite violation.
bool report_is_inconclusive(const ValidationReport& rep);

}  // namespace symsig
