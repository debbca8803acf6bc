#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "symsig/forms.hpp"
#include "symsig/json_io.hpp"
#include "symsig/structures.hpp"

namespace symsig {

// Registry of canonical objects.  Each entry serializes as an envelope
// {"kind": "structure"|"pair"|"form"|"formation", "name": ..., "value": ...};
// the golden files under fixtures/ hold exactly canonical_dump of these.
std::vector<std::string> fixture_names();
Json fixture_json(const std::string& name);  // throws UnknownFixture

// Typed accessors; throw UnknownFixture when the name is absent or the kind
// does not match.
SymmetricStructure fixture_structure(const std::string& name);
PoincarePair fixture_pair(const std::string& name);
EpsForm fixture_form(const std::string& name);
Formation fixture_formation(const std::string& name);

// Seeded closed structure of the given dimension over Q: concentrated forms
// in even dimensions, formation suspensions in odd ones, conjugated by a
// random change of basis so the matrices stay generic.
SymmetricStructure random_closed(std::uint64_t seed, int dimension,
                                 int max_rank);

// Seeded Poincare pair over Q built as a conjugated algebraic cylinder,
// optionally enlarged by a closed summand.  Requires 1 <= dimension <= 5
// and 1 <= max_rank <= 8; deterministic in the seed.
PoincarePair random_pair(std::uint64_t seed, int dimension, int max_rank);

// Same boundary, ambient data conjugated by random unimodular basis
// changes: an equivalent pair for homotopy-invariance experiments.
PoincarePair conjugate_ambient(const PoincarePair& P, std::mt19937_64& rng);

// Degreewise [[a I, b I], [b I, a I]] on a doubled complex (each rank even,
// split as x (+) -x).  When a^2 - b^2 = 1 this is a strict isometry of the
// doubled structure in every layer.
ChainMap doubled_isometry(const ChainComplex& doubled, const Rat& a,
                          const Rat& b);

}  // namespace symsig
