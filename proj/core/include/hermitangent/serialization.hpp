#pragma once

// JSON encodings. Field elements are written as coefficient vectors over
// F_p (constant term first) so files do not depend on the code numbering.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermitangent/curve.hpp"
#include "hermitangent/unitary_orbit.hpp"

namespace hermitangent {

using nlohmann::json;

json element_to_json(const Field& f, Element e);
// Throws Error(invalid_argument) on malformed input.
Element element_from_json(const Field& f, const json& j);

json param_to_json(const Field& f, const Param& z);
Param param_from_json(const Field& f, const json& j);

// {"format": "hermitangent.matrix", "p", "nu", "size", "entries": rows of coefficient vectors}
json matrix_to_json(const FieldTower& tower, const SqMatrix& m);
// Throws Error(invalid_argument) on malformed input or a (p, nu) mismatch.
SqMatrix matrix_from_json(const FieldTower& tower, const json& j);
// Reads p and nu from a matrix document without decoding entries.
std::pair<std::uint32_t, std::uint32_t> matrix_tower_params(const json& j);

json certificate_to_json(const FieldTower& tower, const TangencyCertificate& cert);
TangencyCertificate certificate_from_json(const FieldTower& tower, const json& j);

json field_info(const FieldTower& tower);

// JSONL: a header line, then one record per orbit curve with the curve
// matrix, key digest, tangency certificate and Baer witness.
void write_certificate_bundle(std::ostream& out, const FieldTower& tower, const HermitianVariety& x,
                              const OrbitResult& orbit);

struct BundleCheck {
  std::size_t records = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures
};

// Recomputes every record: certificate validity, digest and witness.
// Throws Error(invalid_argument) on a malformed header.
BundleCheck verify_certificate_bundle(std::istream& in);

}  // namespace hermitangent
