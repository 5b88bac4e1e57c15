#include "hermitangent/serialization.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

namespace hermitangent {

namespace {

constexpr const char* kMatrixFormat = "hermitangent.matrix";
constexpr const char* kBundleFormat = "hermitangent.bundle";

[[noreturn]] void malformed(const std::string& what) { fail(ErrorKind::invalid_argument, "malformed JSON: " + what); }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

json element_to_json(const Field& f, Element e) {
  std::vector<std::uint32_t> c = f.coeffs(e);
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  return c;
}

Element element_from_json(const Field& f, const json& j) {
  if (!j.is_array() || j.empty() || j.size() > f.degree()) malformed("element must be 1..degree coefficients");
  std::vector<std::uint32_t> c(f.degree(), 0);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_unsigned() || j[i].get<std::uint64_t>() >= f.characteristic()) {
      malformed("coefficient outside F_p");
    }
    c[i] = j[i].get<std::uint32_t>();
  }
  return f.from_coeffs(c);
}

json param_to_json(const Field& f, const Param& z) {
  const Param n = normalize(f, z);
  if (n.is_infinity()) return "inf";
  return element_to_json(f, n.beta);
}

Param param_from_json(const Field& f, const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "inf") malformed("parameter string must be \"inf\"");
    return Param::infinity();
  }
  return Param::finite(element_from_json(f, j));
}

json matrix_to_json(const FieldTower& tower, const SqMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (Element e : m.row(i)) row.push_back(element_to_json(tower.fq2(), e));
    rows.push_back(std::move(row));
  }
  return {{"format", kMatrixFormat}, {"p", tower.p()}, {"nu", tower.nu()}, {"size", m.size()}, {"entries", rows}};
}

std::pair<std::uint32_t, std::uint32_t> matrix_tower_params(const json& j) {
  if (!j.is_object() || j.value("format", "") != kMatrixFormat) malformed("not a hermitangent.matrix document");
  if (!j.contains("p") || !j.contains("nu") || !j["p"].is_number_unsigned() || !j["nu"].is_number_unsigned()) {
    malformed("missing p or nu");
  }
  return {j["p"].get<std::uint32_t>(), j["nu"].get<std::uint32_t>()};
}

SqMatrix matrix_from_json(const FieldTower& tower, const json& j) {
  const auto [p, nu] = matrix_tower_params(j);
  if (p != tower.p() || nu != tower.nu()) malformed("matrix is over a different field");
  const json& rows = j.value("entries", json());
  const std::size_t size = j.value("size", std::size_t{0});
  if (size == 0 || !rows.is_array() || rows.size() != size) malformed("entries must be size rows");
  std::vector<Element> e;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != size) malformed("matrix must be square");
    for (const auto& x : row) e.push_back(element_from_json(tower.fq2(), x));
  }
  return SqMatrix(size, std::move(e));
}

json certificate_to_json(const FieldTower& tower, const TangencyCertificate& cert) {
  const Field& f = tower.fq2();
  json params = json::array();
  for (const Param& z : cert.parameters) params.push_back(param_to_json(f, z));
  return {{"parameters", params},
          {"multiplicity", cert.multiplicity},
          {"scalar", element_to_json(f, cert.scalar)},
          {"baer_witness", matrix_to_json(tower, cert.baer_witness)}};
}

TangencyCertificate certificate_from_json(const FieldTower& tower, const json& j) {
  const Field& f = tower.fq2();
  if (!j.is_object()) malformed("certificate must be an object");
  TangencyCertificate cert;
  for (const auto& z : j.value("parameters", json::array())) cert.parameters.push_back(param_from_json(f, z));
  cert.multiplicity = j.value("multiplicity", std::size_t{0});
  cert.scalar = element_from_json(f, j.value("scalar", json()));
  cert.baer_witness = matrix_from_json(tower, j.value("baer_witness", json()));
  return cert;
}

json field_info(const FieldTower& tower) {
  return {{"p", tower.p()},
          {"nu", tower.nu()},
          {"q", tower.q()},
          {"q2", tower.fq2().size()},
          {"modulus_q", tower.fq().modulus()},
          {"modulus_q2", tower.fq2().modulus()},
          {"primitive_q", element_to_json(tower.fq(), tower.fq().primitive_element())},
          {"primitive_q2", element_to_json(tower.fq2(), tower.fq2().primitive_element())},
          {"order_fq_units", tower.q() - 1},
          {"order_fq2_units", tower.fq2().size() - 1}};
}

void write_certificate_bundle(std::ostream& out, const FieldTower& tower, const HermitianVariety& x,
                              const OrbitResult& orbit) {
  const json header = {{"format", kBundleFormat},
                       {"p", tower.p()},
                       {"nu", tower.nu()},
                       {"n", x.ambient_dimension()},
                       {"records", orbit.curves.size()},
                       {"variety", matrix_to_json(tower, x.matrix())}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < orbit.curves.size(); ++i) {
    const RationalNormalCurve curve(tower.fq2(), orbit.curves[i]);
    const TangencyOutcome outcome = total_tangency_check(tower, curve, x);
    json record = {{"index", i},
                   {"matrix", matrix_to_json(tower, orbit.curves[i])},
                   {"key_digest", hex64(key_digest(orbit.keys[i]))}};
    if (const auto* cert = std::get_if<TangencyCertificate>(&outcome)) {
      record["certificate"] = certificate_to_json(tower, *cert);
    } else {
      record["certificate"] = nullptr;
      record["failure"] = std::string(to_string(std::get<TangencyFailure>(outcome)));
    }
    out << record.dump() << '\n';
  }
}

BundleCheck verify_certificate_bundle(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) malformed("empty bundle");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  if (!header.is_object() || header.value("format", "") != kBundleFormat) malformed("not a hermitangent.bundle");
  const FieldTower tower = FieldTower::make(header.value("p", 0u), header.value("nu", 0u));
  const HermitianVariety x(tower, matrix_from_json(tower, header.value("variety", json())));

  BundleCheck check;
  auto reject = [&](const std::string& msg) {
    ++check.failures;
    if (check.messages.size() < 10) check.messages.push_back(msg);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::string label = "record " + std::to_string(check.records);
    ++check.records;
    try {
      const json record = json::parse(line);
      const RationalNormalCurve curve(tower.fq2(), matrix_from_json(tower, record.at("matrix")));
      if (record.at("certificate").is_null()) {
        reject(label + ": no certificate");
        continue;
      }
      const TangencyCertificate cert = certificate_from_json(tower, record.at("certificate"));
      if (!verify_certificate(tower, curve, x, cert)) {
        reject(label + ": certificate does not verify");
      } else if (record.at("key_digest") != hex64(key_digest(curve_point_set(tower, curve)))) {
        reject(label + ": key digest mismatch");
      }
    } catch (const std::exception& e) {
      reject(label + ": " + e.what());
    }
  }
  if (header.contains("records") && header["records"] != check.records) {
    reject("header announces " + header["records"].dump() + " records, found " + std::to_string(check.records));
  }
  return check;
}

}  // namespace hermitangent
