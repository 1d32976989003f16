#include "starterforge/catalog.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include <json.hpp>

#include "starterforge/errors.hpp"

namespace starterforge {

using nlohmann::json;

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

const char* min_quotient_name(MinQuotient m) {
  switch (m) {
    case MinQuotient::Zero: return "zero";
    case MinQuotient::One: return "one";
    case MinQuotient::Two: return "two";
    case MinQuotient::More: return "more";
  }
  throw ConsistencyError("unknown quotient classification");
}

MinQuotient min_quotient_from_name(const std::string& s) {
  if (s == "zero") return MinQuotient::Zero;
  if (s == "one") return MinQuotient::One;
  if (s == "two") return MinQuotient::Two;
  if (s == "more") return MinQuotient::More;
  throw InvalidInput("unknown quotient class '" + s + "'");
}

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// nlohmann's default object is std::map-backed, so dump() emits keys in
// sorted order; compact dump is the canonical byte sequence.
json record_to_json(const StarterRecord& rec) {
  const FieldSpec& F = rec.starter.field;

  json j;
  j["schema"] = kCatalogSchemaVersion;
  j["q"] = F.q();
  j["p"] = F.p();
  j["m"] = F.m();
  j["modulus"] = F.modulus();

  FieldElement g = least_primitive_element(F);
  j["alpha"] = F.mul(g, g).enc;

  json prov;
  switch (rec.starter.prov.kind) {
    case ProvenanceKind::Dinitz:
      prov["kind"] = "dinitz";
      prov["beta"] = rec.starter.prov.beta1.enc;
      break;
    case ProvenanceKind::TwoQuotient:
      prov["kind"] = "two-quotient";
      prov["beta1"] = rec.starter.prov.beta1.enc;
      prov["beta2"] = rec.starter.prov.beta2.enc;
      break;
    case ProvenanceKind::External:
      prov["kind"] = "external";
      break;
  }
  j["provenance"] = prov;

  std::vector<Pair> pairs = rec.starter.pairs;
  std::sort(pairs.begin(), pairs.end());
  json jp = json::array();
  for (const Pair& pr : pairs) jp.push_back(json::array({pr.a.enc, pr.b.enc}));
  j["pairs"] = jp;

  j["is_starter"] = rec.is_starter;
  j["is_strong"] = rec.is_strong;

  json q;
  q["min"] = min_quotient_name(rec.quotient.min_le2);
  json qs = json::array();
  for (FieldElement e : rec.quotient.quotient_set) qs.push_back(e.enc);
  q["set"] = qs;
  j["quotient"] = q;

  return j;
}

int64_t require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw InvalidInput(std::string("record is missing integer field '") + key +
                       "'");
  }
  return j[key].get<int64_t>();
}

}  // namespace

StarterRecord make_record(const Starter& s, const VerificationReport& report) {
  StarterRecord rec;
  rec.starter = s;
  rec.is_starter = report.is_starter;
  rec.is_strong = report.is_strong;
  rec.quotient = report.quotient;
  return rec;
}

std::string serialize_record(const StarterRecord& rec) {
  json j = record_to_json(rec);
  j["hash"] = hash_hex(fnv1a64(j.dump()));
  return j.dump();
}

std::string serialize_record_pretty(const StarterRecord& rec) {
  json j = record_to_json(rec);
  j["hash"] = hash_hex(fnv1a64(j.dump()));
  return j.dump(2);
}

StarterRecord parse_record(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("record is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("record must be a JSON object");

  if (j.contains("schema") && require_int(j, "schema") != kCatalogSchemaVersion) {
    throw InvalidInput("unsupported schema version");
  }

  int64_t q = require_int(j, "q");
  StarterRecord rec;
  rec.starter.field = make_field_q(q);
  const FieldSpec& F = rec.starter.field;

  if (j.contains("p") && require_int(j, "p") != F.p()) {
    throw InvalidInput("field 'p' does not match q");
  }
  if (j.contains("m") && require_int(j, "m") != F.m()) {
    throw InvalidInput("field 'm' does not match q");
  }
  if (j.contains("modulus") &&
      j["modulus"].get<std::vector<int64_t>>() != F.modulus()) {
    throw InvalidInput("field 'modulus' does not match q");
  }
  if (j.contains("alpha")) {
    FieldElement g = least_primitive_element(F);
    if (require_int(j, "alpha") != F.mul(g, g).enc) {
      throw InvalidInput("field 'alpha' does not match q");
    }
  }

  if (!j.contains("pairs") || !j["pairs"].is_array()) {
    throw InvalidInput("record is missing array field 'pairs'");
  }
  for (const json& cell : j["pairs"]) {
    if (!cell.is_array() || cell.size() != 2 ||
        !cell[0].is_number_integer() || !cell[1].is_number_integer()) {
      throw InvalidInput("each pair must be a 2-element integer array");
    }
    // Equal or zero members are representable; verification judges them.
    int64_t a = cell[0].get<int64_t>(), b = cell[1].get<int64_t>();
    if (a > b) std::swap(a, b);
    rec.starter.pairs.push_back(Pair{F.element(a), F.element(b)});
  }
  std::sort(rec.starter.pairs.begin(), rec.starter.pairs.end());

  if (j.contains("provenance")) {
    const json& prov = j["provenance"];
    if (!prov.is_object() || !prov.contains("kind") ||
        !prov["kind"].is_string()) {
      throw InvalidInput("provenance must be an object with a 'kind' string");
    }
    std::string kind = prov["kind"].get<std::string>();
    if (kind == "dinitz") {
      rec.starter.prov.kind = ProvenanceKind::Dinitz;
      rec.starter.prov.beta1 = F.element(require_int(prov, "beta"));
    } else if (kind == "two-quotient") {
      rec.starter.prov.kind = ProvenanceKind::TwoQuotient;
      rec.starter.prov.beta1 = F.element(require_int(prov, "beta1"));
      rec.starter.prov.beta2 = F.element(require_int(prov, "beta2"));
    } else if (kind == "external") {
      rec.starter.prov.kind = ProvenanceKind::External;
    } else {
      throw InvalidInput("unknown provenance kind '" + kind + "'");
    }
  }

  if (j.contains("is_starter")) {
    if (!j["is_starter"].is_boolean()) {
      throw InvalidInput("'is_starter' must be a boolean");
    }
    rec.is_starter = j["is_starter"].get<bool>();
  }
  if (j.contains("is_strong")) {
    if (!j["is_strong"].is_boolean()) {
      throw InvalidInput("'is_strong' must be a boolean");
    }
    rec.is_strong = j["is_strong"].get<bool>();
  }

  if (j.contains("quotient")) {
    const json& qj = j["quotient"];
    if (!qj.is_object() || !qj.contains("min") || !qj["min"].is_string() ||
        !qj.contains("set") || !qj["set"].is_array()) {
      throw InvalidInput("quotient must be {min: string, set: array}");
    }
    rec.quotient.min_le2 = min_quotient_from_name(qj["min"].get<std::string>());
    for (const json& e : qj["set"]) {
      if (!e.is_number_integer()) {
        throw InvalidInput("quotient set entries must be integers");
      }
      rec.quotient.quotient_set.push_back(F.element(e.get<int64_t>()));
    }
  }

  if (j.contains("hash")) {
    if (!j["hash"].is_string()) throw InvalidInput("'hash' must be a string");
    json canon = record_to_json(rec);
    std::string expect = hash_hex(fnv1a64(canon.dump()));
    if (j["hash"].get<std::string>() != expect) {
      throw InvalidInput("content hash mismatch; omit 'hash' for hand-written records");
    }
  }

  return rec;
}

}  // namespace starterforge
