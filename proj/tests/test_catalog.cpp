#include "starterforge/catalog.hpp"

#include <string>

#include <doctest.h>
#include <json.hpp>

#include "starterforge/cyclotomy.hpp"
#include "starterforge/errors.hpp"

using namespace starterforge;
using nlohmann::json;

namespace {

StarterRecord record_29_2_26() {
  FieldSpec F = make_field_q(29);
  CosetSystem sys = build_cosets(F);
  Starter s = two_quotient_starter(
      sys, beta_pair_conditions(sys, F.from_int(2), F.from_int(26)));
  return make_record(s, verify_starter(F, s.pairs));
}

}  // namespace

TEST_CASE("fnv1a64 matches the reference vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("serialization is canonical and round-trips as a fixed point") {
  StarterRecord rec = record_29_2_26();
  std::string line = serialize_record(rec);

  // Canonical bytes: sorted keys, compact separators, one line.
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find(": ") == std::string::npos);
  json j = json::parse(line);
  CHECK(j["q"] == 29);
  CHECK(j["p"] == 29);
  CHECK(j["m"] == 1);
  CHECK(j["modulus"] == json::array({0, 1}));
  CHECK(j["alpha"] == 4);
  CHECK(j["schema"] == 1);
  CHECK(j["is_starter"] == true);
  CHECK(j["is_strong"] == true);
  CHECK(j["provenance"]["kind"] == "two-quotient");
  CHECK(j["provenance"]["beta1"] == 2);
  CHECK(j["provenance"]["beta2"] == 26);
  CHECK(j["quotient"]["min"] == "two");
  CHECK(j["quotient"]["set"] == json::array({2, 3}));
  CHECK(j["pairs"].size() == 14);
  CHECK(j["pairs"][0] == json::array({1, 2}));
  CHECK(j["hash"].get<std::string>().size() == 16);

  StarterRecord back = parse_record(line);
  CHECK(serialize_record(back) == line);
  CHECK(back.starter.field.q() == 29);
  CHECK(back.starter.pairs == rec.starter.pairs);
  CHECK(back.starter.prov.kind == ProvenanceKind::TwoQuotient);
  CHECK(back.starter.prov.beta1.enc == 2);
  CHECK(back.starter.prov.beta2.enc == 26);
  CHECK(back.is_starter);
  CHECK(back.is_strong);
  CHECK(back.quotient.min_le2 == MinQuotient::Two);

  // Pretty output is the same content with whitespace; it parses back to
  // the same canonical line.
  std::string pretty = serialize_record_pretty(rec);
  CHECK(pretty.find('\n') != std::string::npos);
  CHECK(serialize_record(parse_record(pretty)) == line);
}

TEST_CASE("hash changes with content and is validated on parse") {
  StarterRecord rec = record_29_2_26();
  std::string line = serialize_record(rec);
  std::string h1 = json::parse(line)["hash"].get<std::string>();

  StarterRecord tweaked = rec;
  tweaked.is_strong = false;
  std::string h2 = json::parse(serialize_record(tweaked))["hash"].get<std::string>();
  CHECK(h1 != h2);

  json j = json::parse(line);
  j["hash"] = h2;
  CHECK_THROWS_AS(parse_record(j.dump()), InvalidInput);
}

TEST_CASE("minimal hand-written records parse with defaults") {
  StarterRecord rec =
      parse_record(R"({"q":7,"pairs":[[6,2],[1,3],[4,5]]})");
  CHECK(rec.starter.field.q() == 7);
  CHECK(rec.starter.prov.kind == ProvenanceKind::External);
  CHECK_FALSE(rec.is_starter);
  // Pair orientation and list order are canonicalized on entry.
  CHECK(rec.starter.pairs[0].a.enc == 1);
  CHECK(rec.starter.pairs[0].b.enc == 3);
  CHECK(rec.starter.pairs[1].a.enc == 2);
  CHECK(rec.starter.pairs[1].b.enc == 6);

  std::string line = serialize_record(rec);
  CHECK(serialize_record(parse_record(line)) == line);

  StarterRecord dz = parse_record(
      R"({"q":7,"pairs":[[1,3],[2,6],[4,5]],"provenance":{"kind":"dinitz","beta":3}})");
  CHECK(dz.starter.prov.kind == ProvenanceKind::Dinitz);
  CHECK(dz.starter.prov.beta1.enc == 3);
}

TEST_CASE("malformed records are rejected") {
  CHECK_THROWS_AS(parse_record("not json"), InvalidInput);
  CHECK_THROWS_AS(parse_record("[1,2]"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"pairs":[[1,2]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":7})"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":15,"pairs":[]})"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":7,"pairs":[[1,2,3]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":7,"pairs":[[1,9]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":7,"p":5,"pairs":[[1,2]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":7,"m":2,"pairs":[[1,2]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":7,"alpha":3,"pairs":[[1,2]]})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_record(R"({"q":7,"schema":99,"pairs":[[1,2]]})"),
                  InvalidInput);
  CHECK_THROWS_AS(
      parse_record(R"({"q":7,"pairs":[[1,2]],"provenance":{"kind":"magic"}})"),
      InvalidInput);
  CHECK_THROWS_AS(
      parse_record(
          R"({"q":7,"pairs":[[1,2]],"quotient":{"min":"huge","set":[]}})"),
      InvalidInput);
  CHECK_THROWS_AS(
      parse_record(R"({"q":7,"pairs":[[1,2]],"hash":"0000000000000000"})"),
      InvalidInput);
}

TEST_CASE("extension field records carry the modulus") {
  FieldSpec F = make_field_q(49);
  CosetSystem sys = build_cosets(F);
  Starter s = two_quotient_starter(sys, search_beta_pairs(sys).front());
  StarterRecord rec = make_record(s, verify_starter(F, s.pairs));
  std::string line = serialize_record(rec);

  json j = json::parse(line);
  CHECK(j["p"] == 7);
  CHECK(j["m"] == 2);
  CHECK(j["modulus"].size() == 3);
  CHECK(j["pairs"].size() == 24);
  CHECK(serialize_record(parse_record(line)) == line);
}
