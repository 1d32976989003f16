// Starter records as canonical JSON: keys sorted, pairs sorted, compact
// separators, so serialized catalogs are byte-stable and diff cleanly. Each
// record carries a content hash over its own canonical bytes (hash field
// excluded) for deduplication; the hash is validated on parse.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "starterforge/starter.hpp"

namespace starterforge {

inline constexpr int64_t kCatalogSchemaVersion = 1;

// FNV-1a, 64-bit.
uint64_t fnv1a64(std::string_view bytes);

// One catalog line. Flags and quotient profile are stored, not recomputed,
// so parse(serialize(r)) == r holds for arbitrary content; `verify` is the
// command that re-judges.
struct StarterRecord {
  Starter starter;
  bool is_starter = false;
  bool is_strong = false;
  QuotientProfile quotient;
};

StarterRecord make_record(const Starter& s, const VerificationReport& report);

// Single line, no trailing newline. Pretty form is for human eyes only and
// is not the canonical (hashed) byte sequence.
std::string serialize_record(const StarterRecord& rec);
std::string serialize_record_pretty(const StarterRecord& rec);

// Accepts serialize_record output and minimal hand-written records: "q" and
// "pairs" are required, all other fields optional. Optional fields are
// cross-checked against the field implied by q when present; a present
// "hash" must match the recomputed digest. Throws InvalidInput on malformed
// or inconsistent content.
StarterRecord parse_record(const std::string& text);

}  // namespace starterforge
