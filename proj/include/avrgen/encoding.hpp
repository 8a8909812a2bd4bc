#pragma once

#include <string>
#include <string_view>

#include "avrgen/symbolic.hpp"

namespace avrgen {

// Canonical on-disk symbolic format. Versioned self-describing header; entities
// are serialized sorted by slot_index so equal cells encode identically.
constexpr char kSymMagic[] = "AVRSYM1";

std::string canonical_encoding(const SymbolicPanel& panel);
std::string canonical_encoding(const Cell& cell);

Cell decode_cell(std::string_view bytes);

// Content digest of an encoding (also used for puzzle ids and dedup).
std::uint64_t encoding_digest(std::string_view bytes);
std::string digest_hex(std::uint64_t digest);

}  // namespace avrgen
