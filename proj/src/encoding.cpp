#include "avrgen/encoding.hpp"

#include <cstring>

#include "avrgen/rng.hpp"

namespace avrgen {

namespace {

void put_u8(std::string& out, unsigned v) { out.push_back(static_cast<char>(v & 0xFF)); }

void put_u16(std::string& out, unsigned v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

struct Reader {
  std::string_view data;
  std::size_t pos = 0;

  unsigned u8() {
    if (pos >= data.size()) throw ValidationError("truncated encoding");
    return static_cast<unsigned char>(data[pos++]);
  }
  unsigned u16() {
    unsigned lo = u8();
    return lo | (u8() << 8);
  }
};

void encode_panel_body(std::string& out, const SymbolicPanel& in) {
  SymbolicPanel panel = in;
  canonicalize(panel);
  validate_panel(panel);
  put_u8(out, static_cast<unsigned>(panel.layout.kind));
  put_u8(out, static_cast<unsigned>(panel.layout.slots.size()));
  for (const auto& b : panel.layout.slots) {
    put_u16(out, static_cast<unsigned>(b.x));
    put_u16(out, static_cast<unsigned>(b.y));
    put_u16(out, static_cast<unsigned>(b.w));
    put_u16(out, static_cast<unsigned>(b.h));
  }
  put_u16(out, panel.occupancy());
  put_u8(out, static_cast<unsigned>(panel.entities.size()));
  for (const auto& e : panel.entities) {
    put_u8(out, static_cast<unsigned>(e.slot_index));
    put_u8(out, static_cast<unsigned>(e.attrs.shape));
    put_u8(out, static_cast<unsigned>(e.attrs.size));
    put_u8(out, static_cast<unsigned>(e.attrs.color));
    put_u8(out, static_cast<unsigned>(e.attrs.angle));
  }
}

SymbolicPanel decode_panel_body(Reader& r) {
  SymbolicPanel panel;
  panel.layout.kind = static_cast<LayoutKind>(r.u8());
  unsigned nslots = r.u8();
  for (unsigned i = 0; i < nslots; ++i) {
    SlotBox b;
    b.x = static_cast<int>(r.u16());
    b.y = static_cast<int>(r.u16());
    b.w = static_cast<int>(r.u16());
    b.h = static_cast<int>(r.u16());
    panel.layout.slots.push_back(b);
  }
  unsigned occupancy = r.u16();
  unsigned nent = r.u8();
  for (unsigned i = 0; i < nent; ++i) {
    Entity e;
    e.slot_index = static_cast<int>(r.u8());
    e.attrs.shape = static_cast<ShapeType>(r.u8());
    e.attrs.size = static_cast<int>(r.u8());
    e.attrs.color = static_cast<int>(r.u8());
    e.attrs.angle = static_cast<int>(r.u8());
    panel.entities.push_back(e);
  }
  validate_panel(panel);
  if (panel.occupancy() != occupancy) throw ValidationError("occupancy mismatch");
  return panel;
}

}  // namespace

std::string canonical_encoding(const SymbolicPanel& panel) {
  std::string out = kSymMagic;
  put_u8(out, 1);  // component count
  encode_panel_body(out, panel);
  return out;
}

std::string canonical_encoding(const Cell& cell) {
  if (cell.components.empty()) throw ValidationError("cell has no components");
  std::string out = kSymMagic;
  put_u8(out, static_cast<unsigned>(cell.components.size()));
  for (const auto& p : cell.components) encode_panel_body(out, p);
  return out;
}

Cell decode_cell(std::string_view bytes) {
  const std::size_t magic_len = std::strlen(kSymMagic);
  if (bytes.substr(0, magic_len) != kSymMagic) throw ValidationError("bad magic header");
  Reader r{bytes, magic_len};
  Cell cell;
  unsigned ncomp = r.u8();
  if (ncomp == 0) throw ValidationError("cell has no components");
  for (unsigned i = 0; i < ncomp; ++i) cell.components.push_back(decode_panel_body(r));
  if (r.pos != bytes.size()) throw ValidationError("trailing bytes in encoding");
  return cell;
}

std::uint64_t encoding_digest(std::string_view bytes) { return fnv1a64(bytes); }

std::string digest_hex(std::uint64_t digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[digest & 0xF];
    digest >>= 4;
  }
  return out;
}

}  // namespace avrgen
