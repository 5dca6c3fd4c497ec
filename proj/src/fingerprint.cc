#include "smipe/fingerprint.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "smipe/error.h"
#include "smipe/random.h"

namespace smipe {

namespace {

bool valid_size(std::size_t nbits) {
  return nbits >= 64 && std::has_single_bit(nbits);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::int64_t element_code(const Atom& a) {
  // Symbols are at most three bytes; pack them so distinct symbols differ.
  std::int64_t code = 0;
  for (char c : a.element) code = (code << 8) | static_cast<unsigned char>(c);
  return code;
}

}  // namespace

Fingerprint::Fingerprint(std::size_t nbits) : nbits_(nbits) {
  if (!valid_size(nbits)) {
    throw std::invalid_argument("fingerprint size must be a power of two >= 64, got " +
                                std::to_string(nbits));
  }
  words_.assign(nbits / 64, 0);
}

Fingerprint Fingerprint::from_bits(std::size_t nbits,
                                   std::span<const std::size_t> bits) {
  Fingerprint fp(nbits);
  for (auto b : bits) {
    if (b >= nbits) throw std::invalid_argument("bit index out of range");
    fp.set(b);
  }
  return fp;
}

std::size_t Fingerprint::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> Fingerprint::on_bits() const {
  std::vector<std::size_t> bits;
  for (std::size_t i = 0; i < nbits_; ++i) {
    if (test(i)) bits.push_back(i);
  }
  return bits;
}

std::string Fingerprint::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(nbits_ / 4);
  for (std::size_t byte = 0; byte < nbits_ / 8; ++byte) {
    const auto v = static_cast<unsigned>((words_[byte / 8] >> (8 * (byte % 8))) & 0xff);
    out += kDigits[v >> 4];
    out += kDigits[v & 0xf];
  }
  return out;
}

Fingerprint Fingerprint::from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0 || !valid_size(hex.size() * 4)) {
    throw FormatError("fingerprint hex has invalid length " + std::to_string(hex.size()));
  }
  Fingerprint fp(hex.size() * 4);
  for (std::size_t byte = 0; byte < hex.size() / 2; ++byte) {
    const int hi = hex_value(hex[2 * byte]);
    const int lo = hex_value(hex[2 * byte + 1]);
    if (hi < 0 || lo < 0) throw FormatError("fingerprint hex has a non-hex digit");
    fp.words_[byte / 8] |= static_cast<std::uint64_t>(hi * 16 + lo) << (8 * (byte % 8));
  }
  return fp;
}

std::uint64_t stable_hash(std::span<const std::int64_t> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto v : values) {
    const auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (u >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return mix64(h);
}

std::vector<std::vector<std::uint64_t>> environment_codes(const Molecule& m,
                                                          int radius) {
  if (radius < 0) throw std::invalid_argument("radius must be >= 0");
  const int n = static_cast<int>(m.atom_count());
  const auto in_ring = ring_atoms(m);

  std::vector<std::vector<std::uint64_t>> codes;
  std::vector<std::uint64_t> round(n);
  for (int i = 0; i < n; ++i) {
    const Atom& a = m.atom(i);
    const std::int64_t fields[] = {element_code(a),
                                   a.charge,
                                   static_cast<std::int64_t>(m.degree(i)),
                                   hydrogen_count(m, i),
                                   a.aromatic ? 1 : 0,
                                   in_ring[i] ? 1 : 0};
    round[i] = stable_hash(fields);
  }
  codes.push_back(round);

  for (int r = 1; r <= radius; ++r) {
    const auto& prev = codes.back();
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<std::int64_t, std::int64_t>> env;
      for (int b : m.incident_bonds(i)) {
        const Bond& bond = m.bond(b);
        env.emplace_back(static_cast<std::int64_t>(bond.order),
                         static_cast<std::int64_t>(prev[bond.other(i)]));
      }
      std::sort(env.begin(), env.end());
      std::vector<std::int64_t> fields = {r, static_cast<std::int64_t>(prev[i])};
      for (const auto& [order, code] : env) {
        fields.push_back(order);
        fields.push_back(code);
      }
      round[i] = stable_hash(fields);
    }
    codes.push_back(round);
  }
  return codes;
}

Fingerprint morgan_fingerprint(const Molecule& m, int radius, std::size_t nbits) {
  Fingerprint fp(nbits);
  for (const auto& round : environment_codes(m, radius)) {
    for (auto code : round) fp.set(code & (nbits - 1));
  }
  return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.nbits() != b.nbits()) {
    throw std::invalid_argument("fingerprint sizes differ: " + std::to_string(a.nbits()) +
                                " vs " + std::to_string(b.nbits()));
  }
  std::size_t both = 0;
  std::size_t either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
    either += static_cast<std::size_t>(std::popcount(a.words()[i] | b.words()[i]));
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace smipe
