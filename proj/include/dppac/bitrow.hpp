#pragma once
// Fixed-width dynamic bitset used for concept truth tables and point masks.
// Lexicographic order and equality compare the bit string "b_0 b_1 ...", the
// same string stored in serialized form, so table order is stable everywhere.

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>
#include <stdexcept>
#include <functional>

namespace dppac {

struct BitRow {
    std::size_t nbits = 0;
    std::vector<std::uint64_t> w;

    BitRow() = default;
    explicit BitRow(std::size_t n) : nbits(n), w((n + 63) / 64, 0) {}

    static BitRow from_string(const std::string& s) {
        BitRow r(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') r.set(i, true);
            else if (s[i] != '0') throw std::invalid_argument("BitRow: bad bit char");
        }
        return r;
    }

    bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        std::uint64_t m = 1ull << (i & 63);
        if (v) w[i >> 6] |= m; else w[i >> 6] &= ~m;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }

    std::string to_string() const {
        std::string s(nbits, '0');
        for (std::size_t i = 0; i < nbits; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    BitRow operator^(const BitRow& o) const {
        BitRow r(nbits);
        for (std::size_t k = 0; k < w.size(); ++k) r.w[k] = w[k] ^ o.w[k];
        return r;
    }
    BitRow operator&(const BitRow& o) const {
        BitRow r(nbits);
        for (std::size_t k = 0; k < w.size(); ++k) r.w[k] = w[k] & o.w[k];
        return r;
    }

    friend bool operator==(const BitRow& a, const BitRow& b) {
        return a.nbits == b.nbits && a.w == b.w;
    }
    // Lexicographic on the bit string; usable as a map key.
    friend bool operator<(const BitRow& a, const BitRow& b) {
        std::size_t n = a.nbits < b.nbits ? a.nbits : b.nbits;
        for (std::size_t i = 0; i < n; ++i) {
            bool x = a.test(i), y = b.test(i);
            if (x != y) return y;
        }
        return a.nbits < b.nbits;
    }
};

struct BitRowHash {
    std::size_t operator()(const BitRow& r) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ r.nbits;
        for (auto x : r.w) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace dppac
