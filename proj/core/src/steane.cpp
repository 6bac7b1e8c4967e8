#include "bellsim/steane.h"

#include <bit>
#include <stdexcept>
#include <vector>

namespace bellsim {
namespace steane {

bool parity(uint8_t v) { return std::popcount(v) & 1; }

int syndrome(uint8_t v) {
    int s = 0;
    for (int r = 0; r < 3; ++r)
        if (parity(uint8_t(v & kChecks[r]))) s |= 1 << r;
    return s;
}

uint8_t weight1_correction(int s) {
    if (s < 0 || s > 7) throw std::out_of_range("syndrome out of range");
    return s == 0 ? 0 : uint8_t(1) << (s - 1);
}

bool logical_class(uint8_t v) {
    return parity(uint8_t((v ^ weight1_correction(syndrome(v))) & kLogicalMask));
}

const std::array<uint8_t, 16>& zero_syndrome_vectors() {
    static const std::array<uint8_t, 16> table = [] {
        std::array<uint8_t, 16> t{};
        size_t k = 0;
        for (int v = 0; v < 128; ++v)
            if (syndrome(uint8_t(v)) == 0) t[k++] = uint8_t(v);
        if (k != 16) throw std::logic_error("check table broken");
        return t;
    }();
    return table;
}

namespace {

std::array<ErasureDecision, 128 * 8> build_erasure_table() {
    std::array<ErasureDecision, 128 * 8> table{};
    const auto& code = zero_syndrome_vectors();
    for (int e = 0; e < 128; ++e) {
        for (int s = 0; s < 8; ++s) {
            uint8_t base = weight1_correction(s);
            int best = 8;
            ErasureDecision d;
            bool first = true;
            for (uint8_t c : code) {
                uint8_t cand = base ^ c;
                int cost = std::popcount(uint8_t(cand & ~e));
                if (cost > best) continue;
                bool cls = parity(uint8_t(cand & kLogicalMask));
                if (cost < best) {
                    best = cost;
                    d.correction = cand;
                    d.ambiguous = false;
                    first = false;
                } else if (!first && cls != parity(uint8_t(d.correction & kLogicalMask))) {
                    d.ambiguous = true;
                }
            }
            table[size_t(e) * 8 + s] = d;
        }
    }
    return table;
}

}  // namespace

const ErasureDecision& erasure_decode(uint8_t erased_mask, int s) {
    static const auto table = build_erasure_table();
    if (erased_mask > 127 || s < 0 || s > 7)
        throw std::out_of_range("erasure_decode arguments");
    return table[size_t(erased_mask) * 8 + s];
}

}  // namespace steane
}  // namespace bellsim
