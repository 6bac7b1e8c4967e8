#pragma once
#include <array>
#include <cstdint>

// Seven-qubit CSS code tables shared by the fault-tolerance simulator: parity
// checks, min-weight decoding, and erasure-aware decoding of transversal
// measurement outcomes.
namespace bellsim {
namespace steane {

inline constexpr int kN = 7;
// Check r covers positions j with bit r of (j+1) set; identical for X and Z.
inline constexpr std::array<uint8_t, 3> kChecks{0x55, 0x66, 0x78};
// Support of both logical operators.
inline constexpr uint8_t kLogicalMask = 0x07;

int syndrome(uint8_t v);
uint8_t weight1_correction(int s);  // unique weight<=1 vector with syndrome s
bool parity(uint8_t v);
// Logical class of an error vector after min-weight correction.
bool logical_class(uint8_t v);
// The 16 vectors with zero syndrome (stabilizer + logical representatives).
const std::array<uint8_t, 16>& zero_syndrome_vectors();

struct ErasureDecision {
    bool ambiguous = false;  // min-cost candidates disagree on the logical class
    uint8_t correction = 0;
};

// Decoding decision for syndrome s when the positions in erased_mask carry no
// information (caller zero-fills them); cost counts support outside the
// erasures. Backed by a precomputed [128][8] table.
const ErasureDecision& erasure_decode(uint8_t erased_mask, int s);

}  // namespace steane
}  // namespace bellsim
