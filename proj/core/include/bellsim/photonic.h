#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Two-photon polarization optics in second quantization. Modes are
// (spatial port, polarization) pairs; a two-photon state is a complex
// amplitude over unordered mode pairs, with doubly occupied modes stored
// against the normalized basis vector (a^dag)^2 |vac> / sqrt(2).
namespace bellsim {

using cplx = std::complex<double>;

enum class Pol : int { H = 0, V = 1 };

struct ModeLabel {
    int spatial = 0;
    Pol pol = Pol::H;
};

inline int mode_index(int spatial, Pol pol) { return 2 * spatial + static_cast<int>(pol); }
inline int mode_index(const ModeLabel& m) { return mode_index(m.spatial, m.pol); }
inline int mode_spatial(int idx) { return idx / 2; }
inline Pol mode_pol(int idx) { return static_cast<Pol>(idx % 2); }

// Unordered pair of mode indices, normalized so first <= second.
struct ModePair {
    int m1 = 0;
    int m2 = 0;
    ModePair() = default;
    ModePair(int a, int b) : m1(a < b ? a : b), m2(a < b ? b : a) {}
    bool bunched() const { return m1 == m2; }
    bool operator<(const ModePair& o) const {
        return m1 != o.m1 ? m1 < o.m1 : m2 < o.m2;
    }
    bool operator==(const ModePair& o) const { return m1 == o.m1 && m2 == o.m2; }
};

class TwoPhotonState {
  public:
    explicit TwoPhotonState(int mode_count) : modes_(mode_count) {
        if (mode_count < 2) throw std::invalid_argument("TwoPhotonState: need at least 2 modes");
    }

    int mode_count() const { return modes_; }

    void add(ModePair p, cplx amp) {
        check_pair(p);
        amps_[p] += amp;
    }
    void set(ModePair p, cplx amp) {
        check_pair(p);
        amps_[p] = amp;
    }
    cplx amplitude(ModePair p) const {
        auto it = amps_.find(p);
        return it == amps_.end() ? cplx(0, 0) : it->second;
    }
    const std::map<ModePair, cplx>& amplitudes() const { return amps_; }

    double norm2() const;
    void normalize();
    void prune(double eps = 1e-15);

  private:
    void check_pair(const ModePair& p) const {
        if (p.m1 < 0 || p.m2 >= modes_)
            throw std::out_of_range("TwoPhotonState: mode index out of range");
    }
    int modes_;
    std::map<ModePair, cplx> amps_;
};

// Transports creation operators through a mode unitary:
// a^dag_m -> sum_p U(p,m) a^dag_p. U must be square with dimension equal to
// the state's mode count; unitarity is checked to 1e-12.
TwoPhotonState evolve(const TwoPhotonState& in, const Eigen::MatrixXcd& u);

// Same transport without the unitarity check (used internally and in tests
// that deliberately feed non-unitary matrices).
TwoPhotonState evolve_unchecked(const TwoPhotonState& in, const Eigen::MatrixXcd& u);

bool is_unitary(const Eigen::MatrixXcd& u, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Bell states in the diagonal (|+>/|->) basis and product inputs.
// Photon 1 occupies spatial port 0, photon 2 spatial port 1.
// ---------------------------------------------------------------------------

enum class BellFamily : int { Phi = 0, Psi = 1 };
enum class BellSign : int { Plus = 0, Minus = 1 };

struct BellState {
    BellFamily family = BellFamily::Phi;
    BellSign sign = BellSign::Plus;
    bool operator==(const BellState& o) const { return family == o.family && sign == o.sign; }
};

inline constexpr std::array<std::pair<BellFamily, BellSign>, 4> kAllBellStates = {{
    {BellFamily::Phi, BellSign::Plus},
    {BellFamily::Phi, BellSign::Minus},
    {BellFamily::Psi, BellSign::Plus},
    {BellFamily::Psi, BellSign::Minus},
}};

std::string bell_name(BellState s);

// Single-photon polarization kets for product inputs.
enum class PolKet { H, V, Plus, Minus };

// Builds the input state in an `mode_count`-mode space (photons on spatial
// ports 0 and 1).
TwoPhotonState bell_input(BellState s, int mode_count = 8);
TwoPhotonState product_input(PolKet photon1, PolKet photon2, int mode_count = 8);

// ---------------------------------------------------------------------------
// The Bell measurement device: input wave plates, a polarizing beam splitter
// between ports 0 and 1, then a wave-plate + PBS analyzer on each output arm.
// Four on/off detectors sit on final spatial ports; which two Bell states the
// device identifies is selected by the input wave plates.
// ---------------------------------------------------------------------------

enum class TargetPair { PhiMinusPsiMinus, PhiPlusPsiPlus, PhiMinusPsiPlus, PhiPlusPsiMinus };

std::string target_name(TargetPair t);
// The two Bell states the device should identify / leave indistinguishable.
std::array<BellState, 2> identified_states(TargetPair t);
std::array<BellState, 2> confused_states(TargetPair t);

struct DetectorInfo {
    int index;        // 0..3
    int spatial;      // final spatial port the detector watches
    bool upper;       // true: analyzer on PBS output port 0, false: port 1
    Pol analyzed_pol; // polarization label of this analyzer output
};

struct BsNetwork {
    Eigen::MatrixXcd unitary;             // 8x8 over (4 spatial ports) x (H,V)
    TargetPair target;
    std::array<DetectorInfo, 4> detectors;
    int detector_of_spatial(int spatial) const;
};

BsNetwork build_bs_network(TargetPair target = TargetPair::PhiMinusPsiMinus);

// Custom input wave plates (2x2 Jones matrices in the H/V basis) in front of
// the standard analyzer; used by tests to build deliberately broken devices.
BsNetwork build_bs_network_with_plates(const Eigen::Matrix2cd& plate_port0,
                                       const Eigen::Matrix2cd& plate_port1);

// Set of fired detectors, as a 4-bit mask.
struct ClickPattern {
    std::uint8_t mask = 0;
    int count() const;
    bool has(int detector) const { return (mask >> detector) & 1; }
    std::vector<int> clicked() const;
    bool operator<(const ClickPattern& o) const { return mask < o.mask; }
    bool operator==(const ClickPattern& o) const { return mask == o.mask; }
};

// Probability of each click pattern for a state expressed in the device's
// output mode basis. On/off detectors: a doubly occupied port or two photons
// in one port's two polarization modes give a single click.
std::map<ClickPattern, double> click_distribution(const TwoPhotonState& out_state,
                                                  const BsNetwork& net);

struct PatternEntry {
    std::optional<BellState> label;      // identified state, or nullopt = failure
    std::array<double, 4> prob_given{};  // P(pattern | Bell input), order of kAllBellStates
};

struct InconsistentDevice : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BsOutcomeTable {
    TargetPair target;
    std::map<ClickPattern, PatternEntry> patterns;
    std::array<double, 4> success_given{};  // P(identified | Bell input)
    double average_success = 0.0;           // uniform average over the four inputs

    const PatternEntry& entry(ClickPattern p) const;
};

// Feeds the four diagonal-basis Bell states through the network and labels
// every reachable pattern. A pattern is labeled with a Bell state iff that
// state is the only one reaching it. Throws InconsistentDevice if a pattern
// is reachable from exactly one of the two states the device is supposed to
// leave indistinguishable.
BsOutcomeTable derive_bs_table(const BsNetwork& net);

enum class BsOutcomeKind { PhiMinus, PsiMinus, Fail };

struct BsOutcome {
    BsOutcomeKind kind = BsOutcomeKind::Fail;
    ClickPattern pattern;
};

std::string outcome_name(BsOutcomeKind k);

// Samples one measurement of `input` with the default (Phi-, Psi-) device.
// The table must come from a PhiMinusPsiMinus network.
BsOutcome simulate_bs(const TwoPhotonState& input, const BsNetwork& net,
                      const BsOutcomeTable& table, std::mt19937_64& rng);

}  // namespace bellsim
