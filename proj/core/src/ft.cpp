#include "bellsim/ft.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "bellsim/loss.h"
#include "bellsim/rng.h"
#include "bellsim/steane.h"

namespace bellsim {

ErrorRateVector level1_error_model(int n_photons, double eta) {
    if (n_photons < 1) throw std::invalid_argument("level1_error_model: n_photons >= 1");
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("level1_error_model: eta in [0,1]");
    ErrorRateVector r;
    r.memory_z = (1.0 - std::pow(1.0 - eta, n_photons)) / 2.0;
    r.gate_fail = 1.0 - gate_teleport_success_prob(n_photons, eta);
    r.x_rate = 0.0;
    r.z_rate = 0.0;
    r.depol_on_fail = true;
    return r;
}

int TelecorrectionCircuit::count(LocationType t) const {
    int n = 0;
    for (const auto& l : locations) n += l.type == t;
    return n;
}

double TelecorrectionCircuit::fraction(LocationType t) const {
    if (locations.empty()) return 0.0;
    return double(count(t)) / double(locations.size());
}

namespace {

constexpr int kD = 0, kA = 7, kB = 14, kV1 = 21, kV2 = 28, kF = 35, kS = 42;

// Verification chain supports: the three weight-4 checks per block plus the
// joint logical-pair check. The same sets serve both verification rounds.
const std::array<std::vector<int>, 7>& check_supports() {
    static const std::array<std::vector<int>, 7> supports = [] {
        std::array<std::vector<int>, 7> s;
        for (int r = 0; r < 3; ++r) {
            for (int j = 0; j < 7; ++j) {
                if ((steane::kChecks[r] >> j) & 1) {
                    s[r].push_back(kA + j);
                    s[3 + r].push_back(kB + j);
                }
            }
        }
        for (int j = 0; j < 3; ++j) s[6].push_back(kA + j);
        for (int j = 0; j < 3; ++j) s[6].push_back(kB + j);
        return s;
    }();
    return supports;
}

struct PrepEdge {
    int pivot;
    std::vector<int> targets;
};

// Bipartite graph-state wiring for the encoded Bell pair: pivots stay in the
// plus basis, targets get a trailing Hadamard.
const std::vector<PrepEdge>& prep_edges() {
    static const std::vector<PrepEdge> edges = {
        {kA + 0, {kA + 5, kA + 6, kB + 2, kB + 4, kB + 5}},
        {kA + 1, {kA + 4, kA + 6, kB + 2, kB + 4, kB + 5}},
        {kA + 2, {kA + 4, kA + 5, kB + 2, kB + 4, kB + 5}},
        {kA + 3, {kA + 4, kA + 5, kA + 6}},
        {kB + 3, {kB + 4, kB + 5, kB + 6}},
        {kB + 1, {kB + 2, kB + 5, kB + 6}},
        {kB + 0, {kB + 2, kB + 4, kB + 6}},
    };
    return edges;
}

const std::array<int, 7> kPrepTargets = {kA + 4, kA + 5, kA + 6,
                                         kB + 2, kB + 4, kB + 5, kB + 6};

}  // namespace

TelecorrectionCircuit default_telecorrection_circuit() {
    TelecorrectionCircuit c;
    c.n_qubits = 55;
    for (int i = 0; i < 7; ++i) c.output_qubits[i] = kB + i;
    auto& L = c.locations;

    auto mem = [&](int q, Stage s) { L.push_back({LocationType::Memory, q, -1, s}); };
    auto prep = [&](int q, Stage s) { L.push_back({LocationType::PlusPrep, q, -1, s}); };
    auto h = [&](int q, Stage s, int pair = -1) {
        Location l{LocationType::Hadamard, q, -1, s};
        l.pair = pair;
        L.push_back(l);
    };
    auto cz = [&](int a, int b, Stage s, int pair = -1) {
        Location l{LocationType::CZ, a, b, s};
        l.pair = pair;
        L.push_back(l);
    };
    auto xm_check = [&](int q, Stage s) {
        Location l{LocationType::XMeasure, q, -1, s};
        l.check = true;
        L.push_back(l);
    };
    auto xm_pair = [&](int q, int pair, char side) {
        Location l{LocationType::XMeasure, q, -1, Stage::Bm};
        l.pair = pair;
        l.side = side;
        L.push_back(l);
    };

    for (int q = kA; q < kA + 14; ++q) prep(q, Stage::Prep);
    for (int i = 0; i < 13; ++i) prep(kS + i, Stage::Spare);
    for (const auto& e : prep_edges())
        for (int t : e.targets) cz(e.pivot, t, Stage::Prep);
    for (int t : kPrepTargets) h(t, Stage::Prep);
    for (int i = 0; i < 7; ++i) mem(kD + i, Stage::Prep);

    for (int k = 0; k < 7; ++k) {
        prep(kV1 + k, Stage::Verify1);
        for (int q : check_supports()[k]) cz(kV1 + k, q, Stage::Verify1);
        mem(kV1 + k, Stage::Verify1);
        xm_check(kV1 + k, Stage::Verify1);
    }

    for (int q = kA; q < kA + 14; ++q) h(q, Stage::HLayer);

    for (int k = 0; k < 7; ++k) {
        prep(kV2 + k, Stage::Verify2);
        prep(kF + k, Stage::Verify2);
        for (int q : check_supports()[k]) cz(kV2 + k, q, Stage::Verify2);
        cz(kV2 + k, kF + k, Stage::Verify2);
        mem(kF + k, Stage::Verify2);
        xm_check(kV2 + k, Stage::Verify2);
        xm_check(kF + k, Stage::Verify2);
    }
    for (int i = 0; i < 7; ++i) mem(kB + i, Stage::Verify2);

    for (int i = 0; i < 7; ++i) {
        h(kA + i, Stage::Bm, i);
        cz(kD + i, kA + i, Stage::Bm, i);
    }
    for (int i = 0; i < 7; ++i) mem(kB + i, Stage::Bm);
    for (int i = 0; i < 7; ++i) {
        xm_pair(kD + i, i, 'a');
        xm_pair(kA + i, i, 'b');
    }
    for (int i = 0; i < 49; ++i) mem(kS + i % 13, Stage::Spare);
    return c;
}

namespace {

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Prep: return "prep";
        case Stage::Verify1: return "verify1";
        case Stage::HLayer: return "hlayer";
        case Stage::Verify2: return "verify2";
        case Stage::Bm: return "bm";
        case Stage::Spare: return "spare";
    }
    return "?";
}

const char* type_name(LocationType t) {
    switch (t) {
        case LocationType::Memory: return "mem";
        case LocationType::Hadamard: return "h";
        case LocationType::CZ: return "cz";
        case LocationType::PlusPrep: return "plusprep";
        case LocationType::XMeasure: return "xmeas";
    }
    return "?";
}

}  // namespace

std::string save_circuit(const TelecorrectionCircuit& c) {
    std::ostringstream out;
    out << "# telecorrection round: type qubit(s) [stage=..] [pair=..] [side=..] [check]\n";
    out << "qubits " << c.n_qubits << "\n";
    out << "output";
    for (int q : c.output_qubits) out << ' ' << q;
    out << "\n";
    for (const auto& l : c.locations) {
        out << type_name(l.type) << ' ' << l.q1;
        if (l.type == LocationType::CZ) out << ' ' << l.q2;
        out << " stage=" << stage_name(l.stage);
        if (l.pair >= 0) out << " pair=" << l.pair;
        if (l.side) out << " side=" << l.side;
        if (l.check) out << " check";
        out << "\n";
    }
    return out.str();
}

namespace {
void validate_circuit(const TelecorrectionCircuit& c);
}

TelecorrectionCircuit load_circuit(const std::string& text) {
    TelecorrectionCircuit c;
    c.n_qubits = 0;
    bool have_output = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw CircuitError("circuit line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "qubits") {
            if (!(ls >> c.n_qubits)) fail("qubits needs a count");
            continue;
        }
        if (word == "output") {
            for (int i = 0; i < 7; ++i)
                if (!(ls >> c.output_qubits[i])) fail("output needs 7 qubits");
            have_output = true;
            continue;
        }
        Location l;
        if (word == "mem") l.type = LocationType::Memory;
        else if (word == "h") l.type = LocationType::Hadamard;
        else if (word == "cz") l.type = LocationType::CZ;
        else if (word == "plusprep") l.type = LocationType::PlusPrep;
        else if (word == "xmeas") l.type = LocationType::XMeasure;
        else fail("unknown location type '" + word + "'");
        if (!(ls >> l.q1)) fail("missing qubit index");
        if (l.type == LocationType::CZ && !(ls >> l.q2)) fail("cz needs two qubits");
        std::string tag;
        while (ls >> tag) {
            if (tag == "check") {
                l.check = true;
            } else if (tag.rfind("stage=", 0) == 0) {
                std::string v = tag.substr(6);
                if (v == "prep") l.stage = Stage::Prep;
                else if (v == "verify1") l.stage = Stage::Verify1;
                else if (v == "hlayer") l.stage = Stage::HLayer;
                else if (v == "verify2") l.stage = Stage::Verify2;
                else if (v == "bm") l.stage = Stage::Bm;
                else if (v == "spare") l.stage = Stage::Spare;
                else fail("unknown stage '" + v + "'");
            } else if (tag.rfind("pair=", 0) == 0) {
                l.pair = std::atoi(tag.c_str() + 5);
            } else if (tag.rfind("side=", 0) == 0) {
                if (tag.size() != 6 || (tag[5] != 'a' && tag[5] != 'b'))
                    fail("side must be a or b");
                l.side = tag[5];
            } else {
                fail("unknown tag '" + tag + "'");
            }
        }
        c.locations.push_back(l);
    }
    for (const auto& l : c.locations) {
        int hi = std::max(l.q1, l.q2);
        if (hi >= c.n_qubits) c.n_qubits = hi + 1;
    }
    if (!have_output) throw CircuitError("circuit: missing output line");
    validate_circuit(c);
    return c;
}

namespace {

struct Plan {
    std::vector<size_t> once_rows;  // data-block memory, drawn outside the retry loop
    std::vector<size_t> loop_rows;  // preparation + verification, resampled on reject
    std::vector<size_t> bm_rows;
};

Plan analyze(const TelecorrectionCircuit& c) {
    if (c.n_qubits < 1 || c.n_qubits > 63)
        throw CircuitError("circuit needs 1..63 qubits");
    uint64_t data_mask = 0;
    int n_a = 0, n_b = 0;
    for (const auto& l : c.locations) {
        if (l.q1 < 0 || l.q1 >= c.n_qubits ||
            (l.type == LocationType::CZ && (l.q2 < 0 || l.q2 >= c.n_qubits)))
            throw CircuitError("qubit index out of range");
        if (l.type == LocationType::XMeasure && l.stage == Stage::Bm) {
            if (l.side != 'a' && l.side != 'b')
                throw CircuitError("bm measurement needs side=a|b");
            if (l.pair < 0 || l.pair > 6) throw CircuitError("bm measurement needs pair=0..6");
            if (l.side == 'a') {
                data_mask |= uint64_t(1) << l.q1;
                ++n_a;
            } else {
                ++n_b;
            }
        } else if (l.type == LocationType::XMeasure && !l.check) {
            throw CircuitError("non-bm measurements must be check rows");
        }
        if ((l.type == LocationType::Hadamard || l.type == LocationType::CZ) &&
            l.stage == Stage::Bm && (l.pair < 0 || l.pair > 6))
            throw CircuitError("bm-stage gates need pair=0..6");
    }
    if (n_a != 7 || n_b != 7) throw CircuitError("need 7 side=a and 7 side=b measurements");
    for (int q : c.output_qubits)
        if (q < 0 || q >= c.n_qubits) throw CircuitError("output qubit out of range");

    Plan p;
    for (size_t i = 0; i < c.locations.size(); ++i) {
        const auto& l = c.locations[i];
        if (l.stage == Stage::Bm)
            p.bm_rows.push_back(i);
        else if (l.type == LocationType::Memory && ((data_mask >> l.q1) & 1))
            p.once_rows.push_back(i);
        else
            p.loop_rows.push_back(i);
    }
    return p;
}

void validate_circuit(const TelecorrectionCircuit& c) { analyze(c); }

struct Frame {
    uint64_t x = 0, z = 0;
};

inline void frame_h(Frame& f, int q) {
    uint64_t xb = (f.x >> q) & 1, zb = (f.z >> q) & 1;
    if (xb != zb) {
        f.x ^= uint64_t(1) << q;
        f.z ^= uint64_t(1) << q;
    }
}

inline void frame_cz(Frame& f, int a, int b) {
    f.z ^= ((f.x >> b) & 1) << a;
    f.z ^= ((f.x >> a) & 1) << b;
}

struct TrialOutcome {
    bool herald = false;
    bool rejected = false;  // only in single-shot fault mode
    bool lx = false;
    bool lz = false;
    uint32_t rejects = 0;
};

TrialOutcome run_trial(const TelecorrectionCircuit& c, const Plan& p,
                       const ErrorRateVector& r, std::mt19937_64& rng,
                       const FaultSpec* fault) {
    std::uniform_real_distribution<double> u01;
    auto chance = [&](double prob) {
        if (prob <= 0.0) return false;
        if (prob >= 1.0) return true;
        return u01(rng) < prob;
    };
    Frame f;
    bool fault_armed = fault != nullptr;
    auto bit = [](int q) { return uint64_t(1) << q; };
    auto inject = [&](size_t idx) {
        if (!fault_armed || fault->location != idx) return;
        fault_armed = false;
        const Location& l = c.locations[idx];
        if (fault->pauli1 & 1) f.x ^= bit(l.q1);
        if (fault->pauli1 & 2) f.z ^= bit(l.q1);
        if (l.q2 >= 0) {
            if (fault->pauli2 & 1) f.x ^= bit(l.q2);
            if (fault->pauli2 & 2) f.z ^= bit(l.q2);
        }
    };
    auto gate_errors = [&](int q) {
        if (chance(r.x_rate)) f.x ^= bit(q);
        if (chance(r.z_rate)) f.z ^= bit(q);
    };

    TrialOutcome out;
    for (size_t idx : p.once_rows) {
        if (chance(r.memory_z)) f.z ^= bit(c.locations[idx].q1);
        inject(idx);
    }

    // Heralded failures in these stages consume fresh resources and retry, so
    // they are conditioned away; only silent-error detections loop.
    bool reject = true;
    uint32_t guard = 0;
    while (reject) {
        reject = false;
        for (size_t idx : p.loop_rows) {
            const Location& l = c.locations[idx];
            switch (l.type) {
                case LocationType::PlusPrep:
                    f.x &= ~bit(l.q1);
                    f.z &= ~bit(l.q1);
                    inject(idx);
                    break;
                case LocationType::Memory:
                    if (chance(r.memory_z)) f.z ^= bit(l.q1);
                    inject(idx);
                    break;
                case LocationType::Hadamard:
                    frame_h(f, l.q1);
                    gate_errors(l.q1);
                    inject(idx);
                    break;
                case LocationType::CZ:
                    frame_cz(f, l.q1, l.q2);
                    gate_errors(l.q1);
                    gate_errors(l.q2);
                    inject(idx);
                    break;
                case LocationType::XMeasure:
                    inject(idx);
                    if ((f.z >> l.q1) & 1) reject = true;
                    break;
            }
            if (reject) break;
        }
        if (reject) {
            ++out.rejects;
            if (fault) {
                out.rejected = true;
                return out;
            }
            if (++guard > 100000)
                throw std::runtime_error("verification reject loop did not terminate");
        }
    }

    uint8_t erased = 0, ea = 0, eb = 0;
    for (size_t idx : p.bm_rows) {
        const Location& l = c.locations[idx];
        bool skip = l.pair >= 0 && ((erased >> l.pair) & 1);
        switch (l.type) {
            case LocationType::Memory:
                if (chance(r.memory_z)) f.z ^= bit(c.locations[idx].q1);
                inject(idx);
                break;
            case LocationType::Hadamard:
            case LocationType::CZ: {
                if (skip) {
                    if (fault_armed && fault->location == idx) fault_armed = false;
                    break;
                }
                bool herald = chance(r.gate_fail);
                if (fault_armed && fault->location == idx && fault->herald) {
                    fault_armed = false;
                    herald = true;
                }
                if (herald) {
                    erased |= uint8_t(1) << l.pair;
                    break;
                }
                if (l.type == LocationType::Hadamard) {
                    frame_h(f, l.q1);
                    gate_errors(l.q1);
                } else {
                    frame_cz(f, l.q1, l.q2);
                    gate_errors(l.q1);
                    gate_errors(l.q2);
                }
                inject(idx);
                break;
            }
            case LocationType::XMeasure: {
                if (skip) {
                    if (fault_armed && fault->location == idx) fault_armed = false;
                    break;
                }
                inject(idx);
                uint8_t v = uint8_t((f.z >> l.q1) & 1);
                if (l.side == 'a')
                    ea |= v << l.pair;
                else
                    eb |= v << l.pair;
                break;
            }
            case LocationType::PlusPrep:
                f.x &= ~bit(l.q1);
                f.z &= ~bit(l.q1);
                inject(idx);
                break;
        }
    }

    // Erased outcomes never existed; the state marginal there is an unbiased
    // coin for decoding purposes.
    for (int i = 0; i < 7; ++i) {
        if ((erased >> i) & 1) {
            if (chance(0.5)) ea |= uint8_t(1) << i;
            if (chance(0.5)) eb |= uint8_t(1) << i;
        }
    }

    const auto& da = steane::erasure_decode(erased, steane::syndrome(ea));
    const auto& db = steane::erasure_decode(erased, steane::syndrome(eb));
    out.herald = da.ambiguous || db.ambiguous;
    bool wrong_a = steane::parity(uint8_t((ea ^ da.correction) & steane::kLogicalMask));
    bool wrong_b = steane::parity(uint8_t((eb ^ db.correction) & steane::kLogicalMask));

    uint8_t bx = 0, bz = 0;
    for (int j = 0; j < 7; ++j) {
        int q = c.output_qubits[j];
        bx |= uint8_t((f.x >> q) & 1) << j;
        bz |= uint8_t((f.z >> q) & 1) << j;
    }
    out.lz = steane::logical_class(bz) ^ wrong_a;
    out.lx = steane::logical_class(bx) ^ wrong_b;
    return out;
}

void check_rates(const ErrorRateVector& r) {
    for (double v : {r.memory_z, r.gate_fail, r.x_rate, r.z_rate})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("error rates must lie in [0,1]");
}

}  // namespace

RoundResult simulate_round(const ErrorRateVector& rates_in,
                           const TelecorrectionCircuit& circuit, uint64_t trials,
                           uint64_t seed) {
    check_rates(rates_in);
    if (trials == 0) throw std::invalid_argument("simulate_round: trials >= 1");
    RoundResult res;
    res.trials = trials;
    // Far above threshold the verification almost never accepts; report the
    // divergence without burning time in the reject loop.
    double worst = std::max({rates_in.memory_z, rates_in.x_rate, rates_in.z_rate});
    if (worst > 0.05) {
        res.rates = {0.5, 0.5, 0.5, 0.5, rates_in.depol_on_fail};
        return res;
    }
    Plan plan = analyze(circuit);

    struct Acc {
        uint64_t herald = 0, x = 0, z = 0, rejects = 0;
        void merge(const Acc& o) {
            herald += o.herald;
            x += o.x;
            z += o.z;
            rejects += o.rejects;
        }
    };
    Acc total = run_trials<Acc>(trials, [&](uint64_t t, Acc& acc) {
        auto rng = trial_rng(seed, t, 0xF7);
        TrialOutcome o = run_trial(circuit, plan, rates_in, rng, nullptr);
        acc.herald += o.herald;
        if (!o.herald) {
            acc.x += o.lx;
            acc.z += o.lz;
        }
        acc.rejects += o.rejects;
    });

    uint64_t ok = trials - total.herald;
    ErrorRateVector out;
    out.gate_fail = double(total.herald) / double(trials);
    out.x_rate = ok ? double(total.x) / double(ok) : 0.5;
    out.z_rate = ok ? double(total.z) / double(ok) : 0.5;
    out.memory_z = out.z_rate;
    out.depol_on_fail = rates_in.depol_on_fail;
    res.rates = out;
    res.reject_rate = double(total.rejects) / double(trials);
    return res;
}

std::vector<FaultSpec> enumerate_single_faults(const TelecorrectionCircuit& c) {
    std::vector<FaultSpec> out;
    for (size_t i = 0; i < c.locations.size(); ++i) {
        const auto& l = c.locations[i];
        switch (l.type) {
            case LocationType::Memory:
            case LocationType::PlusPrep:
            case LocationType::Hadamard:
                for (uint8_t p = 1; p <= 3; ++p) out.push_back({i, p, 0, false});
                break;
            case LocationType::CZ:
                for (uint8_t p1 = 0; p1 <= 3; ++p1)
                    for (uint8_t p2 = 0; p2 <= 3; ++p2)
                        if (p1 || p2) out.push_back({i, p1, p2, false});
                break;
            case LocationType::XMeasure:
                out.push_back({i, 2, 0, false});
                break;
        }
        if (l.stage == Stage::Bm &&
            (l.type == LocationType::Hadamard || l.type == LocationType::CZ))
            out.push_back({i, 0, 0, true});
    }
    return out;
}

FaultOutcome inject_single_fault(const TelecorrectionCircuit& c, const FaultSpec& f,
                                 uint64_t seed) {
    if (f.location >= c.locations.size())
        throw std::out_of_range("fault location out of range");
    Plan plan = analyze(c);
    ErrorRateVector zero;
    zero.depol_on_fail = true;
    auto rng = trial_rng(seed, 0, 0xFA);
    TrialOutcome o = run_trial(c, plan, zero, rng, &f);
    FaultOutcome r;
    r.rejected = o.rejected;
    r.heralded = o.herald;
    r.logical_x = o.lx && !o.rejected;
    r.logical_z = o.lz && !o.rejected;
    return r;
}

double LevelRates::scalar() const { return std::max({x_rate, z_rate, gate_fail}); }

std::vector<LevelRates> level_curve(int n_photons, double eta, int levels,
                                    const TelecorrectionCircuit& circuit,
                                    uint64_t trials, uint64_t seed) {
    if (levels < 2) throw std::invalid_argument("level_curve: levels >= 2");
    std::vector<LevelRates> curve;
    ErrorRateVector rates = level1_error_model(n_photons, eta);
    curve.push_back({rates.x_rate, std::max(rates.z_rate, rates.memory_z), rates.gate_fail});
    for (int k = 2; k <= levels; ++k) {
        rates = simulate_round(rates, circuit, trials, mix_seed(seed, 0x1EE700 + k)).rates;
        curve.push_back({rates.x_rate, rates.z_rate, rates.gate_fail});
    }
    return curve;
}

bool is_contracting(const std::vector<LevelRates>& curve, uint64_t trials) {
    // Componentwise: the Pauli rates and the herald rate must each avoid
    // statistically significant growth at every step. A max-norm test would
    // let a growing Z rate hide under the still-falling herald rate. The
    // floor absorbs Poisson pops of a component resting near zero (a rate
    // of 10 counts against a 10-count floor is a coin flip, so give 2x).
    double floor = 20.0 / double(trials);
    auto ok_step = [&](double cur, double prev) {
        double allow = prev + 3.0 * std::sqrt(std::max(prev, 0.0) / double(trials));
        return cur <= std::max(allow, floor);
    };
    for (size_t k = 1; k < curve.size(); ++k) {
        if (!ok_step(curve[k].x_rate, curve[k - 1].x_rate)) return false;
        if (!ok_step(curve[k].z_rate, curve[k - 1].z_rate)) return false;
        if (!ok_step(curve[k].gate_fail, curve[k - 1].gate_fail)) return false;
    }
    return true;
}

ThresholdResult find_threshold(int n_photons, int levels, uint64_t trials,
                               uint64_t seed) {
    return find_threshold(n_photons, levels, trials, seed,
                          default_telecorrection_circuit());
}

ThresholdResult find_threshold(int n_photons, int levels, uint64_t trials,
                               uint64_t seed, const TelecorrectionCircuit& circuit) {
    if (levels < 3) throw std::invalid_argument("find_threshold: levels >= 3");
    ThresholdResult res;
    res.n_photons = n_photons;
    res.levels_checked = levels;
    res.trials_per_level = trials;

    auto probe = [&](double eta) {
        return level_curve(n_photons, eta, levels, circuit, trials, seed);
    };

    double lo = 1e-5;
    auto curve_lo = probe(lo);
    if (!is_contracting(curve_lo, trials))
        throw NoContraction("logical rates grow even at eta=1e-5");

    double hi = 2e-3;
    for (;;) {
        auto curve = probe(hi);
        if (!is_contracting(curve, trials)) break;
        lo = hi;
        curve_lo = std::move(curve);
        hi *= 2.0;
        if (hi > 0.5) {
            res.eta_threshold = lo;
            res.contraction_curve = curve_lo;
            return res;
        }
    }
    while (hi - lo > kEtaBisectTol) {
        double mid = 0.5 * (lo + hi);
        auto curve = probe(mid);
        if (is_contracting(curve, trials)) {
            lo = mid;
            curve_lo = std::move(curve);
        } else {
            hi = mid;
        }
    }
    res.eta_threshold = lo;
    res.contraction_curve = curve_lo;
    return res;
}

}  // namespace bellsim
