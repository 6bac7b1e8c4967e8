#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

#include "bellsim/ft.h"
#include "bellsim/protocols.h"
#include "bellsim/steane.h"

using namespace bellsim;

namespace {

// Independent GF(2) stabilizer tracker over the 14 block qubits (A = 0..6,
// B = 7..13). Generators start as single-qubit X after |+> preparation.
struct PauliVec {
    std::uint32_t x = 0, z = 0;
};

struct StabGroup {
    std::vector<PauliVec> gens;

    static StabGroup plus_state() {
        StabGroup g;
        for (int i = 0; i < 14; ++i) g.gens.push_back({1u << i, 0});
        return g;
    }
    void apply_h(int q) {
        for (auto& p : gens) {
            bool px = (p.x >> q) & 1, pz = (p.z >> q) & 1;
            p.x ^= (std::uint32_t(px ^ pz)) << q;
            p.z ^= (std::uint32_t(px ^ pz)) << q;
        }
    }
    void apply_cz(int a, int b) {
        for (auto& p : gens) {
            if ((p.x >> a) & 1) p.z ^= 1u << b;
            if ((p.x >> b) & 1) p.z ^= 1u << a;
        }
    }
    // Gaussian elimination over the 28-bit symplectic vectors.
    bool contains(PauliVec target) const {
        std::vector<std::uint64_t> rows;
        for (const auto& p : gens) rows.push_back((std::uint64_t(p.x) << 28) | p.z);
        std::uint64_t t = (std::uint64_t(target.x) << 28) | target.z;
        for (int bit = 55; bit >= 0; --bit) {
            std::uint64_t mask = 1ull << bit;
            std::size_t pivot = rows.size();
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (rows[i] & mask) {
                    pivot = i;
                    break;
                }
            if (pivot == rows.size()) continue;
            std::uint64_t pr = rows[pivot];
            rows.erase(rows.begin() + pivot);
            if (t & mask) t ^= pr;
            for (auto& r : rows)
                if (r & mask) r ^= pr;
        }
        return t == 0;
    }
};

// Maps circuit qubit index to the 14-qubit block space, or -1.
int block_index(const TelecorrectionCircuit& c, int q) {
    int a0 = c.output_qubits[0] - 7;  // A block sits right before the output block
    if (q >= a0 && q < a0 + 14) return q - a0;
    return -1;
}

constexpr double kZ1 = 0.0019970019995;  // (1 - 0.999^4) / 2
}  // namespace

TEST_CASE("level-1 error model") {
    auto r = level1_error_model(4, 1e-3);
    CHECK(r.memory_z == doctest::Approx(kZ1).epsilon(1e-9));
    CHECK(r.gate_fail == doctest::Approx(std::pow(0.5005, 4)).epsilon(1e-12));
    CHECK(r.x_rate == 0.0);
    CHECK(r.z_rate == 0.0);
    CHECK(r.depol_on_fail);
    auto z = level1_error_model(4, 0.0);
    CHECK(z.memory_z == 0.0);
    CHECK(z.gate_fail == doctest::Approx(0.0625).epsilon(1e-12));  // 2^-4
}

TEST_CASE("default circuit shape") {
    auto c = default_telecorrection_circuit();
    CHECK(c.n_qubits == 55);
    CHECK(c.locations.size() == 296);
    // Location-type mix matches the advertised fractions of the reference
    // correction workload.
    CHECK(std::abs(c.fraction(LocationType::Memory) - kCircuitFractions.memory) <= 0.02);
    CHECK(std::abs(c.fraction(LocationType::Hadamard) - kCircuitFractions.hadamard) <=
          0.02);
    CHECK(std::abs(c.fraction(LocationType::CZ) - kCircuitFractions.cz) <= 0.02);
    CHECK(std::abs(c.fraction(LocationType::PlusPrep) - kCircuitFractions.plus_prep) <=
          0.02);
    CHECK(std::abs(c.fraction(LocationType::XMeasure) - kCircuitFractions.x_measure) <=
          0.02);
}

TEST_CASE("preparation stage builds the encoded Bell pair") {
    auto c = default_telecorrection_circuit();
    auto g = StabGroup::plus_state();
    for (const auto& loc : c.locations) {
        if (loc.stage != Stage::Prep) continue;
        int a = block_index(c, loc.q1);
        if (loc.type == LocationType::Hadamard) {
            REQUIRE(a >= 0);
            g.apply_h(a);
        } else if (loc.type == LocationType::CZ) {
            int b = block_index(c, loc.q2);
            REQUIRE(a >= 0);
            REQUIRE(b >= 0);
            g.apply_cz(a, b);
        }
    }
    // The stabilizer group of the Bell pair of code blocks: both codes'
    // X and Z checks, plus the joint logical XX and ZZ.
    for (std::uint32_t chk : steane::kChecks) {
        CHECK(g.contains({chk, 0}));                     // X check on A
        CHECK(g.contains({chk << 7, 0}));                // X check on B
        CHECK(g.contains({0, chk}));                     // Z check on A
        CHECK(g.contains({0, chk << 7}));                // Z check on B
    }
    std::uint32_t lg = steane::kLogicalMask;
    CHECK(g.contains({lg | (lg << 7), 0}));              // X_L X_L
    CHECK(g.contains({0, lg | (lg << 7)}));              // Z_L Z_L
    // Anti-sanity: a bare logical on one block is not a stabilizer.
    CHECK(!g.contains({lg, 0}));
    CHECK(!g.contains({0, lg << 7}));
}

TEST_CASE("circuit text round-trip") {
    auto c = default_telecorrection_circuit();
    auto text = save_circuit(c);
    auto c2 = load_circuit(text);
    CHECK(save_circuit(c2) == text);
    CHECK(c2.n_qubits == c.n_qubits);
    CHECK(c2.locations.size() == c.locations.size());
    CHECK(c2.output_qubits == c.output_qubits);

    // The reloaded circuit drives the identical simulation.
    ErrorRateVector in;
    in.memory_z = 2e-3;
    in.gate_fail = 0.06;
    in.z_rate = 1e-3;
    auto r1 = simulate_round(in, c, 4000, 99);
    auto r2 = simulate_round(in, c2, 4000, 99);
    CHECK(r1.rates.z_rate == r2.rates.z_rate);
    CHECK(r1.rates.x_rate == r2.rates.x_rate);
    CHECK(r1.reject_rate == r2.reject_rate);
}

TEST_CASE("malformed circuit text is rejected") {
    CHECK_THROWS_AS(load_circuit("qubits 5\nfrobnicate 1 stage=prep\n"), CircuitError);
    CHECK_THROWS_AS(load_circuit("qubits 5\n"), CircuitError);  // no output line
    // Bell-measurement gates need a pair index.
    CHECK_THROWS_AS(load_circuit("qubits 8\noutput 0 1 2 3 4 5 6\n"
                                 "h 0 stage=bm\n"),
                    CircuitError);
    // Measurements outside the Bell stage must be checks.
    CHECK_THROWS_AS(load_circuit("qubits 8\noutput 0 1 2 3 4 5 6\n"
                                 "xmeasure 7 stage=prep\n"),
                    CircuitError);
}

TEST_CASE("zero noise is a fixed point") {
    auto c = default_telecorrection_circuit();
    ErrorRateVector zero;
    auto r = simulate_round(zero, c, 2000, 7);
    CHECK(r.rates.memory_z == 0.0);
    CHECK(r.rates.gate_fail == 0.0);
    CHECK(r.rates.x_rate == 0.0);
    CHECK(r.rates.z_rate == 0.0);
    CHECK(r.reject_rate == 0.0);
}

TEST_CASE("every single fault is corrected, rejected or heralded") {
    auto c = default_telecorrection_circuit();
    auto faults = enumerate_single_faults(c);
    // 84 mem * 3 + 48 prep * 3 + 28 h * 3 + 101 cz * 15 + 35 meas + 14 heralds
    CHECK(faults.size() == 2044);
    for (std::uint64_t seed : {1ull, 2ull}) {
        int bad = 0, rejected = 0, heralded = 0;
        for (const auto& f : faults) {
            auto out = inject_single_fault(c, f, seed);
            if (!out.harmless()) bad++;
            if (out.rejected) rejected++;
            if (out.heralded) heralded++;
        }
        CHECK(bad == 0);
        CHECK(rejected > 0);  // verification is actually exercised
    }
}

TEST_CASE("rates far above threshold are reported as divergent") {
    auto c = default_telecorrection_circuit();
    auto in = level1_error_model(4, 0.05);
    CHECK(in.memory_z > 0.05);  // beyond the saturation clip
    auto r = simulate_round(in, c, 1000, 3);
    CHECK(r.rates.z_rate >= 0.5);
    CHECK(r.rates.z_rate > in.z_rate);
}

TEST_CASE("contraction below threshold, growth above") {
    auto c = default_telecorrection_circuit();
    auto low = level_curve(4, 4e-4, 3, c, 20000, 11);
    REQUIRE(low.size() == 3);
    CHECK(is_contracting(low, 20000));
    CHECK(low[1].scalar() < low[0].scalar());

    auto high = level_curve(4, 4e-3, 3, c, 20000, 11);
    CHECK(!is_contracting(high, 20000));
}

TEST_CASE("contraction test tolerates the monte carlo floor") {
    std::vector<LevelRates> curve{{0, 1e-3, 2e-2}, {0, 1e-4, 1e-3}, {0, 2e-4, 2e-4}};
    // Level 3 z ticks up but sits at the counting floor for 10k trials.
    CHECK(is_contracting(curve, 10000));
    std::vector<LevelRates> diverging{{0, 1e-3, 2e-2}, {0, 5e-3, 1e-3}};
    CHECK(!is_contracting(diverging, 10000));
}

TEST_CASE("round simulation is reproducible and worker independent") {
    auto c = default_telecorrection_circuit();
    auto in = level1_error_model(4, 1e-3);
    auto a = simulate_round(in, c, 20000, 5);
    auto b = simulate_round(in, c, 20000, 5);
    CHECK(a.rates.z_rate == b.rates.z_rate);
    CHECK(a.rates.x_rate == b.rates.x_rate);
    CHECK(a.rates.gate_fail == b.rates.gate_fail);

    setenv("BELLSIM_THREADS", "3", 1);
    auto c3 = simulate_round(in, c, 20000, 5);
    setenv("BELLSIM_THREADS", "1", 1);
    auto c1 = simulate_round(in, c, 20000, 5);
    unsetenv("BELLSIM_THREADS");
    CHECK(c3.rates.z_rate == c1.rates.z_rate);
    CHECK(c3.rates.gate_fail == c1.rates.gate_fail);
    CHECK(c3.rates.z_rate == a.rates.z_rate);
}
