// bellsim command line tool. Every subcommand embeds its full configuration
// (parameters, seed, output target) in the emitted file so a run can be
// reproduced from its artifact alone.
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellsim/comparison.h"
#include "bellsim/ft.h"
#include "bellsim/logical.h"
#include "bellsim/loss.h"
#include "bellsim/photonic.h"
#include "bellsim/protocols.h"
#include "bellsim/rng.h"

using json = nlohmann::ordered_json;
using namespace bellsim;

namespace {

constexpr std::uint64_t kSaltTeleport = 0x7e1e;
constexpr std::uint64_t kSaltGateH = 0x6a7e;
constexpr std::uint64_t kSaltGateCz = 0x6a7f;
constexpr std::uint64_t kSaltSweepBm = 0x1055;
constexpr std::uint64_t kSaltSweepGate = 0x1056;

std::string fmt9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::uint64_t double_bits(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

// path "-" (or empty) means stdout.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// CSV artifact: config line, header, then rows. All numbers %.9g, '.' decimal.
std::string make_csv(const json& config, const std::string& header,
                     const std::vector<std::string>& rows) {
    std::string out = "# config " + config.dump() + "\n" + header + "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

std::string make_json(const json& config, json body) {
    json doc;
    doc["config"] = config;
    for (auto& [k, v] : body.items()) doc[k] = std::move(v);
    return doc.dump(2) + "\n";
}

void emit(const std::string& format, const std::string& path, const json& config,
          const json& body, const std::string& csv_header,
          const std::vector<std::string>& csv_rows) {
    if (format == "csv")
        write_output(path, make_csv(config, csv_header, csv_rows));
    else
        write_output(path, make_json(config, body));
}

json mc_json(const McEstimate& e) {
    return json{{"estimate", e.estimate},
                {"stderr", e.stderr_},
                {"trials", e.trials},
                {"successes", e.successes}};
}

// Uniform random pure logical state: Bloch-sphere point -> amplitudes.
std::pair<cplx, cplx> random_amplitudes(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double z = 2.0 * unit(rng) - 1.0;
    double phi = 2.0 * M_PI * unit(rng);
    double a = std::sqrt((1.0 + z) / 2.0);
    double b = std::sqrt((1.0 - z) / 2.0);
    return {cplx(a, 0.0), std::polar(b, phi)};
}

double fidelity4(const std::array<cplx, 4>& u, const std::array<cplx, 4>& v) {
    cplx ip = 0;
    for (int i = 0; i < 4; ++i) ip += std::conj(u[i]) * v[i];
    return std::norm(ip);
}

// --------------------------------------------------------------------------
// bs-table
// --------------------------------------------------------------------------

int run_bs_table(TargetPair target, const std::string& target_token,
                 const std::string& format, const std::string& out) {
    json config{{"subcommand", "bs-table"},
                {"target", target_token},
                {"format", format},
                {"out", out}};

    auto net = build_bs_network(target);
    auto table = derive_bs_table(net);

    json jpatterns = json::array();
    std::vector<std::string> rows;
    for (const auto& [pattern, entry] : table.patterns) {
        json jp;
        jp["detector_mask"] = pattern.mask;
        jp["detectors"] = pattern.clicked();
        if (entry.label)
            jp["label"] = bell_name(*entry.label);
        else
            jp["label"] = nullptr;
        json probs;
        std::string row = std::to_string(pattern.mask) + "," +
                          (entry.label ? bell_name(*entry.label) : "fail");
        for (std::size_t i = 0; i < kAllBellStates.size(); ++i) {
            BellState s{kAllBellStates[i].first, kAllBellStates[i].second};
            probs[bell_name(s)] = entry.prob_given[i];
            row += "," + fmt9(entry.prob_given[i]);
        }
        jp["prob_given"] = probs;
        jpatterns.push_back(jp);
        rows.push_back(row);
    }

    json body;
    body["target_states"] = target_name(target);
    body["patterns"] = jpatterns;
    json succ;
    for (std::size_t i = 0; i < kAllBellStates.size(); ++i) {
        BellState s{kAllBellStates[i].first, kAllBellStates[i].second};
        succ[bell_name(s)] = table.success_given[i];
    }
    body["success_given"] = succ;
    body["average_success"] = table.average_success;

    emit(format, out, config, body,
         "detector_mask,label,p_phi_plus,p_phi_minus,p_psi_plus,p_psi_minus", rows);
    return 0;
}

// --------------------------------------------------------------------------
// logical-bm
// --------------------------------------------------------------------------

int run_logical_bm(int n, std::uint64_t trials, std::uint64_t seed,
                   const std::string& format, const std::string& out) {
    json config{{"subcommand", "logical-bm"}, {"n", n},       {"trials", trials},
                {"seed", seed},              {"format", format}, {"out", out}};

    double exact = exact_success_probability_uniform(n);
    McEstimate mc = monte_carlo_success(n, trials, seed);

    json body;
    body["n"] = n;
    body["exact"] = exact;
    body["mc"] = mc_json(mc);
    body["sigma_distance"] =
        mc.stderr_ > 0 ? std::abs(mc.estimate - exact) / mc.stderr_ : 0.0;

    std::vector<std::string> rows{std::to_string(n) + "," + fmt9(exact) + "," +
                                  fmt9(mc.estimate) + "," + fmt9(mc.stderr_) + "," +
                                  std::to_string(mc.trials)};
    emit(format, out, config, body, "n,exact,mc_estimate,mc_stderr,trials", rows);
    return 0;
}

// --------------------------------------------------------------------------
// loss-sweep
// --------------------------------------------------------------------------

int run_loss_sweep(const std::vector<int>& ns, const std::vector<double>& etas,
                   std::uint64_t trials, std::uint64_t seed, const std::string& format,
                   const std::string& out) {
    json config{{"subcommand", "loss-sweep"},
                {"n_list", ns},
                {"eta_list", etas},
                {"trials", trials},
                {"seed", seed},
                {"format", format},
                {"out", out}};

    json jrows = json::array();
    std::vector<std::string> rows;
    for (int n : ns) {
        for (double eta : etas) {
            double bm_exact = bm_success_prob_lossy(n, eta);
            double gate_exact = gate_teleport_success_prob(n, eta);
            McEstimate bm_mc = mc_bm_success_lossy(
                n, eta, trials, mix_seed(seed, kSaltSweepBm, (std::uint64_t)n, double_bits(eta)));
            McEstimate gate_mc = mc_gate_success_lossy(
                n, eta, trials, mix_seed(seed, kSaltSweepGate, (std::uint64_t)n, double_bits(eta)));
            jrows.push_back(json{{"n", n},
                                 {"eta", eta},
                                 {"bm_exact", bm_exact},
                                 {"bm_mc", mc_json(bm_mc)},
                                 {"gate_exact", gate_exact},
                                 {"gate_mc", mc_json(gate_mc)}});
            rows.push_back(std::to_string(n) + "," + fmt9(eta) + "," + fmt9(bm_exact) +
                           "," + fmt9(bm_mc.estimate) + "," + fmt9(bm_mc.stderr_) + "," +
                           fmt9(gate_exact) + "," + fmt9(gate_mc.estimate) + "," +
                           fmt9(gate_mc.stderr_));
        }
    }
    json body;
    body["rows"] = jrows;
    emit(format, out, config, body,
         "n,eta,bm_exact,bm_mc,bm_mc_stderr,gate_exact,gate_mc,gate_mc_stderr", rows);
    return 0;
}

// --------------------------------------------------------------------------
// teleport
// --------------------------------------------------------------------------

struct TeleportAcc {
    std::uint64_t trials = 0, successes = 0, residual_z = 0;
    double fid_sum = 0.0;
    void merge(const TeleportAcc& o) {
        trials += o.trials;
        successes += o.successes;
        residual_z += o.residual_z;
        fid_sum += o.fid_sum;
    }
};

int run_teleport(int n, double eta, std::uint64_t trials, std::uint64_t seed,
                 const std::string& format, const std::string& out) {
    json config{{"subcommand", "teleport"}, {"n", n},          {"eta", eta},
                {"trials", trials},         {"seed", seed},    {"format", format},
                {"out", out}};

    auto acc = run_trials<TeleportAcc>(trials, [&](std::uint64_t t, TeleportAcc& a) {
        auto rng = trial_rng(seed, t, kSaltTeleport);
        auto [qa, qb] = random_amplitudes(rng);
        auto q = make_logical(qa, qb, n);
        auto r = teleport(q, eta, rng);
        a.trials++;
        if (r.success) {
            a.successes++;
            a.fid_sum += fidelity(r.output, make_logical(qa, qb, n));
            if (r.residual_z) a.residual_z++;
        }
    });

    double rate = trials ? (double)acc.successes / trials : 0.0;
    double se = trials ? std::sqrt(std::max(rate * (1 - rate), 0.0) / trials) : 0.0;
    double mean_fid = acc.successes ? acc.fid_sum / acc.successes : 0.0;
    double zrate = acc.successes ? (double)acc.residual_z / acc.successes : 0.0;

    json body;
    body["n"] = n;
    body["eta"] = eta;
    body["exact_success"] = bm_success_prob_lossy(n, eta);
    body["mc_success"] = json{{"estimate", rate}, {"stderr", se}, {"trials", trials},
                              {"successes", acc.successes}};
    body["mean_fidelity_on_success"] = mean_fid;
    body["residual_z_rate"] = zrate;

    std::vector<std::string> rows{
        std::to_string(n) + "," + fmt9(eta) + "," + fmt9(bm_success_prob_lossy(n, eta)) +
        "," + fmt9(rate) + "," + fmt9(se) + "," + fmt9(mean_fid) + "," + fmt9(zrate)};
    emit(format, out, config, body,
         "n,eta,exact_success,mc_success,mc_stderr,mean_fidelity_on_success,residual_z_rate",
         rows);
    return 0;
}

// --------------------------------------------------------------------------
// gate
// --------------------------------------------------------------------------

struct GateAcc {
    std::uint64_t trials = 0, successes = 0, residual = 0, attempts = 0;
    double fid_sum = 0.0;
    void merge(const GateAcc& o) {
        trials += o.trials;
        successes += o.successes;
        residual += o.residual;
        attempts += o.attempts;
        fid_sum += o.fid_sum;
    }
};

int run_gate(const std::string& kind, int n, double eta, std::uint64_t trials,
             std::uint64_t seed, bool retry, const std::string& format,
             const std::string& out) {
    json config{{"subcommand", "gate"}, {"kind", kind},     {"n", n},
                {"eta", eta},           {"trials", trials}, {"seed", seed},
                {"retry", retry},       {"format", format}, {"out", out}};

    const std::uint64_t salt = kind == "h" ? kSaltGateH : kSaltGateCz;
    constexpr int kMaxAttempts = 100000;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    auto acc = run_trials<GateAcc>(trials, [&](std::uint64_t t, GateAcc& a) {
        auto rng = trial_rng(seed, t, salt);
        a.trials++;
        if (kind == "h") {
            auto [qa, qb] = random_amplitudes(rng);
            auto q = make_logical(qa, qb, n);
            for (int att = 1;; ++att) {
                auto r = hadamard_via_teleport(q, eta, rng);
                a.attempts++;
                if (r.success) {
                    a.successes++;
                    auto expected = make_logical((qa + qb) * inv_sqrt2,
                                                 (qa - qb) * inv_sqrt2, n);
                    a.fid_sum += fidelity(r.output, expected);
                    if (r.residual_x) a.residual++;
                    break;
                }
                if (!retry || att >= kMaxAttempts) break;
            }
        } else {
            auto rng2 = trial_rng(seed, t, salt + 1);
            auto [a1, b1] = random_amplitudes(rng);
            auto [a2, b2] = random_amplitudes(rng2);
            auto q1 = make_logical(a1, b1, n);
            auto q2 = make_logical(a2, b2, n);
            for (int att = 1;; ++att) {
                auto r = cz_via_teleport(q1, q2, eta, rng);
                a.attempts++;
                if (r.success) {
                    a.successes++;
                    std::array<cplx, 4> expected{a1 * a2, a1 * b2, b1 * a2, -b1 * b2};
                    a.fid_sum += fidelity4(r.output.amps, expected);
                    if (r.residual_z1 || r.residual_z2) a.residual++;
                    break;
                }
                if (!retry || att >= kMaxAttempts) break;
            }
        }
    });

    double p1 = gate_teleport_success_prob(n, eta);
    double exact = kind == "h" ? p1 : p1 * p1;
    // Per-attempt success rate; without --retry attempts == trials.
    double rate = acc.attempts ? (double)acc.successes / acc.attempts : 0.0;
    double se = acc.attempts ? std::sqrt(std::max(rate * (1 - rate), 0.0) / acc.attempts)
                             : 0.0;

    json body;
    body["kind"] = kind;
    body["n"] = n;
    body["eta"] = eta;
    body["exact_success_per_attempt"] = exact;
    body["mc_success"] = json{{"estimate", rate},
                              {"stderr", se},
                              {"attempts", acc.attempts},
                              {"successes", acc.successes}};
    body["mean_fidelity_on_success"] =
        acc.successes ? acc.fid_sum / acc.successes : 0.0;
    body["residual_rate_on_success"] =
        acc.successes ? (double)acc.residual / acc.successes : 0.0;
    if (retry) body["mean_attempts"] = trials ? (double)acc.attempts / trials : 0.0;

    std::vector<std::string> rows{
        kind + "," + std::to_string(n) + "," + fmt9(eta) + "," + fmt9(exact) + "," +
        fmt9(rate) + "," +
        fmt9(acc.successes ? acc.fid_sum / acc.successes : 0.0) + "," +
        fmt9(trials ? (double)acc.attempts / trials : 0.0)};
    emit(format, out, config, body,
         "kind,n,eta,exact_success_per_attempt,mc_success,mean_fidelity_on_success,"
         "mean_attempts",
         rows);
    return 0;
}

// --------------------------------------------------------------------------
// compare
// --------------------------------------------------------------------------

int run_compare(double grid_start, double grid_end, double step,
                const std::vector<int>& parity_ms, const std::string& format,
                const std::string& out) {
    json config{{"subcommand", "compare"},
                {"grid_start", grid_start},
                {"grid_end", grid_end},
                {"step", step},
                {"parity_ms", parity_ms},
                {"format", format},
                {"out", out}};

    auto grid = uniform_grid(grid_start, grid_end, step);
    auto points = generate_figure2(grid, parity_ms);

    json jrows = json::array();
    std::vector<std::string> rows;
    for (const auto& p : points) {
        std::string name = scheme_name(p.scheme, p.parity_m);
        jrows.push_back(json{{"scheme", name},
                             {"nbar", p.nbar},
                             {"ps", p.ps},
                             {"is_physical_point", p.is_physical_point}});
        rows.push_back(name + "," + fmt9(p.nbar) + "," + fmt9(p.ps) + "," +
                       (p.is_physical_point ? "1" : "0"));
    }
    json body;
    body["rows"] = jrows;
    emit(format, out, config, body, "scheme,nbar,ps,is_physical_point", rows);
    return 0;
}

// --------------------------------------------------------------------------
// ft-threshold
// --------------------------------------------------------------------------

int run_ft_threshold(int n, int levels, std::uint64_t trials, std::uint64_t seed,
                     const std::string& circuit_path, const std::string& dump_circuit,
                     const std::string& format, const std::string& out) {
    TelecorrectionCircuit circuit = circuit_path.empty()
                                        ? default_telecorrection_circuit()
                                        : load_circuit(read_file(circuit_path));
    if (!dump_circuit.empty()) {
        write_output(dump_circuit, save_circuit(circuit));
        return 0;
    }

    json config{{"subcommand", "ft-threshold"},
                {"n", n},
                {"levels", levels},
                {"trials", trials},
                {"seed", seed},
                {"circuit", circuit_path.empty() ? "default" : circuit_path},
                {"format", format},
                {"out", out}};

    ThresholdResult r = find_threshold(n, levels, trials, seed, circuit);

    json jcurve = json::array();
    std::vector<std::string> rows;
    for (std::size_t k = 0; k < r.contraction_curve.size(); ++k) {
        const auto& lv = r.contraction_curve[k];
        jcurve.push_back(json{{"level", k + 1},
                              {"x_rate", lv.x_rate},
                              {"z_rate", lv.z_rate},
                              {"gate_fail", lv.gate_fail}});
        rows.push_back(std::to_string(k + 1) + "," + fmt9(lv.x_rate) + "," +
                       fmt9(lv.z_rate) + "," + fmt9(lv.gate_fail));
    }

    json body;
    body["n"] = n;
    body["eta_threshold"] = r.eta_threshold;
    body["levels_checked"] = r.levels_checked;
    body["trials_per_level"] = r.trials_per_level;
    body["contraction_curve"] = jcurve;
    emit(format, out, config, body, "level,x_rate,z_rate,gate_fail", rows);
    return 0;
}

// --------------------------------------------------------------------------
// resources
// --------------------------------------------------------------------------

int run_resources(long long nh, long long ncz, long long nplus,
                  const std::string& format, const std::string& out) {
    json config{{"subcommand", "resources"}, {"nh", nh},        {"ncz", ncz},
                {"nplus", nplus},            {"format", format}, {"out", out}};

    long long cost = resource_cost(nh, ncz, nplus);
    if (out.empty() || out == "-") {
        if (format == "json") {
            json body;
            body["cost"] = cost;
            body["unit_costs"] = json{{"hadamard", kHadamardCost},
                                      {"cz", kCzCost},
                                      {"plus_prep", kPlusCost}};
            write_output(out, make_json(config, body));
        } else {
            std::cout << cost << "\n";
        }
        return 0;
    }
    json body;
    body["cost"] = cost;
    body["unit_costs"] = json{{"hadamard", kHadamardCost},
                              {"cz", kCzCost},
                              {"plus_prep", kPlusCost}};
    body["circuit_fractions"] = json{{"memory", kCircuitFractions.memory},
                                     {"hadamard", kCircuitFractions.hadamard},
                                     {"cz", kCircuitFractions.cz},
                                     {"plus_prep", kCircuitFractions.plus_prep},
                                     {"x_measure", kCircuitFractions.x_measure}};
    std::vector<std::string> rows{std::to_string(nh) + "," + std::to_string(ncz) + "," +
                                  std::to_string(nplus) + "," + std::to_string(cost)};
    emit(format, out, config, body, "nh,ncz,nplus,cost", rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell measurement simulator for block-encoded photonic qubits"};
    app.require_subcommand(1);

    const std::map<std::string, TargetPair> target_map{
        {"minus-minus", TargetPair::PhiMinusPsiMinus},
        {"plus-plus", TargetPair::PhiPlusPsiPlus},
        {"minus-plus", TargetPair::PhiMinusPsiPlus},
        {"plus-minus", TargetPair::PhiPlusPsiMinus},
    };

    // bs-table
    TargetPair bt_target = TargetPair::PhiMinusPsiMinus;
    std::string bt_format = "json", bt_out = "-";
    auto* bs = app.add_subcommand("bs-table",
                                  "Derive the click-pattern table of the standard device");
    bs->add_option("--target", bt_target, "which Bell pair the plates select")
        ->transform(CLI::CheckedTransformer(target_map, CLI::ignore_case));
    bs->add_option("--format", bt_format)->check(CLI::IsMember({"csv", "json"}));
    bs->add_option("--out", bt_out, "output path, - for stdout");

    // logical-bm
    int lb_n = 4;
    std::uint64_t lb_trials = 1000000, lb_seed = 0;
    std::string lb_format = "json", lb_out = "-";
    auto* lb = app.add_subcommand("logical-bm",
                                  "Exact and Monte Carlo logical BM success probability");
    lb->add_option("--n", lb_n, "photons per block")->required()->check(CLI::Range(1, 30));
    lb->add_option("--trials", lb_trials)->check(CLI::Range((std::uint64_t)1, (std::uint64_t)1000000000));
    lb->add_option("--seed", lb_seed);
    lb->add_option("--format", lb_format)->check(CLI::IsMember({"csv", "json"}));
    lb->add_option("--out", lb_out);

    // loss-sweep
    std::vector<int> ls_ns{1, 2, 4, 8, 16};
    std::vector<double> ls_etas{0.0, 0.05, 0.1, 0.3};
    std::uint64_t ls_trials = 100000, ls_seed = 0;
    std::string ls_format = "csv", ls_out = "-";
    auto* ls = app.add_subcommand("loss-sweep",
                                  "Success probability under photon loss, closed form vs MC");
    ls->add_option("--n-list", ls_ns)->delimiter(',')->check(CLI::Range(1, 30));
    ls->add_option("--eta-list", ls_etas)->delimiter(',')->check(CLI::Range(0.0, 1.0));
    ls->add_option("--trials", ls_trials)->check(CLI::Range((std::uint64_t)1, (std::uint64_t)100000000));
    ls->add_option("--seed", ls_seed);
    ls->add_option("--format", ls_format)->check(CLI::IsMember({"csv", "json"}));
    ls->add_option("--out", ls_out);

    // teleport
    int tp_n = 4;
    double tp_eta = 0.0;
    std::uint64_t tp_trials = 10000, tp_seed = 0;
    std::string tp_format = "json", tp_out = "-";
    auto* tp = app.add_subcommand("teleport", "Teleport random states through a logical channel");
    tp->add_option("--n", tp_n)->required()->check(CLI::Range(1, 24));
    tp->add_option("--eta", tp_eta)->check(CLI::Range(0.0, 1.0));
    tp->add_option("--trials", tp_trials)->check(CLI::Range((std::uint64_t)1, (std::uint64_t)100000000));
    tp->add_option("--seed", tp_seed);
    tp->add_option("--format", tp_format)->check(CLI::IsMember({"csv", "json"}));
    tp->add_option("--out", tp_out);

    // gate
    std::string gt_kind;
    int gt_n = 4;
    double gt_eta = 0.0;
    std::uint64_t gt_trials = 10000, gt_seed = 0;
    bool gt_retry = false;
    std::string gt_format = "json", gt_out = "-";
    auto* gt = app.add_subcommand("gate", "Teleported Hadamard or CZ on random inputs");
    gt->add_option("--kind", gt_kind)->required()->check(CLI::IsMember({"h", "cz"}));
    gt->add_option("--n", gt_n)->check(CLI::Range(1, 24));
    gt->add_option("--eta", gt_eta)->check(CLI::Range(0.0, 1.0));
    gt->add_option("--trials", gt_trials)->check(CLI::Range((std::uint64_t)1, (std::uint64_t)100000000));
    gt->add_option("--seed", gt_seed);
    gt->add_flag("--retry", gt_retry, "repeat each trial until the gate succeeds");
    gt->add_option("--format", gt_format)->check(CLI::IsMember({"csv", "json"}));
    gt->add_option("--out", gt_out);

    // compare
    double cp_start = 2.0, cp_end = 20.0, cp_step = 0.5;
    std::vector<int> cp_ms{1, 2};
    std::string cp_format = "csv", cp_out = "-";
    auto* cp = app.add_subcommand("compare",
                                  "Success probability vs mean photon number for all schemes");
    cp->add_option("--grid-start", cp_start)->check(CLI::Range(2.0, 1000.0));
    cp->add_option("--grid-end", cp_end)->check(CLI::Range(2.0, 1000.0));
    cp->add_option("--step", cp_step)->check(CLI::Range(1e-6, 100.0));
    cp->add_option("--parity-m", cp_ms)->delimiter(',')->check(CLI::Range(1, 16));
    cp->add_option("--format", cp_format)->check(CLI::IsMember({"csv", "json"}));
    cp->add_option("--out", cp_out);

    // ft-threshold
    int ft_n = 4, ft_levels = 4;
    std::uint64_t ft_trials = 20000, ft_seed = 0;
    std::string ft_circuit, ft_dump, ft_format = "json", ft_out = "-";
    auto* ft = app.add_subcommand("ft-threshold",
                                  "Loss threshold of the concatenated correction scheme");
    ft->add_option("--n", ft_n)->check(CLI::Range(1, 16));
    ft->add_option("--levels", ft_levels)->check(CLI::Range(3, 8));
    ft->add_option("--trials", ft_trials)->check(CLI::Range((std::uint64_t)100, (std::uint64_t)10000000));
    ft->add_option("--seed", ft_seed);
    ft->add_option("--circuit", ft_circuit, "telecorrection circuit file (default: built in)");
    ft->add_option("--dump-circuit", ft_dump, "write the circuit as text and exit");
    ft->add_option("--format", ft_format)->check(CLI::IsMember({"csv", "json"}));
    ft->add_option("--out", ft_out);

    // resources
    long long rs_nh = 0, rs_ncz = 0, rs_nplus = 0;
    std::string rs_format = "plain", rs_out = "";
    auto* rs = app.add_subcommand("resources", "Relative resource cost of a gate sequence");
    rs->add_option("--nh", rs_nh)->check(CLI::NonNegativeNumber);
    rs->add_option("--ncz", rs_ncz)->check(CLI::NonNegativeNumber);
    rs->add_option("--nplus", rs_nplus)->check(CLI::NonNegativeNumber);
    rs->add_option("--format", rs_format)->check(CLI::IsMember({"plain", "csv", "json"}));
    rs->add_option("--out", rs_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bs->parsed()) {
            std::string token = "minus-minus";
            for (const auto& [k, v] : target_map)
                if (v == bt_target) token = k;
            return run_bs_table(bt_target, token, bt_format, bt_out);
        }
        if (lb->parsed()) return run_logical_bm(lb_n, lb_trials, lb_seed, lb_format, lb_out);
        if (ls->parsed())
            return run_loss_sweep(ls_ns, ls_etas, ls_trials, ls_seed, ls_format, ls_out);
        if (tp->parsed())
            return run_teleport(tp_n, tp_eta, tp_trials, tp_seed, tp_format, tp_out);
        if (gt->parsed())
            return run_gate(gt_kind, gt_n, gt_eta, gt_trials, gt_seed, gt_retry, gt_format,
                            gt_out);
        if (cp->parsed())
            return run_compare(cp_start, cp_end, cp_step, cp_ms, cp_format, cp_out);
        if (ft->parsed())
            return run_ft_threshold(ft_n, ft_levels, ft_trials, ft_seed, ft_circuit, ft_dump,
                                    ft_format, ft_out);
        if (rs->parsed()) return run_resources(rs_nh, rs_ncz, rs_nplus, rs_format, rs_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
