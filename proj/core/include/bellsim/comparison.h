#pragma once
#include <optional>
#include <string>
#include <vector>

// Closed-form success probability vs mean photon number for the competing
// Bell-measurement schemes, for regenerating the comparison figure.
namespace bellsim {

enum class Scheme {
    Ours,
    Grice,
    EwertAncilla,
    EwertParity,
    ZaidiSqueeze,
    CoherentState,
    Hybrid,
};

std::string scheme_name(Scheme s, int parity_m = 0);

double ps_ours(double nbar);                    // 1 - 2^(-nbar/2)
double ps_grice(double nbar);                   // 1 - 1/nbar, nbar >= 2
double ps_ewert_ancilla(double nbar);           // 1 - 2^(-nbar/4 - 1/2)
double ps_ewert_parity(double nbar, int m);     // 1 - 2^(-nbar/2m)
double ps_hybrid(double nbar);                  // 1 - e^(-nbar+2)/2, nbar >= 2

struct SchemePoint {
    double nbar = 0.0;
    double ps = 0.0;
};

// Squeezed-ancilla scheme: nbar = 2cosh(2r) + 4sinh^2(r). The success
// probability is only quoted at the operating point r = 0.6585 (ps = 0.643);
// other r give nbar with ps absent.
struct ZaidiPoint {
    double nbar = 0.0;
    std::optional<double> ps;
};
ZaidiPoint zaidi_point(double r);
inline constexpr double kZaidiOperatingR = 0.6585;
inline constexpr double kZaidiOperatingPs = 0.643;

// Coherent-state qubits: ps = 1 - 1/(2cosh(2 alpha^2)) and the mean photon
// number of the qubit-plus-channel ensemble. Throws std::domain_error at
// alpha = 0 where the nbar expression is singular.
SchemePoint coherent_scheme(double alpha);
// Inverts the nbar(alpha) curve (strictly increasing, nbar -> 1/2 as
// alpha -> 0) by bisection.
double coherent_alpha_for_nbar(double nbar);

struct SchemeCurvePoint {
    Scheme scheme = Scheme::Ours;
    int parity_m = 0;  // only meaningful for EwertParity
    double nbar = 0.0;
    double ps = 0.0;
    bool is_physical_point = false;  // nbar realizable by the scheme's discrete encoding
};

// All curves on a common nbar grid plus the single Zaidi operating point.
// EwertParity is emitted for each m in parity_ms.
std::vector<SchemeCurvePoint> generate_figure2(const std::vector<double>& nbar_grid,
                                               const std::vector<int>& parity_ms = {1, 2});

std::vector<double> uniform_grid(double start, double end, double step);

}  // namespace bellsim
