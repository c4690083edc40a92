#pragma once

// Truncated hierarchy of spatial derivatives of the complex phase S(x,t),
// evaluated at a single fixed position. The wavefunction ansatz is
// psi = exp(i S / hbar); S_n denotes the n-th spatial derivative of S at x(0).
// Truncation closes the hierarchy by reading S_{N+1} = S_{N+2} = 0.
//
// All quantities are in atomic units unless stated otherwise; hbar is carried
// explicitly so tests can vary it.

#include <complex>
#include <span>
#include <vector>

namespace zevca {

using cplx = std::complex<double>;

// Highest truncation order the library accepts. Binomial rows are exact in
// double precision well beyond this.
inline constexpr int kMaxOrder = 48;

enum class TimeMode {
    RealTime,      // propagate in t
    ImaginaryTime  // propagate in the real progress variable tau, t = -(i hbar/2) tau
};

// Complex phase and its spatial derivatives S_0..S_N at one position and time.
// coeffs[n] stores the derivative value S_n itself, not the Taylor coefficient
// S_n / n!.
struct PhaseJet {
    int order = 0;                // N
    std::vector<cplx> coeffs;     // S_0..S_N, size order+1
    double position = 0.0;        // x(0)
    double time = 0.0;            // t, or tau in imaginary mode

    // Truncation contract: indices above the order read as zero.
    cplx s(int n) const {
        return n <= order ? coeffs[static_cast<std::size_t>(n)] : cplx{0.0, 0.0};
    }

    bool is_finite() const;
};

PhaseJet make_phase_jet(int order, double position, double time = 0.0);

// Parameters of the initial Gaussian wavepacket
//   psi(x,0) = exp[-alpha0 (x-xc)^2 + (i/hbar) pc (x-xc) + (i/hbar) gamma0].
struct GaussianParams {
    double alpha0 = 0.5;   // > 0, inverse length^2
    double xc = 0.0;       // center position
    double pc = 0.0;       // average momentum
    cplx gamma0{0.0, 0.0}; // constant phase/normalization term

    // gamma0 = -(i hbar / 4) ln(2 alpha0 / pi) normalizes the packet to unit norm.
    static cplx normalization_gamma(double alpha0, double hbar);
    static GaussianParams normalized(double alpha0, double xc, double pc, double hbar);
};

void validate(const GaussianParams& g);

// Exact binomial coefficient as a double; n up to kMaxOrder + 2.
double binomial(int n, int k);

// n-th spatial derivative of S_1^2 evaluated from the jet:
//   (S_1^2)_n = sum_j C(n,j) S_{j+1} S_{n-j+1},
// with indices above the jet order reading as zero.
cplx leibniz_square(const PhaseJet& jet, int n);

// Right-hand side of the hierarchy,
//   dS_n/dt = (i hbar / 2m) S_{n+2} - (1/2m) (S_1^2)_n - V_n,   n = 0..N,
// with S_{N+1} = S_{N+2} = 0. In ImaginaryTime mode the whole vector is
// multiplied by -(i hbar / 2) so the caller integrates in the real variable tau.
std::vector<cplx> hierarchy_rhs(const PhaseJet& jet, std::span<const double> vstack,
                                double mass, double hbar, TimeMode mode);

// Unchecked kernel used by the integrator; out must have coeffs.size() entries.
void hierarchy_rhs_into(std::span<const cplx> coeffs, std::span<const double> vstack,
                        double mass, double hbar, TimeMode mode, std::span<cplx> out);

// Initial jet of a Gaussian wavepacket, from S(x,0) = -i hbar ln psi(x,0):
//   S_0 = i alpha0 hbar (x0-xc)^2 + pc (x0-xc) + gamma0
//   S_1 = 2 i alpha0 hbar (x0-xc) + pc
//   S_2 = 2 i alpha0 hbar
//   S_n = 0 for n >= 3  (exact; no truncation error for N >= 2)
PhaseJet gaussian_phase_jet(const GaussianParams& g, double x0, int order, double hbar);

struct ReconstructedPsi {
    cplx value{0.0, 0.0};     // exp(i S_0 / hbar)
    cplx gradient{0.0, 0.0};  // (i S_1 / hbar) * value
    bool saturated = false;   // exp overflow was clamped
};

// Wavefunction value at the jet's position, psi = exp(i S_0 / hbar).
ReconstructedPsi reconstruct_amplitude(const PhaseJet& jet, double hbar);

} // namespace zevca
