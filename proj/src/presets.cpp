#include "zevca/experiment.hpp"

namespace zevca {

// Benchmark configurations with the published parameter values. Integrator
// steps, final times, and grid boxes are our own choices, validated by the
// step-halving and grid-refinement checks in the test suite.
namespace {

// The packet is launched at the edge of the barrier (xc = -0.15, about three
// packet widths from the top). The fixed trajectory at x0 = 0 only works when
// |psi(x0,0)| is significantly nonzero; a packet parked in the asymptotic
// region leaves the trajectory no initial information to evolve (see README).
constexpr const char* kEckartE20 = R"(# Eckart barrier, incident energy E = 20 (pc = sqrt(2 m E))
[experiment]
kind = tunnel
x0 = 0
n_list = 2, 6, 10
mass = 30
hbar = 1

[potential]
kind = eckart
height = 40
beta = 4.3228

[gaussian]
alpha0 = 94.24777960769380   # 30*pi
xc = -0.15
pc = 34.64101615137755       # sqrt(1200)

[integration]
dt = 1e-4
t_final = 3
record_stride = 25

[oracle]
xmin = -12
xmax = 12
npoints = 4096
dt = 5e-4
t_final = 3
)";

constexpr const char* kEckartP0 = R"(# Eckart barrier, packet initially at rest (pc = 0)
[experiment]
kind = tunnel
x0 = 0
n_list = 2, 4, 6
mass = 30
hbar = 1

[potential]
kind = eckart
height = 40
beta = 4.3228

[gaussian]
alpha0 = 94.24777960769380   # 30*pi
xc = -0.15
pc = 0

[integration]
dt = 1e-4
t_final = 3
record_stride = 25

[oracle]
xmin = -12
xmax = 12
npoints = 4096
dt = 5e-4
t_final = 3
)";

constexpr const char* kQuartic = R"(# Quartic well, ground-state energy by imaginary-time relaxation
[experiment]
kind = eigen
x0 = 0
n_list = 2, 4, 8, 16
mass = 1
hbar = 1

[potential]
kind = quartic
a = 0.5
b = 1

[gaussian]
alpha0 = 0.5
xc = 1
pc = 0

[integration]
dt = 1e-3
t_final = 40
record_stride = 40

[oracle]
xmin = -10
xmax = 10
npoints = 2048
dt = 2e-3
t_final = 40
)";

constexpr const char* kMorseH2 = R"(# Morse well fitted to the H2 stretch, ground-state energy
[experiment]
kind = eigen
x0 = 0
n_list = 2, 4, 6
mass = 918.5
hbar = 1

[potential]
kind = morse
depth = 0.1745
alpha = 1.026

[gaussian]
alpha0 = 4.5924
xc = 0.1
pc = 0

[integration]
dt = 0.02
t_final = 2400
record_stride = 120

[oracle]
xmin = -3
xmax = 7
npoints = 2048
dt = 0.05
t_final = 2400
)";

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"eckart_e20", "eckart_p0", "quartic",
                                                   "morse_h2"};
    return names;
}

std::string preset_config(const std::string& name) {
    if (name == "eckart_e20") return kEckartE20;
    if (name == "eckart_p0") return kEckartP0;
    if (name == "quartic") return kQuartic;
    if (name == "morse_h2") return kMorseH2;
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError(0, "unknown preset '" + name + "' (known: " + known + ")");
}

} // namespace zevca
