#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dqsim {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLn2 = 0.69314718055994530942;

// Exit-code categories used by the CLI: 2 config, 3 capability, 4 numerical.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Global statevector budget; DQSIM_QUBIT_CAP overrides the default 24.
inline int qubit_cap() {
    if (const char* env = std::getenv("DQSIM_QUBIT_CAP")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 24;
}

// Dense-matrix operations (norms, exact evolution) are restricted to this size.
inline constexpr int kDenseCapDefault = 12;

inline std::uint64_t dim_of(int qubits) { return std::uint64_t{1} << qubits; }

inline int ceil_log2(std::uint64_t n) {
    int w = 0;
    while (dim_of(w) < n) ++w;
    return w;
}

}  // namespace dqsim
