#ifndef XXZSOV_COMMON_HPP
#define XXZSOV_COMMON_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace xxzsov {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Default tolerances; both overridable through RunConfig / --tol.
struct Tolerances {
    double operator_identity = 1e-10;
    double determinant_formula = 1e-8;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SovConditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
    SingularMatrixError(const std::string& what, std::size_t index)
        : std::runtime_error(what), pivot_index(index) {}
    std::size_t pivot_index;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConditioningError : std::runtime_error {
    ConditioningError(const std::string& what, double cond)
        : std::runtime_error(what), condition_estimate(cond) {}
    double condition_estimate;
};

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed ^ 0x9e3779b97f4a7c15ULL); }

// Uniform modulus in [rmin, rmax], uniform phase.
inline cplx random_annulus(Rng& rng, double rmin, double rmax) {
    std::uniform_real_distribution<double> mod(rmin, rmax);
    std::uniform_real_distribution<double> arg(0.0, 2.0 * kPi);
    return std::polar(mod(rng), arg(rng));
}

inline cplx random_box(Rng& rng, double half_width = 1.0) {
    std::uniform_real_distribution<double> u(-half_width, half_width);
    double re = u(rng);
    double im = u(rng);
    return {re, im};
}

// Thread cap for the embarrassingly parallel loops (per-eigenvalue work).
// XXZ_SOV_THREADS=1 forces serial execution.
std::size_t thread_cap();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace xxzsov

#endif
