#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "breather/functionals.hpp"
#include "breather/grid.hpp"

namespace mkdv {

enum class Scheme {
    etdrk4,     // exponential time differencing RK4 (Cox-Matthews, contour-integral coefficients)
    etdrk4_ho,  // five-stage exponential RK of stiff order 4 (Hochbruck-Ostermann)
    ifrk4,      // integrating-factor RK4
};

std::string_view to_string(Scheme s) noexcept;
/// Accepts the names returned by to_string; throws std::invalid_argument otherwise.
Scheme scheme_from_string(std::string_view name);

struct EvolutionConfig {
    double dt = 5e-4;
    double t_end = 1.0;
    std::size_t output_stride = 1;
    bool dealias = true;
    bool strict_tails = false;
    Scheme scheme = Scheme::etdrk4_ho;
    // Parameters used for the Lyapunov column of the conserved series.
    double alpha = 1.0;
    double beta = 1.0;

    /// Throws std::invalid_argument on dt <= 0, t_end <= 0, output_stride == 0.
    void validate() const;
    /// round(t_end / dt), at least 1.
    std::size_t steps() const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<FunctionalValues> conserved_series;

    bool empty() const noexcept { return times.empty(); }
};

/// Stepping stopped early.  `partial()` holds every output recorded before the fault.
class EvolutionFault : public std::runtime_error {
public:
    enum class Reason { non_finite, tail_breach };

    EvolutionFault(Reason reason, double last_valid_time, Trajectory partial, const std::string& what)
        : std::runtime_error(what),
          reason_(reason),
          last_valid_time_(last_valid_time),
          partial_(std::move(partial)) {}

    Reason reason() const noexcept { return reason_; }
    double last_valid_time() const noexcept { return last_valid_time_; }
    const Trajectory& partial() const noexcept { return partial_; }

private:
    Reason reason_;
    double last_valid_time_;
    Trajectory partial_;
};

/// -(u_xx + u^3)_x; the cube is formed on a 2N grid when `dealias` is set.
Field rhs(const Field& u, bool dealias = true);

Trajectory evolve(const Field& u0, const EvolutionConfig& cfg);

struct ConservationDrift {
    double mass = 0.0;
    double energy = 0.0;
    double f_value = 0.0;
    double lyapunov = 0.0;

    double max() const noexcept;
};

/// max_t |X(t) - X(0)| / max(|X(0)|, 1e-12) for X in {M, E, F, H(alpha, beta)}.
ConservationDrift conservation_drift(const Trajectory& traj, double alpha, double beta);

}  // namespace mkdv
