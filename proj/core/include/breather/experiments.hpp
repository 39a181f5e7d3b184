#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "breather/closed_forms.hpp"
#include "breather/evolution.hpp"
#include "breather/grid.hpp"
#include "breather/linearized.hpp"

namespace mkdv {

/// Largest admissible perturbation size in H^2.
inline constexpr double kMaxEta = 0.05;

/**
 * Deterministic localized perturbation: a seeded sum of Gaussian wave packets
 * centred in the middle third of the box, band-limited to |k| <= k_max and
 * rescaled to H^2 norm eta.
 *
 * k_max must lie in (0, 2/3 of the Nyquist wavenumber].
 */
Field make_perturbation(std::uint64_t seed, double eta, double k_max, const GridSpec& g);

/// Same construction with packet centres in [-spread, spread], unit H^2 norm.
Field random_direction(std::uint64_t seed, double k_max, double spread, const GridSpec& g);

struct ShiftFit {
    double x1 = 0.0;
    double x2 = 0.0;
    std::array<double, 2> ortho_residuals{};  // (int B1 z, int B2 z)
    int newton_iters = 0;
    double tolerance = 0.0;                   // residual bound that was enforced
    double z_h2 = 0.0;                        // H^2 norm of z at the returned shifts
};

struct FitOptions {
    double relative_tolerance = 1e-10;  // times ||z||_L2 ||B1||_L2
    int max_iterations = 50;
    double far_threshold = 0.5;         // H^2 distance beyond which u is treated as off the orbit
};

class FitError : public std::runtime_error {
public:
    enum class Reason { far_from_orbit, ill_conditioned, max_iterations };

    FitError(Reason reason, ShiftFit last, const std::string& what)
        : std::runtime_error(what), reason_(reason), last_(last) {}

    Reason reason() const noexcept { return reason_; }
    const ShiftFit& last_iterate() const noexcept { return last_; }

private:
    Reason reason_;
    ShiftFit last_;
};

const char* to_string(FitError::Reason r) noexcept;

/// Damped Newton for int B1 z = int B2 z = 0 with z = u - B(t; x1, x2).
ShiftFit fit_shifts(const Field& u, double t, double alpha, double beta,
                    std::array<double, 2> guess, const FitOptions& opts = {});

struct Decomposition {
    Field z;
    ShiftFit fit;
};

Decomposition decompose(const Field& u, double t, double alpha, double beta,
                        std::array<double, 2> guess, const FitOptions& opts = {});

struct StabilityConfig {
    BreatherParams p;
    double eta = 1e-3;
    std::uint64_t seed = 7;
    double k_max = 6.0;
    double t_end = 20.0;
    EvolutionConfig evolution;
    bool flip_sign = false;       // negate the perturbation
    double sup_ratio_limit = 50.0;
    double growth_limit = 5.0;
    FitOptions fit;

    /// Throws std::invalid_argument unless 0 <= eta <= kMaxEta, t_end > 0, and
    /// the evolution settings are valid.
    void validate() const;
};

struct StabilityReport {
    std::vector<double> times;
    std::vector<double> z_h2_norms;
    std::vector<ShiftFit> shift_tracks;
    std::vector<FunctionalValues> conserved;
    double eta = 0.0;
    double sup_z = 0.0;
    double sup_ratio = 0.0;     // sup_t ||z||_H2 / eta (0 when eta = 0)
    double growth_ratio = 0.0;  // sup_t ||z||_H2 / ||z(0)||_H2
    ConservationDrift drift;
    std::vector<Field> snapshots;  // u(t) at every fitted output
    bool complete = false;
    std::string failure;        // set when incomplete
    double sup_ratio_limit = 0.0;
    double growth_limit = 0.0;

    bool passed() const noexcept;
};

/// Evolves B(0) + perturbation, fitting shifts at every output.  Fit failures
/// and evolution faults return an incomplete report instead of throwing.
StabilityReport run_stability(const StabilityConfig& cfg, const GridSpec& g);

struct CheckResult {
    std::string name;
    BreatherParams p;
    double t = 0.0;
    double value = 0.0;      // measured residual or deviation
    double tolerance = 0.0;
    bool relative = false;
    bool passed = false;
};

struct IdentitySuiteOptions {
    double amplitude_scale = 1.0;  // multiplies B before the elliptic check
};

/// Value and identity checks for every (p, t) pair.
std::vector<CheckResult> run_identity_suite(const std::vector<BreatherParams>& params,
                                            const std::vector<double>& times, const GridSpec& g,
                                            const IdentitySuiteOptions& opts = {});

std::vector<BreatherParams> default_suite_params();
std::vector<double> default_suite_times();

struct SpectrumExperiment {
    SpectrumReport report;
    double symmetry_defect = 0.0;
    double min_above_kernel = 0.0;  // smallest eigenvalue past the negative and kernel ones
    bool classification_ok = false;  // one negative, two kernel, rest >= 0.98 edge
};

SpectrumExperiment run_spectrum_experiment(const BreatherParams& p, double t, const GridSpec& g,
                                           std::size_t k);

/// Least-squares slope of log|r| against log(eps).
double loglog_slope(const std::vector<double>& eps, const std::vector<double>& r);

struct SolitonCase {
    double c = 0.0;
    double half_width = 0.0;
    std::size_t n_points = 0;
    double mass = 0.0;
    double mass_error = 0.0;       // |M - 2 sqrt(c)|
    MassDerivative mass_derivative{0.0, 0.0};
    double ode_residual = 0.0;
    double elliptic_limit = 0.0;   // breather elliptic residual with (alpha, beta) = (0, sqrt(c))
    double expansion_slope = 0.0;
    double kernel_form = 0.0;      // soliton_quadratic_form(c, Q_c')
};

/// Widens `base` for a profile decaying like exp(-rate |x|): L = max(L0, L0 / rate),
/// keeping the grid spacing of `base`.
GridSpec grid_for_rate(double rate, const GridSpec& base);

SolitonCase run_soliton_case(double c, const GridSpec& g, std::uint64_t seed = 11);

/// Expansion remainder of the Lyapunov functional along eps * direction.
std::vector<double> breather_remainders(const BreatherParams& p, double t, const Field& direction,
                                        const std::vector<double>& eps);

inline const std::vector<double> kExpansionEps = {1e-2, 5e-3, 2.5e-3};

}  // namespace mkdv
