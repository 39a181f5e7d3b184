#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "breather/closed_forms.hpp"
#include "breather/grid.hpp"

namespace mkdv {

/// Dense assembly is refused above this many grid points.
inline constexpr std::size_t kMaxDenseSize = 4096;

/**
 * Discretization of the linearized operator
 *
 *   L z = z_4x - 2(b^2-a^2) z_xx + (a^2+b^2)^2 z + (5 B^2 z_x)_x
 *         + [5 B_x^2 + 10 B B_xx + 15/2 B^4 - 6(b^2-a^2) B^2] z
 *
 * acting on sample vectors.  The variable-coefficient second-order block is
 * stored as -(W D1)^T (W D1) with W = diag(sqrt(5)|B|), so the matrix is
 * symmetric by construction.
 */
struct OperatorMatrix {
    std::size_t n = 0;
    Eigen::MatrixXd entries;
    GridSpec grid;
    double alpha = 0.0;
    double beta = 0.0;
    double built_at = 0.0;

    Field apply(const Field& z) const;
    double symmetry_defect() const;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;  // k lowest, ascending
    std::size_t n_negative = 0;
    std::size_t kernel_count = 0;
    double essential_edge_theory = 0.0;
    double lowest_eigenvalue = 0.0;
    double tol_negative = 0.0;
    double tol_kernel = 0.0;
};

/// Residual sup-norms of the kernel, scaling and B0 identities.
struct StructureResiduals {
    double kernel_x1 = 0.0;    // |L[B1]|
    double kernel_x2 = 0.0;    // |L[B2]|
    double scale_alpha = 0.0;  // |L[Lambda_a B] + 4a(B_xx + B^3 + (a^2+b^2) B)|
    double scale_beta = 0.0;   // |L[Lambda_b B] - 4b(B_xx + B^3 - (a^2+b^2) B)|
    double b0 = 0.0;           // |L[B0] + B|
};

enum class Metric { l2, h2 };

/// Bottom of the continuous spectrum: (a^2+b^2)^2 if b >= a, else 4 a^2 b^2.
double essential_edge(double alpha, double beta) noexcept;

Field apply_L(const Field& z, const Field& b, double alpha, double beta);

OperatorMatrix assemble_L(const GridSpec& g, const Field& b, double alpha, double beta,
                          double built_at = 0.0);

/// int z L[z].
double quadratic_form(const Field& z, const Field& b, double alpha, double beta);

StructureResiduals verify_structure(const BreatherParams& p, double t, const GridSpec& g);

/// k lowest eigenvalues of the assembled operator, classified against
/// tolerances proportional to (alpha^2 + beta^2)^2.
SpectrumReport spectrum(const OperatorMatrix& m, std::size_t k);

/**
 * Minimum of z^T M z / z^T G z over sample vectors orthogonal (in L2) to every
 * constraint, where G is the Gram matrix of the chosen metric.
 *
 * Throws std::invalid_argument when the constraints are numerically dependent.
 */
double coercivity_estimate(const OperatorMatrix& m, std::span<const Field> constraints,
                           Metric metric);

/// H[B + z] - H[B] - 1/2 int z L[z] for the breather B(p, t) on z's grid.
double expansion_remainder(const BreatherParams& p, double t, const Field& z);

/// Lowest `k` eigenvalues of a symmetric matrix (only the lower triangle is read).
std::vector<double> lowest_eigenvalues(const Eigen::MatrixXd& symmetric, std::size_t k);

}  // namespace mkdv
