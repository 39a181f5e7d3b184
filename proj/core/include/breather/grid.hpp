#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mkdv {

/// Raised when a field does not decay at the domain ends and the caller asked
/// for strict tail checking.
class TailError : public std::runtime_error {
public:
    TailError(const std::string& what, double magnitude)
        : std::runtime_error(what), magnitude_(magnitude) {}
    double magnitude() const noexcept { return magnitude_; }

private:
    double magnitude_;
};

/// Default threshold for the decay check at the ends of the periodic box.
inline constexpr double kTailThreshold = 1e-10;

enum class TailPolicy { lenient, strict };

/**
 * Periodic truncation of the real line: the box [-L, L) sampled at
 * N equally spaced points x_i = -L + i*h, h = 2L/N.
 *
 * Wavenumbers are integer multiples of pi/L.  N must be even and >= 16.
 */
class GridSpec {
public:
    static GridSpec make(double half_width, std::size_t n_points);

    double half_width() const noexcept { return half_width_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return 2.0 * half_width_ / static_cast<double>(n_); }
    double length() const noexcept { return 2.0 * half_width_; }

    double point(std::size_t i) const noexcept {
        return -half_width_ + static_cast<double>(i) * spacing();
    }
    std::vector<double> points() const;

    /// Wavenumber of the r2c coefficient with index j (0 <= j <= N/2).
    double wavenumber(std::size_t j) const noexcept;
    /// Largest representable wavenumber, pi/h.
    double nyquist() const noexcept;

    bool operator==(const GridSpec& other) const noexcept {
        return half_width_ == other.half_width_ && n_ == other.n_;
    }

private:
    GridSpec(double half_width, std::size_t n) : half_width_(half_width), n_(n) {}

    double half_width_;
    std::size_t n_;
};

/// Immutable real samples on a GridSpec.  Construction rejects NaN/Inf.
class Field {
public:
    Field(GridSpec grid, std::vector<double> samples);
    static Field zeros(const GridSpec& grid);

    template <typename Fn>
    static Field from_function(const GridSpec& grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
        return Field(grid, std::move(v));
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }

    /// Largest absolute sample.
    double sup_norm() const noexcept;
    /// Largest absolute sample in the outer band of the box (both ends).
    double tail_magnitude() const noexcept;

    /// Circular shift by whole grid steps: result[i] = samples[i - steps].
    Field shifted(long steps) const;

    Field operator-() const;
    friend Field operator+(const Field& a, const Field& b);
    friend Field operator-(const Field& a, const Field& b);
    friend Field operator*(const Field& a, const Field& b);
    friend Field operator*(double s, const Field& a);
    friend Field operator*(const Field& a, double s) { return s * a; }

private:
    GridSpec grid_;
    std::vector<double> samples_;
};

/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* where);

/// Throws TailError under TailPolicy::strict when the field does not decay.
void check_tails(const Field& f, TailPolicy policy, const char* where,
                 double threshold = kTailThreshold);

}  // namespace mkdv
