#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace mkdv::detail {

/// Real-to-complex transform of length n backed by a process-wide plan cache.
/// Execution is reentrant; plans are created under a lock.
class RealFft {
public:
    explicit RealFft(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

    /// Unnormalized forward transform: out[j] = sum_i in[i] exp(-2 pi i j / n).
    void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
    /// Unnormalized inverse.  `in` is overwritten.
    void inverse(std::span<std::complex<double>> in, std::span<double> out) const;

private:
    std::size_t n_;
    void* forward_plan_;
    void* inverse_plan_;
};

}  // namespace mkdv::detail
