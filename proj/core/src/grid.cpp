#include "breather/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mkdv {

GridSpec GridSpec::make(double half_width, std::size_t n_points) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw std::invalid_argument("GridSpec: half width must be positive and finite");
    }
    if (n_points < 16) {
        throw std::invalid_argument("GridSpec: need at least 16 points");
    }
    if (n_points % 2 != 0) {
        throw std::invalid_argument("GridSpec: number of points must be even");
    }
    return GridSpec(half_width, n_points);
}

std::vector<double> GridSpec::points() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = point(i);
    return x;
}

double GridSpec::wavenumber(std::size_t j) const noexcept {
    return std::numbers::pi / half_width_ * static_cast<double>(j);
}

double GridSpec::nyquist() const noexcept { return wavenumber(n_ / 2); }

Field::Field(GridSpec grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        throw std::invalid_argument("Field: sample count does not match grid");
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Field: non-finite sample");
    }
}

Field Field::zeros(const GridSpec& grid) {
    return Field(grid, std::vector<double>(grid.size(), 0.0));
}

double Field::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

double Field::tail_magnitude() const noexcept {
    const std::size_t band = std::max<std::size_t>(2, samples_.size() / 128);
    double m = 0.0;
    for (std::size_t i = 0; i < band; ++i) {
        m = std::max({m, std::abs(samples_[i]), std::abs(samples_[samples_.size() - 1 - i])});
    }
    return m;
}

Field Field::shifted(long steps) const {
    const long n = static_cast<long>(samples_.size());
    const long s = ((steps % n) + n) % n;
    std::vector<double> out(samples_.size());
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>((i + s) % n)] = samples_[i];
    return Field(grid_, std::move(out));
}

Field Field::operator-() const {
    std::vector<double> v(samples_);
    for (double& x : v) x = -x;
    return Field(grid_, std::move(v));
}

namespace {
template <typename Op>
Field combine(const Field& a, const Field& b, Op op, const char* where) {
    require_same_grid(a, b, where);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
    return Field(a.grid(), std::move(v));
}
}  // namespace

Field operator+(const Field& a, const Field& b) {
    return combine(a, b, [](double x, double y) { return x + y; }, "operator+");
}
Field operator-(const Field& a, const Field& b) {
    return combine(a, b, [](double x, double y) { return x - y; }, "operator-");
}
Field operator*(const Field& a, const Field& b) {
    return combine(a, b, [](double x, double y) { return x * y; }, "operator*");
}
Field operator*(double s, const Field& a) {
    std::vector<double> v(a.samples().begin(), a.samples().end());
    for (double& x : v) x *= s;
    return Field(a.grid(), std::move(v));
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
    }
}

void check_tails(const Field& f, TailPolicy policy, const char* where, double threshold) {
    if (policy != TailPolicy::strict) return;
    const double tail = f.tail_magnitude();
    if (tail > threshold) {
        std::ostringstream os;
        os << where << ": field does not decay at the box ends (tail " << tail
           << " > " << threshold << ")";
        throw TailError(os.str(), tail);
    }
}

}  // namespace mkdv
