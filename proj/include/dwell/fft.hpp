#pragma once

#include <complex>
#include <mutex>
#include <span>

#include <fftw3.h>

#include "dwell/errors.hpp"
#include "dwell/grid.hpp"

namespace dwell {

namespace detail {
// FFTW's planner is not thread-safe; all plan create/destroy calls are
// serialized through this mutex. Plan execution via fftw_execute_dft is
// re-entrant and needs no lock.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// In-place complex-to-complex transform of fixed power-of-two size.
///
/// Plans are created with FFTW_ESTIMATE, so the chosen algorithm depends only
/// on the transform size: repeated runs of the same build produce bit-identical
/// results. Transforms are unnormalized; forward followed by inverse scales by n.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (!is_power_of_two(n) || n < 2)
            throw ConfigError("Fft: size must be a power of two >= 2, got " + std::to_string(n));
        std::scoped_lock lock(detail::fftw_planner_mutex());
        auto* buf = fftw_alloc_complex(n);
        if (buf == nullptr) throw NumericalError("Fft: allocation failed");
        // FFTW_UNALIGNED makes the plans valid for any caller buffer.
        forward_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        inverse_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        if (forward_ == nullptr || inverse_ == nullptr)
            throw NumericalError("Fft: plan creation failed for n = " + std::to_string(n));
    }

    ~Fft() {
        if (forward_ != nullptr || inverse_ != nullptr) {
            std::scoped_lock lock(detail::fftw_planner_mutex());
            if (forward_ != nullptr) fftw_destroy_plan(forward_);
            if (inverse_ != nullptr) fftw_destroy_plan(inverse_);
        }
    }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    Fft(Fft&& other) noexcept
        : n_(other.n_), forward_(other.forward_), inverse_(other.inverse_) {
        other.forward_ = nullptr;
        other.inverse_ = nullptr;
    }
    Fft& operator=(Fft&&) = delete;

    std::size_t size() const { return n_; }

    void forward(std::span<complex> data) const { execute(forward_, data); }
    void inverse(std::span<complex> data) const { execute(inverse_, data); }

private:
    void execute(fftw_plan plan, std::span<complex> data) const {
        if (data.size() != n_)
            throw ConfigError("Fft: buffer size " + std::to_string(data.size()) +
                              " does not match transform size " + std::to_string(n_));
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(plan, p, p);
    }

    std::size_t n_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

}  // namespace dwell
