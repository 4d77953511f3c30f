#pragma once

#include <memory>

#include "toepexp/types.hpp"

namespace toepexp {

// Unnormalized complex DFT of a fixed length backed by FFTW.
//   forward:  y_j = sum_k x_k exp(-2 pi i jk/m)
//   backward: y_j = sum_k x_k exp(+2 pi i jk/m)
// Plans are created unaligned and out-of-place, so any pair of distinct
// contiguous buffers of length m is accepted. Execution is thread-safe.
class FftPlan {
public:
    explicit FftPlan(Index m);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    Index size() const noexcept { return m_; }

    void forward(const cplx* in, cplx* out) const;
    void backward(const cplx* in, cplx* out) const;

    Vec forward(const Vec& x) const;
    Vec backward(const Vec& x) const;

private:
    Index m_;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

// Shared plan for length m from a process-wide cache.
std::shared_ptr<const FftPlan> fft_plan(Index m);

// Smallest power of two >= m (m >= 1).
Index next_pow2(Index m);

} // namespace toepexp
