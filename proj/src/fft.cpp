#include "toepexp/fft.hpp"

#include <map>
#include <mutex>

#include <fftw3.h>

namespace toepexp {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

} // namespace

FftPlan::FftPlan(Index m) : m_(m) {
    if (m < 1) throw DimensionError("FFT length must be positive");
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* a = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
    auto* b = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_1d(static_cast<int>(m), a, b, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(m), a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
}

FftPlan::~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void FftPlan::forward(const cplx* in, cplx* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), as_fftw(in), as_fftw(out));
}

void FftPlan::backward(const cplx* in, cplx* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), as_fftw(in), as_fftw(out));
}

Vec FftPlan::forward(const Vec& x) const {
    if (x.size() != m_) throw DimensionError("FFT input length mismatch");
    Vec y(m_);
    forward(x.data(), y.data());
    return y;
}

Vec FftPlan::backward(const Vec& x) const {
    if (x.size() != m_) throw DimensionError("FFT input length mismatch");
    Vec y(m_);
    backward(x.data(), y.data());
    return y;
}

std::shared_ptr<const FftPlan> fft_plan(Index m) {
    static std::mutex cache_mutex;
    static std::map<Index, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const FftPlan>(m);
    cache.emplace(m, plan);
    return plan;
}

Index next_pow2(Index m) {
    Index p = 1;
    while (p < m) p <<= 1;
    return p;
}

} // namespace toepexp
