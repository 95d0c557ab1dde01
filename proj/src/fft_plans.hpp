#pragma once

#include <fftw3.h>

namespace ehd::detail {

/// r2c/c2r plans for one grid size. Executed through the new-array interface,
/// which FFTW documents as thread-safe.
struct FftPlans {
    int n = 0;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    FftPlans(int n, int threads);
    ~FftPlans();
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;
};

}  // namespace ehd::detail
