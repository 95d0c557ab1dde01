#include "ehd/grid.hpp"

#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "ehd/error.hpp"
#include "fft_plans.hpp"

namespace ehd {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::atomic<int> g_threads{1};

struct GridTables {
    std::shared_ptr<const std::vector<double>> k2;
    std::shared_ptr<const std::vector<unsigned char>> mask;
    std::shared_ptr<const detail::FftPlans> plans;
};

GridTables tables_for(int n) {
    std::lock_guard lock(planner_mutex());
    static std::map<std::pair<int, int>, GridTables> cache;
    const int threads = g_threads.load();
    auto it = cache.find({n, threads});
    if (it != cache.end()) return it->second;

    const int nh = n / 2 + 1;
    const int kmax = n / 3;
    auto k2 = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) * n * nh);
    auto mask = std::make_shared<std::vector<unsigned char>>(k2->size());
    std::size_t m = 0;
    for (int c = 0; c < n; ++c) {
        const int kz = c < n / 2 ? c : c - n;
        for (int b = 0; b < n; ++b) {
            const int ky = b < n / 2 ? b : b - n;
            for (int a = 0; a < nh; ++a, ++m) {
                (*k2)[m] = double(a) * a + double(ky) * ky + double(kz) * kz;
                // The Nyquist index (|k| = n/2) always exceeds kmax, so it is masked.
                (*mask)[m] = (a <= kmax && std::abs(ky) <= kmax && std::abs(kz) <= kmax) ? 1 : 0;
            }
        }
    }
    GridTables t{std::move(k2), std::move(mask), std::make_shared<detail::FftPlans>(n, threads)};
    cache.emplace(std::pair{n, threads}, t);
    return t;
}

}  // namespace

namespace detail {

FftPlans::FftPlans(int n_, int threads) : n(n_) {
    // Planning is not thread-safe; callers hold planner_mutex().
    static const bool threads_ok = fftw_init_threads() != 0;
    if (threads_ok) fftw_plan_with_nthreads(threads);
    const std::size_t real_size = static_cast<std::size_t>(n) * n * n;
    const std::size_t spec_size = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(spec_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags);
    c2r = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (!r2c || !c2r) throw Error(ErrorCode::Domain, "FFTW planning failed for n=" + std::to_string(n));
}

FftPlans::~FftPlans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
}

}  // namespace detail

Grid::Grid(int n) : n_(n) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw Error(ErrorCode::Domain,
                    "grid size must be a power of two and >= 8 (got " + std::to_string(n) + ")");
    auto t = tables_for(n);
    k2_ = std::move(t.k2);
    mask_ = std::move(t.mask);
    plans_ = std::move(t.plans);
}

std::size_t Grid::partner(std::size_t m) const noexcept {
    const int a = static_cast<int>(m % nh());
    const int b = static_cast<int>((m / nh()) % n_);
    const int c = static_cast<int>(m / (static_cast<std::size_t>(nh()) * n_));
    return spectral_index(a, (n_ - b) % n_, (n_ - c) % n_);
}

void set_max_threads(int threads) { g_threads.store(threads < 1 ? 1 : threads); }
int max_threads() { return g_threads.load(); }

}  // namespace ehd
