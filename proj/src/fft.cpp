#include "ob/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ob {
namespace {

// Plan cache keyed by (dim, n, sign).  Plans are created with
// FFTW_ESTIMATE|FFTW_UNALIGNED so planning is deterministic and plans can be
// executed on any buffer via the new-array interface.
struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    fftw_plan get(const GridSpec& g, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(g.dim, g.n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::vector<cplx> buf(g.points());
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        fftw_plan plan = nullptr;
        if (g.dim == 2)
            plan = fftw_plan_dft_2d(g.n, g.n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        else
            plan = fftw_plan_dft_3d(g.n, g.n, g.n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans[key] = plan;
        return plan;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(const GridSpec& g, int sign, const std::vector<cplx>& in, std::vector<cplx>& out) {
    fftw_plan plan = cache().get(g, sign);
    out.resize(in.size());
    auto* pi = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* po = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, pi, po);
}

}  // namespace

namespace fft {

void inverse(const GridSpec& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
    execute(g, FFTW_BACKWARD, in, out);
}

void forward(const GridSpec& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
    execute(g, FFTW_FORWARD, in, out);
    const double norm = 1.0 / static_cast<double>(g.points());
    for (auto& c : out) c *= norm;
}

RealSamples to_phys(const GridSpec& g, const std::vector<cplx>& coeffs) {
    std::vector<cplx> tmp;
    inverse(g, coeffs, tmp);
    RealSamples r(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) r[i] = tmp[i].real();
    return r;
}

std::vector<cplx> from_phys(const GridSpec& g, const RealSamples& samples) {
    std::vector<cplx> tmp(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) tmp[i] = cplx(samples[i], 0.0);
    std::vector<cplx> out;
    forward(g, tmp, out);
    return out;
}

}  // namespace fft

std::vector<RealSamples> to_phys_all(const SpectralField& f) {
    std::vector<RealSamples> out(f.rank());
    for (int c = 0; c < f.rank(); ++c) out[c] = fft::to_phys(f.grid(), f.comp(c));
    return out;
}

SpectralField from_phys_all(const GridSpec& g, const std::vector<RealSamples>& samples) {
    SpectralField f(g, static_cast<int>(samples.size()));
    for (std::size_t c = 0; c < samples.size(); ++c) f.comp(static_cast<int>(c)) = fft::from_phys(g, samples[c]);
    return f;
}

}  // namespace ob
