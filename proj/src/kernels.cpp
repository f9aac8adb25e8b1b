#include "exmine/kernels.hpp"

#include <atomic>

namespace exmine::kernels {

namespace scalar {

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

PowerSums central_power_sums(std::span<const double> x, double center) {
    PowerSums p;
    for (double v : x) {
        const double d = v - center;
        const double d2 = d * d;
        p.s1 += d;
        p.s2 += d2;
        p.s3 += d2 * d;
        p.s4 += d2 * d2;
    }
    return p;
}

}  // namespace scalar

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(EXMINE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

namespace {

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar};
    return isa;
}

}  // namespace

Isa active_isa() { return active().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) {
    if (!isa_supported(isa)) return false;
    active().store(isa, std::memory_order_relaxed);
    return true;
}

double sum(std::span<const double> x) {
#if defined(EXMINE_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::sum(x);
#endif
    return scalar::sum(x);
}

PowerSums central_power_sums(std::span<const double> x, double center) {
#if defined(EXMINE_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return avx2::central_power_sums(x, center);
#endif
    return scalar::central_power_sums(x, center);
}

}  // namespace exmine::kernels
