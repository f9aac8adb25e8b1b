#pragma once

#include <span>

namespace exmine::kernels {

/// Instruction-set variants of the reduction kernels. The scalar variant is the
/// reference; the others must agree with it to rounding.
enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

/// Variant used by the dispatching entry points. Defaults to the widest supported one.
Isa active_isa();

/// Forces a variant. Returns false (and changes nothing) if it is unsupported.
bool set_active_isa(Isa isa);

struct PowerSums {
    double s1 = 0.0;  // sum (x - c)
    double s2 = 0.0;  // sum (x - c)^2
    double s3 = 0.0;
    double s4 = 0.0;
};

double sum(std::span<const double> x);
PowerSums central_power_sums(std::span<const double> x, double center);

namespace scalar {
double sum(std::span<const double> x);
PowerSums central_power_sums(std::span<const double> x, double center);
}  // namespace scalar

#if defined(EXMINE_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
PowerSums central_power_sums(std::span<const double> x, double center);
}  // namespace avx2
#endif

}  // namespace exmine::kernels
