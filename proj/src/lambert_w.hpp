#ifndef SIRW_LAMBERT_W_HPP
#define SIRW_LAMBERT_W_HPP

namespace sirw {

// Principal branch W0 of the Lambert W function on [-1/e, inf).
// Throws Error(Errc::domain_error) for z below -1/e - 1e-12; arguments
// inside that band are treated as the branch point itself.
double lambert_w0(double z);

// Tolerance band below -1/e inside which z is clamped to the branch point.
inline constexpr double kLambertDomainTol = 1e-12;

} // namespace sirw

#endif
