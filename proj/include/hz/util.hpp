#pragma once
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hz {

using cplx = std::complex<double>;
constexpr double TWO_PI = 6.283185307179586476925286766559;

struct NotHyperbolic : std::runtime_error { using std::runtime_error::runtime_error; };
struct DomainError : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoIsometricCircle : std::runtime_error { using std::runtime_error::runtime_error; };
struct UnknownLabel : std::runtime_error { using std::runtime_error::runtime_error; };
struct InconsistentSpinStructure : std::runtime_error { using std::runtime_error::runtime_error; };
struct MissingSpinStructure : std::runtime_error { using std::runtime_error::runtime_error; };
struct MixedPresets : std::runtime_error { using std::runtime_error::runtime_error; };
struct CodingConstructionFailed : std::runtime_error { using std::runtime_error::runtime_error; };
struct CapExceeded : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotClosed : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoBoundaryMap : std::runtime_error { using std::runtime_error::runtime_error; };
struct Diverged : std::runtime_error { using std::runtime_error::runtime_error; };
struct BracketFailed : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotConverged : std::runtime_error { using std::runtime_error::runtime_error; };
struct TubeInclusionFailed : std::runtime_error { using std::runtime_error::runtime_error; };
struct BranchCutCrossed : std::runtime_error { using std::runtime_error::runtime_error; };
struct TailNotCertified : std::runtime_error { using std::runtime_error::runtime_error; };
struct ContourThroughPole : std::runtime_error { using std::runtime_error::runtime_error; };
struct ValidityExceeded : std::runtime_error { using std::runtime_error::runtime_error; };
struct CoverageInsufficient : std::runtime_error { using std::runtime_error::runtime_error; };
struct ContourZeroOnBoundary : std::runtime_error { using std::runtime_error::runtime_error; };
struct CenterIsZero : std::runtime_error { using std::runtime_error::runtime_error; };
struct IllConditionedGram : std::runtime_error { using std::runtime_error::runtime_error; };
struct ConfigError : std::runtime_error { using std::runtime_error::runtime_error; };

inline double norm_angle(double t) {
  t = std::fmod(t, TWO_PI);
  if (t < 0) t += TWO_PI;
  return t;
}

// cyclic arc helpers: arc from a to b going counterclockwise
inline double arc_len(double a, double b) { return norm_angle(b - a); }
inline bool in_arc(double t, double a, double b) { return norm_angle(t - a) < arc_len(a, b); }
inline double angle_dist(double a, double b) {
  double d = std::fabs(norm_angle(a) - norm_angle(b));
  return std::min(d, TWO_PI - d);
}

// compensated (Kahan) accumulator for deterministic long reductions
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

// FNV-1a, used for cache keys and manifests
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) { h ^= p[i]; h *= 1099511628211ull; }
  return h;
}
inline std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

}  // namespace hz
