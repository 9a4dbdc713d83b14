#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace relzeta {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// bad argument values / out-of-range parameters
struct DomainError : Error {
  using Error::Error;
};

// p == q and similar configurations where the invariants degenerate
struct DegeneratePairError : Error {
  using Error::Error;
};

// adaptive integration could not reach the requested tolerance
struct QuadratureError : Error {
  using Error::Error;
};

// cross-check between independent evaluation routes failed
struct CalibrationError : Error {
  using Error::Error;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double c, const Vec3& v) { return v * c; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

// metric signature (-,+,+,+); time component first
struct FourVec {
  double t = 0;
  Vec3 sp;

  FourVec operator+(const FourVec& o) const { return {t + o.t, sp + o.sp}; }
  FourVec operator-(const FourVec& o) const { return {t - o.t, sp - o.sp}; }
};

inline double mink_dot(const FourVec& a, const FourVec& b) {
  return -a.t * b.t + dot(a.sp, b.sp);
}

// mt19937_64 is bit-exact by the standard; the double mapping is pinned here
// (uniform_real_distribution is not portable) so seeded runs reproduce byte-
// identically everywhere
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline double sqr(double x) { return x * x; }

}  // namespace relzeta
