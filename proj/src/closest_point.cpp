#include "elastreg/closest_point.hpp"

namespace elastreg {

TriClosest closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;

  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    return {a, Vec3(1, 0, 0), (p - a).squaredNorm()};  // vertex region A
  }

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) {
    return {b, Vec3(0, 1, 0), (p - b).squaredNorm()};  // vertex region B
  }

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {  // edge region AB
    const double v = d1 / (d1 - d3);
    const Vec3 q = a + v * ab;
    return {q, Vec3(1.0 - v, v, 0.0), (p - q).squaredNorm()};
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) {
    return {c, Vec3(0, 0, 1), (p - c).squaredNorm()};  // vertex region C
  }

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {  // edge region AC
    const double w = d2 / (d2 - d6);
    const Vec3 q = a + w * ac;
    return {q, Vec3(1.0 - w, 0.0, w), (p - q).squaredNorm()};
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {  // edge region BC
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    const Vec3 q = b + w * (c - b);
    return {q, Vec3(0.0, 1.0 - w, w), (p - q).squaredNorm()};
  }

  // Face region.
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  const Vec3 q = a + v * ab + w * ac;
  return {q, Vec3(1.0 - v - w, v, w), (p - q).squaredNorm()};
}

}  // namespace elastreg
