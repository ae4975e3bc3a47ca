#pragma once

#include <memory>
#include <vector>

#include "holo/expr.hpp"

namespace holo {

/// Planar set algebra: half-planes, vertical strips, boxes, disks, closed
/// under union / intersection / complement, plus a reflection z -> -z used by
/// the mirrored comb regions.
struct Region;
using RegionPtr = std::shared_ptr<const Region>;

struct Region {
    enum class Kind {
        HalfPlane, VStrip, Box, OpenBox, Disk, All, Union, Intersection, Complement, Reflect
    };
    Kind kind;
    // HalfPlane {Re(e^{-i theta} z) <= d}
    double theta = 0.0, d = 0.0;
    // VStrip / Box intervals
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
    // Disk
    cx center{};
    double radius = 0.0;
    std::vector<RegionPtr> args;
};

namespace rg {

RegionPtr half_plane(double theta, double d);
inline RegionPtr re_le(double d) { return half_plane(0.0, d); }
inline RegionPtr re_ge(double d) { return half_plane(3.14159265358979323846, -d); }
RegionPtr vstrip(double re_lo, double re_hi);
RegionPtr box(double re_lo, double re_hi, double im_lo, double im_hi);
RegionPtr open_box(double re_lo, double re_hi, double im_lo, double im_hi);  // strict sides
RegionPtr disk(cx center, double radius);
RegionPtr all();
RegionPtr region_union(std::vector<RegionPtr> args);
RegionPtr region_intersection(std::vector<RegionPtr> args);
RegionPtr complement(RegionPtr a);
RegionPtr reflect(RegionPtr a);  // {z : -z in a}

}  // namespace rg

bool region_contains(const RegionPtr& r, cx z);

/// Lattice points (pitch h, anchored at 0) within radius R that lie in r,
/// ordered by increasing imaginary then real part. Budget-limited.
std::vector<cx> sample_region(const RegionPtr& r, double R, double h);

// Comb sets with the hard-coded offsets these constructions rely on.
RegionPtr comb_A(int j);          // {Re z <= -3, |Im z - 7j| <= 3}, j >= 1
RegionPtr comb_A0(int max_teeth); // {Re z >= -1} minus teeth {Re>5, |Im-7j|<1}
RegionPtr comb_E0(int max_teeth); // {Re z >= 0} minus teeth {Re>4, |Im-7j|<2}
RegionPtr comb_E(int max_j);      // union of {Re z <= -4, |Im-7j| <= 2}

json region_to_json(const RegionPtr& r);
RegionPtr region_from_json(const json& j);

}  // namespace holo
