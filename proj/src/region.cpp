#include "holo/region.hpp"

#include <cmath>
#include <limits>

namespace holo {

namespace rg {

namespace {
RegionPtr make(Region r) { return std::make_shared<Region>(std::move(r)); }
}  // namespace

RegionPtr half_plane(double theta, double d) {
    Region r;
    r.kind = Region::Kind::HalfPlane;
    r.theta = theta;
    r.d = d;
    return make(r);
}

RegionPtr vstrip(double re_lo, double re_hi) {
    if (re_lo >= re_hi) throw Error("degenerate strip");
    Region r;
    r.kind = Region::Kind::VStrip;
    r.re_lo = re_lo;
    r.re_hi = re_hi;
    return make(r);
}

RegionPtr box(double re_lo, double re_hi, double im_lo, double im_hi) {
    if (re_lo >= re_hi || im_lo >= im_hi) throw Error("degenerate box");
    Region r;
    r.kind = Region::Kind::Box;
    r.re_lo = re_lo;
    r.re_hi = re_hi;
    r.im_lo = im_lo;
    r.im_hi = im_hi;
    return make(r);
}

RegionPtr open_box(double re_lo, double re_hi, double im_lo, double im_hi) {
    if (re_lo >= re_hi || im_lo >= im_hi) throw Error("degenerate box");
    Region r;
    r.kind = Region::Kind::OpenBox;
    r.re_lo = re_lo;
    r.re_hi = re_hi;
    r.im_lo = im_lo;
    r.im_hi = im_hi;
    return make(r);
}

RegionPtr disk(cx center, double radius) {
    if (radius <= 0.0) throw Error("non-positive disk radius");
    Region r;
    r.kind = Region::Kind::Disk;
    r.center = center;
    r.radius = radius;
    return make(r);
}

RegionPtr all() {
    Region r;
    r.kind = Region::Kind::All;
    return make(r);
}

RegionPtr region_union(std::vector<RegionPtr> args) {
    Region r;
    r.kind = Region::Kind::Union;
    r.args = std::move(args);
    return make(r);
}

RegionPtr region_intersection(std::vector<RegionPtr> args) {
    Region r;
    r.kind = Region::Kind::Intersection;
    r.args = std::move(args);
    return make(r);
}

RegionPtr complement(RegionPtr a) {
    Region r;
    r.kind = Region::Kind::Complement;
    r.args = {std::move(a)};
    return make(r);
}

RegionPtr reflect(RegionPtr a) {
    Region r;
    r.kind = Region::Kind::Reflect;
    r.args = {std::move(a)};
    return make(r);
}

}  // namespace rg

bool region_contains(const RegionPtr& r, cx z) {
    switch (r->kind) {
        case Region::Kind::HalfPlane:
            return (std::cos(r->theta) * z.real() + std::sin(r->theta) * z.imag()) <= r->d;
        case Region::Kind::VStrip:
            return z.real() >= r->re_lo && z.real() <= r->re_hi;
        case Region::Kind::Box:
            return z.real() >= r->re_lo && z.real() <= r->re_hi && z.imag() >= r->im_lo &&
                   z.imag() <= r->im_hi;
        case Region::Kind::OpenBox:
            return z.real() > r->re_lo && z.real() < r->re_hi && z.imag() > r->im_lo &&
                   z.imag() < r->im_hi;
        case Region::Kind::Disk:
            return std::abs(z - r->center) <= r->radius;
        case Region::Kind::All:
            return true;
        case Region::Kind::Union:
            for (const auto& a : r->args)
                if (region_contains(a, z)) return true;
            return false;
        case Region::Kind::Intersection:
            for (const auto& a : r->args)
                if (!region_contains(a, z)) return false;
            return true;
        case Region::Kind::Complement:
            return !region_contains(r->args[0], z);
        case Region::Kind::Reflect:
            return region_contains(r->args[0], -z);
    }
    return false;
}

std::vector<cx> sample_region(const RegionPtr& r, double R, double h) {
    if (R <= 0.0 || h <= 0.0) throw Error("sample_region needs R > 0 and h > 0");
    const long long per_axis = 2 * static_cast<long long>(std::floor(R / h)) + 1;
    if (per_axis * per_axis > 10'000'000LL) throw Error("sample budget exceeded (> 1e7 points)");
    std::vector<cx> out;
    const long long k = static_cast<long long>(std::floor(R / h));
    for (long long iy = -k; iy <= k; ++iy) {
        for (long long ix = -k; ix <= k; ++ix) {
            cx z(static_cast<double>(ix) * h, static_cast<double>(iy) * h);
            if (std::abs(z) > R) continue;
            if (region_contains(r, z)) out.push_back(z);
        }
    }
    return out;
}

RegionPtr comb_A(int j) {
    if (j < 1) throw Error("comb_A needs j >= 1");
    return rg::box(-1e9, -3.0, 7.0 * j - 3.0, 7.0 * j + 3.0);
}

RegionPtr comb_A0(int max_teeth) {
    std::vector<RegionPtr> teeth;
    for (int j = 1; j <= max_teeth; ++j)
        teeth.push_back(rg::open_box(5.0, 1e9, 7.0 * j - 1.0, 7.0 * j + 1.0));
    return rg::region_intersection({rg::re_ge(-1.0), rg::complement(rg::region_union(teeth))});
}

RegionPtr comb_E0(int max_teeth) {
    std::vector<RegionPtr> teeth;
    for (int j = 1; j <= max_teeth; ++j)
        teeth.push_back(rg::open_box(4.0, 1e9, 7.0 * j - 2.0, 7.0 * j + 2.0));
    return rg::region_intersection({rg::re_ge(0.0), rg::complement(rg::region_union(teeth))});
}

RegionPtr comb_E(int max_j) {
    std::vector<RegionPtr> cells;
    for (int j = 1; j <= max_j; ++j)
        cells.push_back(rg::box(-1e9, -4.0, 7.0 * j - 2.0, 7.0 * j + 2.0));
    return rg::region_union(cells);
}

json region_to_json(const RegionPtr& r) {
    json j;
    switch (r->kind) {
        case Region::Kind::HalfPlane:
            j = {{"type", "halfplane"}, {"theta", r->theta}, {"d", r->d}};
            break;
        case Region::Kind::VStrip:
            j = {{"type", "vstrip"}, {"re_lo", r->re_lo}, {"re_hi", r->re_hi}};
            break;
        case Region::Kind::Box:
        case Region::Kind::OpenBox:
            j = {{"type", r->kind == Region::Kind::Box ? "box" : "open_box"},
                 {"re", {r->re_lo, r->re_hi}},
                 {"im", {r->im_lo, r->im_hi}}};
            break;
        case Region::Kind::Disk:
            j = {{"type", "disk"},
                 {"center", {r->center.real(), r->center.imag()}},
                 {"radius", r->radius}};
            break;
        case Region::Kind::All:
            j = {{"type", "all"}};
            break;
        case Region::Kind::Union:
        case Region::Kind::Intersection: {
            j["type"] = r->kind == Region::Kind::Union ? "union" : "intersection";
            json args = json::array();
            for (const auto& a : r->args) args.push_back(region_to_json(a));
            j["args"] = std::move(args);
            break;
        }
        case Region::Kind::Complement:
            j = {{"type", "complement"}, {"arg", region_to_json(r->args[0])}};
            break;
        case Region::Kind::Reflect:
            j = {{"type", "reflect"}, {"arg", region_to_json(r->args[0])}};
            break;
    }
    return j;
}

RegionPtr region_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "halfplane") return rg::half_plane(j.at("theta"), j.at("d"));
    if (type == "vstrip") return rg::vstrip(j.at("re_lo"), j.at("re_hi"));
    if (type == "box" || type == "open_box") {
        auto re = j.at("re");
        auto im = j.at("im");
        return type == "box" ? rg::box(re[0], re[1], im[0], im[1])
                             : rg::open_box(re[0], re[1], im[0], im[1]);
    }
    if (type == "disk") {
        auto c = j.at("center");
        return rg::disk(cx(c[0], c[1]), j.at("radius"));
    }
    if (type == "all") return rg::all();
    if (type == "union" || type == "intersection") {
        std::vector<RegionPtr> args;
        for (const auto& a : j.at("args")) args.push_back(region_from_json(a));
        return type == "union" ? rg::region_union(std::move(args))
                               : rg::region_intersection(std::move(args));
    }
    if (type == "complement") return rg::complement(region_from_json(j.at("arg")));
    if (type == "reflect") return rg::reflect(region_from_json(j.at("arg")));
    throw Error("unknown region type '" + type + "'");
}

}  // namespace holo
