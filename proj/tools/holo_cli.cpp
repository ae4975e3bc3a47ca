// Command-line front end: build a scene, re-verify a serialized curve,
// run the splitting convergence demo, or emit plot CSVs.
//
// Exit codes: 0 all certificate sections pass; 1 a section fails;
// 2 malformed input or a pipeline error (machine-readable JSON on stderr).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "holo/flow.hpp"
#include "holo/pipelines.hpp"

namespace fs = std::filesystem;
using namespace holo;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

struct Overrides {
    double seed = -1.0, pitch = -1.0, rver = -1.0;
    bool strict = false;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Sampling seed override");
        cmd->add_option("--pitch", pitch, "Verification grid pitch override");
        cmd->add_option("--rver", rver, "Verified radius override");
        cmd->add_flag("--strict", strict, "Disable epsilon relaxation in fits");
    }
    void apply(Scene& s) const {
        if (seed >= 0.0) s.params["seed"] = seed;
        if (pitch > 0.0) s.params["pitch"] = pitch;
        if (rver > 0.0) s.params["R_ver"] = rver;
        if (strict) s.params["strict"] = 1.0;
    }
};

HoloCurve curve_from_file(const json& j) {
    if (j.contains("components")) return curve_from_json(j);
    if (j.contains("curve")) {
        // a build result: the curve components live under "curve"
        HoloCurve c;
        for (const auto& e : j.at("curve")) c.components.push_back(expr_from_json(e));
        if (j.contains("stages")) c.stages = j.at("stages");
        if (j.contains("provenance")) c.provenance = j.at("provenance").get<std::string>();
        if (c.components.empty()) throw Error("curve: no components");
        return c;
    }
    throw Error("curve file: expected \"components\" or a build result with \"curve\"");
}

int cmd_build(const std::string& scene_path, const std::string& out_path, const Overrides& ov) {
    Scene s = scene_from_json(read_json_file(scene_path));
    ov.apply(s);
    PipelineResult r = run_pipeline(s);
    write_text(out_path, result_to_json(r).dump(2) + "\n");
    std::cout << (r.certificate.all_pass() ? "PASS" : "FAIL") << " " << out_path << "\n";
    return r.certificate.all_pass() ? 0 : 1;
}

int cmd_verify(const std::string& curve_path, const std::string& scene_path, const Overrides& ov) {
    HoloCurve curve = curve_from_file(read_json_file(curve_path));
    Scene s = scene_from_json(read_json_file(scene_path));
    ov.apply(s);
    Certificate cert = certify_scene(curve, s);
    std::cout << certificate_to_json(cert).dump(2) << "\n";
    return cert.all_pass() ? 0 : 1;
}

int cmd_flow_demo(const std::string& sched_path, const std::string& out_path) {
    json j = read_json_file(sched_path);
    SplittingSchedule sched = schedule_from_json(j);
    std::vector<int> Ns = {1, 2, 4, 8, 16, 32, 64};
    if (j.contains("Ns")) Ns = j.at("Ns").get<std::vector<int>>();
    std::vector<CPoint> probes;
    if (j.contains("probes")) {
        for (const auto& pj : j.at("probes")) {
            CPoint p;
            for (const auto& zj : pj) p.push_back(cx(zj.at(0).get<double>(), zj.at(1).get<double>()));
            probes.push_back(std::move(p));
        }
    } else {
        CPoint p(sched.n, cx(0.0));
        for (int i = 0; i < sched.n; ++i) p[i] = cx(0.3 + 0.1 * i, 0.2 - 0.1 * i);
        probes.push_back(p);
    }
    auto rows = convergence_study(sched, Ns, probes);
    write_text(out_path, convergence_csv(rows));
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// One CSV per object: the curve trace over the real parameter interval
// [-R, R] and, when a scene is supplied, the boundary of each bounded
// complex-coordinate projection of the forbidden body.
int cmd_report(const std::string& result_path, const std::string& dir, const std::string& scene_path) {
    json j = read_json_file(result_path);
    HoloCurve curve = curve_from_file(j);
    double R = 12.0;
    if (j.contains("certificate") && j.at("certificate").contains("R_ver"))
        R = j.at("certificate").at("R_ver").get<double>();
    fs::create_directories(dir);

    std::ostringstream trace;
    trace << "re_param,im_param";
    for (int m = 0; m < curve.n(); ++m) trace << ",re_z" << m + 1 << ",im_z" << m + 1;
    trace << "\n";
    const int steps = 800;
    for (int i = 0; i <= steps; ++i) {
        const double t = -R + 2.0 * R * i / steps;
        trace << t << ",0";
        try {
            CPoint v = curve_eval(curve, cx(t));
            for (cx z : v) trace << "," << z.real() << "," << z.imag();
        } catch (const OverflowError&) {
            for (int m = 0; m < curve.n(); ++m) trace << ",nan,nan";
        }
        trace << "\n";
    }
    write_text((fs::path(dir) / "trace.csv").string(), trace.str());

    if (!scene_path.empty()) {
        Scene s = scene_from_json(read_json_file(scene_path));
        auto emit_body = [&](const ConvexBody& B, int coord_offset, int coords, const std::string& tag) {
            for (int m = 0; m < coords; ++m) {
                std::ostringstream csv;
                csv << "re,im\n";
                bool any = false;
                for (int a = 0; a < 256; ++a) {
                    const double th = 2.0 * M_PI * a / 256;
                    Eigen::VectorXd u = Eigen::VectorXd::Zero(B.dim());
                    u[2 * m] = std::cos(th);
                    u[2 * m + 1] = std::sin(th);
                    bool bounded = false;
                    const double d = max_support(B, u, &bounded);
                    if (!bounded) continue;
                    csv << d * std::cos(th) << "," << d * std::sin(th) << "\n";
                    any = true;
                }
                if (any) {
                    std::ostringstream name;
                    name << "region_" << tag << "_z" << coord_offset + m + 1 << ".csv";
                    write_text((fs::path(dir) / name.str()).string(), csv.str());
                }
            }
        };
        if (s.F.kind == ForbiddenSet::Kind::Body)
            emit_body(s.F.body, 0, s.F.body.dim() / 2, "F");
        else if (s.F.kind == ForbiddenSet::Kind::Product) {
            emit_body(s.F.left, 0, s.F.k, "F");
            emit_body(s.F.right, s.F.k, s.F.l, "G");
        }
    }
    std::cout << "wrote " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holomorphic curve toolkit"};
    app.require_subcommand(1);

    std::string scene_path, out_path, curve_path, sched_path, result_path, plot_dir, report_scene;
    Overrides ov;

    CLI::App* build = app.add_subcommand("build", "Run a pipeline and certify the output");
    build->add_option("--scene", scene_path, "Scene JSON")->required();
    build->add_option("--out", out_path, "Result JSON output path")->required();
    ov.add_flags(build);

    CLI::App* verify = app.add_subcommand("verify", "Re-certify a serialized curve");
    verify->add_option("--curve", curve_path, "Curve or build-result JSON")->required();
    verify->add_option("--scene", scene_path, "Scene JSON")->required();
    ov.add_flags(verify);

    CLI::App* flow = app.add_subcommand("flow-demo", "Splitting convergence table");
    flow->add_option("--schedule", sched_path, "Schedule JSON")->required();
    flow->add_option("--out", out_path, "CSV output path")->required();

    CLI::App* report = app.add_subcommand("report", "Emit plot CSVs from a build result");
    report->add_option("--result", result_path, "Build result JSON")->required();
    report->add_option("--plot-csv", plot_dir, "Output directory")->required();
    report->add_option("--scene", report_scene, "Scene JSON for region boundaries");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(scene_path, out_path, ov);
        if (verify->parsed()) return cmd_verify(curve_path, scene_path, ov);
        if (flow->parsed()) return cmd_flow_demo(sched_path, out_path);
        if (report->parsed()) return cmd_report(result_path, plot_dir, report_scene);
    } catch (const Error& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    }
    return 2;
}
