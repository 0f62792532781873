// Command-line front end: reads point files, runs the estimators and
// experiments, writes JSON/CSV reports.
//
// Exit codes: 0 success, 2 input parse error, 3 invalid arguments,
// 4 numerical failure, 5 bound-check failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tubemeasure/curvature.hpp"
#include "tubemeasure/errors.hpp"
#include "tubemeasure/experiments.hpp"
#include "tubemeasure/io.hpp"
#include "tubemeasure/oracles.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitArgs = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitBoundFailure = 5;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TUBEMEASURE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("TUBEMEASURE_SEED is not an integer");
        }
    }
    return 0;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& flag) {
    std::vector<T> out;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        try {
            std::size_t used = 0;
            if constexpr (std::is_integral_v<T>) {
                out.push_back(static_cast<T>(std::stoll(token, &used)));
            } else {
                out.push_back(std::stod(token, &used));
            }
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw std::invalid_argument(flag + ": cannot parse '" + token + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(flag + ": empty list");
    return out;
}

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool no_meta = false;

    std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "RNG seed (default: TUBEMEASURE_SEED or 0)");
    cmd->add_option("--threads", flags.threads, "worker count (default 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-meta", flags.no_meta, "omit the metadata block from outputs");
}

int run_boundary(const std::string& input, double r, std::uint64_t n, double eps,
                 double confidence, const std::string& output, const CommonFlags& flags,
                 bool have_n, bool have_eps, bool have_confidence) {
    if (have_n == (have_eps || have_confidence)) {
        throw std::invalid_argument("pass exactly one of --n or (--eps with --confidence)");
    }
    if (have_eps != have_confidence) {
        throw std::invalid_argument("--eps and --confidence must be given together");
    }
    const tubemeasure::PointCloud cloud = tubemeasure::read_point_cloud_file(input);

    std::size_t covering = 0;
    if (have_eps) {
        covering = tubemeasure::covering_number(cloud, eps / 16.0);
        n = tubemeasure::required_sample_count(covering, eps, 1.0 - confidence);
    }
    const std::uint64_t seed = flags.resolved_seed();
    const auto estimate = tubemeasure::estimate_boundary_measure(
        cloud, r, n, tubemeasure::RandomStream(seed), flags.threads);

    nlohmann::json j = tubemeasure::estimate_to_json(estimate, seed, flags.threads, !flags.no_meta);
    if (have_eps && !flags.no_meta) {
        j["meta"]["eps"] = eps;
        j["meta"]["confidence"] = confidence;
        j["meta"]["covering_number"] = covering;
    }
    tubemeasure::write_json_file(output, j);
    std::cout << "boundary measure written to " << output << " (N=" << n
              << ", offset volume " << estimate.offset_volume.value << ")\n";
    return 0;
}

int run_curvature(const std::string& input, const std::string& radii_text,
                  std::uint64_t n_per_radius, const std::string& output,
                  const CommonFlags& flags) {
    const tubemeasure::PointCloud cloud = tubemeasure::read_point_cloud_file(input);
    const auto radii = parse_list<double>(radii_text, "--radii");
    const tubemeasure::RadiiSchedule schedule(radii, cloud.dim());
    const std::uint64_t seed = flags.resolved_seed();
    const auto profile = tubemeasure::curvature_from_cloud(
        cloud, schedule, n_per_radius, tubemeasure::RandomStream(seed), flags.threads);
    tubemeasure::write_json_file(
        output, tubemeasure::curvature_to_json(profile, seed, flags.threads, !flags.no_meta));
    std::cout << "curvature profile written to " << output
              << " (condition number " << profile.condition_number << ")\n";
    return 0;
}

void write_report(const tubemeasure::StabilityReport& report, const std::string& prefix,
                  bool with_meta) {
    tubemeasure::write_text_file(prefix + ".csv", tubemeasure::stability_to_csv(report));
    tubemeasure::write_json_file(prefix + ".json",
                                 tubemeasure::stability_to_json(report, with_meta));
}

int run_stability(const std::string& input, double r, const std::string& eps_text, std::uint64_t n,
                  const std::string& output, const CommonFlags& flags) {
    const tubemeasure::PointCloud cloud = tubemeasure::read_point_cloud_file(input);
    const auto eps_list = parse_list<double>(eps_text, "--eps-list");
    const std::uint64_t seed = flags.resolved_seed();
    const auto report = tubemeasure::stability_experiment(
        cloud, r, eps_list, n, tubemeasure::RandomStream(seed), flags.threads);
    write_report(report, output, !flags.no_meta);
    std::cout << "stability ladder written to " << output << ".{csv,json} (fitted slope "
              << report.fitted_slope << ")\n";
    return 0;
}

int run_knife(double length, double reach, const std::string& nseg_text, int samples_per_arc,
              std::uint64_t n, const std::string& output, const CommonFlags& flags) {
    const auto nseg_list = parse_list<int>(nseg_text, "--nseg-list");
    const tubemeasure::BoxRegion box({0.0, -reach}, {length, 0.0});
    const std::uint64_t seed = flags.resolved_seed();
    const auto report = tubemeasure::holder_knife_experiment(
        length, reach, nseg_list, box, n, tubemeasure::RandomStream(seed), flags.threads,
        samples_per_arc);
    write_report(report, output, !flags.no_meta);
    std::cout << "knife ladder written to " << output << ".{csv,json} (fitted slope "
              << report.fitted_slope << ")\n";
    return 0;
}

tubemeasure::PointCloud random_cloud(tubemeasure::RandomStream& rng, std::size_t count) {
    std::vector<double> flat;
    flat.reserve(2 * count);
    for (std::size_t i = 0; i < 2 * count; ++i) flat.push_back(rng.next_double());
    return tubemeasure::PointCloud(2, std::move(flat));
}

int run_check(const std::string& suite, const std::string& input, std::uint64_t trials,
              std::uint64_t samples, const std::string& output, const CommonFlags& flags) {
    const std::uint64_t seed = flags.resolved_seed();
    const tubemeasure::RandomStream base(seed);
    std::optional<tubemeasure::PointCloud> fixed;
    if (!input.empty()) fixed = tubemeasure::read_point_cloud_file(input);

    std::ostringstream csv;
    csv.precision(17);
    nlohmann::json rows = nlohmann::json::array();
    bool all_pass = true;

    if (suite == "convexity") {
        tubemeasure::RandomStream gen = base.substream(0);
        const tubemeasure::PointCloud cloud = fixed ? *fixed : random_cloud(gen, 50);
        const auto report =
            tubemeasure::convexity_and_gradient_check(cloud, trials, base.substream(1));
        all_pass = report.pass;
        csv << "convexity_trials,gradient_trials,convexity_violations,gradient_violations,pass\n"
            << report.convexity_trials << ',' << report.gradient_trials << ','
            << report.convexity_violations << ',' << report.gradient_violations << ','
            << (report.pass ? 1 : 0) << '\n';
        rows.push_back({{"convexity_trials", report.convexity_trials},
                        {"gradient_trials", report.gradient_trials},
                        {"convexity_violations", report.convexity_violations},
                        {"gradient_violations", report.gradient_violations},
                        {"pass", report.pass},
                        {"counterexample", report.counterexample}});
    } else {
        csv << "trial,r,eps_or_h,measured,bound,stderr,pass\n";
        for (std::uint64_t t = 0; t < trials; ++t) {
            tubemeasure::RandomStream sub = base.substream(t);
            tubemeasure::RandomStream gen = sub.substream(0);
            const tubemeasure::PointCloud cloud =
                fixed ? *fixed : random_cloud(gen, 5 + gen.next_below(21));
            const double r = 0.15 + 0.3 * gen.next_double();
            tubemeasure::BoundCheck check;
            double knob = 0.0;
            if (suite == "symdiff") {
                knob = r * (0.02 + 0.45 * gen.next_double());
                check = tubemeasure::symdiff_bound_check(cloud, r, knob, samples,
                                                         sub.substream(1), flags.threads);
            } else if (suite == "area") {
                knob = r / 20.0;
                check = tubemeasure::boundary_area_check(cloud, r, knob, samples,
                                                         sub.substream(1), flags.threads);
            } else {
                throw std::invalid_argument("--suite must be one of symdiff, convexity, area");
            }
            all_pass = all_pass && check.pass;
            csv << t << ',' << r << ',' << knob << ',' << check.measured << ',' << check.bound
                << ',' << check.std_error << ',' << (check.pass ? 1 : 0) << '\n';
            rows.push_back({{"trial", t},
                            {"r", r},
                            {"eps_or_h", knob},
                            {"measured", check.measured},
                            {"bound", check.bound},
                            {"stderr", check.std_error},
                            {"pass", check.pass}});
        }
    }

    nlohmann::json j = {{"suite", suite}, {"rows", std::move(rows)}, {"pass", all_pass}};
    if (!flags.no_meta) {
        j["meta"] = {{"seed", seed}, {"threads", flags.threads}, {"trials", trials},
                     {"samples", samples}};
    }
    if (!output.empty()) {
        tubemeasure::write_text_file(output + ".csv", csv.str());
        tubemeasure::write_json_file(output + ".json", j);
    }
    std::cout << "check " << suite << ": " << (all_pass ? "pass" : "FAIL") << "\n";
    return all_pass ? 0 : kExitBoundFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary and curvature measures of point clouds by Monte-Carlo offset sampling"};
    app.require_subcommand(1);

    // boundary
    auto* boundary = app.add_subcommand("boundary", "estimate the boundary measure of a cloud");
    std::string b_input, b_output;
    double b_r = 0.0, b_eps = 0.0, b_confidence = 0.0;
    std::uint64_t b_n = 0;
    CommonFlags b_flags;
    boundary->add_option("--input", b_input, "point file")->required();
    boundary->add_option("--r", b_r, "offset radius")->required()->check(CLI::PositiveNumber);
    auto* b_n_opt = boundary->add_option("--n", b_n, "sample count");
    auto* b_eps_opt = boundary->add_option("--eps", b_eps, "target accuracy for the sample-size rule");
    auto* b_conf_opt =
        boundary->add_option("--confidence", b_confidence, "confidence level in (0,1)");
    boundary->add_option("--output", b_output, "output JSON path")->required();
    add_common(boundary, b_flags);

    // curvature
    auto* curvature = app.add_subcommand("curvature", "recover curvature measures from a cloud");
    std::string c_input, c_radii, c_output;
    std::uint64_t c_n = 100000;
    CommonFlags c_flags;
    curvature->add_option("--input", c_input, "point file")->required();
    curvature->add_option("--radii", c_radii, "comma-separated radii, dim+1 of them, increasing")
        ->required();
    curvature->add_option("--n-per-radius", c_n, "samples per radius")->required();
    curvature->add_option("--output", c_output, "output JSON path")->required();
    add_common(curvature, c_flags);

    // stability
    auto* stability = app.add_subcommand("stability", "Hausdorff-stability ladder experiment");
    std::string s_input, s_eps, s_output;
    double s_r = 0.0;
    std::uint64_t s_n = 100000;
    CommonFlags s_flags;
    stability->add_option("--input", s_input, "point file")->required();
    stability->add_option("--r", s_r, "offset radius")->required()->check(CLI::PositiveNumber);
    stability->add_option("--eps-list", s_eps, "comma-separated jitter sizes")->required();
    stability->add_option("--n", s_n, "samples per estimate");
    stability->add_option("--output", s_output, "output path prefix (.csv/.json)")->required();
    add_common(stability, s_flags);

    // knife
    auto* knife = app.add_subcommand("knife", "knife-blade Hoelder-tightness ladder");
    std::string k_nseg = "4,8,16,32", k_output;
    double k_length = 1.0, k_reach = 1.0;
    int k_spa = 256;
    std::uint64_t k_n = 100000;
    CommonFlags k_flags;
    knife->add_option("--length", k_length, "segment length (default 1)");
    knife->add_option("--reach", k_reach, "distance to the arc-center line (default 1)");
    knife->add_option("--nseg-list", k_nseg, "comma-separated arc counts (default 4,8,16,32)");
    knife->add_option("--samples-per-arc", k_spa, "cloud samples per arc (default 256)");
    knife->add_option("--n", k_n, "Monte-Carlo samples per ladder entry");
    knife->add_option("--output", k_output, "output path prefix (.csv/.json)")->required();
    add_common(knife, k_flags);

    // check
    auto* check = app.add_subcommand("check", "randomized bound and convexity suites");
    std::string ck_suite, ck_input, ck_output;
    std::uint64_t ck_trials = 50, ck_samples = 4000;
    CommonFlags ck_flags;
    check->add_option("--suite", ck_suite, "one of: symdiff, convexity, area")->required();
    check->add_option("--input", ck_input, "optional fixed point file (default: random clouds)");
    check->add_option("--trials", ck_trials, "trial count (default 50)");
    check->add_option("--samples", ck_samples, "Monte-Carlo samples per trial (default 4000)");
    check->add_option("--output", ck_output, "optional output path prefix");
    add_common(check, ck_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitArgs;
    }

    try {
        if (boundary->parsed()) {
            return run_boundary(b_input, b_r, b_n, b_eps, b_confidence, b_output, b_flags,
                                b_n_opt->count() > 0, b_eps_opt->count() > 0,
                                b_conf_opt->count() > 0);
        }
        if (curvature->parsed()) {
            return run_curvature(c_input, c_radii, c_n, c_output, c_flags);
        }
        if (stability->parsed()) {
            return run_stability(s_input, s_r, s_eps, s_n, s_output, s_flags);
        }
        if (knife->parsed()) {
            return run_knife(k_length, k_reach, k_nseg, k_spa, k_n, k_output, k_flags);
        }
        if (check->parsed()) {
            return run_check(ck_suite, ck_input, ck_trials, ck_samples, ck_output, ck_flags);
        }
    } catch (const tubemeasure::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitParse;
    } catch (const tubemeasure::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const tubemeasure::WindowError& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitArgs;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitArgs;
    }
    return kExitArgs;
}
