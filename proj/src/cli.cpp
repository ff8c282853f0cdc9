#include "mlab/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "mlab/estimator.hpp"
#include "mlab/experiments.hpp"
#include "mlab/parallel.hpp"

namespace mlab {

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    CLI::Option* seed_opt = nullptr;
    int threads = 0;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_path, "flat key=value config file")->required();
    o.seed_opt = sub->add_option("--seed", o.seed_override, "override the config seed");
    sub->add_option("--out", o.out_override, "override the output directory");
    sub->add_option("--threads", o.threads, "worker threads (0 = all hardware threads)");
}

ExperimentConfig load_for(const std::string& kind, const CommonOpts& o) {
    set_default_threads(o.threads);
    ConfigMap raw = parse_config_file(o.config_path);
    ExperimentConfig cfg = load_experiment_config(raw, kind);
    if (o.seed_opt && o.seed_opt->count() > 0) cfg.seed = o.seed_override;
    if (!o.out_override.empty()) cfg.out = o.out_override;
    return cfg;
}

int cmd_sample(const CommonOpts& o) {
    ExperimentConfig cfg = load_for("sample", o);
    ManifoldModel M = model_from_config(cfg);
    NoiseModel noise = make_noise_model(M, cfg.sigma);
    ObservationSet obs = sample_observations(noise, cfg.n, cfg.seed);
    std::filesystem::create_directories(cfg.out);
    std::string path = cfg.out + "/observations.csv";
    write_observations_csv(path, obs);
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_estimate(const CommonOpts& o) {
    ExperimentConfig cfg = load_for("estimate", o);
    PointSet Y;
    BoundingBox box;
    double eps = 0;
    if (!cfg.input.empty()) {
        Y = read_points_csv(cfg.input);
        eps = choose_epsilon(static_cast<long long>(Y.size()), Y.ambient_dim, cfg.C);
        double h = cfg.h > 0 ? cfg.h : eps / 5.0;
        // box: data extent padded so every ball fits
        box.lower = Y.points.front();
        box.upper = Y.points.front();
        for (const Point& p : Y.points)
            for (int j = 0; j < Y.ambient_dim; ++j) {
                box.lower.coords[static_cast<std::size_t>(j)] =
                    std::min(box.lower[j], p[j]);
                box.upper.coords[static_cast<std::size_t>(j)] =
                    std::max(box.upper[j], p[j]);
            }
        double pad = eps + 2.0 * h;
        for (int j = 0; j < Y.ambient_dim; ++j) {
            box.lower.coords[static_cast<std::size_t>(j)] -= pad;
            box.upper.coords[static_cast<std::size_t>(j)] += pad;
        }
        cfg.h = h;
    } else {
        ManifoldModel M = model_from_config(cfg);
        NoiseModel noise = make_noise_model(M, cfg.sigma);
        ObservationSet obs = sample_observations(noise, cfg.n, cfg.seed);
        Y = obs.Y;
        eps = choose_epsilon(cfg.n, M.D, cfg.C);
        double h = cfg.h > 0 ? cfg.h : eps / 5.0;
        box = support_bounding_box(noise);
        double pad = eps + 2.0 * h;
        for (int j = 0; j < M.D; ++j) {
            box.lower.coords[static_cast<std::size_t>(j)] -= pad;
            box.upper.coords[static_cast<std::size_t>(j)] += pad;
        }
        cfg.h = h;
    }
    EstimatorConfig ec = make_estimator_config(eps, cfg.C, cfg.h, box);
    SupportEstimate S = estimate_support(Y, ec);
    ManifoldEstimate est = extract_manifold(S);

    std::filesystem::create_directories(cfg.out);
    std::string points_path = cfg.out + "/manifold_estimate.csv";
    write_points_csv(points_path, est.points);
    std::string summary_path = cfg.out + "/estimate_summary.txt";
    std::FILE* f = std::fopen(summary_path.c_str(), "w");
    if (!f) throw ConfigError("cannot open file for writing: " + summary_path);
    std::fputs(config_echo(cfg).c_str(), f);
    std::size_t inside = 0;
    for (std::uint8_t b : S.field.inside) inside += b;
    std::fprintf(f, "n = %zu\n", Y.size());
    std::fprintf(f, "D = %d\n", Y.ambient_dim);
    std::fprintf(f, "epsilon = %.17g\n", eps);
    std::fprintf(f, "h = %.17g\n", cfg.h);
    std::fprintf(f, "sigma_hat = %.17g\n", S.sigma_hat);
    std::fprintf(f, "threshold = %.17g\n", std::max(0.0, S.sigma_hat - 2.0 * eps));
    std::fprintf(f, "inside_cells = %zu\n", inside);
    std::fprintf(f, "total_cells = %zu\n", S.field.cell_count());
    std::fprintf(f, "estimate_points = %zu\n", est.points.size());
    std::fclose(f);
    std::printf("wrote %s\n", points_path.c_str());
    std::printf("wrote %s\n", summary_path.c_str());
    return 0;
}

int cmd_hausdorff(const std::string& path_a, const std::string& path_b) {
    PointSet A = read_points_csv(path_a);
    PointSet B = read_points_csv(path_b);
    if (A.ambient_dim != B.ambient_dim)
        throw ConfigError("dimension mismatch: " + path_a + " has D=" +
                          std::to_string(A.ambient_dim) + ", " + path_b + " has D=" +
                          std::to_string(B.ambient_dim));
    double v = hausdorff(A, B);
    if (v == 0.0)
        std::printf("0.0\n");
    else
        std::printf("%.17g\n", v);
    return 0;
}

int cmd_rates(const CommonOpts& o) {
    ExperimentConfig cfg = load_for("rates", o);
    ExperimentReport rep = run_rates(cfg);
    write_rates_outputs(rep, cfg, cfg.out);
    std::printf("wrote %s/rates.csv\n", cfg.out.c_str());
    std::printf("wrote %s/rates_summary.txt\n", cfg.out.c_str());
    std::printf("wrote %s/rates.svg\n", cfg.out.c_str());
    std::printf("fitted slope = %.9f\n", rep.fit.slope);
    return 0;
}

int cmd_lecam(const CommonOpts& o) {
    ExperimentConfig cfg = load_for("lecam", o);
    ExperimentReport rep = run_lecam(cfg);
    write_lecam_outputs(rep, cfg, cfg.out);
    std::printf("wrote %s/lecam.csv\n", cfg.out.c_str());
    std::printf("wrote %s/lecam_risk.csv\n", cfg.out.c_str());
    std::printf("wrote %s/lecam_summary.txt\n", cfg.out.c_str());
    std::printf("wrote %s/lecam.svg\n", cfg.out.c_str());
    std::printf("fitted slope = %.9f\n", rep.symdiff_fit.slope);
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"manifold support and estimation experiments"};
    app.require_subcommand(1);

    CommonOpts sample_opts, estimate_opts, rates_opts, lecam_opts;
    CLI::App* sample = app.add_subcommand("sample", "draw observations and write them as CSV");
    add_common(sample, sample_opts);
    CLI::App* estimate = app.add_subcommand("estimate", "run the support/manifold estimator");
    add_common(estimate, estimate_opts);
    CLI::App* rates = app.add_subcommand("rates", "error-vs-n experiment with slope fit");
    add_common(rates, rates_opts);
    CLI::App* lecam = app.add_subcommand("lecam", "two-point separation scaling experiment");
    add_common(lecam, lecam_opts);

    std::string haus_a, haus_b;
    CLI::App* haus = app.add_subcommand("hausdorff", "Hausdorff distance between two point CSVs");
    haus->add_option("first", haus_a, "first CSV file")->required();
    haus->add_option("second", haus_b, "second CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::fputs(app.help().c_str(), stderr);
        return 2;
    }

    try {
        if (sample->parsed()) return cmd_sample(sample_opts);
        if (estimate->parsed()) return cmd_estimate(estimate_opts);
        if (rates->parsed()) return cmd_rates(rates_opts);
        if (lecam->parsed()) return cmd_lecam(lecam_opts);
        if (haus->parsed()) return cmd_hausdorff(haus_a, haus_b);
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return 3;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;  // unreachable with require_subcommand(1)
}

}  // namespace mlab
