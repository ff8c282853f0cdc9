#ifndef MLAB_EXPERIMENTS_HPP
#define MLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mlab/config.hpp"
#include "mlab/geometry.hpp"
#include "mlab/lower_bound.hpp"
#include "mlab/manifold.hpp"
#include "mlab/sampling.hpp"

namespace mlab {

// effective settings for one experiment run, loaded from a flat config file;
// thread count is a CLI concern and deliberately not part of the config (so
// reports are byte-identical across thread counts)
struct ExperimentConfig {
    std::string experiment;  // rates | lecam | sample | estimate
    std::string model = "circle";
    double R = 1.0;
    double kappa = 1.0;
    double gamma = 0.05;
    double sigma = 0.1;
    int d = 1;
    int D = 2;
    std::vector<long long> n_grid;   // rates
    long long n = 4096;              // sample / estimate
    int replicates = 1;
    std::uint64_t seed = 1;
    double C = 1.5;
    double h = 0.0;                  // estimate: explicit raster width; 0 = epsilon/5
    double h_over_eps = 0.2;         // rates raster rule (must stay <= 0.2)
    std::vector<double> gamma_grid;  // lecam
    long long n_mc = 200000;         // lecam MC budget per estimate
    double c_star = 1.0;             // lecam proxy constant
    std::vector<long long> risk_n_grid;
    std::string out = "out";
    bool timing = false;  // when false the seconds column is a fixed 0.000
    std::string input;    // estimate: optional CSV of points
};

// consumes the keys relevant to `kind` and hard-errors on anything left over
ExperimentConfig load_experiment_config(const ConfigMap& raw, const std::string& kind);

ManifoldModel model_from_config(const ExperimentConfig& cfg);

// '#'-prefixed echo of every setting that determines the report
std::string config_echo(const ExperimentConfig& cfg);

struct RateRecord {
    long long n = 0;
    int replicate = 0;
    double hausdorff = 0.0;
    double epsilon = 0.0;
    double sigma_hat = 0.0;
    double seconds = 0.0;
};

struct LecamRow {
    double gamma = 0.0;
    double hausdorff = 0.0;
    McEstimate sym;
    McEstimate l1;
    McEstimate proxy;
    bool calibration_pass = false;
};

struct RiskRow {
    long long n = 0;
    double gamma = 0.0;     // n^(-2/(d+2))
    double l1_model = 0.0;  // fitted_c * gamma^((d+2)/2), capped at 2
    double bound = 0.0;
};

struct ExperimentReport {
    std::string echo;
    std::uint64_t seed = 0;
    // rates
    std::vector<RateRecord> records;
    std::vector<std::pair<long long, double>> median_by_n;
    ScalingFit fit;  // log median H vs log(n / ln n)
    // lecam
    std::vector<LecamRow> lecam_rows;
    ScalingFit symdiff_fit;
    ScalingFit l1_fit;
    double c_star_used = 0.0;  // min density ratio feeding the calibration check
    double fitted_c = 0.0;     // l1 ~ fitted_c * gamma^((d+2)/2)
    std::vector<RiskRow> risk_rows;
};

// thread count comes from the process-wide default (set_default_threads);
// results are identical for every thread count by construction
ExperimentReport run_rates(const ExperimentConfig& cfg);
ExperimentReport run_lecam(const ExperimentConfig& cfg);

// rates.csv / rates_summary.txt / rates.svg
void write_rates_outputs(const ExperimentReport& rep, const ExperimentConfig& cfg,
                         const std::string& out_dir);
// lecam.csv / lecam_risk.csv / lecam_summary.txt / lecam.svg
void write_lecam_outputs(const ExperimentReport& rep, const ExperimentConfig& cfg,
                         const std::string& out_dir);

}  // namespace mlab

#endif
