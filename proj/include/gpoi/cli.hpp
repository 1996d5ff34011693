#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpoi/opinf.hpp"
#include "gpoi/rom.hpp"

namespace gpoi::cli {

// Parsed and validated experiment configuration. Unknown or
// model-inapplicable JSON keys are rejected during parsing.
struct Config {
    std::string model;
    std::size_t n = 0;
    double c = 0.1;
    double alpha = -6.0;
    double nu = -1.0;
    double eps = 0.01;
    std::vector<double> mu;
    std::vector<double> mu_test;  // empty -> use the training parameters
    bool allow_extrapolation = false;

    double dt = 1e-3;
    double t_fom = 1.0;
    double t_rom = 0.0;   // 0 -> t_fom
    double rom_dt = 0.0;  // 0 -> dt; otherwise an integer multiple of dt

    std::vector<std::size_t> r_list;
    std::vector<std::string> variants;  // v | p | gp | dissipative | spg
    double alpha_reg = 2.0;
    double c0 = 1e-13;
    BarrierConfig barrier;
    PicardConfig picard;

    std::size_t snapshot_stride = 1;
    bool gradient_on_projected = false;

    std::string output_dir;
    std::uint64_t seed = 0;
    std::size_t workers = 1;

    // generic model inputs
    std::string generic_d;
    std::string generic_k;
    std::string generic_y0;
    std::string generic_kind = "linear";
};

Config parse_config_file(const std::string& path);
Config parse_config_json(const std::string& text);
std::string canonical_config_json(const Config& cfg);
std::string config_hash(const Config& cfg);

FomSpec build_fom(const Config& cfg, double mu);

// Pipeline stages. Each writes its artifacts plus a manifest under
// cfg.output_dir/<stage>/ and skips itself when the manifest already
// matches the configuration (unless force is set).
void stage_fom_run(const Config& cfg, bool force);
void stage_pod(const Config& cfg, bool force);
void stage_infer(const Config& cfg, bool force);
void stage_rom_run(const Config& cfg, bool force);
void stage_report(const Config& cfg, bool force);

// Entry point used by the gpoi binary; returns the process exit code
// (0 ok, 2 configuration, 3 io/format, 4 numerical).
int run(const std::vector<std::string>& args);

}  // namespace gpoi::cli
