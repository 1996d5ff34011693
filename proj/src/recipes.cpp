#include "gpoi/recipes.hpp"

#include <algorithm>
#include <cmath>

namespace gpoi::cli {
namespace {

std::vector<std::size_t> r_range(std::size_t lo, std::size_t hi, std::size_t step) {
    std::vector<std::size_t> out;
    for (std::size_t r = lo; r <= hi; r += step) out.push_back(r);
    return out;
}

std::vector<double> uniform_samples(double lo, double hi, std::size_t count) {
    std::vector<double> out;
    if (count == 1) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

std::vector<double> random_samples(Rng& rng, double lo, double hi, std::size_t count) {
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(rng.uniform(lo, hi));
    std::sort(out.begin(), out.end());
    return out;
}

Config base_config(const std::string& out_dir, std::uint64_t seed) {
    Config cfg;
    cfg.output_dir = out_dir;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

std::vector<std::string> recipe_names() {
    return {"wave-test1",        "wave-table1",     "wave-errors",    "wave-conservation",
            "wave-parametric",   "kdv-errors",      "kdv-conservation", "kdv-parametric",
            "ac1d-errors",       "ac1d-dissipation", "ac1d-parametric", "ac2d-parametric",
            "energy-anchors"};
}

Recipe make_recipe(const std::string& name, bool paper_scale, std::uint64_t seed,
                   const std::string& out_root) {
    Rng rng(seed);
    Recipe recipe;
    recipe.name = name;
    const std::string root = out_root + "/" + name + (paper_scale ? "-paper" : "");

    auto single = [&](Config cfg) { recipe.runs.emplace_back("", std::move(cfg)); };

    if (name == "wave-test1") {
        // regularization study: skew certificates of v/p/gp over r
        recipe.description = "wave regularization study (certificates of v, p, gp)";
        Config cfg = base_config(root, seed);
        cfg.model = "wave";
        cfg.n = paper_scale ? 1000 : 200;
        cfg.c = 0.1;
        cfg.mu = {10.0};
        cfg.dt = 1e-3;
        cfg.t_fom = 5.0;
        cfg.t_rom = 5.0;
        cfg.r_list = paper_scale ? r_range(5, 200, 5) : r_range(5, 60, 5);
        cfg.variants = {"v", "p", "gp"};
        single(std::move(cfg));
    } else if (name == "wave-table1") {
        // smallest eigenvalues of f_r f_r^T at T = 5 and T = 10
        recipe.description = "wave smallest gram eigenvalues at two training horizons";
        for (double t : {5.0, 10.0}) {
            Config cfg = base_config(root + "/T" + std::to_string(static_cast<int>(t)), seed);
            cfg.model = "wave";
            cfg.n = 1000;
            cfg.c = 0.1;
            cfg.mu = {10.0};
            cfg.dt = 1e-3;
            cfg.t_fom = t;
            cfg.t_rom = t;
            cfg.r_list = r_range(5, 30, 5);
            cfg.variants = {"gp"};
            recipe.runs.emplace_back("T" + std::to_string(static_cast<int>(t)), std::move(cfg));
        }
    } else if (name == "wave-errors") {
        // error decomposition E, E_proj, E_opt over r
        recipe.description = "wave error decomposition over r";
        Config cfg = base_config(root, seed);
        cfg.model = "wave";
        cfg.n = paper_scale ? 5000 : 200;
        cfg.c = 0.1;
        cfg.mu = {10.0};
        cfg.dt = paper_scale ? 2e-4 : 2.5e-4;
        cfg.t_fom = paper_scale ? 10.0 : 5.0;
        cfg.t_rom = cfg.t_fom;
        cfg.r_list = paper_scale ? r_range(20, 300, 20) : r_range(5, 60, 5);
        cfg.variants = {"gp", "spg"};
        single(std::move(cfg));
    } else if (name == "wave-conservation") {
        recipe.description = "wave reduced-energy conservation past the training window";
        Config cfg = base_config(root, seed);
        cfg.model = "wave";
        cfg.n = paper_scale ? 1000 : 200;
        cfg.c = 0.1;
        cfg.mu = {10.0};
        cfg.dt = 1e-3;
        cfg.t_fom = 5.0;
        cfg.t_rom = 10.0;
        cfg.r_list = {20};
        cfg.variants = {"gp"};
        single(std::move(cfg));
    } else if (name == "wave-parametric") {
        recipe.description = "wave parametric prediction at held-out parameters";
        Config cfg = base_config(root, seed);
        cfg.model = "wave";
        cfg.n = paper_scale ? 1000 : 200;
        cfg.c = 0.1;
        cfg.mu = uniform_samples(5.0, 15.0, 11);
        cfg.mu_test = random_samples(rng, 5.0, 15.0, 3);
        cfg.dt = 1e-3;
        cfg.t_fom = paper_scale ? 10.0 : 2.0;
        cfg.t_rom = cfg.t_fom;
        cfg.r_list = r_range(10, 60, 10);
        cfg.variants = {"gp", "spg"};
        single(std::move(cfg));
    } else if (name == "kdv-errors") {
        recipe.description = "kdv error decomposition over r";
        Config cfg = base_config(root, seed);
        cfg.model = "kdv";
        cfg.n = paper_scale ? 4000 : 512;
        cfg.alpha = -6.0;
        cfg.nu = -1.0;
        cfg.mu = {std::sqrt(2.0)};
        cfg.dt = paper_scale ? 2.5e-3 : 1e-3;
        cfg.t_fom = paper_scale ? 20.0 : 4.0;
        cfg.t_rom = cfg.t_fom;
        cfg.r_list = paper_scale ? r_range(10, 170, 10) : r_range(5, 60, 5);
        cfg.variants = {"gp", "spg"};
        single(std::move(cfg));
    } else if (name == "kdv-conservation") {
        recipe.description = "kdv reduced-hamiltonian conservation past the training window";
        Config cfg = base_config(root, seed);
        cfg.model = "kdv";
        cfg.n = paper_scale ? 4000 : 512;
        cfg.alpha = -6.0;
        cfg.nu = -1.0;
        cfg.mu = {std::sqrt(2.0)};
        cfg.dt = paper_scale ? 1e-2 : 2.5e-3;
        cfg.t_fom = 20.0;  // one full periodic traversal of the soliton
        cfg.t_rom = 2.0 * cfg.t_fom;
        cfg.r_list = {40};
        cfg.variants = {"gp"};
        single(std::move(cfg));
    } else if (name == "kdv-parametric") {
        recipe.description = "kdv parametric prediction at held-out parameters";
        Config cfg = base_config(root, seed);
        cfg.model = "kdv";
        cfg.n = paper_scale ? 4000 : 256;
        cfg.alpha = -6.0;
        cfg.nu = -1.0;
        cfg.mu = uniform_samples(1.0, 5.0, 9);
        cfg.mu_test = random_samples(rng, 1.0, 5.0, 3);
        cfg.dt = paper_scale ? 1e-2 : 1e-3;
        cfg.t_fom = paper_scale ? 20.0 : 2.0;
        cfg.t_rom = cfg.t_fom;
        cfg.r_list = r_range(10, 50, 10);
        cfg.variants = {"gp", "spg"};
        single(std::move(cfg));
    } else if (name == "ac1d-errors") {
        recipe.description = "allen-cahn 1d error decomposition over r";
        Config cfg = base_config(root, seed);
        cfg.model = "allen_cahn_1d";
        cfg.n = paper_scale ? 2000 : 500;
        cfg.eps = 0.01;
        cfg.mu = {1.0};
        cfg.dt = 2.5e-4;
        cfg.t_fom = 3.0;
        cfg.t_rom = 3.0;
        cfg.r_list = r_range(5, 40, 5);
        cfg.variants = {"dissipative", "spg"};
        single(std::move(cfg));
    } else if (name == "ac1d-dissipation") {
        recipe.description = "allen-cahn 1d dissipation past the training window";
        Config cfg = base_config(root, seed);
        cfg.model = "allen_cahn_1d";
        cfg.n = paper_scale ? 2000 : 500;
        cfg.eps = 0.01;
        cfg.mu = {1.0};
        cfg.dt = 1e-3;
        cfg.t_fom = 3.0;
        cfg.t_rom = 5.0;
        cfg.r_list = {10, 20, 40};
        cfg.variants = {"dissipative"};
        single(std::move(cfg));
    } else if (name == "ac1d-parametric") {
        recipe.description = "allen-cahn 1d parametric prediction at held-out parameters";
        Config cfg = base_config(root, seed);
        cfg.model = "allen_cahn_1d";
        cfg.n = paper_scale ? 2000 : 500;
        cfg.eps = 0.01;
        cfg.mu = uniform_samples(0.2, 2.0, 10);
        cfg.mu_test = random_samples(rng, 0.2, 2.0, 3);
        cfg.dt = 1e-3;
        cfg.t_fom = 3.0;
        cfg.t_rom = 3.0;
        cfg.r_list = r_range(5, 30, 5);
        cfg.variants = {"dissipative", "spg"};
        single(std::move(cfg));
    } else if (name == "ac2d-parametric") {
        recipe.description = "allen-cahn 2d parametric prediction at held-out parameters";
        Config cfg = base_config(root, seed);
        cfg.model = "allen_cahn_2d";
        cfg.n = paper_scale ? 64 : 32;
        cfg.eps = 0.02;
        cfg.mu = uniform_samples(0.0, 0.7, paper_scale ? 15 : 4);
        cfg.mu_test = random_samples(rng, 0.0, 0.7, 2);
        cfg.dt = 1e-2;
        cfg.t_fom = paper_scale ? 20.0 : 5.0;
        cfg.t_rom = cfg.t_fom;
        cfg.r_list = paper_scale ? r_range(10, 40, 10) : std::vector<std::size_t>{5, 10};
        cfg.variants = {"dissipative", "spg"};
        single(std::move(cfg));
    } else if (name == "energy-anchors") {
        recipe.description = "initial-state energies of the wave and kdv models";
        recipe.anchors_only = true;
    } else {
        throw ConfigError("unknown recipe '" + name + "'; use reproduce --list");
    }
    return recipe;
}

}  // namespace gpoi::cli
