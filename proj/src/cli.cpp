#include "gpoi/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpoi/io.hpp"
#include "gpoi/kernels.hpp"
#include "gpoi/metrics.hpp"
#include "gpoi/recipes.hpp"
#include "gpoi/snapshots.hpp"

namespace gpoi::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void require_known_keys(const json& obj, const std::string& ctx,
                        const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("config: unknown key '" + it.key() + "' in " + ctx);
        }
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config: bad value for '" + key + "': " + e.what());
    }
}

std::size_t steps_for(double t, double dt, const std::string& what) {
    const double raw = t / dt;
    const auto steps = static_cast<long long>(std::llround(raw));
    if (steps < 0 || std::fabs(raw - static_cast<double>(steps)) > 1e-6) {
        throw ConfigError("config: " + what + " must be an integer multiple of dt");
    }
    return static_cast<std::size_t>(steps);
}

bool model_is_dissipative(const std::string& model) {
    return model == "allen_cahn_1d" || model == "allen_cahn_2d";
}

void validate(const Config& cfg) {
    static const std::set<std::string> models = {"wave", "kdv", "allen_cahn_1d",
                                                 "allen_cahn_2d", "generic"};
    if (!models.count(cfg.model)) throw ConfigError("config: unknown model '" + cfg.model + "'");
    if (cfg.model != "generic" && cfg.n < 3) {
        throw ConfigError("config: n must be at least 3");
    }
    if (!(cfg.dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (!(cfg.t_fom > 0.0)) throw ConfigError("config: t_fom must be positive");
    steps_for(cfg.t_fom, cfg.dt, "t_fom");
    if (cfg.t_rom > 0.0) steps_for(cfg.t_rom, cfg.dt, "t_rom");
    if (cfg.rom_dt > 0.0) {
        const double ratio = cfg.rom_dt / cfg.dt;
        const auto m = static_cast<long long>(std::llround(ratio));
        if (m < 1 || std::fabs(ratio - static_cast<double>(m)) > 1e-9) {
            throw ConfigError("config: rom_dt must be a positive integer multiple of dt");
        }
    }
    if (cfg.mu.empty()) throw ConfigError("config: mu must list at least one parameter");
    if (cfg.r_list.empty()) throw ConfigError("config: r_list must not be empty");
    for (std::size_t i = 0; i < cfg.r_list.size(); ++i) {
        if (cfg.r_list[i] == 0) throw ConfigError("config: r values must be positive");
        if (i > 0 && cfg.r_list[i] <= cfg.r_list[i - 1]) {
            throw ConfigError("config: r_list must be strictly ascending");
        }
    }
    if (cfg.variants.empty()) throw ConfigError("config: variants must not be empty");
    const bool dissipative = model_is_dissipative(cfg.model);
    for (const auto& v : cfg.variants) {
        if (v == "spg") continue;
        const InferenceVariant var = variant_from_name(v);  // throws ConfigError when unknown
        if (dissipative && var != InferenceVariant::Dissipative) {
            throw ConfigError("config: variant '" + v + "' requires a conservative model");
        }
        if (!dissipative && cfg.model != "generic" && var == InferenceVariant::Dissipative) {
            throw ConfigError("config: variant 'dissipative' requires a dissipative model");
        }
    }
    if (cfg.snapshot_stride == 0) throw ConfigError("config: snapshot_stride must be >= 1");
    if (cfg.output_dir.empty()) throw ConfigError("config: output_dir is required");
    if (cfg.workers == 0) throw ConfigError("config: workers must be >= 1");
    if (cfg.model == "generic" && (cfg.generic_d.empty() || cfg.generic_k.empty())) {
        throw ConfigError("config: generic model requires generic.d and generic.k paths");
    }
}

}  // namespace

Config parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid json: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");

    static const std::set<std::string> base_keys = {
        "model", "n", "mu", "mu_test", "allow_extrapolation", "dt", "t_fom", "t_rom",
        "rom_dt", "r_list", "variants", "alpha_reg", "c0", "barrier", "picard",
        "snapshot_stride", "gradient_on_projected", "output_dir", "seed", "workers",
        "c", "alpha", "nu", "eps", "generic"};
    require_known_keys(root, "the top level", base_keys);

    Config cfg;
    cfg.model = get_or<std::string>(root, "model", "");

    // model-specific physical parameters; keys for other models are rejected
    if (root.contains("c") && cfg.model != "wave") {
        throw ConfigError("config: key 'c' is only used by model 'wave'");
    }
    if ((root.contains("alpha") || root.contains("nu")) && cfg.model != "kdv") {
        throw ConfigError("config: keys 'alpha'/'nu' are only used by model 'kdv'");
    }
    if (root.contains("eps") && cfg.model != "allen_cahn_1d" && cfg.model != "allen_cahn_2d") {
        throw ConfigError("config: key 'eps' is only used by the allen_cahn models");
    }
    if (root.contains("generic") && cfg.model != "generic") {
        throw ConfigError("config: key 'generic' is only used by model 'generic'");
    }

    cfg.n = get_or<std::size_t>(root, "n", 0);
    cfg.c = get_or<double>(root, "c", cfg.c);
    cfg.alpha = get_or<double>(root, "alpha", cfg.alpha);
    cfg.nu = get_or<double>(root, "nu", cfg.nu);
    cfg.eps = get_or<double>(root, "eps", cfg.eps);
    cfg.mu = get_or<std::vector<double>>(root, "mu", {});
    cfg.mu_test = get_or<std::vector<double>>(root, "mu_test", {});
    cfg.allow_extrapolation = get_or<bool>(root, "allow_extrapolation", false);
    cfg.dt = get_or<double>(root, "dt", cfg.dt);
    cfg.t_fom = get_or<double>(root, "t_fom", cfg.t_fom);
    cfg.t_rom = get_or<double>(root, "t_rom", 0.0);
    cfg.rom_dt = get_or<double>(root, "rom_dt", 0.0);
    cfg.r_list = get_or<std::vector<std::size_t>>(root, "r_list", {});
    cfg.variants = get_or<std::vector<std::string>>(root, "variants", {});
    cfg.alpha_reg = get_or<double>(root, "alpha_reg", cfg.alpha_reg);
    cfg.c0 = get_or<double>(root, "c0", cfg.c0);
    cfg.snapshot_stride = get_or<std::size_t>(root, "snapshot_stride", 1);
    cfg.gradient_on_projected = get_or<bool>(root, "gradient_on_projected", false);
    cfg.output_dir = get_or<std::string>(root, "output_dir", "");
    cfg.seed = get_or<std::uint64_t>(root, "seed", 0);
    cfg.workers = get_or<std::size_t>(root, "workers", 1);

    if (root.contains("barrier")) {
        const json& b = root.at("barrier");
        require_known_keys(b, "'barrier'",
                           {"beta0", "sigma", "backtrack", "armijo", "grad_tol", "beta_floor",
                            "max_outer", "max_inner"});
        cfg.barrier.beta0 = get_or<double>(b, "beta0", cfg.barrier.beta0);
        cfg.barrier.sigma = get_or<double>(b, "sigma", cfg.barrier.sigma);
        cfg.barrier.backtrack = get_or<double>(b, "backtrack", cfg.barrier.backtrack);
        cfg.barrier.armijo = get_or<double>(b, "armijo", cfg.barrier.armijo);
        cfg.barrier.grad_tol = get_or<double>(b, "grad_tol", cfg.barrier.grad_tol);
        cfg.barrier.beta_floor = get_or<double>(b, "beta_floor", cfg.barrier.beta_floor);
        cfg.barrier.max_outer = get_or<std::size_t>(b, "max_outer", cfg.barrier.max_outer);
        cfg.barrier.max_inner = get_or<std::size_t>(b, "max_inner", cfg.barrier.max_inner);
    }
    if (root.contains("picard")) {
        const json& p = root.at("picard");
        require_known_keys(p, "'picard'", {"tol", "max_iter"});
        cfg.picard.tol = get_or<double>(p, "tol", cfg.picard.tol);
        cfg.picard.max_iter = get_or<std::size_t>(p, "max_iter", cfg.picard.max_iter);
    }
    if (root.contains("generic")) {
        const json& g = root.at("generic");
        require_known_keys(g, "'generic'", {"d", "k", "y0", "kind"});
        cfg.generic_d = get_or<std::string>(g, "d", "");
        cfg.generic_k = get_or<std::string>(g, "k", "");
        cfg.generic_y0 = get_or<std::string>(g, "y0", "");
        cfg.generic_kind = get_or<std::string>(g, "kind", "linear");
    }

    validate(cfg);
    return cfg;
}

Config parse_config_file(const std::string& path) {
    return parse_config_json(read_text_file(path));
}

std::string canonical_config_json(const Config& cfg) {
    json j;
    j["model"] = cfg.model;
    j["n"] = cfg.n;
    if (cfg.model == "wave") j["c"] = cfg.c;
    if (cfg.model == "kdv") {
        j["alpha"] = cfg.alpha;
        j["nu"] = cfg.nu;
    }
    if (model_is_dissipative(cfg.model)) j["eps"] = cfg.eps;
    if (cfg.model == "generic") {
        j["generic"] = {{"d", cfg.generic_d},
                        {"k", cfg.generic_k},
                        {"y0", cfg.generic_y0},
                        {"kind", cfg.generic_kind}};
    }
    j["mu"] = cfg.mu;
    j["mu_test"] = cfg.mu_test;
    j["allow_extrapolation"] = cfg.allow_extrapolation;
    j["dt"] = cfg.dt;
    j["t_fom"] = cfg.t_fom;
    j["t_rom"] = cfg.t_rom;
    j["rom_dt"] = cfg.rom_dt;
    j["r_list"] = cfg.r_list;
    j["variants"] = cfg.variants;
    j["alpha_reg"] = cfg.alpha_reg;
    j["c0"] = cfg.c0;
    j["barrier"] = {{"beta0", cfg.barrier.beta0},
                    {"sigma", cfg.barrier.sigma},
                    {"backtrack", cfg.barrier.backtrack},
                    {"armijo", cfg.barrier.armijo},
                    {"grad_tol", cfg.barrier.grad_tol},
                    {"beta_floor", cfg.barrier.beta_floor},
                    {"max_outer", cfg.barrier.max_outer},
                    {"max_inner", cfg.barrier.max_inner}};
    j["picard"] = {{"tol", cfg.picard.tol}, {"max_iter", cfg.picard.max_iter}};
    j["snapshot_stride"] = cfg.snapshot_stride;
    j["gradient_on_projected"] = cfg.gradient_on_projected;
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    return j.dump(2) + "\n";
}

std::string config_hash(const Config& cfg) {
    // fnv-1a over the canonical dump, minus fields that do not affect
    // artifact bytes (workers)
    Config c = cfg;
    c.workers = 1;
    const std::string text = canonical_config_json(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

FomSpec build_fom(const Config& cfg, double mu) {
    if (cfg.model == "wave") return wave_fom(cfg.n, cfg.c, mu, cfg.allow_extrapolation);
    if (cfg.model == "kdv") return kdv_fom(cfg.n, cfg.alpha, cfg.nu, mu);
    if (cfg.model == "allen_cahn_1d") return allen_cahn_1d_fom(cfg.n, cfg.eps, mu);
    if (cfg.model == "allen_cahn_2d") return allen_cahn_2d_fom(cfg.n, cfg.eps, mu);
    if (cfg.model == "generic") {
        FomSpec spec = generic_fom_from_files(cfg.generic_d, cfg.generic_k, cfg.generic_y0,
                                              cfg.generic_kind);
        spec.mu = mu;
        return spec;
    }
    throw ConfigError("config: unknown model '" + cfg.model + "'");
}

namespace {

struct StagePaths {
    fs::path root;
    fs::path dir(const std::string& stage) const { return root / stage; }
    std::string manifest(const std::string& stage) const {
        return (root / stage / "manifest.json").string();
    }
};

StagePaths paths_for(const Config& cfg) { return StagePaths{fs::path(cfg.output_dir)}; }

bool stage_up_to_date(const Config& cfg, const std::string& stage) {
    const std::string path = paths_for(cfg).manifest(stage);
    if (!fs::exists(path)) return false;
    try {
        const json m = json::parse(read_text_file(path));
        return m.value("completed", false) && m.value("config_hash", "") == config_hash(cfg);
    } catch (...) {
        return false;
    }
}

void require_upstream(const Config& cfg, const std::string& stage) {
    if (!stage_up_to_date(cfg, stage)) {
        throw IoError("missing or stale upstream artifacts: run '" + stage +
                      "' for this configuration first");
    }
}

void write_manifest(const Config& cfg, const std::string& stage, json extra = {}) {
    json m;
    m["stage"] = stage;
    m["config_hash"] = config_hash(cfg);
    m["version"] = kVersion;
    m["kernel_backend"] = std::string(kernels::backend_name());
    m["completed"] = true;
    if (!extra.is_null()) m["info"] = std::move(extra);
    write_text_file(paths_for(cfg).manifest(stage), m.dump(2) + "\n");
    // keep an effective-config copy at the output root for transparency
    const std::string cfg_copy = (paths_for(cfg).root / "config.json").string();
    write_text_file(cfg_copy, canonical_config_json(cfg));
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const std::size_t nw = std::min(workers, count);
    if (nw <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

const std::vector<double>& test_parameters(const Config& cfg) {
    return cfg.mu_test.empty() ? cfg.mu : cfg.mu_test;
}

double effective_t_rom(const Config& cfg) { return cfg.t_rom > 0.0 ? cfg.t_rom : cfg.t_fom; }
double effective_rom_dt(const Config& cfg) { return cfg.rom_dt > 0.0 ? cfg.rom_dt : cfg.dt; }

void write_energy_csv(const std::string& path, const std::vector<double>& energy, double t0,
                      double dt) {
    std::vector<std::vector<double>> rows;
    rows.reserve(energy.size());
    for (std::size_t k = 0; k < energy.size(); ++k) {
        rows.push_back({t0 + dt * static_cast<double>(k), energy[k]});
    }
    write_csv(path, {"t", "H"}, rows);
}

SnapshotSet load_training_set(const Config& cfg) {
    const fs::path dir = paths_for(cfg).dir("fom");
    std::vector<SnapshotSet> sets;
    const std::size_t steps = steps_for(cfg.t_fom, cfg.dt, "t_fom");
    for (std::size_t i = 0; i < cfg.mu.size(); ++i) {
        SnapshotSet s;
        s.model = cfg.model;
        s.mus = {cfg.mu[i]};
        s.offsets = {0};
        s.y = read_matrix((dir / ("y_train_" + std::to_string(i) + ".gpoi")).string());
        s.f = read_matrix((dir / ("f_train_" + std::to_string(i) + ".gpoi")).string());
        s.ydot = read_matrix((dir / ("ydot_train_" + std::to_string(i) + ".gpoi")).string());
        s.grid = TimeGrid{0.0, cfg.dt * static_cast<double>(cfg.snapshot_stride),
                          s.y.cols() > 0 ? s.y.cols() - 1 : 0};
        (void)steps;
        sets.push_back(std::move(s));
    }
    return concat_parametric(sets);
}

std::string operator_path(const Config& cfg, const std::string& variant, std::size_t r) {
    return (paths_for(cfg).dir("infer") / ("d_" + variant + "_r" + std::to_string(r) + ".gpoi"))
        .string();
}

// Leading-r rows of projected data for a basis built at r_max: rows
// [0, r) for a monolithic basis, rows [0, r) and [r_max, r_max + r) for
// the two-block basis.
DenseMatrix slice_projected_rows(const DenseMatrix& m, bool block2, std::size_t r_max,
                                 std::size_t r) {
    if (!block2) {
        DenseMatrix out(r, m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            for (std::size_t i = 0; i < r; ++i) out(i, j) = m(i, j);
        }
        return out;
    }
    DenseMatrix out(2 * r, m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < r; ++i) {
            out(i, j) = m(i, j);
            out(r + i, j) = m(r_max + i, j);
        }
    }
    return out;
}

}  // namespace

void stage_fom_run(const Config& cfg, bool force) {
    if (!force && stage_up_to_date(cfg, "fom")) {
        std::printf("fom-run: up-to-date, skipping\n");
        return;
    }
    const fs::path dir = paths_for(cfg).dir("fom");
    fs::create_directories(dir);

    const std::size_t train_steps = steps_for(cfg.t_fom, cfg.dt, "t_fom");
    const std::size_t bench_steps = steps_for(effective_t_rom(cfg), cfg.dt, "t_rom");
    const std::vector<double>& tests = test_parameters(cfg);

    std::vector<json> run_records(cfg.mu.size() + tests.size());

    parallel_for(cfg.mu.size(), cfg.workers, [&](std::size_t i) {
        const FomSpec spec = build_fom(cfg, cfg.mu[i]);
        const auto t0 = std::chrono::steady_clock::now();
        Trajectory traj = integrate(spec, spec.y0, TimeGrid{0.0, cfg.dt, train_steps},
                                    cfg.picard);
        SnapshotSet set = snapshots_from_trajectory(spec, traj.states,
                                                    TimeGrid{0.0, cfg.dt, train_steps},
                                                    cfg.snapshot_stride);
        const std::string tag = std::to_string(i);
        write_matrix((dir / ("y_train_" + tag + ".gpoi")).string(), set.y);
        write_matrix((dir / ("f_train_" + tag + ".gpoi")).string(), set.f);
        write_matrix((dir / ("ydot_train_" + tag + ".gpoi")).string(), set.ydot);
        write_energy_csv((dir / ("energy_train_" + tag + ".csv")).string(),
                         energy_series(spec, set.y), 0.0, set.grid.dt);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        run_records[i] = {{"kind", "train"},       {"index", i},
                          {"mu", cfg.mu[i]},       {"seconds", secs},
                          {"picard_total", traj.stats.picard_total},
                          {"picard_max", traj.stats.picard_max}};
    });

    parallel_for(tests.size(), cfg.workers, [&](std::size_t j) {
        const FomSpec spec = build_fom(cfg, tests[j]);
        const auto t0 = std::chrono::steady_clock::now();
        Trajectory traj = integrate(spec, spec.y0, TimeGrid{0.0, cfg.dt, bench_steps},
                                    cfg.picard);
        const std::string tag = std::to_string(j);
        write_matrix((dir / ("y_bench_" + tag + ".gpoi")).string(), traj.states);
        write_energy_csv((dir / ("energy_bench_" + tag + ".csv")).string(),
                         energy_series(spec, traj.states), 0.0, cfg.dt);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        run_records[cfg.mu.size() + j] = {{"kind", "bench"},  {"index", j},
                                          {"mu", tests[j]},   {"seconds", secs},
                                          {"picard_total", traj.stats.picard_total},
                                          {"picard_max", traj.stats.picard_max}};
    });

    write_text_file((dir / "runs.json").string(), json(run_records).dump(2) + "\n");
    write_manifest(cfg, "fom");
    std::printf("fom-run: wrote %zu training and %zu benchmark runs\n", cfg.mu.size(),
                tests.size());
}

void stage_pod(const Config& cfg, bool force) {
    if (!force && stage_up_to_date(cfg, "pod")) {
        std::printf("pod: up-to-date, skipping\n");
        return;
    }
    require_upstream(cfg, "fom");
    const fs::path dir = paths_for(cfg).dir("pod");
    fs::create_directories(dir);

    SnapshotSet train = load_training_set(cfg);
    const std::size_t r_max = cfg.r_list.back();

    ReducedBasis basis;
    try {
        if (cfg.model == "wave") {
            const std::size_t half = train.y.rows() / 2;
            DenseMatrix u(half, train.cols());
            DenseMatrix v(half, train.cols());
            for (std::size_t j = 0; j < train.cols(); ++j) {
                for (std::size_t i = 0; i < half; ++i) {
                    u(i, j) = train.y(i, j);
                    v(i, j) = train.y(half + i, j);
                }
            }
            basis = pod_basis_block2(u, v, r_max, r_max);
        } else {
            basis = pod_basis(train.y, r_max);
        }
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("pod: ") + e.what());
    }

    save_basis((dir / "basis").string(), basis);
    write_manifest(cfg, "pod", {{"r_max", r_max}, {"block2", basis.is_block2()}});
    std::printf("pod: built basis with r_max=%zu (%s)\n", r_max,
                basis.is_block2() ? "block2" : "monolithic");
}

void stage_infer(const Config& cfg, bool force) {
    if (!force && stage_up_to_date(cfg, "infer")) {
        std::printf("infer: up-to-date, skipping\n");
        return;
    }
    require_upstream(cfg, "fom");
    require_upstream(cfg, "pod");
    const fs::path dir = paths_for(cfg).dir("infer");
    fs::create_directories(dir);

    const ReducedBasis basis = load_basis((paths_for(cfg).dir("pod") / "basis").string());
    SnapshotSet train = load_training_set(cfg);

    if (cfg.gradient_on_projected) {
        // gradient snapshots evaluated on the projected states; the
        // gradient map itself does not depend on mu (mu only shapes the
        // initial condition), so one spec serves all parameter blocks
        const FomSpec spec = build_fom(cfg, cfg.mu.front());
        Vector col(train.y.rows());
        for (std::size_t j = 0; j < train.cols(); ++j) {
            col = train.y.get_col(j);
            const Vector projected = basis.lift(basis.project(col));
            train.f.set_col(j, eval_gradient(spec, projected));
        }
    }

    ProjectedData proj = project_set(basis, train);
    const std::size_t r_max = cfg.r_list.back();
    const bool block2 = basis.is_block2();

    // smallest eigenvalue of f_r f_r^T per r (the regularization study)
    std::vector<std::vector<double>> mineig_rows;
    for (std::size_t r : cfg.r_list) {
        DenseMatrix f_r = slice_projected_rows(proj.f_r, block2, r_max, r);
        const SymEig eig = sym_eig(multiply_a_bt(f_r, f_r));
        mineig_rows.push_back({static_cast<double>(r), eig.values.front()});
    }
    write_csv((dir / "mineig.csv").string(), {"r", "min_eig"}, mineig_rows);

    std::vector<std::string> infer_variants;
    for (const auto& v : cfg.variants) {
        if (v != "spg") infer_variants.push_back(v);
    }

    struct Task {
        std::string variant;
        std::size_t r;
    };
    std::vector<Task> tasks;
    for (const auto& v : infer_variants) {
        for (std::size_t r : cfg.r_list) tasks.push_back({v, r});
    }
    std::vector<json> records(tasks.size());

    parallel_for(tasks.size(), cfg.workers, [&](std::size_t t) {
        const Task& task = tasks[t];
        DenseMatrix ydot_r = slice_projected_rows(proj.ydot_r, block2, r_max, task.r);
        DenseMatrix f_r = slice_projected_rows(proj.f_r, block2, r_max, task.r);
        const auto t0 = std::chrono::steady_clock::now();
        InferredOperator op = [&] {
            switch (variant_from_name(task.variant)) {
                case InferenceVariant::V: return infer_conservative_v(ydot_r, f_r);
                case InferenceVariant::P:
                    return infer_conservative_p(ydot_r, f_r, cfg.alpha_reg, cfg.c0);
                case InferenceVariant::GP: return infer_conservative_gp(ydot_r, f_r);
                case InferenceVariant::Dissipative:
                    return infer_dissipative(ydot_r, f_r, cfg.barrier);
            }
            throw ConfigError("infer: unreachable variant");
        }();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_matrix(operator_path(cfg, task.variant, task.r), op.d_r);
        records[t] = {{"variant", task.variant},
                      {"r", task.r},
                      {"certificate", op.certificate},
                      {"residual", op.residual},
                      {"epsilon", op.epsilon},
                      {"deflated", op.deflated},
                      {"lyapunov_residual", op.lyapunov_residual},
                      {"iterations", op.iterations},
                      {"grad_norm", op.grad_norm},
                      {"beta_final", op.beta_final},
                      {"converged", op.converged},
                      {"seconds", secs}};
    });

    write_text_file((dir / "ops.json").string(), json(records).dump(2) + "\n");
    write_manifest(cfg, "infer");
    std::printf("infer: learned %zu operators\n", tasks.size());
}

void stage_rom_run(const Config& cfg, bool force) {
    if (!force && stage_up_to_date(cfg, "rom")) {
        std::printf("rom-run: up-to-date, skipping\n");
        return;
    }
    require_upstream(cfg, "fom");
    require_upstream(cfg, "pod");
    bool needs_infer = false;
    for (const auto& v : cfg.variants) {
        if (v != "spg") needs_infer = true;
    }
    if (needs_infer) require_upstream(cfg, "infer");

    const fs::path dir = paths_for(cfg).dir("rom");
    fs::create_directories(dir);

    const auto basis_full =
        std::make_shared<ReducedBasis>(load_basis((paths_for(cfg).dir("pod") / "basis").string()));
    const std::vector<double>& tests = test_parameters(cfg);
    const double rom_dt = effective_rom_dt(cfg);
    const std::size_t rom_steps = steps_for(effective_t_rom(cfg), rom_dt, "t_rom");

    struct Task {
        std::string variant;
        std::size_t r;
        std::size_t mu_index;
    };
    std::vector<Task> tasks;
    for (const auto& v : cfg.variants) {
        for (std::size_t r : cfg.r_list) {
            for (std::size_t j = 0; j < tests.size(); ++j) tasks.push_back({v, r, j});
        }
    }
    std::vector<json> records(tasks.size());

    parallel_for(tasks.size(), cfg.workers, [&](std::size_t t) {
        const Task& task = tasks[t];
        const FomSpec spec = build_fom(cfg, tests[task.mu_index]);
        auto basis_r = std::make_shared<ReducedBasis>(basis_full->truncated(task.r));
        RomSpec rom;
        if (task.variant == "spg") {
            rom = assemble_spg_rom(basis_r, spec);
        } else {
            InferredOperator op;
            op.variant = variant_from_name(task.variant);
            op.d_r = read_matrix(operator_path(cfg, task.variant, task.r));
            rom = assemble_gp_rom(basis_r, op, spec);
            // carry the certificate over from the inference diagnostics
            rom.certificate = spec.structure == Structure::Conservative
                                  ? skew_defect(rom.d_r)
                                  : sym_eig(symmetric_part(rom.d_r)).values.back();
        }
        RomTrajectory traj = simulate_rom(rom, TimeGrid{0.0, rom_dt, rom_steps}, cfg.picard);
        const std::string tag =
            task.variant + "_r" + std::to_string(task.r) + "_mu" + std::to_string(task.mu_index);
        write_matrix((dir / ("traj_" + tag + ".gpoi")).string(), traj.reduced);
        write_energy_csv((dir / ("energy_" + tag + ".csv")).string(), traj.energy, 0.0, rom_dt);
        records[t] = {{"variant", task.variant},
                      {"r", task.r},
                      {"mu_index", task.mu_index},
                      {"mu", tests[task.mu_index]},
                      {"certificate", rom.certificate},
                      {"seconds", traj.stats.seconds},
                      {"picard_total", traj.stats.picard_total},
                      {"picard_max", traj.stats.picard_max}};
    });

    write_text_file((dir / "runs.json").string(), json(records).dump(2) + "\n");
    write_manifest(cfg, "rom");
    std::printf("rom-run: simulated %zu reduced models\n", tasks.size());
}

void stage_report(const Config& cfg, bool force) {
    if (!force && stage_up_to_date(cfg, "report")) {
        std::printf("report: up-to-date, skipping\n");
        return;
    }
    require_upstream(cfg, "fom");
    require_upstream(cfg, "pod");
    require_upstream(cfg, "rom");

    const fs::path dir = paths_for(cfg).dir("report");
    fs::create_directories(dir);
    const fs::path fom_dir = paths_for(cfg).dir("fom");
    const fs::path rom_dir = paths_for(cfg).dir("rom");

    const auto basis_full =
        std::make_shared<ReducedBasis>(load_basis((paths_for(cfg).dir("pod") / "basis").string()));
    const std::vector<double>& tests = test_parameters(cfg);
    const double t_rom = effective_t_rom(cfg);
    const double rom_dt = effective_rom_dt(cfg);
    const std::size_t subsample = static_cast<std::size_t>(std::llround(rom_dt / cfg.dt));

    // timing and certificate lookups
    json fom_runs = json::parse(read_text_file((fom_dir / "runs.json").string()));
    json rom_runs = json::parse(read_text_file((rom_dir / "runs.json").string()));
    auto bench_seconds = [&](std::size_t j) -> double {
        for (const auto& rec : fom_runs) {
            if (rec.value("kind", "") == "bench" && rec.value("index", std::size_t{0}) == j) {
                return rec.value("seconds", 0.0);
            }
        }
        return 0.0;
    };
    auto rom_record = [&](const std::string& variant, std::size_t r, std::size_t j) -> json {
        for (const auto& rec : rom_runs) {
            if (rec.value("variant", "") == variant && rec.value("r", std::size_t{0}) == r &&
                rec.value("mu_index", std::size_t{0}) == j) {
                return rec;
            }
        }
        throw IoError("report: missing rom run record for " + variant);
    };

    json meta;
    meta["t_rom"] = t_rom;
    meta["rom_dt"] = rom_dt;
    meta["data_error_estimate"] = json::array();

    for (std::size_t j = 0; j < tests.size(); ++j) {
        const FomSpec spec = build_fom(cfg, tests[j]);
        DenseMatrix bench = read_matrix((fom_dir / ("y_bench_" + std::to_string(j) + ".gpoi"))
                                            .string());
        // restrict the benchmark to the rom time grid
        if (subsample > 1) {
            const std::size_t kept = (bench.cols() + subsample - 1) / subsample;
            DenseMatrix sub(bench.rows(), kept);
            for (std::size_t c = 0, col = 0; col < bench.cols(); col += subsample, ++c) {
                for (std::size_t i = 0; i < bench.rows(); ++i) sub(i, c) = bench(i, col);
            }
            bench = std::move(sub);
        }
        DenseMatrix f_bench(bench.rows(), bench.cols());
        Vector col(bench.rows());
        for (std::size_t k = 0; k < bench.cols(); ++k) {
            col = bench.get_col(k);
            f_bench.set_col(k, eval_gradient(spec, col));
        }
        DenseMatrix ydot_bench = derivative_snapshots(bench, rom_dt);
        meta["data_error_estimate"].push_back(
            {{"mu_index", j},
             {"value", data_error_estimate(bench, rom_dt, t_rom, spec.cell_area)}});

        for (const auto& variant : cfg.variants) {
            ErrorReport report;
            report.t_final = t_rom;
            report.cell_area = spec.cell_area;
            report.n_steps = bench.cols() - 1;
            for (std::size_t r : cfg.r_list) {
                auto basis_r = std::make_shared<ReducedBasis>(basis_full->truncated(r));
                DenseMatrix d_r;
                if (variant == "spg") {
                    d_r = basis_r->congruence(spec.d);
                } else {
                    d_r = read_matrix(operator_path(cfg, variant, r));
                }
                const std::string tag =
                    variant + "_r" + std::to_string(r) + "_mu" + std::to_string(j);
                DenseMatrix reduced = read_matrix((rom_dir / ("traj_" + tag + ".gpoi")).string());
                DenseMatrix lifted = basis_r->lift_matrix(reduced);

                ErrorReportRow row;
                row.r = r;
                row.e = approx_error(bench, lifted, t_rom, spec.cell_area);
                row.e_proj = projection_error(bench, *basis_r, t_rom, spec.cell_area);
                row.e_opt = optimization_error(ydot_bench, f_bench, *basis_r, d_r, t_rom,
                                               spec.cell_area);
                row.e_proj_gradh =
                    grad_projection_error(f_bench, *basis_r, t_rom, spec.cell_area);
                const json rec = rom_record(variant, r, j);
                // report entries are nonnegative: the dissipative
                // certificate (max eigenvalue of the symmetric part) is
                // clamped to its violation magnitude; the signed value
                // stays in the runs.json diagnostics
                row.certificate = std::max(0.0, rec.value("certificate", 0.0));
                row.fom_seconds = bench_seconds(j);
                row.rom_seconds = rec.value("seconds", 0.0);
                report.rows.push_back(row);
            }
            write_error_report_csv(
                (dir / ("report_" + variant + "_mu" + std::to_string(j) + ".csv")).string(),
                report);
        }
    }

    // propagate the inference-side eigenvalue study when present
    const fs::path mineig = paths_for(cfg).dir("infer") / "mineig.csv";
    if (fs::exists(mineig)) {
        write_text_file((dir / "mineig.csv").string(), read_text_file(mineig.string()));
    }
    write_text_file((dir / "meta.json").string(), meta.dump(2) + "\n");
    write_manifest(cfg, "report");
    std::printf("report: wrote %zu csv files\n", cfg.variants.size() * tests.size());
}

namespace {

void run_pipeline(const Config& cfg, bool force) {
    stage_fom_run(cfg, force);
    stage_pod(cfg, force);
    bool needs_infer = false;
    for (const auto& v : cfg.variants) {
        if (v != "spg") needs_infer = true;
    }
    if (needs_infer) stage_infer(cfg, force);
    stage_rom_run(cfg, force);
    stage_report(cfg, force);
}

void run_anchor_recipe(const Recipe& recipe, const std::string& out_root) {
    const fs::path dir = fs::path(out_root) / recipe.name;
    fs::create_directories(dir);
    std::vector<std::vector<double>> rows;
    {
        FomSpec wave = wave_fom(1000, 0.1, 10.0);
        rows.push_back({0.0, eval_energy(wave, wave.y0)});
    }
    {
        FomSpec kdv = kdv_fom(4000, -6.0, -1.0, std::sqrt(2.0));
        rows.push_back({1.0, eval_energy(kdv, kdv.y0)});
    }
    // model_id 0 = wave (n=1000, c=0.1, mu=10), 1 = kdv (n=4000, mu=sqrt 2)
    write_csv((dir / "anchors.csv").string(), {"model_id", "H0"}, rows);
    std::printf("energy-anchors: wave H0 = %.6g, kdv H0 = %.6g\n", rows[0][1], rows[1][1]);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"gradient-preserving operator inference pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string recipe_name;
    std::string out_root = "out";
    bool force = false;
    bool paper_scale = false;
    bool list_recipes = false;
    std::int64_t workers_override = -1;
    std::int64_t seed_override = -1;

    auto add_common = [&](CLI::App* sub, bool with_workers) {
        sub->add_option("--config", config_path, "experiment configuration (json)")
            ->required();
        sub->add_flag("--force", force, "rerun even when the stage is up to date");
        if (with_workers) {
            sub->add_option("--workers", workers_override, "worker pool size override");
        }
    };

    CLI::App* cmd_fom = app.add_subcommand("fom-run", "simulate and persist snapshots");
    add_common(cmd_fom, true);
    CLI::App* cmd_pod = app.add_subcommand("pod", "build and persist the reduced basis");
    add_common(cmd_pod, false);
    CLI::App* cmd_infer = app.add_subcommand("infer", "learn reduced operators");
    add_common(cmd_infer, true);
    CLI::App* cmd_rom = app.add_subcommand("rom-run", "simulate reduced models");
    add_common(cmd_rom, true);
    CLI::App* cmd_report = app.add_subcommand("report", "assemble error-report csv files");
    add_common(cmd_report, false);

    CLI::App* cmd_repro = app.add_subcommand("reproduce", "run a named experiment recipe");
    cmd_repro->add_option("--recipe", recipe_name, "recipe name (see --list)");
    cmd_repro->add_flag("--list", list_recipes, "list available recipes");
    cmd_repro->add_flag("--paper-scale", paper_scale,
                        "use the publication-scale problem sizes");
    cmd_repro->add_option("--out", out_root, "output root directory");
    cmd_repro->add_flag("--force", force, "rerun completed stages");
    cmd_repro->add_option("--workers", workers_override, "worker pool size override");
    cmd_repro->add_option("--seed", seed_override, "seed override");

    std::vector<std::string> argv_copy = args;
    std::vector<char*> argv;
    argv.reserve(argv_copy.size() + 1);
    static char prog[] = "gpoi";
    argv.push_back(prog);
    for (auto& a : argv_copy) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    auto load_cfg = [&]() {
        Config cfg = parse_config_file(config_path);
        if (workers_override > 0) cfg.workers = static_cast<std::size_t>(workers_override);
        return cfg;
    };

    if (cmd_fom->parsed()) {
        stage_fom_run(load_cfg(), force);
    } else if (cmd_pod->parsed()) {
        stage_pod(load_cfg(), force);
    } else if (cmd_infer->parsed()) {
        stage_infer(load_cfg(), force);
    } else if (cmd_rom->parsed()) {
        stage_rom_run(load_cfg(), force);
    } else if (cmd_report->parsed()) {
        stage_report(load_cfg(), force);
    } else if (cmd_repro->parsed()) {
        if (list_recipes) {
            for (const auto& name : recipe_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (recipe_name.empty()) {
            throw ConfigError("reproduce: --recipe is required (or use --list)");
        }
        const std::uint64_t seed = seed_override >= 0 ? static_cast<std::uint64_t>(seed_override)
                                                      : 17;
        Recipe recipe = make_recipe(recipe_name, paper_scale, seed, out_root);
        if (recipe.anchors_only) {
            run_anchor_recipe(recipe, out_root);
            return 0;
        }
        for (auto& [subdir, cfg] : recipe.runs) {
            Config run_cfg = cfg;
            if (workers_override > 0) {
                run_cfg.workers = static_cast<std::size_t>(workers_override);
            }
            std::printf("== recipe %s: %s ==\n", recipe.name.c_str(),
                        subdir.empty() ? "(single run)" : subdir.c_str());
            run_pipeline(run_cfg, force);
        }
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"config\",\"message\":\"%s\"}}\n", e.what());
        return 2;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"config\",\"message\":\"%s\"}}\n", e.what());
        return 2;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"config\",\"message\":\"%s\"}}\n", e.what());
        return 2;
    } catch (const StructureError& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"config\",\"message\":\"%s\"}}\n", e.what());
        return 2;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"io\",\"message\":\"%s\"}}\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"io\",\"message\":\"%s\"}}\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"numerical\",\"message\":\"%s\"}}\n",
                     e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":{\"type\":\"internal\",\"message\":\"%s\"}}\n",
                     e.what());
        return 1;
    }
}

}  // namespace gpoi::cli
