// Command-line front end. Human-readable summaries go to stdout; everything
// machine-readable goes to the --output/--report files.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sparseproj/data_io.hpp"
#include "sparseproj/errors.hpp"
#include "sparseproj/gsp.hpp"
#include "sparseproj/nmf.hpp"
#include "sparseproj/training.hpp"
#include "sparseproj/wgsp.hpp"

namespace fs = std::filesystem;
using namespace sparseproj;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Errors that stem from the command line rather than the data.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Stopwatch {
public:
    double elapsed_ms() const {
        const auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t effective_seed(std::uint64_t flag) {
    const char* env = std::getenv("SPARSEPROJ_SEED");
    if (env == nullptr || *env == '\0') {
        return flag;
    }
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw UsageError("SPARSEPROJ_SEED must be a nonnegative integer");
    }
}

struct RadialSpec {
    int height = 0;
    int width = 0;
    double sigma = 0.0;
};

RadialSpec parse_radial(const std::string& text) {
    RadialSpec r;
    char x = 0, colon = 0;
    std::istringstream in(text);
    if (!(in >> r.height >> x >> r.width >> colon >> r.sigma) || (x != 'x' && x != 'X') ||
        colon != ':' || !in.eof() || r.height < 1 || r.width < 1 || !(r.sigma > 0.0)) {
        throw UsageError("--radial expects HxW:SIGMA, e.g. 112x92:5");
    }
    return r;
}

/// One weight vector per member. `table` is either member-shaped (count x
/// length when members are rows) or a single vector shared by all members.
WeightGroup weights_from_table(const Matrix& table, std::size_t count, Eigen::Index length,
                               bool members_are_rows) {
    std::vector<WeightVector> out;
    if (table.rows() == 1 && table.cols() == length) {
        return WeightGroup::replicate(WeightVector(table.row(0).transpose()), count);
    }
    if (table.cols() == 1 && table.rows() == length) {
        return WeightGroup::replicate(WeightVector(table.col(0)), count);
    }
    const Matrix t = members_are_rows ? table : Matrix(table.transpose());
    if (t.rows() != static_cast<Eigen::Index>(count) || t.cols() != length) {
        throw UsageError("weights must be a single vector of length " + std::to_string(length) +
                         " or match the input shape");
    }
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        out.emplace_back(t.row(i).transpose());
    }
    return WeightGroup(std::move(out));
}

std::optional<WeightGroup> load_weights(const std::string& weights_path,
                                        const std::string& radial, std::size_t count,
                                        Eigen::Index length, bool members_are_rows) {
    if (!weights_path.empty()) {
        return weights_from_table(load_matrix(weights_path), count, length, members_are_rows);
    }
    if (!radial.empty()) {
        const RadialSpec spec = parse_radial(radial);
        if (static_cast<Eigen::Index>(spec.height) * spec.width != length) {
            throw UsageError("--radial image has " + std::to_string(spec.height * spec.width) +
                             " pixels but vectors have length " + std::to_string(length));
        }
        return WeightGroup::replicate(WeightVector(radial_weights(spec.height, spec.width, spec.sigma)),
                                      count);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- project

struct ProjectArgs {
    std::string input;
    std::string output;
    std::string report;
    std::string axis = "rows";
    double s = 0.0;
    double eps = 1e-4;
    double safeguard = 0.9;
    int max_iters = 100;
    bool relative = false;
    bool timing = false;
    std::uint64_t seed = 0;
    // wproject only
    std::string weights;
    std::string radial;
};

void print_projection_summary(const ProjectionResult& r, double s, double initial,
                              bool weighted) {
    const char* measure = weighted ? "weighted sparsity" : "sparsity";
    std::cout << "vectors:            " << r.projected.size() << "\n";
    std::cout << "initial " << measure << ": " << initial << "\n";
    std::cout << "target:             " << s << "\n";
    if (r.feasible_at_zero) {
        std::cout << "input already satisfies target\n";
        return;
    }
    std::cout << "achieved " << measure << ": " << r.achieved_sparsity << "\n";
    std::cout << "mu*:                " << r.mu_star << "\n";
    std::cout << "iterations:         " << r.iterations << "\n";
    if (r.discontinuous) {
        std::cout << "discontinuity: targets strictly between " << r.sparsity_band.first
                  << " and " << r.sparsity_band.second << " are not attainable\n";
    }
}

int run_project(const ProjectArgs& a, bool weighted) {
    Stopwatch clock;
    const Matrix m = load_matrix(a.input);
    const bool rows = a.axis == "rows";
    const VectorGroup g = rows ? VectorGroup::from_rows(m) : VectorGroup::from_columns(m);
    const Eigen::Index length = rows ? m.cols() : m.rows();

    ProjectionConfig cfg;
    cfg.s = a.s;
    cfg.epsilon = a.eps;
    cfg.safeguard_ratio = a.safeguard;
    cfg.max_iters = a.max_iters;

    std::optional<WeightGroup> w;
    if (weighted) {
        w = load_weights(a.weights, a.radial, g.size(), length, rows);
        if (!w) throw UsageError("wproject needs --weights or --radial");
    }

    ProjectionResult r;
    double initial = 0.0;
    if (weighted) {
        initial = average_weighted_sparsity(g, *w);
        r = project_group_weighted(g, *w, cfg);
    } else {
        initial = average_sparsity(g);
        r = a.relative ? project_group_relative(g, cfg) : project_group(g, cfg);
    }

    // Per-iterate candidate: sparsity follows from the residual, the error
    // from the reconstruction of the working (possibly normalized) group.
    std::vector<Vector> work;
    for (const Vector& x : g) work.push_back(a.relative ? Vector(x / x.norm()) : x);
    double work_norm2 = 0.0;
    for (const Vector& x : work) work_norm2 += x.squaredNorm();
    const double r_count = static_cast<double>(g.size());
    std::vector<double> beta;
    if (weighted) {
        beta = WeightedConstants::compute(*w, cfg.s).beta;
    } else {
        beta = GroupConstants::compute(VectorGroup(work), cfg.s).beta;
    }
    std::vector<double> error_trace, sparsity_trace;
    for (const auto& rec : r.trace) {
        double err2 = 0.0;
        for (std::size_t i = 0; i < work.size(); ++i) {
            const Vector mag = work[i].cwiseAbs();
            const Vector dir = weighted ? candidate_direction_weighted(mag, (*w)[i], rec.mu, beta[i])
                                        : candidate_direction(mag, rec.mu, beta[i]);
            const Vector y = mag.dot(dir) * dir.cwiseProduct(work[i].cwiseSign());
            err2 += (work[i] - y).squaredNorm();
        }
        error_trace.push_back(std::sqrt(err2 / work_norm2));
        sparsity_trace.push_back(cfg.s - rec.value / r_count);
    }
    const double denom = m.norm();

    const Matrix out = rows ? r.as_rows() : r.as_columns();
    if (!a.output.empty()) save_matrix(out, a.output);

    if (!a.report.empty()) {
        Report rep;
        rep.variant = weighted ? "wgsp" : (a.relative ? "gsp-relative" : "gsp");
        rep.seed = a.seed;
        rep.s = a.s;
        rep.epsilon = a.eps;
        rep.error_trace = error_trace;
        rep.sparsity_trace = sparsity_trace;
        auto& x = rep.extra;
        x["axis"] = a.axis;
        x["vectors"] = g.size();
        x["initial_sparsity"] = initial;
        x["achieved_sparsity"] = r.achieved_sparsity;
        x["mu_star"] = r.mu_star;
        x["iterations"] = r.iterations;
        x["feasible_at_zero"] = r.feasible_at_zero;
        x["discontinuous"] = r.discontinuous;
        x["bracket"] = {r.mu_lo, r.mu_hi};
        x["sparsity_band"] = r.discontinuous
                                 ? nlohmann::ordered_json{r.sparsity_band.first, r.sparsity_band.second}
                                 : nlohmann::ordered_json(nullptr);
        x["relative_error"] = (m - out).norm() / denom;
        if (a.timing) rep.wall_ms = clock.elapsed_ms();
        write_report(rep, a.report);
    }
    print_projection_summary(r, a.s, initial, weighted);
    return 0;
}

// -------------------------------------------------------------------- nmf

struct NmfArgs {
    std::string input;
    std::string variant = "psnmf";
    std::string report;
    std::string output_x;
    std::string output_h;
    std::string weights;
    std::string radial;
    std::string baseline;
    int rank = 10;
    double s = 0.5;
    double eps = 1e-4;
    int iters = 500;
    int hals_sweeps = 2;
    int fgm_iters = 10;
    std::uint64_t seed = 0;
    bool timing = false;
};

int run_nmf_command(const NmfArgs& a) {
    Stopwatch clock;
    const auto variant = parse_variant(a.variant);
    if (!variant) throw UsageError("unknown variant '" + a.variant + "'");

    NmfProblem p;
    p.Y = load_matrix(a.input);
    p.rank = a.rank;
    p.variant = *variant;
    p.s = a.s;
    p.epsilon = a.eps;
    p.outer_iters = a.iters;
    p.seed = effective_seed(a.seed);
    p.hals_sweeps = a.hals_sweeps;
    p.fgm_iters = a.fgm_iters;
    p.weights = load_weights(a.weights, a.radial, static_cast<std::size_t>(a.rank), p.Y.rows(),
                             false);
    const NmfResult r = run_nmf(p);

    std::optional<NmfResult> base;
    if (!a.baseline.empty()) {
        const auto bv = parse_variant(a.baseline);
        if (!bv) throw UsageError("unknown baseline variant '" + a.baseline + "'");
        NmfProblem q = p;
        q.variant = *bv;
        base = run_nmf(q);
    }

    if (!a.output_x.empty()) save_matrix(r.X, a.output_x);
    if (!a.output_h.empty()) save_matrix(r.H, a.output_h);

    const double final_sparsity = r.sparsity_trace.back();
    if (!a.report.empty()) {
        Report rep;
        rep.variant = std::string(variant_name(*variant));
        rep.seed = p.seed;
        rep.s = a.s;
        rep.epsilon = a.eps;
        rep.error_trace = r.error_trace;
        rep.sparsity_trace = r.sparsity_trace;
        auto& x = rep.extra;
        x["rank"] = a.rank;
        x["iters"] = a.iters;
        x["best_error"] = r.best_error;
        x["best_iteration"] = r.best_iteration;
        x["final_error"] = r.error_trace.back();
        x["final_sparsity"] = final_sparsity;
        if (base) {
            x["baseline_variant"] = a.baseline;
            x["baseline_best_error"] = base->best_error;
            x["error_increase"] = (r.best_error - base->best_error) / base->best_error;
        }
        if (a.timing) rep.wall_ms = clock.elapsed_ms();
        write_report(rep, a.report);
    }

    std::cout << "variant:         " << variant_name(*variant) << "\n";
    std::cout << "iterations:      " << a.iters << "\n";
    std::cout << "best rel. error: " << r.best_error << " (iteration " << r.best_iteration + 1
              << ")\n";
    std::cout << "final rel. error: " << r.error_trace.back() << "\n";
    std::cout << "final sparsity:  " << final_sparsity << "\n";
    if (base) {
        std::cout << "baseline " << a.baseline << " best error: " << base->best_error << "\n";
        std::cout << "relative error increase: "
                  << 100.0 * (r.best_error - base->best_error) / base->best_error << "%\n";
    }
    return 0;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
    int m = 100;
    int n = 100;
    int rank = 10;
    std::uint64_t seed = 0;
    std::string out_dir;
};

int run_synth(const SynthArgs& a) {
    const auto inst = gen_synthetic_nmf(a.m, a.n, a.rank, effective_seed(a.seed));
    const fs::path dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    save_matrix(inst.Y, dir / "Y.csv");
    save_matrix(inst.X_true, dir / "X_true.csv");
    save_matrix(inst.H_true, dir / "H_true.csv");
    std::cout << "wrote " << a.m << "x" << a.n << " rank-" << a.rank << " instance to "
              << dir.string() << "\n";
    std::cout << "true sparsity: " << inst.true_sparsity << "\n";
    return 0;
}

// ------------------------------------------------------------------ train

struct TrainArgs {
    std::string data;
    std::string arch;
    std::string task = "classify";
    std::string hidden = "relu";
    std::string output_act = "linear";
    std::string optimizer = "adam";
    std::string grouping = "rows";
    std::string report;
    double s = 0.0;
    double lr = 1e-3;
    double eps = 1e-4;
    int period = 15;
    int epochs = 10;
    int batch = 32;
    std::size_t layer = 0;
    bool project = false;
    bool timing = false;
    std::uint64_t seed = 0;
};

std::vector<int> parse_arch(const std::string& text, bool mirror) {
    std::vector<int> widths;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, '-')) {
        try {
            std::size_t used = 0;
            const int w = std::stoi(part, &used);
            if (used != part.size() || w < 1) throw std::invalid_argument(part);
            widths.push_back(w);
        } catch (const std::exception&) {
            throw UsageError("--arch expects positive widths joined by '-', e.g. 784-128-10");
        }
    }
    if (widths.size() < 2) throw UsageError("--arch needs at least an input and an output width");
    if (mirror) {
        // Encoder widths given; the decoder repeats them in reverse.
        const std::vector<int> encoder = widths;
        widths.insert(widths.end(), encoder.rbegin() + 1, encoder.rend());
    }
    return widths;
}

Activation activation_or_throw(const std::string& name) {
    const auto a = parse_activation(name);
    if (!a) throw UsageError("unknown activation '" + name + "'");
    return *a;
}

int run_train(const TrainArgs& a) {
    Stopwatch clock;
    const bool autoencoder = a.task == "autoencoder";
    const std::vector<int> widths = parse_arch(a.arch, autoencoder);
    const Dataset data = dataset_from_matrix(load_matrix(a.data), !autoencoder);
    if (data.features.rows() != widths.front()) {
        throw DomainError("data has " + std::to_string(data.features.rows()) +
                          " features but the network expects " + std::to_string(widths.front()));
    }
    if (autoencoder && widths.back() != widths.front()) {
        throw UsageError("autoencoder output width must equal the input width");
    }

    TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.batch_size = a.batch;
    cfg.learning_rate = a.lr;
    cfg.optimizer = a.optimizer == "sgd" ? Optimizer::Sgd : Optimizer::Adam;
    cfg.loss = autoencoder ? Loss::MeanSquared : Loss::SoftmaxCrossEntropy;
    cfg.seed = effective_seed(a.seed);
    cfg.projection.enabled = a.project;
    cfg.projection.layer = a.layer;
    cfg.projection.grouping = a.grouping == "cols" ? Grouping::Columns : Grouping::Rows;
    cfg.projection.s = a.s;
    cfg.projection.period = a.period;
    cfg.projection.epsilon = a.eps;

    Rng rng(cfg.seed);
    Network net = Network::create(widths, activation_or_throw(a.hidden),
                                  activation_or_throw(a.output_act), rng);
    const TrainResult r = train_with_projection(std::move(net), data, cfg);

    std::vector<double> losses, sparsities, accuracies;
    for (const auto& e : r.trace) {
        losses.push_back(e.loss);
        sparsities.push_back(e.layer_sparsity);
        accuracies.push_back(e.accuracy);
    }
    const EpochMetrics& last = r.trace.back();

    if (!a.report.empty()) {
        Report rep;
        rep.variant = autoencoder ? "autoencoder" : "classifier";
        rep.seed = cfg.seed;
        rep.s = a.project ? a.s : 0.0;
        rep.epsilon = a.eps;
        rep.error_trace = losses;
        rep.sparsity_trace = sparsities;
        auto& x = rep.extra;
        x["arch"] = widths;
        x["layer"] = a.layer;
        x["grouping"] = a.grouping;
        x["projected"] = a.project;
        x["projections"] = r.projections.size();
        x["final_loss"] = last.loss;
        if (!autoencoder) {
            x["accuracy_trace"] = accuracies;
            x["final_accuracy"] = last.accuracy;
        }
        if (a.timing) rep.wall_ms = clock.elapsed_ms();
        write_report(rep, a.report);
    }

    std::cout << "epochs:          " << r.trace.size() << "\n";
    std::cout << "final loss:      " << last.loss << "\n";
    if (!autoencoder) std::cout << "final accuracy:  " << last.accuracy << "\n";
    std::cout << "layer sparsity:  " << last.layer_sparsity << "\n";
    std::cout << "projections:     " << r.projections.size() << "\n";
    return 0;
}

// ------------------------------------------------------------------- main

void add_projection_options(CLI::App& cmd, ProjectArgs& a) {
    cmd.add_option("-i,--input", a.input, "CSV matrix to project")->required()->check(CLI::ExistingFile);
    cmd.add_option("-s,--s", a.s, "target average sparsity")->required()->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--eps", a.eps, "accuracy on the average sparsity")->capture_default_str();
    cmd.add_option("--axis", a.axis, "vectors are the rows or the columns")
        ->check(CLI::IsMember({"rows", "cols"}))
        ->capture_default_str();
    cmd.add_option("-o,--output", a.output, "CSV file for the projected matrix");
    cmd.add_option("--report", a.report, "JSON run report");
    cmd.add_option("--safeguard", a.safeguard, "minimum bracket contraction in [0.5, 1)")
        ->check(CLI::Range(0.5, 1.0))
        ->capture_default_str();
    cmd.add_option("--max-iters", a.max_iters, "iteration limit")->check(CLI::PositiveNumber)->capture_default_str();
    cmd.add_flag("--timing", a.timing, "record wall time in the report");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grouped sparse projections with NMF and network training front ends"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sparseproj 1.0.0");

    ProjectArgs proj;
    auto* project = app.add_subcommand("project", "project a group of vectors to a target average sparsity");
    add_projection_options(*project, proj);
    project->add_flag("--relative", proj.relative, "minimize relative instead of absolute errors");

    ProjectArgs wproj;
    auto* wproject = app.add_subcommand("wproject", "weighted grouped projection");
    add_projection_options(*wproject, wproj);
    auto* wsrc = wproject->add_option("--weights", wproj.weights, "CSV weights: input-shaped or one vector")
                     ->check(CLI::ExistingFile);
    wproject->add_option("--radial", wproj.radial, "radial image weights HxW:SIGMA")->excludes(wsrc);

    NmfArgs nmf;
    auto* nmf_cmd = app.add_subcommand("nmf", "nonnegative matrix factorization");
    nmf_cmd->add_option("-i,--input", nmf.input, "CSV data matrix Y")->required()->check(CLI::ExistingFile);
    nmf_cmd->add_option("-r,--rank", nmf.rank, "factorization rank")->required()->check(CLI::PositiveNumber);
    nmf_cmd->add_option("--variant", nmf.variant, "nenmf, ahals, psnmf, cpsnmf, l1ahals or wsnmf")
        ->capture_default_str();
    nmf_cmd->add_option("-s,--s", nmf.s, "sparsity target for the sparse variants")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    nmf_cmd->add_option("--eps", nmf.eps, "projection accuracy")->capture_default_str();
    nmf_cmd->add_option("--iters", nmf.iters, "outer iterations")->check(CLI::PositiveNumber)->capture_default_str();
    nmf_cmd->add_option("--hals-sweeps", nmf.hals_sweeps, "inner HALS sweeps")->capture_default_str();
    nmf_cmd->add_option("--fgm-iters", nmf.fgm_iters, "inner fast-gradient iterations")->capture_default_str();
    nmf_cmd->add_option("--seed", nmf.seed, "initialization seed (SPARSEPROJ_SEED overrides)");
    auto* nsrc = nmf_cmd->add_option("--weights", nmf.weights, "CSV weights for wsnmf")->check(CLI::ExistingFile);
    nmf_cmd->add_option("--radial", nmf.radial, "radial image weights HxW:SIGMA for wsnmf")->excludes(nsrc);
    nmf_cmd->add_option("--output-x", nmf.output_x, "CSV file for X");
    nmf_cmd->add_option("--output-h", nmf.output_h, "CSV file for H");
    nmf_cmd->add_option("--baseline", nmf.baseline, "also run this variant and report the error increase");
    nmf_cmd->add_option("--report", nmf.report, "JSON run report");
    nmf_cmd->add_flag("--timing", nmf.timing, "record wall time in the report");

    SynthArgs syn;
    auto* synth = app.add_subcommand("synth", "write a synthetic NMF instance");
    synth->add_option("-m,--m", syn.m, "rows")->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("-n,--n", syn.n, "columns")->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("-r,--rank", syn.rank, "rank")->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--seed", syn.seed, "generator seed (SPARSEPROJ_SEED overrides)");
    synth->add_option("--out", syn.out_dir, "output directory")->required();

    TrainArgs tr;
    auto* train = app.add_subcommand("train", "train a dense network with periodic layer projection");
    train->add_option("--data", tr.data, "CSV samples as rows, class label last for classify")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--arch", tr.arch, "widths joined by '-'; encoder only for autoencoder")->required();
    train->add_option("--task", tr.task)->check(CLI::IsMember({"classify", "autoencoder"}))->capture_default_str();
    auto* s_opt = train->add_option("-s,--s", tr.s, "target sparsity of the projected layer")
                      ->check(CLI::Range(0.0, 1.0));
    train->add_option("--period", tr.period, "optimizer steps between projections")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train->add_option("--layer", tr.layer, "index of the projected layer")->capture_default_str();
    train->add_option("--grouping", tr.grouping)->check(CLI::IsMember({"rows", "cols"}))->capture_default_str();
    train->add_option("--eps", tr.eps, "projection accuracy")->capture_default_str();
    train->add_option("--epochs", tr.epochs)->check(CLI::PositiveNumber)->capture_default_str();
    train->add_option("--batch", tr.batch)->check(CLI::PositiveNumber)->capture_default_str();
    train->add_option("--lr", tr.lr)->capture_default_str();
    train->add_option("--optimizer", tr.optimizer)->check(CLI::IsMember({"sgd", "adam"}))->capture_default_str();
    train->add_option("--hidden", tr.hidden, "hidden activation")->capture_default_str();
    train->add_option("--output-activation", tr.output_act)->capture_default_str();
    train->add_option("--seed", tr.seed, "initialization and shuffling seed (SPARSEPROJ_SEED overrides)");
    train->add_option("--report", tr.report, "JSON run report");
    train->add_flag("--timing", tr.timing, "record wall time in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*project) return run_project(proj, false);
        if (*wproject) return run_project(wproj, true);
        if (*nmf_cmd) return run_nmf_command(nmf);
        if (*synth) return run_synth(syn);
        if (*train) {
            tr.project = s_opt->count() > 0;
            return run_train(tr);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
