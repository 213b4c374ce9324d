#include "pcr/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "pcr/apps.hpp"
#include "pcr/filterbank.hpp"
#include "pcr/io.hpp"
#include "pcr/resampling.hpp"
#include "pcr/shapes.hpp"

namespace pcr {

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::allpass: return "allpass";
        case Strategy::highpass: return "highpass";
        case Strategy::lowpass_ideal: return "lowpass-ideal";
        case Strategy::lowpass_haar: return "lowpass-haar";
        case Strategy::filterbank: return "filterbank";
    }
    return "?";
}

void write_manifest(const RunConfig& cfg, const std::vector<std::string>& outputs) {
    std::map<std::string, std::string> kv;
    kv["command"] = cfg.command;
    kv["input"] = cfg.input;
    if (!cfg.input.empty()) kv["input_hash"] = file_hash(cfg.input);
    if (!cfg.target.empty()) {
        kv["target"] = cfg.target;
        kv["target_hash"] = file_hash(cfg.target);
    }
    if (!cfg.truth.empty()) kv["truth"] = cfg.truth;
    if (!cfg.bank_config.empty()) {
        kv["bank_config"] = cfg.bank_config;
        kv["bank_config_hash"] = file_hash(cfg.bank_config);
    }
    kv["strategy"] = strategy_name(cfg.strategy);
    kv["sigma"] = format_double(cfg.sigma);
    kv["tau"] = format_double(cfg.tau);
    kv["knn"] = std::to_string(cfg.knn);
    kv["draws"] = std::to_string(cfg.draws);
    kv["ratio"] = format_double(cfg.ratio);
    kv["seed"] = std::to_string(cfg.seed);
    kv["beta"] = format_double(cfg.beta);
    kv["c"] = format_double(cfg.c);
    kv["bandwidth"] = std::to_string(cfg.bandwidth);
    kv["exponent"] = std::to_string(cfg.exponent);
    kv["include_attrs"] = cfg.include_attrs ? "1" : "0";
    kv["trials"] = std::to_string(cfg.trials);
    kv["max_iter"] = std::to_string(cfg.max_iter);
    kv["icp_tol"] = format_double(cfg.icp_tol);
    kv["denoise_passes"] = std::to_string(cfg.denoise_passes);
    kv["contour_kind"] = cfg.contour_kind;
    kv["r_small"] = format_double(cfg.r_small);
    kv["r_large"] = format_double(cfg.r_large);
    std::string files;
    for (const auto& f : outputs) {
        if (!files.empty()) files += ";";
        files += f;
    }
    kv["outputs"] = files;

    std::ofstream out(out_path(cfg, "manifest.txt"));
    if (!out) throw Error("cannot write manifest");
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

struct Pipeline {
    PointCloud normalized;  // recentered, spectral norm c
    SparseGraph graph;
    GraphParams params;
    Eigen::RowVector3d mean = Eigen::RowVector3d::Zero();
    double scale = 1.0;  // normalized = (original - mean) * scale

    Matrix to_original(const Matrix& coords) const {
        Matrix out = coords / scale;
        out.rowwise() += mean;
        return out;
    }
};

// Shared preprocessing: recenter, normalize to spectral norm c, then
// build the neighborhood graph on the normalized coordinates.
Pipeline build_pipeline(const PointCloud& cloud, const RunConfig& cfg) {
    const Eigen::RowVector3d mean = cloud.coords().colwise().mean();
    const PointCloud centered = recenter(cloud);
    const double norm = spectral_norm(centered.coords());
    if (norm == 0.0) throw DegenerateCloud("all points coincide");
    const double scale = cfg.c / norm;
    PointCloud normalized(centered.coords() * scale, cloud.attrs());

    GraphParams params{cfg.sigma, cfg.tau};
    if (params.sigma <= 0.0 || params.tau <= 0.0) {
        const GraphParams found = auto_graph_params(normalized, cfg.knn);
        if (params.sigma <= 0.0) params.sigma = found.sigma;
        if (params.tau <= 0.0) params.tau = found.tau;
    }
    SparseGraph graph = build_graph(normalized, params.sigma, params.tau);
    return Pipeline{std::move(normalized), std::move(graph), params, mean, scale};
}

ResamplingDistribution strategy_distribution(const Pipeline& pipe, const RunConfig& cfg) {
    ResamplingDistribution dist;
    switch (cfg.strategy) {
        case Strategy::allpass:
            dist = dist_allpass(pipe.normalized, cfg.c);
            break;
        case Strategy::highpass: {
            const ShiftOperator t = shift_operator(pipe.graph, ShiftKind::transition);
            dist = dist_highpass(t, pipe.normalized, cfg.exponent);
            break;
        }
        case Strategy::lowpass_haar: {
            const ShiftOperator t = shift_operator(pipe.graph, ShiftKind::transition);
            dist = dist_haar_lowpass(t, pipe.normalized, cfg.c);
            break;
        }
        case Strategy::lowpass_ideal: {
            const ShiftOperator norm = shift_operator(pipe.graph, ShiftKind::normalized_adjacency);
            dist = dist_ideal_lowpass(ideal_lowpass(norm, cfg.bandwidth), pipe.normalized, cfg.c);
            break;
        }
        case Strategy::filterbank:
            throw BadParams("filterbank strategy has its own path");
    }
    if (cfg.beta > 0.0) dist = dist.with_floor(cfg.beta);
    return dist;
}

int resolve_draws(const RunConfig& cfg, Eigen::Index n) {
    if (cfg.draws > 0 && cfg.ratio > 0.0)
        throw BadParams("give either a draw count or a ratio, not both");
    if (cfg.draws > 0) return cfg.draws;
    if (cfg.ratio > 0.0) {
        if (cfg.ratio > 1.0) throw BadParams("ratio must lie in (0, 1]");
        return static_cast<int>(std::ceil(cfg.ratio * static_cast<double>(n)));
    }
    throw BadParams("either --draws or --ratio is required");
}

void write_distribution_csv(const std::string& path, const ResamplingDistribution& dist) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "index,pi\n";
    for (Eigen::Index i = 0; i < dist.probs.size(); ++i)
        out << i << ',' << format_double(dist.probs(i)) << '\n';
}

void write_weights_csv(const std::string& path, const ResampleResult& result) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "slot,index,weight\n";
    for (size_t j = 0; j < result.indices.size(); ++j)
        out << j << ',' << result.indices[j] << ',' << format_double(result.weights(j)) << '\n';
}

// Unique sampled points (first occurrence order by index) with the
// accumulated selection weight as an extra attribute column.
PointCloud unique_sample_cloud(const PointCloud& cloud, const ResampleResult& result) {
    std::vector<char> seen(static_cast<size_t>(cloud.size()), 0);
    std::vector<Eigen::Index> unique;
    std::vector<double> weight;
    for (size_t j = 0; j < result.indices.size(); ++j) {
        const Eigen::Index idx = result.indices[j];
        if (seen[static_cast<size_t>(idx)]) continue;
        seen[static_cast<size_t>(idx)] = 1;
        unique.push_back(idx);
        weight.push_back(result.weights(static_cast<Eigen::Index>(j)));
    }
    const Eigen::Index m = static_cast<Eigen::Index>(unique.size());
    Matrix coords(m, 3);
    Matrix attrs(m, cloud.attr_count() + 1);
    for (Eigen::Index r = 0; r < m; ++r) {
        coords.row(r) = cloud.coords().row(unique[static_cast<size_t>(r)]);
        if (cloud.attr_count() > 0)
            attrs.block(r, 0, 1, cloud.attr_count()) =
                cloud.attrs().row(unique[static_cast<size_t>(r)]);
        attrs(r, cloud.attr_count()) = weight[static_cast<size_t>(r)];
    }
    return PointCloud(std::move(coords), std::move(attrs));
}

std::string cloud_ext(const std::string& input) {
    return (input.size() >= 4 && input.compare(input.size() - 4, 4, ".ply") == 0) ? ".ply"
                                                                                  : ".xyz";
}

RigidTransform load_truth(const std::string& path) {
    const PointCloud rows = load_cloud(path, CloudFormat::xyz_csv);
    if (rows.size() != 4) throw ParseError("truth file must have 4 rows (3 rotation + shift)");
    RigidTransform t;
    t.rotation = rows.coords().topRows(3);
    t.shift = rows.coords().row(3).transpose();
    return t;
}

}  // namespace

void cmd_resample(const RunConfig& cfg) {
    const PointCloud cloud = load_cloud(cfg.input);
    std::vector<std::string> outputs;
    const std::string ext = cloud_ext(cfg.input);

    if (cfg.strategy == Strategy::filterbank) {
        if (cfg.bank_config.empty()) throw BadParams("filterbank strategy needs --bank-config");
        const Pipeline pipe = build_pipeline(cloud, cfg);
        const auto specs = parse_bank_config(cfg.bank_config);
        const BankResult bank = run_bank(pipe.normalized, pipe.graph, specs, cfg.seed);
        for (size_t i = 0; i < bank.subbands.size(); ++i) {
            const std::string dist_name = "distribution_" + std::to_string(i) + ".csv";
            const std::string w_name = "weights_" + std::to_string(i) + ".csv";
            write_distribution_csv(out_path(cfg, dist_name), bank.distributions[i]);
            write_weights_csv(out_path(cfg, w_name), bank.subbands[i]);
            outputs.push_back(dist_name);
            outputs.push_back(w_name);
        }
        // synthesis uses original-scale coordinates: rebuild against input
        BankResult original_points = bank;
        for (auto& pts : original_points.subband_points)
            if (pts.rows() == cloud.size()) pts = cloud.coords();
        const PointCloud merged = passthrough_synthesis(original_points, cloud);
        const std::string cloud_name = "resampled" + ext;
        save_cloud(out_path(cfg, cloud_name), merged);
        outputs.push_back(cloud_name);
        write_manifest(cfg, outputs);
        return;
    }

    const Pipeline pipe = build_pipeline(cloud, cfg);
    const ResamplingDistribution dist = strategy_distribution(pipe, cfg);
    const int draws = resolve_draws(cfg, cloud.size());
    const ResampleResult result = sample(dist, draws, cfg.seed);

    const std::string cloud_name = "resampled" + ext;
    save_cloud(out_path(cfg, cloud_name), unique_sample_cloud(cloud, result));
    write_distribution_csv(out_path(cfg, "distribution.csv"), dist);
    write_weights_csv(out_path(cfg, "weights.csv"), result);
    outputs = {cloud_name, "distribution.csv", "weights.csv"};
    write_manifest(cfg, outputs);
}

void cmd_evaluate(const RunConfig& cfg) {
    const PointCloud cloud = load_cloud(cfg.input);
    const Pipeline pipe = build_pipeline(cloud, cfg);
    const Matrix features = pipe.normalized.stacked();
    const int draws = resolve_draws(cfg, cloud.size());

    std::vector<std::pair<std::string, ResamplingDistribution>> rows;
    rows.emplace_back("uniform", ResamplingDistribution::from_weights(
                                     Vector::Ones(cloud.size())));
    FeatureVector raw;
    raw.kind = FeatureKind::raw;
    raw.values = features;
    rows.emplace_back("optimal", dist_invariant(raw));
    {
        RunConfig hp = cfg;
        hp.strategy = Strategy::highpass;
        rows.emplace_back("highpass", strategy_distribution(pipe, hp));
        RunConfig lh = cfg;
        lh.strategy = Strategy::lowpass_haar;
        rows.emplace_back("lowpass-haar", strategy_distribution(pipe, lh));
    }

    std::ofstream out(out_path(cfg, "evaluate.csv"));
    if (!out) throw Error("cannot write evaluate.csv");
    out << "strategy,closed_form_mse,empirical_mse,relative_bias\n";
    std::uint64_t seed = cfg.seed;
    for (auto& [name, dist] : rows) {
        if (cfg.beta > 0.0) dist = dist.with_floor(cfg.beta);
        const double closed = mse_closed_form(features, dist);
        const UnbiasednessReport rep =
            unbiasedness_check(features, dist, draws, cfg.trials, seed++);
        out << name << ',' << format_double(closed) << ',' << format_double(rep.empirical_mse)
            << ',' << format_double(rep.relative_bias) << '\n';
    }
    write_manifest(cfg, {"evaluate.csv"});
}

void cmd_contour(const RunConfig& cfg) {
    const PointCloud cloud = load_cloud(cfg.input);
    GraphParams params{cfg.sigma, cfg.tau};
    if (params.sigma <= 0.0 || params.tau <= 0.0) {
        const GraphParams found = auto_graph_params(cloud, cfg.knn);
        if (params.sigma <= 0.0) params.sigma = found.sigma;
        if (params.tau <= 0.0) params.tau = found.tau;
    }
    const SparseGraph graph = build_graph(cloud, params.sigma, params.tau);

    std::vector<std::string> outputs;
    auto dump = [&](const std::string& name, const Vector& score) {
        const std::string file = "contour_" + name + ".csv";
        std::ofstream out(out_path(cfg, file));
        if (!out) throw Error("cannot write " + file);
        out << "index,score\n";
        for (Eigen::Index i = 0; i < score.size(); ++i)
            out << i << ',' << format_double(score(i)) << '\n';
        outputs.push_back(file);
    };

    const bool all = cfg.contour_kind == "all";
    if (all || cfg.contour_kind == "highpass") {
        const ShiftOperator t = shift_operator(graph, ShiftKind::transition);
        dump("highpass", local_variation(t, cloud, cfg.include_attrs).values.col(0));
    }
    if (all || cfg.contour_kind == "pairwise")
        dump("pairwise", pairwise_variation(graph, cloud).values.col(0));
    if (all || cfg.contour_kind == "don") {
        const double rs = cfg.r_small > 0.0 ? cfg.r_small : params.sigma;
        const double rl = cfg.r_large > 0.0 ? cfg.r_large : 2.0 * params.sigma;
        dump("don", don_scores(cloud, rs, rl).values.col(0));
    }
    write_manifest(cfg, outputs);
}

void cmd_fit_sphere(const RunConfig& cfg) {
    PointCloud cloud = load_cloud(cfg.input);
    if (cfg.denoise_passes > 0) {
        GraphParams params{cfg.sigma, cfg.tau};
        if (params.sigma <= 0.0 || params.tau <= 0.0) {
            const GraphParams found = auto_graph_params(cloud, cfg.knn);
            if (params.sigma <= 0.0) params.sigma = found.sigma;
            if (params.tau <= 0.0) params.tau = found.tau;
        }
        const SparseGraph graph = build_graph(cloud, params.sigma, params.tau);
        const ShiftOperator t = shift_operator(graph, ShiftKind::transition);
        cloud = denoise_lowpass(cloud, t, cfg.denoise_passes);
    }
    const SphereFit fit = fit_sphere(cloud);

    std::ofstream out(out_path(cfg, "sphere_report.txt"));
    if (!out) throw Error("cannot write sphere_report.txt");
    out << "radius=" << format_double(fit.radius) << "\n";
    out << "center_x=" << format_double(fit.center.x()) << "\n";
    out << "center_y=" << format_double(fit.center.y()) << "\n";
    out << "center_z=" << format_double(fit.center.z()) << "\n";
    out << "rms_residual=" << format_double(fit.rms_residual) << "\n";
    write_manifest(cfg, {"sphere_report.txt"});
}

void cmd_register(const RunConfig& cfg) {
    if (cfg.target.empty()) throw BadParams("register needs --target");
    PointCloud source = load_cloud(cfg.input);
    PointCloud target = load_cloud(cfg.target);

    if (cfg.ratio > 0.0 || cfg.draws > 0) {
        RunConfig sub = cfg;
        const Pipeline src_pipe = build_pipeline(source, sub);
        const ResamplingDistribution sdist = strategy_distribution(src_pipe, sub);
        const ResampleResult sres = sample(sdist, resolve_draws(sub, source.size()), cfg.seed);
        PointCloud src_sampled = unique_sample_cloud(source, sres);

        const Pipeline tgt_pipe = build_pipeline(target, sub);
        const ResamplingDistribution tdist = strategy_distribution(tgt_pipe, sub);
        const ResampleResult tres =
            sample(tdist, resolve_draws(sub, target.size()), cfg.seed + 1);
        PointCloud tgt_sampled = unique_sample_cloud(target, tres);
        source = std::move(src_sampled);
        target = std::move(tgt_sampled);
    }

    RigidTransform truth;
    const bool have_truth = !cfg.truth.empty();
    if (have_truth) truth = load_truth(cfg.truth);
    const RegistrationReport rep = icp_register(source, target, cfg.max_iter, cfg.icp_tol,
                                                have_truth ? &truth : nullptr);

    std::ofstream out(out_path(cfg, "register_report.txt"));
    if (!out) throw Error("cannot write register_report.txt");
    out << "rmse=" << format_double(rep.rmse) << "\n";
    if (have_truth) {
        out << "shift_error=" << format_double(rep.shift_error) << "\n";
        out << "rotation_error=" << format_double(rep.rotation_error) << "\n";
    }
    out << "iterations=" << rep.iterations << "\n";
    out << "converged=" << (rep.converged ? 1 : 0) << "\n";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out << "rotation_" << r << c << "=" << format_double(rep.recovered.rotation(r, c))
                << "\n";
    for (int i = 0; i < 3; ++i)
        out << "shift_" << i << "=" << format_double(rep.recovered.shift(i)) << "\n";
    write_manifest(cfg, {"register_report.txt"});
}

void cmd_graph_dump(const RunConfig& cfg) {
    const PointCloud cloud = load_cloud(cfg.input);
    GraphParams params{cfg.sigma, cfg.tau};
    if (params.sigma <= 0.0 || params.tau <= 0.0) {
        const GraphParams found = auto_graph_params(cloud, cfg.knn);
        if (params.sigma <= 0.0) params.sigma = found.sigma;
        if (params.tau <= 0.0) params.tau = found.tau;
    }
    const SparseGraph graph = build_graph(cloud, params.sigma, params.tau);
    dump_edges_csv(graph, out_path(cfg, "graph_edges.csv"));
    write_manifest(cfg, {"graph_edges.csv"});
}

}  // namespace pcr
