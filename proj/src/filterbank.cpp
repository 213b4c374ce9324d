#include "pcr/filterbank.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pcr/random.hpp"

namespace pcr {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

SubbandFilter parse_filter_name(const std::string& name) {
    if (name == "allpass") return SubbandFilter::allpass;
    if (name == "haar-highpass") return SubbandFilter::haar_highpass;
    if (name == "haar-lowpass") return SubbandFilter::haar_lowpass;
    if (name == "ideal-lowpass") return SubbandFilter::ideal_lowpass;
    throw BadParams("unknown subband filter '" + name + "'");
}

}  // namespace

BankResult run_bank(const PointCloud& cloud, const SparseGraph& graph,
                    const std::vector<SubbandSpec>& specs, std::uint64_t seed) {
    if (specs.empty()) throw BadParams("run_bank: no subbands given");
    if (graph.size() != cloud.size())
        throw DimensionMismatch("run_bank: graph does not match cloud");
    const Eigen::Index n = cloud.size();
    for (const auto& s : specs) {
        if (!(s.alpha > 0.0) || s.alpha > 1.0)
            throw BadParams("run_bank: sampling ratio must lie in (0, 1]");
        if (s.filter == SubbandFilter::ideal_lowpass && (s.bandwidth < 1 || s.bandwidth > n))
            throw BadParams("run_bank: ideal-lowpass subband needs a valid bandwidth");
    }

    const double c = spectral_norm(cloud.coords());
    const ShiftOperator transition = shift_operator(graph, ShiftKind::transition);

    BankResult result;
    result.subbands.reserve(specs.size());
    result.subband_points.reserve(specs.size());
    for (size_t si = 0; si < specs.size(); ++si) {
        const SubbandSpec& spec = specs[si];
        ResamplingDistribution dist;
        Matrix points = cloud.coords();
        switch (spec.filter) {
            case SubbandFilter::allpass:
                dist = dist_allpass(cloud, c);
                break;
            case SubbandFilter::haar_highpass:
                dist = dist_highpass(transition, cloud, 2);
                if (spec.use_filtered_points)
                    points = apply_filter(haar_highpass(transition), cloud.coords());
                break;
            case SubbandFilter::haar_lowpass:
                dist = dist_haar_lowpass(transition, cloud, c);
                if (spec.use_filtered_points)
                    // scale-preserving smoother, same as the denoising path
                    points = 0.5 * apply_filter(haar_lowpass(transition), cloud.coords());
                break;
            case SubbandFilter::ideal_lowpass: {
                const IdealLowPass lp = ideal_lowpass(
                    shift_operator(graph, ShiftKind::normalized_adjacency), spec.bandwidth);
                dist = dist_ideal_lowpass(lp, cloud, c);
                if (spec.use_filtered_points) points = lp.project(cloud.coords());
                break;
            }
        }
        const int draws = static_cast<int>(
            std::ceil(spec.alpha * static_cast<double>(n)));
        const std::uint64_t sub_seed = mix_seed(seed + static_cast<std::uint64_t>(si) + 1);
        ResampleResult r = sample(dist, draws, sub_seed);

        for (size_t j = 0; j < r.indices.size(); ++j) {
            result.merged_indices.push_back(r.indices[j]);
            result.merged_subband.push_back(static_cast<int>(si));
        }
        result.subbands.push_back(std::move(r));
        result.distributions.push_back(std::move(dist));
        result.subband_points.push_back(std::move(points));
    }

    result.merged_weights.resize(static_cast<Eigen::Index>(result.merged_indices.size()));
    Eigen::Index at = 0;
    for (const auto& r : result.subbands)
        for (Eigen::Index j = 0; j < r.weights.size(); ++j) result.merged_weights(at++) = r.weights(j);
    return result;
}

PointCloud passthrough_synthesis(const BankResult& bank, const PointCloud& cloud) {
    const Eigen::Index n = cloud.size();
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<Eigen::Index> unique;
    std::vector<size_t> origin;  // position in the merged stream
    for (size_t j = 0; j < bank.merged_indices.size(); ++j) {
        const Eigen::Index idx = bank.merged_indices[j];
        if (idx < 0 || idx >= n) throw DimensionMismatch("passthrough_synthesis: bad index");
        if (seen[static_cast<size_t>(idx)]) continue;
        seen[static_cast<size_t>(idx)] = 1;
        unique.push_back(idx);
        origin.push_back(j);
    }
    const Eigen::Index m = static_cast<Eigen::Index>(unique.size());
    Matrix coords(m, 3);
    Matrix attrs(m, cloud.attr_count() + 1);
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index idx = unique[static_cast<size_t>(r)];
        const size_t j = origin[static_cast<size_t>(r)];
        const int band = bank.merged_subband[j];
        coords.row(r) = bank.subband_points[static_cast<size_t>(band)].row(idx);
        if (cloud.attr_count() > 0)
            attrs.block(r, 0, 1, cloud.attr_count()) = cloud.attrs().row(idx);
        attrs(r, cloud.attr_count()) = bank.merged_weights(static_cast<Eigen::Index>(j));
    }
    return PointCloud(std::move(coords), std::move(attrs));
}

std::vector<SubbandSpec> parse_bank_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open bank config " + path);
    std::map<int, SubbandSpec> bands;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ": expected key=value at line " + std::to_string(lineno));
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        std::istringstream ks(key);
        std::string head, index_str, field;
        if (!std::getline(ks, head, '.') || head != "subband" ||
            !std::getline(ks, index_str, '.') || !std::getline(ks, field))
            throw ParseError(path + ": bad key '" + key + "' at line " + std::to_string(lineno));
        int index = 0;
        try {
            index = std::stoi(index_str);
        } catch (const std::exception&) {
            throw ParseError(path + ": bad subband index at line " + std::to_string(lineno));
        }

        SubbandSpec& spec = bands[index];
        try {
            if (field == "filter")
                spec.filter = parse_filter_name(value);
            else if (field == "alpha")
                spec.alpha = std::stod(value);
            else if (field == "bandwidth")
                spec.bandwidth = std::stoi(value);
            else if (field == "use_filtered")
                spec.use_filtered_points = (value == "true" || value == "1");
            else
                throw ParseError(path + ": unknown field '" + field + "' at line " +
                                 std::to_string(lineno));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(path + ": bad value at line " + std::to_string(lineno));
        }
    }
    std::vector<SubbandSpec> out;
    out.reserve(bands.size());
    for (auto& [idx, spec] : bands) out.push_back(spec);
    if (out.empty()) throw BadParams("bank config defines no subbands");
    return out;
}

}  // namespace pcr
