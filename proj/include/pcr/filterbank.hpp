#pragma once

#include <string>
#include <vector>

#include "pcr/resampling.hpp"

namespace pcr {

enum class SubbandFilter { allpass, haar_highpass, haar_lowpass, ideal_lowpass };

struct SubbandSpec {
    SubbandFilter filter = SubbandFilter::allpass;
    double alpha = 1.0;       // sampling ratio in (0, 1]
    int bandwidth = 0;        // ideal_lowpass only
    bool use_filtered_points = false;  // emit filtered coords instead of originals
};

/**
 * Result of running a filter bank: one resample per subband plus the
 * merged index/weight stream with subband provenance. Duplicates across
 * subbands are kept (their weights differ); deduplication happens only
 * in passthrough_synthesis.
 */
struct BankResult {
    std::vector<ResampleResult> subbands;
    std::vector<ResamplingDistribution> distributions;
    std::vector<Matrix> subband_points;   // coords used per subband (original or filtered)
    std::vector<Eigen::Index> merged_indices;
    std::vector<int> merged_subband;
    Vector merged_weights;
};

/**
 * Splits the cloud into subbands, builds each subband's optimal
 * distribution from its filter, and draws ceil(alpha_i N) points per
 * subband. Deterministic given the seed. Throws BadParams on an empty
 * spec list or invalid ratios.
 */
BankResult run_bank(const PointCloud& cloud, const SparseGraph& graph,
                    const std::vector<SubbandSpec>& specs, std::uint64_t seed);

/**
 * Minimal synthesis: the deduplicated union of sampled points as a
 * PointCloud, keeping each point's first-drawn coordinates and weight.
 * The weight is appended as the final attribute column.
 */
PointCloud passthrough_synthesis(const BankResult& bank, const PointCloud& cloud);

/**
 * Reads a bank description in key=value form:
 *   subband.<i>.filter = allpass | haar-highpass | haar-lowpass | ideal-lowpass
 *   subband.<i>.alpha = <ratio>
 *   subband.<i>.bandwidth = <b>          (ideal-lowpass)
 *   subband.<i>.use_filtered = true|false
 * Blank lines and '#' comments are ignored.
 */
std::vector<SubbandSpec> parse_bank_config(const std::string& path);

}  // namespace pcr
