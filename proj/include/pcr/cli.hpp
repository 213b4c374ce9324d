#pragma once

#include <cstdint>
#include <string>

namespace pcr {

enum class Strategy { allpass, highpass, lowpass_ideal, lowpass_haar, filterbank };

/**
 * Everything a command run needs. Each run writes a manifest
 * (sorted key=value lines, including the input hash and seed) next to
 * its outputs, so the run can be reproduced bit-exactly.
 */
struct RunConfig {
    std::string command;
    std::string input;
    std::string target;      // register: second cloud
    std::string truth;       // register: optional ground-truth transform (4x3 csv)
    std::string output_dir = ".";
    std::string bank_config; // filterbank strategy

    // graph parameters; sigma/tau <= 0 means derive from the data
    double sigma = 0.0;
    double tau = 0.0;
    int knn = 10;

    Strategy strategy = Strategy::highpass;
    int draws = 0;        // M; exclusive with ratio
    double ratio = 0.0;   // fraction of N
    std::uint64_t seed = 0;
    double beta = 0.0;    // probability floor mix
    double c = 1.0;       // coordinate/attribute trade-off
    int bandwidth = 10;   // ideal low-pass
    int exponent = 2;     // high-pass variation exponent
    bool include_attrs = false;

    // contour options
    std::string contour_kind = "all";  // highpass | pairwise | don | all
    double r_small = 0.0;
    double r_large = 0.0;

    // evaluate options
    int trials = 10000;

    // register options
    int max_iter = 60;
    double icp_tol = 1e-10;

    // fit-sphere / denoise options
    int denoise_passes = 0;
};

// Command entry points. They throw pcr::Error subclasses on failure;
// main() maps usage problems to exit code 1 and runtime errors to 2.
void cmd_resample(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_contour(const RunConfig& cfg);
void cmd_fit_sphere(const RunConfig& cfg);
void cmd_register(const RunConfig& cfg);
void cmd_graph_dump(const RunConfig& cfg);

}  // namespace pcr
