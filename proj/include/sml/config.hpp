#pragma once
// Experiment configuration: JSON schema with a validating loader.
// See README.md for the documented schema.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sml/datagen.hpp"
#include "sml/network.hpp"
#include "sml/training.hpp"

namespace sml {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    CombinationMatrix network;
    NetworkDataModel data;

    ModelKind model_kind = ModelKind::linear;
    double beta = 1.0;
    int hidden = 15;
    double norm_bound = 0.0;

    std::string loss_name = "logistic";

    std::vector<int> n_per_agent;
    int batch = 10;
    int epochs = 30;
    double rate = 1e-4;

    int stream_length = 30;
    int true_label = 1;
    double consensus_tol = 1e-10;
    int consensus_t_max = 100000;

    int training_sets = 50;     // T
    int runs_per_set = 2000;    // R
    int mean_estimation = 100000;  // M

    std::vector<double> delta_grid;
    std::vector<int> n0_list;

    // bounds subcommand inputs
    double bounds_delta = 0.1;
    double bounds_epsilon = 0.01;
    std::vector<double> bounds_s_grid;

    std::uint64_t seed = 1;
    int threads = 0;

    int agents() const { return network.size(); }

    ExperimentConfig() : network(1, {1.0}) {}

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_file(const std::string& path);
};

}  // namespace sml
