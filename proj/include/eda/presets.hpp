// Named configurations for the standard experiments.  The full-scale presets
// run 20k peers and are meant for nightly smoke runs; each has a `-desk`
// sibling scaled down to finish quickly while keeping the qualitative
// behaviour.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "eda/config.hpp"

namespace eda {

struct ExperimentPreset {
    std::string name;
    SimConfig config;
    std::string description;
};

inline const std::vector<ExperimentPreset>& experiment_presets() {
    static const std::vector<ExperimentPreset> presets = [] {
        std::vector<ExperimentPreset> list;

        SimConfig fig1;
        fig1.n_peers = 20000;
        fig1.sample_ratio = 0.01;
        fig1.init_mode = InitMode::UniformGrid;
        fig1.jitter = 0.5;
        list.push_back({"fig1-uniform", fig1,
                        "single transaction, 20k peers, evenly spaced initial estimates"});

        SimConfig fig2 = fig1;
        fig2.init_mode = InitMode::Random;
        list.push_back({"fig2-random", fig2,
                        "single transaction, 20k peers, uniformly random initial estimates"});

        SimConfig fig4;
        fig4.n_peers = 20000;
        fig4.sample_ratio = 0.01;
        fig4.byzantine_fraction = 0.01;
        fig4.init_mode = InitMode::Random;
        fig4.jitter = 0.05;
        fig4.transactions = evenly_spaced_transactions(10);
        list.push_back({"fig4-parallel", fig4,
                        "ten parallel transactions, 20k peers, 1% byzantine"});

        SimConfig fig1_desk = fig1;
        fig1_desk.n_peers = 1000;
        fig1_desk.sample_ratio = 0.02;
        list.push_back({"fig1-uniform-desk", fig1_desk,
                        "desk-scale fig1-uniform: 1k peers, 2% sample ratio"});

        SimConfig fig2_desk = fig1_desk;
        fig2_desk.init_mode = InitMode::Random;
        list.push_back({"fig2-random-desk", fig2_desk,
                        "desk-scale fig2-random: 1k peers, 2% sample ratio"});

        SimConfig fig4_desk = fig4;
        fig4_desk.n_peers = 2000;
        fig4_desk.sample_ratio = 0.05;
        list.push_back({"fig4-parallel-desk", fig4_desk,
                        "desk-scale fig4-parallel: 2k peers, 5% sample ratio, 1% byzantine"});

        return list;
    }();
    return presets;
}

inline std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    names.reserve(experiment_presets().size());
    for (const ExperimentPreset& p : experiment_presets()) { names.push_back(p.name); }
    return names;
}

inline SimConfig preset_config(const std::string& name) {
    for (const ExperimentPreset& p : experiment_presets()) {
        if (p.name == name) { return p.config; }
    }
    throw std::invalid_argument("preset: unknown name " + name);
}

}  // namespace eda
