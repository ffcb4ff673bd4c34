#pragma once

#include <string>

#include "tailwalk/config.hpp"

namespace tailwalk::cli {

struct RunContext {
    ExperimentConfig config;
    std::string out_dir;
    bool force = false;
};

/// Each command writes its reports under ctx.out_dir and returns the exit
/// status (0 ok, 1 check failure, 3 assumption violated). Errors propagate.
int run_verify(const RunContext& ctx);
int run_density(const RunContext& ctx);
int run_asym(const RunContext& ctx);
int run_front(const RunContext& ctx);
int run_green(const RunContext& ctx);
int run_branch(const RunContext& ctx);
int run_acceptance_suite(const RunContext& ctx);

}  // namespace tailwalk::cli
