#include <omp.h>

#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tailwalk/errors.hpp"
#include "tailwalk/report.hpp"

namespace {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadConfig = 2;
constexpr int kAssumption = 3;

}  // namespace

int main(int argc, char** argv) {
    using namespace tailwalk;
    CLI::App app{"Heavy-tailed random walks, fronts and Green functions"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    int threads = 0;
    bool force = false;
    app.add_option("--config", config_path, "Experiment configuration (TOML subset)")->required();
    app.add_option("--out", out_dir, "Output directory (default: the config's 'output')");
    app.add_option("--threads", threads, "Worker threads; changes speed only")->check(CLI::NonNegativeNumber);
    app.add_flag("--force", force, "Evaluate the tail formula outside its validity zone (rows are tagged)");

    const std::map<std::string, std::pair<std::string, std::function<int(const cli::RunContext&)>>> commands{
        {"verify", {"Check the kernel assumptions", cli::run_verify}},
        {"density", {"Transition density on a grid", cli::run_density}},
        {"asym", {"Solver against the tail formula and regimes", cli::run_asym}},
        {"front", {"Front radius of the branching population", cli::run_front}},
        {"green", {"Green function and its large-|x| asymptotic", cli::run_green}},
        {"branch", {"Monte-Carlo branching walk and first moment", cli::run_branch}},
        {"acceptance", {"Run the acceptance suite", cli::run_acceptance_suite}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadConfig;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    try {
        cli::RunContext ctx;
        ctx.config = load_config(config_path);
        ctx.out_dir = out_dir.empty() ? ctx.config.output : out_dir;
        ctx.force = force;
        if (threads > 0) omp_set_num_threads(threads);
        return commands.at(name).second(ctx);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s: %s\n", config_path.c_str(), e.what());
        return kBadConfig;
    } catch (const InvalidKernel& e) {
        std::fprintf(stderr, "%s: invalid kernel: %s\n", config_path.c_str(), e.what());
        return kBadConfig;
    } catch (const AssumptionViolated& e) {
        std::fprintf(stderr, "assumption violated (%s): %s\n", e.condition().c_str(), e.what());
        return kAssumption;
    } catch (const TailTooHeavy& e) {
        std::fprintf(stderr, "assumption violated: %s\n", e.what());
        return kAssumption;
    } catch (const NoPowerTail& e) {
        std::fprintf(stderr, "assumption violated: %s\n", e.what());
        return kAssumption;
    } catch (const OutsideValidityZone& e) {
        std::fprintf(stderr, "outside the tail zone: %s (rerun with --force to evaluate anyway)\n", e.what());
        return kAssumption;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kCheckFailed;
    }
}
