#include <cstdio>
#include <exception>
#include <string>

#include "tailwalk/acceptance.hpp"
#include "tailwalk/config.hpp"

// Usage: acceptance [config.toml] [report.json]
int main(int argc, char** argv) {
    using namespace tailwalk;
    try {
        AcceptanceOptions opts;
        ReportHeader header{"acceptance", "builtin"};
        if (argc > 1) {
            const auto cfg = load_config(argv[1]);
            opts.seed = cfg.require_seed("acceptance");
            header.config_hash = config_hash(cfg);
        }
        const auto run = run_acceptance(opts, header, [](const CriterionResult& r) {
            std::printf("%s\n", format_result(r).c_str());
            std::fflush(stdout);
        });
        if (argc > 2) write_text(argv[2], run.report);
        int failed = 0;
        for (const auto& r : run.results) failed += !r.pass;
        std::printf("%d of %zu criteria passed\n", int(run.results.size()) - failed, run.results.size());
        return failed ? 1 : 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
