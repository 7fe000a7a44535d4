#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roomsrl.h"

namespace {

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(std::begin(buf), std::end(buf), value);
    if (ec != std::errc()) return "nan";
    return std::string(std::begin(buf), ptr);
}

int fail_with(rrl_status status) {
    std::fprintf(stderr, "error: %s (%s)\n", rrl_last_error(), rrl_status_name(status));
    return 1;
}

int cmd_run(const std::vector<std::pair<const char*, const char*>>& overrides,
            const std::string& config_path) {
    std::vector<const char*> keys, values;
    for (const auto& [key, value] : overrides) {
        keys.push_back(key);
        values.push_back(value);
    }
    rrl_experiment* experiment = nullptr;
    rrl_status status =
        rrl_experiment_create(config_path.empty() ? nullptr : config_path.c_str(),
                              keys.data(), values.data(), keys.size(), &experiment);
    if (status != RRL_OK) return fail_with(status);

    char resolved[1024];
    rrl_experiment_describe(experiment, resolved, sizeof resolved);
    std::fputs(resolved, stdout);

    status = rrl_experiment_run(experiment, nullptr, nullptr);
    if (status != RRL_OK) {
        rrl_experiment_destroy(experiment);
        return fail_with(status);
    }
    int episodes = 0;
    double mean = 0.0, variance = 0.0;
    rrl_experiment_summary(experiment, &episodes, &mean, &variance);
    std::printf("episodes=%d final_window_mean_length=%s final_window_length_variance=%s\n",
                episodes, format_double(mean).c_str(), format_double(variance).c_str());
    rrl_experiment_destroy(experiment);
    return 0;
}

int cmd_summarize(const std::string& in_path, int bucket) {
    rrl_summary* summary = nullptr;
    const rrl_status status = rrl_summarize(in_path.c_str(), bucket, &summary);
    if (status != RRL_OK) return fail_with(status);
    std::puts("start_episode,count,mean_length,variance_length");
    for (size_t i = 0; i < rrl_summary_bucket_count(summary); ++i) {
        int start = 0, count = 0;
        double mean = 0.0, variance = 0.0;
        rrl_summary_bucket(summary, i, &start, &count, &mean, &variance);
        std::printf("%d,%d,%s,%s\n", start, count, format_double(mean).c_str(),
                    format_double(variance).c_str());
    }
    rrl_summary_destroy(summary);
    return 0;
}

int cmd_gradcheck() {
    double worst = 0.0;
    char report[2048];
    const rrl_status status = rrl_gradcheck(0, 0.0, 0.0, &worst, report, sizeof report);
    std::fputs(report, stdout);
    std::printf("worst relative error: %s\n", format_double(worst).c_str());
    if (status != RRL_OK) return fail_with(status);
    return 0;
}

int cmd_enumerate_layouts() {
    const size_t count = rrl_layout_count();
    for (size_t i = 0; i < count; ++i) {
        int heights[4], colors[4];
        const rrl_status status = rrl_layout_get(i, heights, colors);
        if (status != RRL_OK) return fail_with(status);
        std::printf("%d,%d,%d,%d,%s,%s,%s,%s\n", heights[0], heights[1], heights[2],
                    heights[3], rrl_color_name(colors[0]), rrl_color_name(colors[1]),
                    rrl_color_name(colors[2]), rrl_color_name(colors[3]));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rooms gridworld meta-controller experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "train one experiment and stream a per-episode CSV");
    std::string experiment, episodes, seed, lr, batch, config_path, out_path;
    auto* opt_experiment = run->add_option(
        "--experiment", experiment, "no-attn-fixed | no-attn-dynamic | partial | constrained");
    auto* opt_episodes = run->add_option("--episodes", episodes, "total training episodes");
    auto* opt_seed = run->add_option("--seed", seed, "master RNG seed");
    auto* opt_lr = run->add_option("--lr", lr, "Adam learning rate");
    auto* opt_batch = run->add_option("--batch", batch, "episodes per gradient step");
    run->add_option("--config", config_path, "key=value config file");
    auto* opt_out = run->add_option("--out", out_path, "CSV output path");

    auto* summarize = app.add_subcommand(
        "summarize", "bucketed episode-length statistics of a run CSV");
    std::string in_path;
    int bucket = 100;
    summarize->add_option("--in", in_path, "run CSV path")->required();
    summarize->add_option("--bucket", bucket, "episodes per bucket");

    auto* gradcheck = app.add_subcommand(
        "gradcheck", "finite-difference verification of every layer and network");

    auto* enumerate = app.add_subcommand("enumerate-layouts", "print every valid room layout");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        std::vector<std::pair<const char*, const char*>> overrides;
        const auto add = [&](const char* key, const std::string& value, const CLI::Option* opt) {
            if (opt->count() > 0) overrides.emplace_back(key, value.c_str());
        };
        add("experiment", experiment, opt_experiment);
        add("episodes", episodes, opt_episodes);
        add("seed", seed, opt_seed);
        add("lr", lr, opt_lr);
        add("batch", batch, opt_batch);
        add("out", out_path, opt_out);
        return cmd_run(overrides, config_path);
    }
    if (summarize->parsed()) return cmd_summarize(in_path, bucket);
    if (gradcheck->parsed()) return cmd_gradcheck();
    if (enumerate->parsed()) return cmd_enumerate_layouts();
    return 1;
}
