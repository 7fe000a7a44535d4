#include "roomsrl.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "harness/experiment.hpp"
#include "harness/gradcheck_suite.hpp"
#include "nn/checkpoint.hpp"
#include "nn/rng.hpp"
#include "train/reinforce.hpp"

namespace {

using namespace roomsrl;

thread_local std::string g_last_error;

rrl_status fail(rrl_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Maps core exceptions onto status codes; never lets one cross the ABI.
template <typename Fn>
rrl_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        return fail(RRL_ERR_CONFIG, e.what());
    } catch (const IoError& e) {
        return fail(RRL_ERR_IO, e.what());
    } catch (const NumericError& e) {
        return fail(RRL_ERR_NUMERIC, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RRL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(RRL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RRL_ERR_INTERNAL, "unknown error");
    }
}

void copy_to_buffer(const std::string& text, char* buffer, size_t buffer_size) {
    if (buffer == nullptr || buffer_size == 0) return;
    const size_t n = std::min(text.size(), buffer_size - 1);
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
}

}  // namespace

struct rrl_env {
    nn::RandomStream rng;
    env::LayoutMode mode;
    int timeout;
    env::GridState state;
    bool done;
};

struct rrl_experiment {
    harness::ExperimentSpec spec;
    std::optional<harness::RunResult> run;
};

struct rrl_summary {
    std::vector<harness::BucketStat> buckets;
};

extern "C" {

const char* rrl_version(void) { return "0.1.0"; }

const char* rrl_status_name(rrl_status status) {
    switch (status) {
        case RRL_OK: return "ok";
        case RRL_ERR_INVALID_ARGUMENT: return "invalid argument";
        case RRL_ERR_CONFIG: return "configuration error";
        case RRL_ERR_IO: return "I/O error";
        case RRL_ERR_NUMERIC: return "numeric error";
        case RRL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rrl_last_error(void) { return g_last_error.c_str(); }

size_t rrl_layout_count(void) { return env::enumerate_layouts().size(); }

rrl_status rrl_layout_get(size_t index, int heights[4], int colors[4]) {
    return guarded([&]() -> rrl_status {
        const auto& all = env::enumerate_layouts();
        if (index >= all.size()) {
            return fail(RRL_ERR_INVALID_ARGUMENT,
                        "layout index " + std::to_string(index) + " out of range (" +
                            std::to_string(all.size()) + " layouts)");
        }
        if (heights == nullptr || colors == nullptr) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "null output pointer");
        }
        const env::RoomLayout& layout = all[index];
        for (int i = 0; i < 4; ++i) {
            heights[i] = layout.heights[static_cast<size_t>(i)];
            colors[i] = static_cast<int>(layout.colors[static_cast<size_t>(i)]);
        }
        return RRL_OK;
    });
}

const char* rrl_color_name(int color) {
    if (color < 0 || color >= env::kNumColors) return "";
    return env::color_name(static_cast<env::Color>(color));
}

rrl_status rrl_env_create(int dynamic_layout, uint64_t seed, int timeout, rrl_env** out) {
    return guarded([&]() -> rrl_status {
        if (out == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null output pointer");
        const env::LayoutMode mode =
            dynamic_layout != 0 ? env::LayoutMode::Dynamic : env::LayoutMode::Fixed;
        const int resolved_timeout = timeout <= 0 ? env::kDefaultTimeout : timeout;
        nn::RandomStream rng(seed);
        env::GridState state = env::reset(mode, rng);
        auto handle = std::unique_ptr<rrl_env>(
            new rrl_env{rng, mode, resolved_timeout, state, false});
        *out = handle.release();
        return RRL_OK;
    });
}

void rrl_env_destroy(rrl_env* env_handle) { delete env_handle; }

rrl_status rrl_env_reset(rrl_env* env_handle) {
    return guarded([&]() -> rrl_status {
        if (env_handle == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null handle");
        env_handle->state = env::reset(env_handle->mode, env_handle->rng);
        env_handle->done = false;
        return RRL_OK;
    });
}

rrl_status rrl_env_step(rrl_env* env_handle, int delta_row, double* reward, int* done,
                        int* success) {
    return guarded([&]() -> rrl_status {
        if (env_handle == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null handle");
        if (env_handle->done) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "episode finished; call rrl_env_reset");
        }
        const env::StepOutcome outcome =
            env::apply_agent_move(env_handle->state, delta_row, env_handle->timeout);
        env_handle->done = outcome.done;
        if (reward != nullptr) *reward = outcome.reward;
        if (done != nullptr) *done = outcome.done ? 1 : 0;
        if (success != nullptr) *success = outcome.success ? 1 : 0;
        return RRL_OK;
    });
}

rrl_status rrl_env_observe(const rrl_env* env_handle, double* image, double* instruction) {
    return guarded([&]() -> rrl_status {
        if (env_handle == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null handle");
        const env::Observation obs = env::render(env_handle->state);
        if (image != nullptr) {
            std::memcpy(image, obs.image.data(), sizeof(double) * RRL_IMAGE_SIZE);
        }
        if (instruction != nullptr) {
            std::memcpy(instruction, obs.instruction.data(), sizeof(double) * 4);
        }
        return RRL_OK;
    });
}

rrl_status rrl_env_agent_row(const rrl_env* env_handle, int* row) {
    return guarded([&]() -> rrl_status {
        if (env_handle == nullptr || row == nullptr) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "null pointer");
        }
        *row = env_handle->state.agent_row;
        return RRL_OK;
    });
}

rrl_status rrl_experiment_create(const char* config_path, const char* const* override_keys,
                                 const char* const* override_values, size_t override_count,
                                 rrl_experiment** out) {
    return guarded([&]() -> rrl_status {
        if (out == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null output pointer");
        if (override_count > 0 && (override_keys == nullptr || override_values == nullptr)) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "null override arrays");
        }
        harness::KeyValueList overrides;
        for (size_t i = 0; i < override_count; ++i) {
            if (override_keys[i] == nullptr || override_values[i] == nullptr) {
                return fail(RRL_ERR_INVALID_ARGUMENT, "null override entry");
            }
            overrides.emplace_back(override_keys[i], override_values[i]);
        }
        auto handle = std::make_unique<rrl_experiment>();
        handle->spec =
            harness::parse_config(config_path == nullptr ? "" : config_path, overrides);
        *out = handle.release();
        return RRL_OK;
    });
}

void rrl_experiment_destroy(rrl_experiment* experiment) { delete experiment; }

rrl_status rrl_experiment_describe(const rrl_experiment* experiment, char* buffer,
                                   size_t buffer_size) {
    return guarded([&]() -> rrl_status {
        if (experiment == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null handle");
        copy_to_buffer(harness::describe(experiment->spec), buffer, buffer_size);
        return RRL_OK;
    });
}

rrl_status rrl_experiment_run(rrl_experiment* experiment, rrl_episode_callback callback,
                              void* user) {
    return guarded([&]() -> rrl_status {
        if (experiment == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null handle");
        train::EpisodeSink sink;
        if (callback != nullptr) {
            sink = [callback, user](const train::EpisodeRecord& r) {
                callback(user, r.episode, r.length, r.episode_return, r.success ? 1 : 0,
                         r.baseline);
            };
        }
        experiment->run = harness::run_experiment(experiment->spec, sink);
        return RRL_OK;
    });
}

rrl_status rrl_experiment_summary(const rrl_experiment* experiment, int* episodes,
                                  double* mean_length, double* length_variance) {
    return guarded([&]() -> rrl_status {
        if (experiment == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null handle");
        if (!experiment->run.has_value()) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "experiment has not been run");
        }
        const train::TrainResult& summary = experiment->run->summary;
        if (episodes != nullptr) *episodes = summary.episodes;
        if (mean_length != nullptr) *mean_length = summary.final_window_mean_length;
        if (length_variance != nullptr) {
            *length_variance = summary.final_window_length_variance;
        }
        return RRL_OK;
    });
}

rrl_status rrl_experiment_save_params(const rrl_experiment* experiment, const char* path) {
    return guarded([&]() -> rrl_status {
        if (experiment == nullptr || path == nullptr) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "null pointer");
        }
        if (!experiment->run.has_value()) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "experiment has not been run");
        }
        nn::save_params(experiment->run->controller->params(), path);
        return RRL_OK;
    });
}

rrl_status rrl_summarize(const char* csv_path, int bucket, rrl_summary** out) {
    return guarded([&]() -> rrl_status {
        if (csv_path == nullptr || out == nullptr) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "null pointer");
        }
        auto handle = std::make_unique<rrl_summary>();
        handle->buckets = harness::summarize(csv_path, bucket);
        *out = handle.release();
        return RRL_OK;
    });
}

void rrl_summary_destroy(rrl_summary* summary) { delete summary; }

size_t rrl_summary_bucket_count(const rrl_summary* summary) {
    return summary == nullptr ? 0 : summary->buckets.size();
}

rrl_status rrl_summary_bucket(const rrl_summary* summary, size_t index, int* start_episode,
                              int* count, double* mean_length, double* variance_length) {
    return guarded([&]() -> rrl_status {
        if (summary == nullptr) return fail(RRL_ERR_INVALID_ARGUMENT, "null handle");
        if (index >= summary->buckets.size()) {
            return fail(RRL_ERR_INVALID_ARGUMENT, "bucket index out of range");
        }
        const harness::BucketStat& stat = summary->buckets[index];
        if (start_episode != nullptr) *start_episode = stat.start_episode;
        if (count != nullptr) *count = stat.count;
        if (mean_length != nullptr) *mean_length = stat.mean_length;
        if (variance_length != nullptr) *variance_length = stat.variance_length;
        return RRL_OK;
    });
}

rrl_status rrl_gradcheck(int seeds, double epsilon, double tolerance, double* max_rel_error,
                         char* report, size_t report_size) {
    return guarded([&]() -> rrl_status {
        const int resolved_seeds = seeds <= 0 ? 20 : seeds;
        const double resolved_epsilon = epsilon <= 0.0 ? 1e-5 : epsilon;
        const double resolved_tolerance = tolerance <= 0.0 ? 1e-4 : tolerance;
        const harness::GradCheckReport result = harness::run_gradcheck_suite(
            resolved_seeds, resolved_epsilon, resolved_tolerance);
        double worst = 0.0;
        std::ostringstream lines;
        for (const harness::GradCheckCase& c : result.cases) {
            worst = std::max(worst, c.max_rel_error);
            lines << c.name << ": max rel error " << harness::format_double(c.max_rel_error)
                  << (c.pass ? " (pass)" : " (FAIL)") << '\n';
        }
        if (max_rel_error != nullptr) *max_rel_error = worst;
        copy_to_buffer(lines.str(), report, report_size);
        if (!result.all_pass) {
            return fail(RRL_ERR_NUMERIC, "gradient check failed; see report");
        }
        return RRL_OK;
    });
}

}  // extern "C"
