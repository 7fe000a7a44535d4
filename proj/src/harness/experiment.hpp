#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "train/reinforce.hpp"

namespace roomsrl::harness {

enum class ExperimentId { NoAttnFixed, NoAttnDynamic, Partial, Constrained };

const char* experiment_id_name(ExperimentId id);
ExperimentId parse_experiment_id(const std::string& text);  // throws ConfigError

struct ExperimentSpec {
    ExperimentId id = ExperimentId::NoAttnFixed;
    train::TrainConfig config;
    std::string out_path;  // CSV destination
};

// Ordered (key, value) pairs; later entries win over earlier ones.
using KeyValueList = std::vector<std::pair<std::string, std::string>>;

// Resolves defaults <- key=value file <- overrides. `config_path` may be
// empty (no file). The experiment id must come from the file or an
// override; it fixes the gating mode, layout mode, and network variant.
ExperimentSpec parse_config(const std::string& config_path, const KeyValueList& overrides);

// The resolved spec as key=value lines, suitable for echoing to a log.
std::string describe(const ExperimentSpec& spec);

struct RunResult {
    train::TrainResult summary;
    std::unique_ptr<policy::Controller> controller;  // trained parameters
};

// Trains per spec, streaming one CSV row per episode (flushed as written)
// to spec.out_path. `extra_sink` also sees every record when provided.
RunResult run_experiment(const ExperimentSpec& spec,
                         const train::EpisodeSink& extra_sink = nullptr);

struct CsvRow {
    int episode = 0;
    int length = 0;
    double episode_return = 0.0;
    bool success = false;
    double baseline = 0.0;
};

// Parses a run CSV, validating the header and every field; throws IoError
// naming the offending line on malformed input.
std::vector<CsvRow> read_run_csv(const std::string& path);

struct BucketStat {
    int start_episode = 0;
    int count = 0;
    double mean_length = 0.0;
    double variance_length = 0.0;  // population variance
};

// Groups a run CSV into consecutive buckets of `bucket` rows (the final
// bucket may be short) and reports episode-length statistics per bucket.
std::vector<BucketStat> summarize(const std::string& csv_path, int bucket);

// Shortest decimal form that round-trips the exact double.
std::string format_double(double value);

}  // namespace roomsrl::harness
