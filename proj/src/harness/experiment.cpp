#include "harness/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "nn/rng.hpp"

namespace roomsrl::harness {

namespace {

constexpr const char* kCsvHeader = "episode,length,return,success,baseline";
constexpr const char* kValidKeys =
    "experiment, episodes, seed, lr, batch, timeout, grad_clip, baseline_source, out";

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
        throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
    }
    return out;
}

train::BaselineSource parse_baseline_source(const std::string& value) {
    if (value == "episode-returns") return train::BaselineSource::EpisodeReturns;
    if (value == "step-rewards") return train::BaselineSource::StepRewards;
    throw ConfigError("invalid value '" + value +
                      "' for key 'baseline_source' (episode-returns or step-rewards)");
}

const char* baseline_source_name(train::BaselineSource source) {
    return source == train::BaselineSource::EpisodeReturns ? "episode-returns"
                                                           : "step-rewards";
}

void apply_key(ExperimentSpec& spec, bool& have_experiment, const std::string& key,
               const std::string& value) {
    if (key == "experiment") {
        spec.id = parse_experiment_id(value);
        have_experiment = true;
    } else if (key == "episodes") {
        spec.config.total_episodes = parse_number<int>(value, key);
    } else if (key == "seed") {
        spec.config.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "lr") {
        spec.config.learning_rate = parse_number<double>(value, key);
    } else if (key == "batch") {
        spec.config.batch_size = parse_number<int>(value, key);
    } else if (key == "timeout") {
        spec.config.timeout = parse_number<int>(value, key);
    } else if (key == "grad_clip") {
        spec.config.grad_clip = parse_number<double>(value, key);
    } else if (key == "baseline_source") {
        spec.config.baseline_source = parse_baseline_source(value);
    } else if (key == "out") {
        spec.out_path = value;
    } else {
        throw ConfigError("unknown key '" + key + "' (valid keys: " + kValidKeys + ")");
    }
}

}  // namespace

const char* experiment_id_name(ExperimentId id) {
    switch (id) {
        case ExperimentId::NoAttnFixed: return "no-attn-fixed";
        case ExperimentId::NoAttnDynamic: return "no-attn-dynamic";
        case ExperimentId::Partial: return "partial";
        case ExperimentId::Constrained: return "constrained";
    }
    throw ConfigError("unknown experiment id");
}

ExperimentId parse_experiment_id(const std::string& text) {
    if (text == "no-attn-fixed") return ExperimentId::NoAttnFixed;
    if (text == "no-attn-dynamic") return ExperimentId::NoAttnDynamic;
    if (text == "partial") return ExperimentId::Partial;
    if (text == "constrained") return ExperimentId::Constrained;
    throw ConfigError("unknown experiment '" + text +
                      "' (valid: no-attn-fixed, no-attn-dynamic, partial, constrained)");
}

ExperimentSpec parse_config(const std::string& config_path, const KeyValueList& overrides) {
    ExperimentSpec spec;
    bool have_experiment = false;

    if (!config_path.empty()) {
        std::ifstream file(config_path);
        if (!file) throw IoError("cannot open config '" + config_path + "'");
        std::string line;
        int line_no = 0;
        while (std::getline(file, line)) {
            ++line_no;
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped.front() == '#') continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("config '" + config_path + "' line " +
                                  std::to_string(line_no) + ": expected key=value");
            }
            apply_key(spec, have_experiment, trim(stripped.substr(0, eq)),
                      trim(stripped.substr(eq + 1)));
        }
    }
    for (const auto& [key, value] : overrides) {
        apply_key(spec, have_experiment, key, value);
    }
    if (!have_experiment) {
        throw ConfigError("experiment is required (config key 'experiment' or --experiment)");
    }

    switch (spec.id) {
        case ExperimentId::NoAttnFixed:
            spec.config.gating = agent::GatingMode::Unconstrained;
            spec.config.layout_mode = env::LayoutMode::Fixed;
            spec.config.use_attention = false;
            break;
        case ExperimentId::NoAttnDynamic:
            spec.config.gating = agent::GatingMode::Unconstrained;
            spec.config.layout_mode = env::LayoutMode::Dynamic;
            spec.config.use_attention = false;
            break;
        case ExperimentId::Partial:
            spec.config.gating = agent::GatingMode::PartialDecomposition;
            spec.config.layout_mode = env::LayoutMode::Fixed;
            spec.config.use_attention = true;
            break;
        case ExperimentId::Constrained:
            spec.config.gating = agent::GatingMode::Constrained;
            spec.config.layout_mode = env::LayoutMode::Fixed;
            spec.config.use_attention = true;
            break;
    }
    if (spec.out_path.empty()) {
        spec.out_path = std::string(experiment_id_name(spec.id)) + ".csv";
    }
    spec.config.validate();
    return spec;
}

std::string describe(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "experiment=" << experiment_id_name(spec.id) << '\n'
        << "episodes=" << spec.config.total_episodes << '\n'
        << "seed=" << spec.config.seed << '\n'
        << "lr=" << format_double(spec.config.learning_rate) << '\n'
        << "batch=" << spec.config.batch_size << '\n'
        << "timeout=" << spec.config.timeout << '\n'
        << "grad_clip=" << format_double(spec.config.grad_clip) << '\n'
        << "baseline_source=" << baseline_source_name(spec.config.baseline_source) << '\n'
        << "out=" << spec.out_path << '\n'
        << "# gating=" << agent::gating_mode_name(spec.config.gating)
        << " layout=" << (spec.config.layout_mode == env::LayoutMode::Fixed ? "fixed" : "dynamic")
        << " attention=" << (spec.config.use_attention ? 1 : 0) << '\n';
    return out.str();
}

RunResult run_experiment(const ExperimentSpec& spec, const train::EpisodeSink& extra_sink) {
    std::ofstream csv(spec.out_path, std::ios::trunc);
    if (!csv) throw IoError("cannot open '" + spec.out_path + "' for writing");
    csv << kCsvHeader << '\n' << std::flush;

    nn::RandomStream master(spec.config.seed);
    RunResult result;
    result.controller = policy::make_controller(spec.config.use_attention, master.split(0));

    const auto sink = [&](const train::EpisodeRecord& record) {
        csv << record.episode << ',' << record.length << ','
            << format_double(record.episode_return) << ',' << (record.success ? 1 : 0)
            << ',' << format_double(record.baseline) << '\n'
            << std::flush;
        if (!csv) throw IoError("write failed on '" + spec.out_path + "'");
        if (extra_sink) extra_sink(record);
    };
    result.summary = train::train(spec.config, *result.controller, sink);
    return result;
}

std::vector<CsvRow> read_run_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open '" + path + "'");
    std::string line;
    int line_no = 0;
    const auto malformed = [&]() {
        return IoError("'" + path + "' line " + std::to_string(line_no) + ": malformed row");
    };
    if (!std::getline(file, line)) throw malformed();
    ++line_no;
    if (trim(line) != kCsvHeader) {
        throw IoError("'" + path + "' line 1: expected header '" + kCsvHeader + "'");
    }
    std::vector<CsvRow> rows;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        std::array<std::string, 5> fields;
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= stripped.size(); ++i) {
            if (i == stripped.size() || stripped[i] == ',') {
                if (field >= fields.size()) throw malformed();
                fields[field++] = stripped.substr(start, i - start);
                start = i + 1;
            }
        }
        if (field != fields.size()) throw malformed();
        try {
            CsvRow row;
            row.episode = parse_number<int>(fields[0], "episode");
            row.length = parse_number<int>(fields[1], "length");
            row.episode_return = parse_number<double>(fields[2], "return");
            const int success = parse_number<int>(fields[3], "success");
            if (success != 0 && success != 1) throw malformed();
            row.success = success == 1;
            row.baseline = parse_number<double>(fields[4], "baseline");
            rows.push_back(row);
        } catch (const ConfigError&) {
            throw malformed();
        }
    }
    return rows;
}

std::vector<BucketStat> summarize(const std::string& csv_path, int bucket) {
    if (bucket <= 0) throw ConfigError("bucket size must be positive");
    const std::vector<CsvRow> rows = read_run_csv(csv_path);
    std::vector<BucketStat> stats;
    for (std::size_t begin = 0; begin < rows.size(); begin += static_cast<std::size_t>(bucket)) {
        const std::size_t end =
            std::min(rows.size(), begin + static_cast<std::size_t>(bucket));
        BucketStat stat;
        stat.start_episode = rows[begin].episode;
        stat.count = static_cast<int>(end - begin);
        double mean = 0.0;
        for (std::size_t i = begin; i < end; ++i) mean += rows[i].length;
        mean /= static_cast<double>(stat.count);
        double var = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double d = static_cast<double>(rows[i].length) - mean;
            var += d * d;
        }
        var /= static_cast<double>(stat.count);
        stat.mean_length = mean;
        stat.variance_length = var;
        stats.push_back(stat);
    }
    return stats;
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(std::begin(buffer), std::end(buffer), value);
    if (ec != std::errc()) throw NumericError("double formatting failed");
    return std::string(std::begin(buffer), ptr);
}

}  // namespace roomsrl::harness
