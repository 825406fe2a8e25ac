#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gramdet/dataset.hpp"
#include "gramdet/kernels.hpp"

namespace gramdet {

/// Column layout of a delimited dataset file. The reported-label column is
/// matched by name (falling back to the first column); every other column is
/// an observation column unless it is the optional ground-truth column.
struct LoadSchema {
    std::string label_column = "label";
    std::string truth_column = "truth";
    enum class ObsKind { Auto, Categorical, Embedding };
    ObsKind obs_kind = ObsKind::Auto;  // Auto sniffs the first record
    // Accept files with no observation columns (observations supplied separately).
    bool allow_missing_observations = false;
};

struct Dataset {
    Labels report;
    ObservationSet obs;
    std::optional<Labels> truth;
    std::vector<std::string> label_names;        // id -> original token, first-appearance order
    std::vector<std::string> observation_names;  // categorical observations only
};

/// Delimited text with a one-line header; comma or tab, auto-detected.
Dataset load_dataset(const std::string& path, const LoadSchema& schema = {});

/// Loads a file in which every column is an observation column.
ObservationSet load_observations(const std::string& path,
                                 LoadSchema::ObsKind kind = LoadSchema::ObsKind::Auto,
                                 std::vector<std::string>* names = nullptr);

void write_dataset(const std::string& path, const Labels& report,
                   const std::vector<std::string>& label_names,
                   const ObservationSet* obs = nullptr,
                   const std::vector<std::string>* observation_names = nullptr,
                   const Labels* truth = nullptr);

/// Single numeric column, optional header line.
std::vector<double> read_series(const std::string& path);

void write_label_file(const std::string& path, const Labels& labels);

struct BucketizerSpec {
    int buckets = 4;  // B
};

/// Quantile bucketization: boundaries at the empirical i/B quantiles (linear
/// interpolation); a value at a boundary falls in the lower bucket, so a
/// constant series maps entirely to bucket 1.
Labels quantile_bucketize(const std::vector<double>& series, const BucketizerSpec& spec = {});

/// out[i] = series[i+1] - series[i].
std::vector<double> diff_series(const std::vector<double>& series);

} // namespace gramdet
