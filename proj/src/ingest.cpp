#include "gramdet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gramdet/errors.hpp"

namespace gramdet {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("empty file: " + path);
    return lines;
}

char detect_delimiter(const std::string& header) {
    return header.find('\t') != std::string::npos ? '\t' : ',';
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(field);
    if (!line.empty() && line.back() == delim) out.push_back("");
    return out;
}

bool parse_double(const std::string& token, double* out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    if (begin == end) return false;
    const auto res = std::from_chars(begin, end, *out);
    return res.ec == std::errc() && res.ptr == end;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // rows[i][col]
};

Table read_table(const std::string& path) {
    const auto lines = read_lines(path);
    const char delim = detect_delimiter(lines[0]);
    Table t;
    t.columns = split(lines[0], delim);
    if (t.columns.empty()) throw ParseError(path + ": empty header");
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = split(lines[i], delim);
        if (fields.size() != t.columns.size())
            throw ParseError(path + ": line " + std::to_string(i + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(t.columns.size()));
        t.rows.push_back(std::move(fields));
    }
    if (t.rows.empty()) throw ParseError(path + ": no records");
    return t;
}

/// First-appearance string-to-id mapping (1-based).
struct LabelMapper {
    std::map<std::string, int> ids;
    std::vector<std::string> names;
    int map(const std::string& token) {
        auto [it, inserted] = ids.try_emplace(token, static_cast<int>(names.size()) + 1);
        if (inserted) names.push_back(token);
        return it->second;
    }
};

ObservationSet build_observations(const Table& t, const std::vector<size_t>& obs_cols,
                                  LoadSchema::ObsKind kind, const std::string& path,
                                  std::vector<std::string>* names_out) {
    if (obs_cols.empty()) throw ParseError(path + ": no observation columns");

    bool embedding = false;
    switch (kind) {
        case LoadSchema::ObsKind::Categorical:
            embedding = false;
            break;
        case LoadSchema::ObsKind::Embedding:
            embedding = true;
            break;
        case LoadSchema::ObsKind::Auto: {
            // Width > 1 must be numeric; a single column is numeric only if
            // the first record parses as a number.
            double unused;
            embedding = obs_cols.size() > 1 || parse_double(t.rows[0][obs_cols[0]], &unused);
            break;
        }
    }

    if (!embedding) {
        if (obs_cols.size() != 1)
            throw ParseError(path + ": categorical observations need exactly one column");
        LabelMapper mapper;
        std::vector<int> ids;
        ids.reserve(t.rows.size());
        for (const auto& row : t.rows) ids.push_back(mapper.map(row[obs_cols[0]]));
        if (names_out) *names_out = mapper.names;
        return ObservationSet::categorical(std::move(ids), static_cast<int>(mapper.names.size()));
    }

    const int width = static_cast<int>(obs_cols.size());
    std::vector<double> values;
    values.reserve(t.rows.size() * obs_cols.size());
    for (size_t r = 0; r < t.rows.size(); ++r) {
        for (size_t c : obs_cols) {
            double v;
            if (!parse_double(t.rows[r][c], &v))
                throw ParseError(path + ": line " + std::to_string(r + 2) +
                                 ": cannot parse number '" + t.rows[r][c] + "'");
            values.push_back(v);
        }
    }
    if (names_out) names_out->clear();
    return ObservationSet::embeddings(std::move(values), width);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Dataset load_dataset(const std::string& path, const LoadSchema& schema) {
    const Table t = read_table(path);

    size_t label_col = 0;
    for (size_t c = 0; c < t.columns.size(); ++c)
        if (t.columns[c] == schema.label_column) label_col = c;
    std::optional<size_t> truth_col;
    for (size_t c = 0; c < t.columns.size(); ++c)
        if (t.columns[c] == schema.truth_column && c != label_col) truth_col = c;

    std::vector<size_t> obs_cols;
    for (size_t c = 0; c < t.columns.size(); ++c)
        if (c != label_col && (!truth_col || c != *truth_col)) obs_cols.push_back(c);

    // Shared mapper so report and truth live in one alphabet; scan order is
    // record by record, report token first.
    LabelMapper mapper;
    std::vector<int> report_ids, truth_ids;
    for (const auto& row : t.rows) {
        report_ids.push_back(mapper.map(row[label_col]));
        if (truth_col) truth_ids.push_back(mapper.map(row[*truth_col]));
    }
    const int d = static_cast<int>(mapper.names.size());

    Dataset out;
    out.report = Labels(std::move(report_ids), d);
    if (truth_col) out.truth = Labels(std::move(truth_ids), d);
    out.label_names = mapper.names;
    if (!(obs_cols.empty() && schema.allow_missing_observations))
        out.obs = build_observations(t, obs_cols, schema.obs_kind, path, &out.observation_names);
    return out;
}

ObservationSet load_observations(const std::string& path, LoadSchema::ObsKind kind,
                                 std::vector<std::string>* names) {
    const Table t = read_table(path);
    std::vector<size_t> obs_cols(t.columns.size());
    for (size_t c = 0; c < obs_cols.size(); ++c) obs_cols[c] = c;
    return build_observations(t, obs_cols, kind, path, names);
}

void write_dataset(const std::string& path, const Labels& report,
                   const std::vector<std::string>& label_names, const ObservationSet* obs,
                   const std::vector<std::string>* observation_names, const Labels* truth) {
    if (static_cast<int>(label_names.size()) < report.d)
        throw ConfigError("write_dataset: label names do not cover the alphabet");
    if (obs && obs->size() != report.n())
        throw DimensionError("write_dataset: observation count mismatch");
    if (truth && truth->n() != report.n())
        throw DimensionError("write_dataset: truth length mismatch");

    std::ofstream outf(path);
    if (!outf) throw ParseError("cannot write file: " + path);
    outf << "label";
    if (truth) outf << ",truth";
    if (obs) {
        if (obs->is_categorical()) {
            outf << ",obs";
        } else {
            for (int c = 0; c < obs->width(); ++c) outf << ",y" << c;
        }
    }
    outf << "\n";

    for (int i = 0; i < report.n(); ++i) {
        outf << label_names[report.values[i] - 1];
        if (truth) outf << "," << label_names[truth->values[i] - 1];
        if (obs) {
            if (obs->is_categorical()) {
                if (!observation_names ||
                    static_cast<int>(observation_names->size()) < obs->alphabet())
                    throw ConfigError("write_dataset: categorical observations need names");
                outf << "," << (*observation_names)[obs->id(i) - 1];
            } else {
                for (double v : obs->vec(i)) outf << "," << format_double(v);
            }
        }
        outf << "\n";
    }
}

std::vector<double> read_series(const std::string& path) {
    const auto lines = read_lines(path);
    std::vector<double> out;
    out.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        double v;
        if (!parse_double(lines[i], &v)) {
            if (i == 0) continue;  // header line
            throw ParseError(path + ": line " + std::to_string(i + 1) +
                             ": cannot parse number '" + lines[i] + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ParseError(path + ": no numeric values");
    return out;
}

void write_label_file(const std::string& path, const Labels& labels) {
    std::ofstream outf(path);
    if (!outf) throw ParseError("cannot write file: " + path);
    outf << "label\n";
    for (int v : labels.values) outf << v << "\n";
}

Labels quantile_bucketize(const std::vector<double>& series, const BucketizerSpec& spec) {
    const int b = spec.buckets;
    if (b < 2) throw ConfigError("bucketizer needs at least 2 buckets");
    if (static_cast<int>(series.size()) < b)
        throw DimensionError("series shorter than the bucket count");

    std::vector<double> sorted = series;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    std::vector<double> boundaries(b - 1);
    for (int i = 1; i < b; ++i) {
        const double h = static_cast<double>(n - 1) * static_cast<double>(i) / b;
        const size_t lo = static_cast<size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        const size_t hi = std::min(lo + 1, n - 1);
        boundaries[i - 1] = sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    }

    std::vector<int> out(series.size());
    for (size_t i = 0; i < series.size(); ++i) {
        int bucket = 1;
        for (double bd : boundaries)
            if (bd < series[i]) ++bucket;
        out[i] = bucket;
    }
    return Labels(std::move(out), b);
}

std::vector<double> diff_series(const std::vector<double>& series) {
    if (series.size() < 2) throw DimensionError("diff needs at least two values");
    std::vector<double> out(series.size() - 1);
    for (size_t i = 0; i + 1 < series.size(); ++i) out[i] = series[i + 1] - series[i];
    return out;
}

} // namespace gramdet
