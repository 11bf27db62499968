#include "wealthmix/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wealthmix/error.hpp"

namespace wealthmix {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delimiter)) fields.push_back(trim(field));
    if (!line.empty() && line.back() == delimiter) fields.push_back("");
    return fields;
}

bool parse_real(const std::string& text, double& out) {
    if (text.empty()) return false;
    try {
        std::size_t consumed = 0;
        out = std::stod(text, &consumed);
        return consumed == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name,
                        const std::string& path) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw ingest_error("column '" + name + "' not found in header of " + path);
    return static_cast<std::size_t>(it - header.begin());
}

char sniff_delimiter(const std::string& header_line) {
    return header_line.find('\t') != std::string::npos ? '\t' : ',';
}

}  // namespace

LoadResult load_records(const std::string& path, const ColumnMap& columns) {
    std::ifstream in(path);
    if (!in) throw ingest_error("cannot open input file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ingest_error("empty input file: " + path);

    const char delimiter = sniff_delimiter(line);
    const std::vector<std::string> header = split(line, delimiter);

    LoadResult result;
    if (columns.wealth.empty()) throw ingest_error("wealth column name must not be empty");
    const std::size_t col_wealth = find_column(header, columns.wealth, path);

    constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
    std::size_t col_weight = kAbsent;
    if (columns.weight.empty())
        result.warnings.push_back("no weight column mapped; using unit weights");
    else
        col_weight = find_column(header, columns.weight, path);

    std::size_t col_size = kAbsent;
    if (columns.size.empty())
        result.warnings.push_back("no household-size column mapped; defaulting size to 1");
    else
        col_size = find_column(header, columns.size, path);

    std::size_t col_period = kAbsent;
    if (columns.period.empty())
        result.warnings.push_back("no period column mapped; treating all rows as period \"all\"");
    else
        col_period = find_column(header, columns.period, path);

    std::size_t required = col_wealth;
    for (std::size_t c : {col_weight, col_size, col_period})
        if (c != kAbsent) required = std::max(required, c);

    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split(line, delimiter);
        auto reject = [&](const std::string& reason) {
            result.rejects.push_back({line_number, reason, line});
        };
        if (fields.size() <= required) {
            reject("too few fields");
            continue;
        }

        RawRecord record{0.0, 1.0, 1, "all"};
        if (!parse_real(fields[col_wealth], record.wealth) || !std::isfinite(record.wealth)) {
            reject("unparseable wealth '" + fields[col_wealth] + "'");
            continue;
        }
        if (col_weight != kAbsent) {
            if (!parse_real(fields[col_weight], record.weight) ||
                !std::isfinite(record.weight)) {
                reject("unparseable weight '" + fields[col_weight] + "'");
                continue;
            }
            if (record.weight <= 0.0) {
                reject("nonpositive weight");
                continue;
            }
        }
        if (col_size != kAbsent) {
            double size = 0.0;
            if (!parse_real(fields[col_size], size)) {
                reject("unparseable household size '" + fields[col_size] + "'");
                continue;
            }
            if (size != std::floor(size)) {
                reject("non-integer household size");
                continue;
            }
            if (size < 1.0 || size > 1e9) {
                reject("nonpositive household size");
                continue;
            }
            record.household_size = static_cast<int>(size);
        }
        if (col_period != kAbsent) {
            record.period = fields[col_period];
            if (record.period.empty()) {
                reject("empty period");
                continue;
            }
        }
        result.records.push_back(std::move(record));
    }
    if (result.records.empty())
        throw ingest_error("no valid rows in " + path + " (" +
                           std::to_string(result.rejects.size()) + " rejected)");
    return result;
}

DeflatorTable load_deflators(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ingest_error("cannot open deflator file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ingest_error("empty deflator file: " + path);

    const char delimiter = sniff_delimiter(line);
    const std::vector<std::string> header = split(line, delimiter);
    const std::size_t col_period = find_column(header, "period", path);
    const std::size_t col_deflator = find_column(header, "deflator", path);

    DeflatorTable table;
    std::size_t line_number = 1;
    bool base_seen = false;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split(line, delimiter);
        if (fields.size() <= std::max(col_period, col_deflator))
            throw ingest_error(path + ":" + std::to_string(line_number) + ": too few fields");
        const std::string period = fields[col_period];
        double deflator = 0.0;
        if (period.empty() || !parse_real(fields[col_deflator], deflator))
            throw ingest_error(path + ":" + std::to_string(line_number) +
                               ": unparseable deflator row");
        if (!(deflator > 0.0) || !std::isfinite(deflator))
            throw ingest_error(path + ":" + std::to_string(line_number) +
                               ": deflator must be positive");
        if (!table.entries.emplace(period, deflator).second)
            throw ingest_error(path + ":" + std::to_string(line_number) +
                               ": duplicate period '" + period + "'");
        if (deflator == 1.0) base_seen = true;
    }
    if (table.entries.empty()) throw ingest_error("no deflator rows in " + path);
    if (!base_seen)
        throw ingest_error("deflator table " + path +
                           " has no base period (no entry with deflator exactly 1)");
    return table;
}

namespace {

std::map<std::string, WeightedSample> preprocess_impl(const std::vector<RawRecord>& records,
                                                      const DeflatorTable* deflators) {
    if (deflators) {
        std::set<std::string> unknown;
        for (const auto& r : records)
            if (!deflators->entries.count(r.period)) unknown.insert(r.period);
        if (!unknown.empty()) {
            std::string offending;
            for (const auto& p : unknown) {
                if (!offending.empty()) offending += ", ";
                offending += p;
            }
            std::vector<std::string> known;
            known.reserve(deflators->entries.size());
            for (const auto& [period, unused] : deflators->entries) known.push_back(period);
            throw unmatched_period(offending, known);
        }
    }

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& r : records) {
        const double deflator = deflators ? deflators->entries.at(r.period) : 1.0;
        const double equivalized =
            r.wealth / deflator / std::sqrt(static_cast<double>(r.household_size));
        auto& [values, weights] = groups[r.period];
        values.push_back(equivalized);
        weights.push_back(r.weight);
    }

    std::map<std::string, WeightedSample> samples;
    for (auto& [period, data] : groups)
        samples.emplace(period, WeightedSample(std::move(data.first), std::move(data.second)));
    return samples;
}

}  // namespace

std::map<std::string, WeightedSample> preprocess(const std::vector<RawRecord>& records,
                                                 const DeflatorTable& deflators) {
    return preprocess_impl(records, &deflators);
}

std::map<std::string, WeightedSample> preprocess(const std::vector<RawRecord>& records) {
    return preprocess_impl(records, nullptr);
}

}  // namespace wealthmix
