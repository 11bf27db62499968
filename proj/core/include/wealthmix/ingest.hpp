#ifndef WEALTHMIX_INGEST_HPP
#define WEALTHMIX_INGEST_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wealthmix/sample.hpp"

namespace wealthmix {

struct RawRecord {
    double wealth;
    double weight;
    int household_size;
    std::string period;
};

struct RejectedRow {
    std::size_t line;
    std::string reason;
    std::string content;
};

struct LoadResult {
    std::vector<RawRecord> records;
    std::vector<RejectedRow> rejects;
    std::vector<std::string> warnings;
};

// Column-name mapping into the input file's header. An empty weight, size, or
// period name means the file has no such column; the loader substitutes unit
// weights, household size 1, or the single period "all", and says so in
// LoadResult::warnings.
struct ColumnMap {
    std::string wealth = "wealth";
    std::string weight = "weight";
    std::string size;
    std::string period;
};

// Parse delimited text (comma or tab, sniffed from the required header row).
// Rows that fail type checks land in `rejects` with a reason; they are never
// silently dropped. Throws ingest_error for a missing file, a missing mapped
// column, or zero valid rows.
LoadResult load_records(const std::string& path, const ColumnMap& columns);

// Period -> deflator, base period carried at exactly 1.
struct DeflatorTable {
    std::map<std::string, double> entries;
};

// Two-column delimited text with a "period,deflator" header. All deflators
// must be positive and at least one must equal 1 (the base period).
DeflatorTable load_deflators(const std::string& path);

// Equivalized real wealth = (wealth / deflator) / sqrt(household_size),
// grouped by period. Zero wealth stays exactly zero and signs are preserved.
std::map<std::string, WeightedSample> preprocess(const std::vector<RawRecord>& records,
                                                 const DeflatorTable& deflators);

// Same pipeline with identity deflators.
std::map<std::string, WeightedSample> preprocess(const std::vector<RawRecord>& records);

}  // namespace wealthmix

#endif
