#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "retrack/config.hpp"
#include "retrack/types.hpp"

namespace retrack {

/// JSON scene document: header fields plus a flat list of state records.
/// Serialization is canonical (records sorted by id then frame, keys sorted),
/// and unknown fields survive a parse/serialize round trip.
struct TrackFile {
    TrackerOutput output;
    std::string extra_header;  // JSON object holding unrecognized header fields
    std::map<std::pair<std::int64_t, int>, std::string> extra_records;

    static TrackFile parse(const std::string& text);
    static TrackFile from_output(const TrackerOutput& out);
    std::string serialize() const;
};

TrackFile read_track_file(const std::string& path);
void write_track_file(const TrackFile& file, const std::string& path);

/// Parses a pipeline config document; unknown keys and out-of-range values
/// are rejected with field-precise messages.
PipelineConfig parse_config(const std::string& text);
PipelineConfig read_config_file(const std::string& path);

}  // namespace retrack
