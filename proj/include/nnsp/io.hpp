#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nnsp/flow.hpp"
#include "nnsp/graph.hpp"
#include "nnsp/partition.hpp"
#include "nnsp/recovery.hpp"
#include "nnsp/sampling.hpp"

namespace nnsp::io {

// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double v);

// Edge list CSV: one `i,j,weight` row per edge, `#` comments and blank
// lines ignored, an optional header row tolerated.
std::vector<EdgeTriple> read_edge_list(const std::filesystem::path& path);
void write_edge_list(const std::filesystem::path& path,
                     const std::vector<EdgeTriple>& triples);

// Signal CSV `node,value` in original ids.
std::vector<std::pair<std::int64_t, double>> read_signal(
    const std::filesystem::path& path);
void write_signal(const std::filesystem::path& path, const BuildResult& built,
                  const GraphSignal& x);

// Partition CSV `node,cluster` in original ids.
Partition read_partition(const std::filesystem::path& path,
                         const BuildResult& built);
void write_partition(const std::filesystem::path& path,
                     const BuildResult& built, const Partition& part);

// Sampling set: single `node` column.
SamplingSet read_sampling_set(const std::filesystem::path& path,
                              const BuildResult& built);
void write_sampling_set(const std::filesystem::path& path,
                        const BuildResult& built, const SamplingSet& samples);

void write_trace(const std::filesystem::path& path,
                 const std::vector<TracePoint>& trace);

void write_flow(const std::filesystem::path& path, const FlowAssignment& f);

// FNV-1a 64-bit content digest, hex-encoded; embedded in reports so a run
// records exactly which inputs it saw.
std::string file_digest(const std::filesystem::path& path);

}  // namespace nnsp::io
