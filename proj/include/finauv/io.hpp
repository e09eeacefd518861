#pragma once

#include <filesystem>
#include <string>

#include "finauv/campaign.hpp"

namespace finauv {

/// Fixed-schema episode CSV. The alloc_time_ms column is written as 0.0
/// unless include_timing is set, so default outputs are byte-reproducible;
/// measured times always stay in the in-memory record for MCT.
void write_episode_csv(const EpisodeRecord& record, const std::filesystem::path& path,
                       bool include_timing = false);

/// Read an episode CSV back (inverse of write_episode_csv).
EpisodeRecord read_episode_csv(const std::filesystem::path& path);

/// FNV-1a digest of the canonical config serialization.
std::string config_digest(const EpisodeConfig& cfg);

void write_campaign_json(const CampaignSummary& summary, const EpisodeConfig& base,
                         const std::filesystem::path& path);

void write_bench_json(const std::vector<BenchResult>& results,
                      const std::filesystem::path& path);

/// Parse the nested key/value config format ('[section]' + 'key = value').
/// Unknown sections or keys are rejected with an explanatory error.
EpisodeConfig load_config(const std::filesystem::path& path);

/// Canonical text form of a config (also the digest input).
std::string serialize_config(const EpisodeConfig& cfg);

}  // namespace finauv
