#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sdht {

/// One line of the dataset manifest:
///   <name> <url> <sha256 or -> <directed 0|1> <filename>
/// A "-" hash means the entry is not pinned yet; fetch reports the digest it saw.
struct DatasetEntry {
    std::string name;
    std::string url;
    std::string sha256;
    bool directed = false;
    std::string filename;

    bool pinned() const { return sha256 != "-"; }
};

std::vector<DatasetEntry> read_manifest(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct FetchResult {
    std::filesystem::path path;
    std::string sha256;
    bool verified = false;  // digest matched a pinned hash
};

/// Download `entry` into data_dir (or copy it from `local_source` when
/// offline), then check the digest. A pinned mismatch deletes the file and throws.
FetchResult fetch_dataset(const DatasetEntry& entry, const std::filesystem::path& data_dir,
                          const std::optional<std::filesystem::path>& local_source = std::nullopt);

}  // namespace sdht
