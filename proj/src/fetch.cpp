#include "sdht/fetch.hpp"

#include <curl/curl.h>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace sdht {

std::vector<DatasetEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
    std::vector<DatasetEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        DatasetEntry e;
        int directed = 0;
        if (!(fields >> e.name >> e.url >> e.sha256 >> directed >> e.filename))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed manifest entry");
        e.directed = directed != 0;
        entries.push_back(std::move(e));
    }
    return entries;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof buffer);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

namespace {

std::size_t write_to_file(char* data, std::size_t size, std::size_t count, void* file) {
    return std::fwrite(data, size, count, static_cast<std::FILE*>(file));
}

void download(const std::string& url, const std::filesystem::path& dest) {
    std::unique_ptr<std::FILE, decltype(&std::fclose)> file(std::fopen(dest.c_str(), "wb"), std::fclose);
    if (!file) throw std::runtime_error("cannot write " + dest.string());
    std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
    if (!curl) throw std::runtime_error("curl init failed");
    curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, write_to_file);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, file.get());
    const CURLcode rc = curl_easy_perform(curl.get());
    if (rc != CURLE_OK) throw std::runtime_error("download of " + url + " failed: " + curl_easy_strerror(rc));
}

}  // namespace

FetchResult fetch_dataset(const DatasetEntry& entry, const std::filesystem::path& data_dir,
                          const std::optional<std::filesystem::path>& local_source) {
    std::filesystem::create_directories(data_dir);
    const auto dest = data_dir / entry.filename;
    auto partial = dest;
    partial += ".part";
    try {
        if (local_source)
            std::filesystem::copy_file(*local_source, partial, std::filesystem::copy_options::overwrite_existing);
        else
            download(entry.url, partial);
        FetchResult result;
        result.sha256 = sha256_file(partial);
        if (entry.pinned() && result.sha256 != entry.sha256)
            throw std::runtime_error(entry.name + ": sha256 mismatch (expected " + entry.sha256 + ", got " +
                                     result.sha256 + ")");
        result.verified = entry.pinned();
        std::filesystem::rename(partial, dest);
        result.path = dest;
        return result;
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(partial, ec);
        throw;
    }
}

}  // namespace sdht
