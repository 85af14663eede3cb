#include "modlie/resources.hpp"

#include <fstream>
#include <sstream>

#include "modlie/error.hpp"

namespace modlie {

namespace {

std::uint64_t read_status_kb(const std::string& key) {
    std::ifstream in("/proc/self/status");
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key, 0) == 0) {
            std::istringstream ss(line.substr(key.size()));
            std::uint64_t kb = 0;
            ss >> kb;
            return kb * 1024;
        }
    }
    return 0;
}

}  // namespace

std::uint64_t current_rss_bytes() { return read_status_kb("VmRSS:"); }
std::uint64_t peak_rss_bytes() { return read_status_kb("VmHWM:"); }

ResourceGuard::ResourceGuard(ResourceLimits limits)
    : limits_(limits), start_(std::chrono::steady_clock::now()) {}

double ResourceGuard::elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void ResourceGuard::check() {
    if (tripped_.load()) throw ResourceLimitExceeded("resource ceiling already exceeded");
    if (limits_.seconds > 0 && elapsed_seconds() > limits_.seconds) {
        tripped_ = true;
        throw ResourceLimitExceeded("time ceiling of " + std::to_string(limits_.seconds) + " s exceeded");
    }
    // /proc reads are comparatively slow; sample memory on every 64th call
    if ((calls_.fetch_add(1) & 63) == 0 && limits_.memory_bytes > 0) {
        const auto rss = current_rss_bytes();
        if (rss > limits_.memory_bytes) {
            tripped_ = true;
            throw ResourceLimitExceeded("memory ceiling of " + std::to_string(limits_.memory_bytes) +
                                        " bytes exceeded (rss " + std::to_string(rss) + ")");
        }
    }
}

}  // namespace modlie
