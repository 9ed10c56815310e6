#include "diamondlab/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace diamondlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

std::string ExperimentReport::csv() const {
    std::string out = "run_id,level,params,statistic,value,tolerance,pass\n";
    for (const auto& r : rows) {
        out += run_id + "," + std::to_string(r.level) + "," + r.params + "," + r.statistic +
               "," + format_double(r.value) + "," + format_double(r.tolerance) + "," +
               (r.pass ? "1" : "0") + "\n";
    }
    return out;
}

std::string ExperimentReport::json_summary() const {
    nlohmann::json j;
    j["format"] = "diamondlab-report";
    j["version"] = 1;
    j["name"] = name;
    j["run_id"] = run_id;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["pass"] = passed();
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& r : rows)
        stats.push_back({{"level", r.level},
                         {"params", r.params},
                         {"statistic", r.statistic},
                         {"value", format_double(r.value)},
                         {"tolerance", format_double(r.tolerance)},
                         {"pass", r.pass}});
    j["statistics"] = stats;
    return j.dump(1);
}

void ExperimentReport::write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    auto put = [&](const std::string& suffix, const std::string& content) {
        std::ofstream f(dir + "/" + name + suffix, std::ios::binary);
        if (!f) throw std::runtime_error("ExperimentReport::write: cannot open output in " + dir);
        f << content;
    };
    put(".csv", csv());
    put(".json", json_summary());
    auto now = std::chrono::system_clock::now().time_since_epoch();
    put(".meta", "wall_clock_unix_ms=" +
                     std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(now).count()) +
                     "\n");
}

}  // namespace diamondlab
