#pragma once

#include <atomic>
#include <filesystem>
#include <iterator>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "vvc/config.hpp"
#include "vvc/controller.hpp"
#include "vvc/fuzzy.hpp"

namespace testing {

inline std::filesystem::path source_path(const std::string& rel)
{
    return std::filesystem::path(VVC_SOURCE_DIR) / rel;
}

/// Shipped system and rule base with the standard peak schedule bound.
inline const vvc::FisDefinition& default_fis()
{
    static const vvc::FisDefinition fis = vvc::bind_peak_schedule(
        vvc::load_fis(source_path("fis/default.fis"), source_path("rules/default14.rules")),
        vvc::PeakSchedule::standard());
    return fis;
}

struct TermSpec {
    std::string term;
    double a, b, c, d;
};

inline vvc::LinguisticVariable variable(std::string name, vvc::VariableKind kind, double lo, double hi,
                                        const std::vector<TermSpec>& terms)
{
    vvc::LinguisticVariable v;
    v.name = std::move(name);
    v.kind = kind;
    v.universe = {lo, hi};
    for (const auto& t : terms)
        v.sets.push_back({t.term, {{t.a, t.b, t.c, t.d}}});
    return v;
}

/// Directory removed on scope exit.
class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("vvc-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

    std::filesystem::path write(const std::string& name, const std::string& text) const
    {
        const auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing
