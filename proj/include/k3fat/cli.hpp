#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "k3fat/classify.hpp"

namespace k3fat::cli {

enum ExitCode : int { kSuccess = 0, kDisagree = 1, kUsage = 2, kBudget = 3 };

/// Flags shared by every subcommand; each can also come from the
/// environment as K3FAT_<NAME>.
struct GlobalSettings {
    std::uint64_t prime = oracle::kDefaultPrime;
    std::uint64_t prime2 = oracle::kSecondPrime;
    std::uint64_t seed = 1;
    int trials = 3;
    Int budget_rows = 20000;
    std::string cache_dir;
    unsigned threads = 0;

    [[nodiscard]] oracle::PrimeFieldConfig oracle_config() const;
};

struct SweepSpec {
    Int gamma = 4;
    Int d_lo = 1;
    Int d_hi = 1;
    Int m_lo = 1;
    Int m_hi = 1;
    std::vector<Int> n_set;
    bool oracle = true;
    bool assume_base = false;

    /// Nonempty ranges, n_set entries of the form 4^u 9^w.
    void validate() const;
};

inline constexpr const char* kSweepHeader = "gamma,d,m,n,vdim,edim,dim,status,oracle_dim,verdict";

struct SweepResult {
    std::string table;
    bool any_disagree = false;
    bool any_budget_exceeded = false;
};

/// Rows ordered by d, then m, then n; identical settings give identical tables.
SweepResult run_sweep(const SweepSpec& spec, const GlobalSettings& settings);

/// Plain-file store of oracle measurements keyed by (gamma, d, m, n, prime, seed).
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir);

    struct Entry {
        Int oracle_dim = -1;
        bool low_confidence = false;
    };

    [[nodiscard]] std::optional<Entry> load(const K3System& sys, const GlobalSettings& s) const;
    void store(const K3System& sys, const GlobalSettings& s, const Entry& e) const;
    [[nodiscard]] std::filesystem::path path_for(const K3System& sys, const GlobalSettings& s) const;

private:
    std::filesystem::path dir_;
};

/// verify() through an optional cache.
VerificationOutcome verify_with_cache(const K3System& sys, const DimensionReport& report, const GlobalSettings& s);

/// Full command line without the program name. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace k3fat::cli
