#pragma once

#include <optional>
#include <string>

#include "k3fat/core.hpp"
#include "k3fat/degeneration.hpp"
#include "k3fat/oracle/oracle.hpp"

namespace k3fat {

/// How single-point systems L^gamma(d, mu) are resolved.
struct BasePolicy {
    enum class Kind {
        /// The quartic classification: non-special unless mu = 2d, d >= 2. gamma = 4 only.
        Gamma4Proved,
        /// Assume L^gamma(d, mu) non-special for all mu; downstream reports are CONDITIONAL.
        Hypothesis,
        /// Measure single-point systems with the quartic oracle. gamma = 4 only.
        OracleBacked,
    };

    Kind kind = Kind::Gamma4Proved;
    oracle::PrimeFieldConfig oracle_config;
    std::uint64_t second_prime = oracle::kSecondPrime;

    static BasePolicy gamma4_proved() { return {Kind::Gamma4Proved, {}, oracle::kSecondPrime}; }
    static BasePolicy hypothesis() { return {Kind::Hypothesis, {}, oracle::kSecondPrime}; }
    static BasePolicy oracle_backed(oracle::PrimeFieldConfig cfg, std::uint64_t second = oracle::kSecondPrime) {
        return {Kind::OracleBacked, cfg, second};
    }

    /// Throws std::invalid_argument when the policy does not apply to gamma.
    void validate_for(Int gamma) const;
};

std::string_view to_string(BasePolicy::Kind k);

/// L^4(d, mu): NONSPECIAL with dim = edim for mu < 2d or d = 1, SPECIAL with
/// dim 0 (the divisor dC) for mu = 2d and d >= 2, empty for mu >= 2d + 1.
DimensionReport base_gamma4(Int degree, Int mu);

/// dim L(delta, mu^c) for c in {4, 9}: max(-1, vdim), and -1 for delta < 0.
Int planar_dim_c49(Int delta, Int mu, Int c);

BaseResolvers resolvers_for(const BasePolicy& policy, Int gamma);

/// What the quartic classification theorem alone asserts about L^4(d, m^n).
struct TheoremPrediction {
    bool proved = false;
    Int dim = -1;
    Status status = Status::Unknown;
};

TheoremPrediction gamma4_prediction(Int degree, Int multiplicity, Int count);

/// Classifies a homogeneous system with n = 4^u 9^w. Under Gamma4Proved the
/// report follows the theorem's case split and is certified by the
/// degeneration trace; an engine result that contradicts the theorem throws
/// std::logic_error. When `advisory_oracle` is set, UNKNOWN reports within
/// budget carry the oracle's measured dimension as advisory data.
DimensionReport classify(const K3System& sys, const BasePolicy& policy,
                         const std::optional<oracle::PrimeFieldConfig>& advisory_oracle = std::nullopt);

enum class Verdict { Agree, Disagree, Skipped };

std::string_view to_string(Verdict v);

struct VerificationOutcome {
    Verdict verdict = Verdict::Skipped;
    std::optional<Int> oracle_dim;
    std::string reason;
    bool low_confidence = false;
    bool budget_exceeded = false;
};

/// Compares a report with the quartic oracle on two primes. UNKNOWN reports
/// are SKIPPED with the oracle dimension recorded; gamma != 4 and budget
/// overruns are SKIPPED without one.
VerificationOutcome verify(const K3System& sys, const DimensionReport& report, const oracle::PrimeFieldConfig& cfg,
                           std::uint64_t second_prime = oracle::kSecondPrime);

} // namespace k3fat
