// harness.hpp
// Scenario configuration, seeded deterministic execution, pipeline
// orchestration and report emission.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qkdnet/center.hpp"
#include "qkdnet/common.hpp"
#include "qkdnet/protocol.hpp"

namespace qkdnet {

enum class Topology { SingleCenter, TwoCenters };

struct BehaviorSpec {
    enum class Kind { Honest, ProjectAs, InterceptResend, AncillaAttack };
    Kind kind = Kind::Honest;
    BellOutcome claimed = BellOutcome::PsiMinus;  // ProjectAs
    BellOutcome actual = BellOutcome::PhiPlus;    // ProjectAs
    Basis intercept_basis = Basis::Z;             // InterceptResend
};

struct ScenarioConfig {
    std::size_t n_pairs = 0;
    SiftVariant variant = SiftVariant::FullBell;
    BehaviorSpec behavior;
    double decoherence_p = 0.0;
    Topology topology = Topology::SingleCenter;
    std::size_t hops = 1;  // TwoCenters only
    double estimate_fraction = 0.1;
    std::size_t block_size = 16;
    std::size_t passes = 4;
    std::size_t margin = 64;
    std::uint64_t seed = 0;
};

// QBER estimates above this force final_len to 0 and drop the agreement
// claim.
inline constexpr double kAbortQber = 0.12;

struct SessionReport {
    std::size_t raw_pairs = 0;
    std::size_t announced_present = 0;
    std::size_t same_basis_kept = 0;
    std::array<std::size_t, 4> outcome_histogram{};  // psi-, psi+, phi+, phi-
    std::size_t sifted_len = 0;
    double qber_estimate = 0.0;
    std::size_t leakage = 0;
    std::size_t final_len = 0;
    bool keys_agree = false;
    double cheat_mutual_information = 0.0;
    double wall_time_s = 0.0;
};

enum class ReportFormat { Text, CsvRow };

SessionReport run_scenario(const ScenarioConfig& cfg);

// Flat key = value lines, '#' comments, unknown keys rejected.
ScenarioConfig parse_config(const std::string& text);
// Same, with key -> value overrides applied after parsing the text.
ScenarioConfig parse_config(const std::string& text,
                            const std::map<std::string, std::string>& overrides);

std::string csv_header();
std::string emit_report(const SessionReport& r, ReportFormat format);

// Plug-in estimate of I(record; bit) in bits over the joint frequency table.
double mutual_information(const std::vector<int>& records, const std::vector<int>& bits);

}  // namespace qkdnet
