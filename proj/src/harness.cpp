#include "qkdnet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "qkdnet/postprocess.hpp"
#include "qkdnet/telenet.hpp"

namespace qkdnet {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& v, const std::string& key, std::size_t line) {
    try {
        std::size_t pos = 0;
        const auto out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ParseError("invalid integer for key '" + key + "': " + v, line);
    }
}

double parse_double(const std::string& v, const std::string& key, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ParseError("invalid number for key '" + key + "': " + v, line);
    }
}

BellOutcome parse_outcome(const std::string& v, std::size_t line) {
    if (v == "psi_minus") return BellOutcome::PsiMinus;
    if (v == "psi_plus") return BellOutcome::PsiPlus;
    if (v == "phi_plus") return BellOutcome::PhiPlus;
    if (v == "phi_minus") return BellOutcome::PhiMinus;
    throw ParseError("unknown bell outcome: " + v, line);
}

Basis parse_basis(const std::string& v, std::size_t line) {
    if (v == "z") return Basis::Z;
    if (v == "x") return Basis::X;
    throw ParseError("unknown basis: " + v, line);
}

// name(arg1, arg2) -> {name, {args...}}; bare names have no args
std::pair<std::string, std::vector<std::string>> parse_call(const std::string& v,
                                                            std::size_t line) {
    const auto open = v.find('(');
    if (open == std::string::npos) return {v, {}};
    if (v.back() != ')') throw ParseError("missing ')' in: " + v, line);
    std::vector<std::string> args;
    std::string inner = v.substr(open + 1, v.size() - open - 2);
    std::stringstream ss(inner);
    std::string arg;
    while (std::getline(ss, arg, ',')) args.push_back(trim(arg));
    return {v.substr(0, open), args};
}

BehaviorSpec parse_behavior(const std::string& v, std::size_t line) {
    auto [kind, args] = parse_call(v, line);
    BehaviorSpec spec;
    if (kind == "honest") {
        spec.kind = BehaviorSpec::Kind::Honest;
        if (!args.empty()) throw ParseError("honest takes no arguments", line);
    } else if (kind == "project_as") {
        spec.kind = BehaviorSpec::Kind::ProjectAs;
        if (args.size() != 2) throw ParseError("project_as takes (claimed, actual)", line);
        spec.claimed = parse_outcome(args[0], line);
        spec.actual = parse_outcome(args[1], line);
    } else if (kind == "intercept_resend") {
        spec.kind = BehaviorSpec::Kind::InterceptResend;
        if (args.size() != 1) throw ParseError("intercept_resend takes (basis)", line);
        spec.intercept_basis = parse_basis(args[0], line);
    } else if (kind == "ancilla_attack") {
        spec.kind = BehaviorSpec::Kind::AncillaAttack;
        if (!args.empty()) throw ParseError("ancilla_attack takes no arguments", line);
    } else {
        throw ParseError("unknown behavior: " + kind, line);
    }
    return spec;
}

ScenarioConfig config_from_map(const std::map<std::string, std::pair<std::string, std::size_t>>& kv) {
    ScenarioConfig cfg;
    bool have_n_pairs = false, have_variant = false, have_behavior = false, have_seed = false;

    for (const auto& [key, entry] : kv) {
        const auto& [value, line] = entry;
        if (key == "n_pairs") {
            cfg.n_pairs = parse_u64(value, key, line);
            have_n_pairs = true;
        } else if (key == "variant") {
            if (value == "singlet_only") {
                cfg.variant = SiftVariant::SingletOnly;
            } else if (value == "full_bell") {
                cfg.variant = SiftVariant::FullBell;
            } else {
                throw ParseError("unknown variant: " + value, line);
            }
            have_variant = true;
        } else if (key == "behavior") {
            cfg.behavior = parse_behavior(value, line);
            have_behavior = true;
        } else if (key == "decoherence_p") {
            cfg.decoherence_p = parse_double(value, key, line);
        } else if (key == "topology") {
            auto [kind, args] = parse_call(value, line);
            if (kind == "single_center") {
                cfg.topology = Topology::SingleCenter;
                if (!args.empty()) throw ParseError("single_center takes no arguments", line);
            } else if (kind == "two_centers") {
                cfg.topology = Topology::TwoCenters;
                cfg.hops = args.empty() ? 1 : parse_u64(args[0], key, line);
            } else {
                throw ParseError("unknown topology: " + kind, line);
            }
        } else if (key == "estimate_fraction") {
            cfg.estimate_fraction = parse_double(value, key, line);
        } else if (key == "block_size") {
            cfg.block_size = parse_u64(value, key, line);
        } else if (key == "passes") {
            cfg.passes = parse_u64(value, key, line);
        } else if (key == "margin") {
            cfg.margin = parse_u64(value, key, line);
        } else if (key == "seed") {
            cfg.seed = parse_u64(value, key, line);
            have_seed = true;
        } else {
            throw ParseError("unknown key: " + key, line);
        }
    }

    if (!have_n_pairs) throw ParseError("missing required key: n_pairs", 0);
    if (!have_variant) throw ParseError("missing required key: variant", 0);
    if (!have_behavior) throw ParseError("missing required key: behavior", 0);
    if (!have_seed) throw ParseError("missing required key: seed", 0);

    if (cfg.n_pairs < 1) throw RangeError("n_pairs must be >= 1");
    if (cfg.decoherence_p < 0.0 || cfg.decoherence_p > 1.0) {
        throw RangeError("decoherence_p must be in [0, 1]");
    }
    if (cfg.estimate_fraction <= 0.0 || cfg.estimate_fraction >= 1.0) {
        throw RangeError("estimate_fraction must be in (0, 1)");
    }
    if (cfg.block_size < 2) throw RangeError("block_size must be >= 2");
    if (cfg.passes < 1) throw RangeError("passes must be >= 1");
    if (cfg.topology == Topology::TwoCenters && cfg.hops < 1) {
        throw RangeError("hops must be >= 1");
    }
    return cfg;
}

std::map<std::string, std::pair<std::string, std::size_t>> parse_lines(const std::string& text) {
    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value': " + line, line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (kv.count(key)) throw ParseError("duplicate key: " + key, line_no);
        kv[key] = {value, line_no};
    }
    return kv;
}

CenterBehavior realize_behavior(const BehaviorSpec& spec, SiftVariant variant,
                                RandomSource& attack_rng) {
    switch (spec.kind) {
        case BehaviorSpec::Kind::Honest:
            return Honest{variant};
        case BehaviorSpec::Kind::ProjectAs:
            return ProjectAs{spec.claimed, spec.actual};
        case BehaviorSpec::Kind::InterceptResend:
            return InterceptResend{spec.intercept_basis};
        case BehaviorSpec::Kind::AncillaAttack: {
            AncillaAttack attack;
            std::array<Amplitude, 4> c;
            double n2 = 0.0;
            for (auto& v : c) {
                v = Amplitude{attack_rng.next_unit() - 0.5, attack_rng.next_unit() - 0.5};
                n2 += std::norm(v);
            }
            const double inv = 1.0 / std::sqrt(n2);
            for (auto& v : c) v *= inv;
            attack.alpha = c[0];
            attack.beta = c[1];
            attack.gamma = c[2];
            attack.delta = c[3];
            for (auto& branch : attack.branch_map) {
                branch.amps.resize(2);
                double bn2 = 0.0;
                for (auto& v : branch.amps) {
                    v = Amplitude{attack_rng.next_unit() - 0.5, attack_rng.next_unit() - 0.5};
                    bn2 += std::norm(v);
                }
                const double binv = 1.0 / std::sqrt(bn2);
                for (auto& v : branch.amps) v *= binv;
            }
            return attack;
        }
    }
    return Honest{variant};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) { return parse_config(text, {}); }

ScenarioConfig parse_config(const std::string& text,
                            const std::map<std::string, std::string>& overrides) {
    auto kv = parse_lines(text);
    for (const auto& [key, value] : overrides) kv[key] = {value, 0};
    return config_from_map(kv);
}

double mutual_information(const std::vector<int>& records, const std::vector<int>& bits) {
    if (records.size() != bits.size()) throw LengthMismatch("unaligned records and bits");
    if (records.empty()) return 0.0;
    std::map<std::pair<int, int>, std::size_t> joint;
    std::map<int, std::size_t> rec_marginal, bit_marginal;
    for (std::size_t i = 0; i < records.size(); ++i) {
        ++joint[{records[i], bits[i]}];
        ++rec_marginal[records[i]];
        ++bit_marginal[bits[i]];
    }
    const double n = static_cast<double>(records.size());
    double mi = 0.0;
    for (const auto& [key, count] : joint) {
        const double pxy = static_cast<double>(count) / n;
        const double px = static_cast<double>(rec_marginal.at(key.first)) / n;
        const double py = static_cast<double>(bit_marginal.at(key.second)) / n;
        mi += pxy * std::log2(pxy / (px * py));
    }
    return std::max(0.0, mi);
}

SessionReport run_scenario(const ScenarioConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    RandomSource root(cfg.seed);
    RandomSource rng_a = root.substream("user-A");
    RandomSource rng_b = root.substream("user-B");
    RandomSource rng_center = root.substream("center");
    RandomSource rng_post = root.substream("postprocess");
    RandomSource rng_tele = root.substream("telenet");
    RandomSource rng_attack = root.substream("attack");
    RandomSource rng_decohere = root.substream("decohere");

    std::vector<BB84Record> records_a, records_b;
    std::vector<QubitState> states_a, states_b;
    records_a.reserve(cfg.n_pairs);
    records_b.reserve(cfg.n_pairs);
    for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
        records_a.push_back(random_bb84(rng_a));
        records_b.push_back(random_bb84(rng_b));
        states_a.push_back(records_a.back().state);
        states_b.push_back(records_b.back().state);
    }

    QuantumFile file_a, file_b;
    file_a.owner = "alice";
    file_b.owner = "bob";
    deposit(file_a, states_a);
    deposit(file_b, states_b);

    // memory noise hits the earlier-deposited file
    if (cfg.decoherence_p > 0.0) decohere(file_a, cfg.decoherence_p, rng_decohere);

    const CenterBehavior behavior = realize_behavior(cfg.behavior, cfg.variant, rng_attack);

    SessionResult session;
    if (cfg.topology == Topology::SingleCenter) {
        session = pair_session(file_a, file_b, behavior, rng_center);
    } else if (cfg.hops == 1) {
        SingletPool pool = make_ideal_pool("center-1", "center-2", cfg.n_pairs);
        session = intercenter_session(file_a, file_b, pool, behavior, rng_tele);
    } else {
        std::vector<SingletPool> pools;
        std::vector<SingletPool*> path;
        for (std::size_t h = 0; h < cfg.hops; ++h) {
            pools.push_back(make_ideal_pool("station-" + std::to_string(h),
                                            "station-" + std::to_string(h + 1), cfg.n_pairs));
        }
        for (auto& p : pools) path.push_back(&p);
        for (auto& cell : file_a.cells) {
            if (!cell.has_value()) continue;
            cell = chain_teleport(*cell, path, rng_tele).first;
        }
        session = pair_session(file_a, file_b, behavior, rng_tele);
    }

    SessionReport report;
    report.raw_pairs = cfg.n_pairs;
    std::vector<std::optional<BellOutcome>> announcements(cfg.n_pairs);
    for (const auto& ann : session.announcements) {
        announcements[ann.pair_index] = ann.outcome;
        if (ann.outcome.has_value()) {
            ++report.announced_present;
            ++report.outcome_histogram[static_cast<std::size_t>(*ann.outcome)];
        }
    }

    auto [key_a, key_b] = sift(records_a, records_b, announcements, cfg.variant);
    report.same_basis_kept = key_a.bits.size();
    report.sifted_len = key_a.bits.size();

    // everything the center learned, aligned with the sifted positions
    {
        std::map<std::size_t, int> cheat_by_pair;
        for (const auto& rec : session.cheat_log.records) cheat_by_pair[rec.pair_index] = rec.value;
        std::vector<int> aligned_records, aligned_bits;
        for (std::size_t k = 0; k < key_a.source_indices.size(); ++k) {
            const std::size_t pair = key_a.source_indices[k];
            const auto it = cheat_by_pair.find(pair);
            const int value = it != cheat_by_pair.end()
                                  ? 16 + it->second
                                  : static_cast<int>(*announcements[pair]);
            aligned_records.push_back(value);
            aligned_bits.push_back(key_a.bits[k]);
        }
        report.cheat_mutual_information = mutual_information(aligned_records, aligned_bits);
    }

    if (key_a.bits.size() >= 2) {
        const auto est = estimate_error(key_a.bits, key_b.bits, cfg.estimate_fraction, rng_post);
        report.qber_estimate = est.qber;
        if (est.qber > kAbortQber) {
            report.final_len = 0;
            report.keys_agree = false;
        } else {
            auto corrected = correct_errors(est.remaining_a, est.remaining_b, cfg.block_size,
                                            cfg.passes, rng_post);
            report.leakage = corrected.leakage.disclosed_bits;
            report.final_len =
                final_length(corrected.a.size(), est.qber, corrected.leakage, cfg.margin);
            // agreement is checked on a short hash: a full final_len x
            // corrected_len matrix is quadratic in the key size, and a
            // 256-bit universal hash already misses a disagreement with
            // probability 2^-256
            const std::size_t check_len = std::min<std::size_t>(report.final_len, 256);
            const auto seed = random_hash_seed(corrected.a.size(), check_len, rng_post);
            report.keys_agree =
                verify_agreement(privacy_amplify(corrected.a, seed),
                                 privacy_amplify(corrected.b, seed));
        }
    }

    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string csv_header() {
    return "raw_pairs,announced_present,same_basis_kept,psi_minus,psi_plus,phi_plus,phi_minus,"
           "sifted_len,qber_estimate,leakage,final_len,keys_agree,cheat_mi";
}

std::string emit_report(const SessionReport& r, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::CsvRow) {
        out << r.raw_pairs << ',' << r.announced_present << ',' << r.same_basis_kept;
        for (auto count : r.outcome_histogram) out << ',' << count;
        out << ',' << r.sifted_len << ',' << format_double(r.qber_estimate) << ',' << r.leakage
            << ',' << r.final_len << ',' << (r.keys_agree ? "true" : "false") << ','
            << format_double(r.cheat_mutual_information);
        return out.str();
    }
    out << "raw_pairs: " << r.raw_pairs << '\n';
    out << "announced_present: " << r.announced_present << '\n';
    out << "same_basis_kept: " << r.same_basis_kept << '\n';
    for (std::size_t k = 0; k < 4; ++k) {
        out << name(kBellOutcomes[k]) << ": " << r.outcome_histogram[k] << '\n';
    }
    out << "sifted_len: " << r.sifted_len << '\n';
    out << "qber_estimate: " << format_double(r.qber_estimate) << '\n';
    out << "leakage: " << r.leakage << '\n';
    out << "final_len: " << r.final_len << '\n';
    out << "keys_agree: " << (r.keys_agree ? "true" : "false") << '\n';
    out << "cheat_mi: " << format_double(r.cheat_mutual_information) << '\n';
    out << "wall_time_s: " << format_double(r.wall_time_s) << '\n';
    return out.str();
}

}  // namespace qkdnet
