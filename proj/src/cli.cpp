#include "k3fat/cli.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "k3fat/serialize.hpp"

namespace k3fat::cli {

namespace fs = std::filesystem;

namespace {

struct Range {
    Int lo = 1;
    Int hi = 1;
};

Range parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const Int v = std::stoll(text);
            return {v, v};
        }
        return {std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("malformed range '" + text + "', expected a..b");
    }
}

std::vector<Int> parse_list(const std::string& text) {
    std::vector<Int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoll(item));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("malformed list entry '" + item + "'");
        }
    }
    return out;
}

BasePolicy policy_for(Int gamma, bool assume_base, bool oracle_base, const GlobalSettings& s) {
    if (assume_base && oracle_base) throw std::invalid_argument("--assume-base and --oracle-base are exclusive");
    if (oracle_base) return BasePolicy::oracle_backed(s.oracle_config(), s.prime2);
    if (assume_base) return BasePolicy::hypothesis();
    if (gamma != 4)
        throw std::invalid_argument("no proved base policy for gamma = " + std::to_string(gamma) +
                                    "; pass --assume-base");
    return BasePolicy::gamma4_proved();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << contents;
}

std::string dim_text(const std::optional<Int>& d) { return d ? std::to_string(*d) : std::string(); }

struct RowOutcome {
    K3System sys;
    DimensionReport report;
    std::optional<VerificationOutcome> verification;
};

RowOutcome sweep_row(const K3System& sys, const SweepSpec& spec, const GlobalSettings& s) {
    RowOutcome row{sys, {}, std::nullopt};
    row.report = classify(sys, policy_for(spec.gamma, spec.assume_base, false, s));
    if (spec.oracle) row.verification = verify_with_cache(sys, row.report, s);
    return row;
}

} // namespace

oracle::PrimeFieldConfig GlobalSettings::oracle_config() const {
    oracle::PrimeFieldConfig cfg;
    cfg.prime = prime;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.budget_rows = budget_rows;
    cfg.validate();
    if (prime2 == prime) throw std::invalid_argument("--prime2 must differ from --prime");
    auto second = cfg;
    second.prime = prime2;
    second.validate();
    return cfg;
}

void SweepSpec::validate() const {
    if (gamma < 2 || gamma % 2 != 0) throw std::invalid_argument("gamma must be even");
    if (d_lo < 1 || d_hi < d_lo) throw std::invalid_argument("degree range must be nonempty and positive");
    if (m_lo < 1 || m_hi < m_lo) throw std::invalid_argument("multiplicity range must be nonempty and positive");
    if (n_set.empty()) throw std::invalid_argument("n set must be nonempty");
    for (Int n : n_set)
        if (!decompose_4u9w(n)) throw std::invalid_argument("n = " + std::to_string(n) + " is not of the form 4^u 9^w");
}

SweepResult run_sweep(const SweepSpec& spec, const GlobalSettings& settings) {
    spec.validate();
    if (spec.oracle) (void)settings.oracle_config();

    std::vector<Int> ns = spec.n_set;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::vector<K3System> systems;
    for (Int d = spec.d_lo; d <= spec.d_hi; ++d)
        for (Int m = spec.m_lo; m <= spec.m_hi; ++m)
            for (Int n : ns) systems.push_back(K3System::homogeneous(spec.gamma, d, m, n));

    std::vector<std::optional<RowOutcome>> rows(systems.size());
    std::vector<std::exception_ptr> errors(systems.size());
    std::atomic<std::size_t> next{0};
    unsigned workers = settings.threads ? settings.threads : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(systems.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < systems.size(); i = next++) {
                    try {
                        rows[i] = sweep_row(systems[i], spec, settings);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepResult result;
    std::ostringstream table;
    table << kSweepHeader << "\n";
    for (const auto& row : rows) {
        const auto& sys = row->sys;
        const auto& r = row->report;
        table << sys.gamma << "," << sys.degree << "," << sys.multiplicity() << "," << sys.point_count() << ","
              << r.vdim << "," << r.edim << "," << dim_text(r.dim) << "," << to_string(r.status) << ",";
        if (row->verification) {
            const auto& v = *row->verification;
            table << dim_text(v.oracle_dim) << "," << to_string(v.verdict);
            result.any_disagree |= v.verdict == Verdict::Disagree;
            result.any_budget_exceeded |= v.budget_exceeded;
        } else {
            table << ",";
        }
        table << "\n";
    }
    result.table = table.str();
    return result;
}

ResultCache::ResultCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path ResultCache::path_for(const K3System& sys, const GlobalSettings& s) const {
    std::ostringstream name;
    name << "g" << sys.gamma << "_d" << sys.degree << "_m" << sys.multiplicity() << "_n" << sys.point_count() << "_p"
         << s.prime << "_s" << s.seed << ".txt";
    return dir_ / name.str();
}

std::optional<ResultCache::Entry> ResultCache::load(const K3System& sys, const GlobalSettings& s) const {
    std::ifstream f(path_for(sys, s));
    if (!f) return std::nullopt;
    std::map<std::string, std::string> fields;
    std::string line;
    while (std::getline(f, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) fields[line.substr(0, eq)] = line.substr(eq + 1);
    }
    // entries from other trial counts or second primes are misses
    if (fields["trials"] != std::to_string(s.trials) || fields["prime2"] != std::to_string(s.prime2)) return std::nullopt;
    try {
        return Entry{std::stoll(fields.at("oracle_dim")), fields.at("low_confidence") == "1"};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void ResultCache::store(const K3System& sys, const GlobalSettings& s, const Entry& e) const {
    const auto target = path_for(sys, s);
    auto tmp = target;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream f(tmp, std::ios::binary);
        f << "oracle_dim=" << e.oracle_dim << "\nlow_confidence=" << (e.low_confidence ? 1 : 0)
          << "\ntrials=" << s.trials << "\nprime2=" << s.prime2 << "\n";
    }
    fs::rename(tmp, target);
}

VerificationOutcome verify_with_cache(const K3System& sys, const DimensionReport& report, const GlobalSettings& s) {
    const auto cfg = s.oracle_config();
    if (s.cache_dir.empty() || sys.gamma != 4) return verify(sys, report, cfg, s.prime2);
    ResultCache cache(s.cache_dir);
    if (const auto hit = cache.load(sys, s)) {
        VerificationOutcome out;
        out.oracle_dim = hit->oracle_dim;
        out.low_confidence = hit->low_confidence;
        if (!report.definite()) {
            out.reason = "report is UNKNOWN; oracle dimension recorded as advisory data";
        } else {
            out.verdict = *report.dim == hit->oracle_dim ? Verdict::Agree : Verdict::Disagree;
            if (out.low_confidence) out.reason = "oracle trials or primes disagree";
        }
        return out;
    }
    auto out = verify(sys, report, cfg, s.prime2);
    if (out.oracle_dim) cache.store(sys, s, {*out.oracle_dim, out.low_confidence});
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dimensions of linear systems through fat points on generic K3 surfaces", "k3fat"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalSettings settings;
    app.add_option("--prime", settings.prime, "primary prime for the oracle")->envname("K3FAT_PRIME");
    app.add_option("--prime2", settings.prime2, "second prime for cross-checks")->envname("K3FAT_PRIME2");
    app.add_option("--seed", settings.seed, "base random seed")->envname("K3FAT_SEED");
    app.add_option("--trials", settings.trials, "oracle trials per prime")->envname("K3FAT_TRIALS");
    app.add_option("--budget-rows", settings.budget_rows, "maximum condition-matrix rows")
        ->envname("K3FAT_BUDGET_ROWS");
    app.add_option("--cache-dir", settings.cache_dir, "directory of cached oracle results")
        ->envname("K3FAT_CACHE_DIR");
    app.add_option("--threads", settings.threads, "sweep worker threads (0 = all cores)")->envname("K3FAT_THREADS");

    Int gamma = 4;
    Int degree = 1;
    std::optional<Int> mult;
    std::optional<Int> count;
    bool assume_base = false;
    bool oracle_base = false;
    bool advisory = false;
    std::string trace_path;

    auto* vdim_cmd = app.add_subcommand("vdim", "virtual and expected dimension");
    auto* classify_cmd = app.add_subcommand("classify", "classify a homogeneous system");
    auto* verify_cmd = app.add_subcommand("verify", "classify and compare with the oracle");
    for (auto* cmd : {vdim_cmd, classify_cmd, verify_cmd}) {
        cmd->add_option("--gamma", gamma, "H^2 of the Picard generator")->default_val(4);
        cmd->add_option("-d,--degree", degree, "degree d of |dH|")->required();
        cmd->add_option("-m,--multiplicity", mult, "multiplicity of every point");
        cmd->add_option("-n,--count", count, "number of points");
    }
    for (auto* cmd : {classify_cmd, verify_cmd}) {
        cmd->add_flag("--assume-base", assume_base, "assume single-point systems are non-special");
        cmd->add_flag("--oracle-base", oracle_base, "measure single-point systems with the oracle");
        cmd->add_option("--trace", trace_path, "write the degeneration trace to this file");
    }
    classify_cmd->add_flag("--oracle", advisory, "attach the oracle dimension to UNKNOWN reports");

    std::string d_range = "1..4";
    std::string m_range = "1..2";
    std::string n_set = "1,4,9";
    bool no_oracle = false;
    std::string output;
    SweepSpec spec;
    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate a parameter range");
    sweep_cmd->add_option("--gamma", spec.gamma)->default_val(4);
    sweep_cmd->add_option("--d-range", d_range, "degrees a..b")->default_val("1..4");
    sweep_cmd->add_option("--m-range", m_range, "multiplicities a..b")->default_val("1..2");
    sweep_cmd->add_option("--n-set", n_set, "comma-separated point counts")->default_val("1,4,9");
    sweep_cmd->add_flag("--no-oracle", no_oracle, "skip oracle verification");
    sweep_cmd->add_flag("--assume-base", spec.assume_base, "assume single-point systems are non-special");
    sweep_cmd->add_option("-o,--out", output, "write the table here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto chosen = app.get_subcommands();
        out << (chosen.empty() ? app.help() : chosen.front()->help());
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    auto build_system = [&] {
        K3System sys{gamma, degree, {}};
        if (mult) sys.points.push_back({*mult, count.value_or(1)});
        else if (count && *count != 0) throw std::invalid_argument("-n needs -m");
        sys.validate();
        return sys;
    };

    try {
        if (vdim_cmd->parsed()) {
            const auto sys = build_system();
            const Int v = vdim_k3(sys);
            out << "vdim=" << v << " edim=" << edim(v) << "\n";
            return kSuccess;
        }

        if (classify_cmd->parsed() || verify_cmd->parsed()) {
            const auto sys = build_system();
            if (verify_cmd->parsed()) (void)settings.oracle_config();
            const auto policy = policy_for(gamma, assume_base, oracle_base, settings);
            std::optional<oracle::PrimeFieldConfig> advisory_cfg;
            if (advisory) advisory_cfg = settings.oracle_config();
            const auto report = classify(sys, policy, advisory_cfg);
            out << "status=" << to_string(report.status) << " dim=" << (report.dim ? std::to_string(*report.dim) : "?")
                << " vdim=" << report.vdim << " edim=" << report.edim << "\n";
            if (report.advisory_oracle_dim) out << "advisory_oracle_dim=" << *report.advisory_oracle_dim << "\n";
            for (const auto& note : report.notes) out << "note: " << note << "\n";
            if (!trace_path.empty() && report.trace) write_file(trace_path, to_document(to_json(*report.trace)));
            if (classify_cmd->parsed()) return kSuccess;

            const auto outcome = verify_with_cache(sys, report, settings);
            out << "verdict=" << to_string(outcome.verdict)
                << " oracle_dim=" << (outcome.oracle_dim ? std::to_string(*outcome.oracle_dim) : "?") << "\n";
            if (!outcome.reason.empty()) out << "reason: " << outcome.reason << "\n";
            if (outcome.budget_exceeded) return kBudget;
            return outcome.verdict == Verdict::Disagree ? kDisagree : kSuccess;
        }

        if (sweep_cmd->parsed()) {
            const auto d = parse_range(d_range);
            const auto m = parse_range(m_range);
            spec.d_lo = d.lo;
            spec.d_hi = d.hi;
            spec.m_lo = m.lo;
            spec.m_hi = m.hi;
            spec.n_set = parse_list(n_set);
            spec.oracle = !no_oracle;
            const auto result = run_sweep(spec, settings);
            if (output.empty()) out << result.table;
            else write_file(output, result.table);
            if (result.any_disagree) return kDisagree;
            return result.any_budget_exceeded ? kBudget : kSuccess;
        }
    } catch (const oracle::BudgetExceeded& e) {
        err << e.what() << "\n";
        return kBudget;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace k3fat::cli
