#pragma once

// Monte Carlo experiments and audit runs behind the command-line tool.
// Trial i always draws from Seed{master, i} (graph) and its derived
// streams (search, anchor), so results do not depend on thread count and
// adding trials leaves earlier ones unchanged.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "itree/audit.hpp"
#include "itree/embed_search.hpp"
#include "itree/generators.hpp"
#include "itree/io.hpp"
#include "itree/moments.hpp"
#include "itree/parallel.hpp"
#include "itree/structure.hpp"

namespace itree {

/// Invalid experiment configuration; names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(field) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class PLaw { fixed, sqrt_law };
enum class TreeFamily { random, path, full_ary, file };

namespace seed_tags {
inline constexpr std::uint64_t kSearch = 1;
inline constexpr std::uint64_t kAnchor = 2;
inline constexpr std::uint64_t kTree = 0x7472656500000000ULL;  // "tree"
}  // namespace seed_tags

struct ExperimentConfig {
    std::uint64_t n = 100;
    double p = 0.1;
    PLaw p_law = PLaw::fixed;
    unsigned delta = 3;
    TreeFamily family = TreeFamily::random;
    std::string tree_file;
    std::optional<std::uint64_t> b;
    ThresholdForm form = ThresholdForm::lnform;
    std::uint64_t trials = 10;
    SearchBudget budget{1'000'000, 10, {}};
    std::uint64_t seed = 1;
    bool planted = false;
    std::size_t threads = 1;
    bool timing = false;
    std::string output;

    [[nodiscard]] double effective_p() const { return p_law == PLaw::sqrt_law ? regime_edge_p(n) : p; }

    void validate() const {
        if (n < 1) throw ConfigError("n", "must be at least 1");
        const double pe = effective_p();
        if (!(pe >= 0.0 && pe <= 1.0)) throw ConfigError("p", "must lie in [0, 1]");
        if (trials < 1) throw ConfigError("trials", "must be at least 1");
        if (budget.max_backtrack_steps < 1) throw ConfigError("steps", "must be at least 1");
        if (budget.max_restarts < 1) throw ConfigError("restarts", "must be at least 1");
        if (threads < 1) throw ConfigError("threads", "must be at least 1");
        if (family == TreeFamily::file && tree_file.empty()) throw ConfigError("tree-file", "required for family=file");
        if (family != TreeFamily::file && delta < 2) throw ConfigError("delta", "must be at least 2");
        if (!b && family != TreeFamily::file) {
            try {
                (void)threshold_size(n, pe, form);
            } catch (const std::exception& e) {
                throw ConfigError("b", std::string("no override given and the default threshold is undefined: ") +
                                           e.what());
            }
        }
    }

    /// Explicit b, else threshold_size(n, p, form).
    [[nodiscard]] std::uint64_t resolved_b() const { return b ? *b : threshold_size(n, effective_p(), form); }
};

inline PLaw parse_p_law(const std::string& s) {
    if (s == "fixed") return PLaw::fixed;
    if (s == "sqrt-law") return PLaw::sqrt_law;
    throw ConfigError("p-law", "expected fixed or sqrt-law, got \"" + s + "\"");
}

inline TreeFamily parse_tree_family(const std::string& s) {
    if (s == "random") return TreeFamily::random;
    if (s == "path") return TreeFamily::path;
    if (s == "full-ary") return TreeFamily::full_ary;
    if (s == "file") return TreeFamily::file;
    throw ConfigError("tree", "expected random, path, full-ary or file, got \"" + s + "\"");
}

inline ThresholdForm parse_form(const std::string& s) {
    if (s == "lnform") return ThresholdForm::lnform;
    if (s == "logq") return ThresholdForm::logq;
    throw ConfigError("form", "expected lnform or logq, got \"" + s + "\"");
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream is(value);
    T out{};
    std::string rest;
    if (!(is >> out) || (is >> rest)) throw ConfigError(key, "not a number: \"" + value + "\"");
    return out;
}

/// 1e4 style integers are accepted.
inline std::uint64_t parse_count(const std::string& key, const std::string& value) {
    const double x = parse_number<double>(key, value);
    if (!(x >= 0) || x != std::floor(x) || x > 1.8e19) throw ConfigError(key, "not a non-negative integer: \"" + value + "\"");
    return static_cast<std::uint64_t>(x);
}

}  // namespace detail

/// Applies one key=value setting (keys as the long CLI flag names).
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_count;
    if (key == "n") cfg.n = parse_count(key, value);
    else if (key == "p") cfg.p = detail::parse_number<double>(key, value);
    else if (key == "p-law") cfg.p_law = parse_p_law(value);
    else if (key == "delta") cfg.delta = static_cast<unsigned>(parse_count(key, value));
    else if (key == "tree") cfg.family = parse_tree_family(value);
    else if (key == "tree-file") cfg.tree_file = value;
    else if (key == "b") cfg.b = parse_count(key, value);
    else if (key == "form") cfg.form = parse_form(value);
    else if (key == "trials") cfg.trials = parse_count(key, value);
    else if (key == "steps") cfg.budget.max_backtrack_steps = parse_count(key, value);
    else if (key == "restarts") cfg.budget.max_restarts = parse_count(key, value);
    else if (key == "seed") cfg.seed = parse_count(key, value);
    else if (key == "planted") cfg.planted = value == "1" || value == "true";
    else if (key == "threads") cfg.threads = parse_count(key, value);
    else if (key == "output") cfg.output = value;
    else throw ConfigError(key, "unknown configuration key");
}

/// Flat key=value file; '#' starts a comment line.
inline void load_config(std::istream& in, ExperimentConfig& cfg) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
        try {
            apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ParseError(lineno, e.what());
        }
    }
}

inline Tree build_tree(const ExperimentConfig& cfg, std::uint64_t b) {
    switch (cfg.family) {
        case TreeFamily::random:
            return random_tree_bounded(b, cfg.delta, Seed{cfg.seed, 0}.derive(seed_tags::kTree));
        case TreeFamily::path: return path_tree(b);
        case TreeFamily::full_ary: return full_ary_tree(b, cfg.delta);
        case TreeFamily::file: {
            std::ifstream in(cfg.tree_file);
            if (!in) throw std::runtime_error("cannot open tree file " + cfg.tree_file);
            return read_tree(in);
        }
    }
    throw std::logic_error("unhandled tree family");
}

/// b distinct vertices, uniformly at random.
inline Embedding random_anchor(std::size_t b, std::size_t n, Seed seed) {
    if (b > n) throw std::invalid_argument("random_anchor: b exceeds n");
    std::vector<Vertex> all(n);
    for (Vertex v = 0; v < n; ++v) all[v] = v;
    Rng rng(seed);
    for (std::size_t i = 0; i < b; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(b);
    return Embedding(std::move(all), n);
}

struct SweepRow {
    std::uint64_t n = 0;
    double p = 0;
    std::uint64_t b = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_rate = 0;
    double mean_search_steps = 0;
    std::optional<double> wall_time_ms;
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// b values whose rate exceeds the previous row's (Monte Carlo noise or
    /// a real non-monotonicity); reported, never asserted.
    std::vector<std::uint64_t> rate_increases;
};

inline constexpr const char* kSweepCsvHeader =
    "n,p,b,trials,successes,success_rate,mean_search_steps,wall_time_ms,seed";

struct TrialOutcome {
    bool success = false;
    std::uint64_t steps = 0;
};

/// One graph per trial, one search per graph. Successes are re-verified
/// with is_induced_copy before they are counted.
inline SweepRow run_containment(const ExperimentConfig& cfg, const Tree& tree) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const double p = cfg.effective_p();
    if (tree.b() > cfg.n) throw ConfigError("b", "tree has more vertices than the graph");
    std::vector<TrialOutcome> outcomes(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
        const Seed trial{cfg.seed, i};
        const Graph g = cfg.planted
                            ? sample_planted(tree, random_anchor(tree.b(), cfg.n, trial.derive(seed_tags::kAnchor)),
                                             cfg.n, p, trial)
                            : sample_gnp(cfg.n, p, trial);
        SearchBudget budget = cfg.budget;
        budget.seed = trial.derive(seed_tags::kSearch);
        const auto res = search_induced_embedding(g, tree, budget);
        if (res.embedding && !is_induced_copy(g, tree, *res.embedding)) {
            throw InvariantViolation("containment: unverified embedding");
        }
        outcomes[i] = {res.embedding.has_value(), res.steps};
    });
    SweepRow row;
    row.n = cfg.n;
    row.p = p;
    row.b = tree.b();
    row.trials = cfg.trials;
    double steps = 0;
    for (const auto& o : outcomes) {
        row.successes += o.success ? 1 : 0;
        steps += static_cast<double>(o.steps);
    }
    row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    row.mean_search_steps = steps / static_cast<double>(row.trials);
    if (cfg.timing) {
        row.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    row.seed = cfg.seed;
    return row;
}

inline SweepRow run_containment(const ExperimentConfig& cfg) {
    cfg.validate();
    return run_containment(cfg, build_tree(cfg, cfg.resolved_b()));
}

/// run_containment for each b (same graphs for every b), rows ordered by b.
inline SweepResult run_threshold_sweep(const ExperimentConfig& cfg, std::vector<std::uint64_t> b_range) {
    std::sort(b_range.begin(), b_range.end());
    b_range.erase(std::unique(b_range.begin(), b_range.end()), b_range.end());
    SweepResult out;
    for (const auto b : b_range) {
        if (b < 2 || b > cfg.n) throw ConfigError("b-range", "values must lie in [2, n], got " + std::to_string(b));
        if (cfg.family == TreeFamily::file) throw ConfigError("tree", "a sweep needs a generated tree family");
        auto c = cfg;
        c.b = b;
        out.rows.push_back(run_containment(c));
        if (out.rows.size() >= 2 && out.rows.back().success_rate > out.rows[out.rows.size() - 2].success_rate) {
            out.rate_increases.push_back(b);
        }
    }
    return out;
}

namespace detail {

inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
    os << kSweepCsvHeader << '\n';
    for (const auto& r : res.rows) {
        os << r.n << ',' << detail::num(r.p) << ',' << r.b << ',' << r.trials << ',' << r.successes << ','
           << detail::num(r.success_rate) << ',' << detail::num(r.mean_search_steps) << ','
           << (r.wall_time_ms ? detail::num(*r.wall_time_ms) : std::string()) << ',' << r.seed << '\n';
    }
}

inline const char* family_name(MaxFamily f) {
    switch (f) {
        case MaxFamily::tree: return "tree";
        case MaxFamily::path: return "path";
        case MaxFamily::matching: return "matching";
    }
    return "?";
}

inline MaxFamily parse_max_family(const std::string& s) {
    if (s == "tree") return MaxFamily::tree;
    if (s == "path") return MaxFamily::path;
    if (s == "matching") return MaxFamily::matching;
    throw ConfigError("families", "expected tree, path or matching, got \"" + s + "\"");
}

struct MaximaRow {
    MaxFamily family = MaxFamily::tree;
    std::uint64_t n = 0;
    double p = 0;
    std::uint64_t trials = 0;
    double mean = 0;
    std::size_t min = 0;
    std::size_t max = 0;
    double two_log_q_np = 0;  // 2 ln(np) / ln(1/(1-p)), for scale
    std::uint64_t seed = 0;
};

inline constexpr const char* kMaximaCsvHeader = "family,n,p,trials,mean,min,max,two_log_q_np,seed";

/// Exact maximum induced tree/path/matching sizes over sampled G(n, p).
inline std::vector<MaximaRow> run_exact_maxima(std::uint64_t n, double p, std::uint64_t trials,
                                               const std::vector<MaxFamily>& families, std::uint64_t seed,
                                               std::size_t threads = 1, bool force = false) {
    if (!force && n > kExactMaximaMaxN) {
        throw CapExceeded("maxima: n = " + std::to_string(n) + " exceeds the exact cap " +
                          std::to_string(kExactMaximaMaxN) + " (use --force)");
    }
    if (trials < 1) throw ConfigError("trials", "must be at least 1");
    std::vector<std::vector<std::size_t>> sizes(trials, std::vector<std::size_t>(families.size()));
    parallel_for(trials, threads, [&](std::size_t i) {
        const Graph g = sample_gnp(n, p, Seed{seed, i});
        for (std::size_t f = 0; f < families.size(); ++f) sizes[i][f] = max_induced_size(g, families[f], force);
    });
    std::vector<MaximaRow> rows;
    for (std::size_t f = 0; f < families.size(); ++f) {
        MaximaRow r;
        r.family = families[f];
        r.n = n;
        r.p = p;
        r.trials = trials;
        r.min = SIZE_MAX;
        double sum = 0;
        for (std::size_t i = 0; i < trials; ++i) {
            sum += static_cast<double>(sizes[i][f]);
            r.min = std::min(r.min, sizes[i][f]);
            r.max = std::max(r.max, sizes[i][f]);
        }
        r.mean = sum / static_cast<double>(trials);
        r.two_log_q_np = 2.0 * std::log(static_cast<double>(n) * p) / -std::log1p(-p);
        r.seed = seed;
        rows.push_back(r);
    }
    return rows;
}

inline void write_maxima_csv(std::ostream& os, const std::vector<MaximaRow>& rows) {
    os << kMaximaCsvHeader << '\n';
    for (const auto& r : rows) {
        os << family_name(r.family) << ',' << r.n << ',' << detail::num(r.p) << ',' << r.trials << ','
           << detail::num(r.mean) << ',' << r.min << ',' << r.max << ',' << detail::num(r.two_log_q_np) << ','
           << r.seed << '\n';
    }
}

// Audit grids -------------------------------------------------------------

struct AuditGridPoint {
    std::uint64_t n = 0;
    double p = 0;
    unsigned delta = 2;
    std::optional<std::uint64_t> b;
    std::size_t line = 0;
};

struct AuditGrid {
    std::vector<AuditGridPoint> points;
    std::vector<EllSpec> ells{EllSpec::parse("2"), EllSpec::parse("b/2"), EllSpec::parse("b")};
    std::optional<std::vector<EllSpec>> claim2_ells;  // defaults to ells
    std::vector<double> ts;
    std::vector<std::uint64_t> claim1_ns;
    unsigned claim1_delta = 3;
};

/// Line formats:
///   point n=<N> (c=<C> | p=<P>) delta=<D> [b=<B>]
///   ells = <spec> ...          (N, b, b-N, b/N)
///   claim2_ells = <spec> ...
///   ts = <t> ...
///   claim1_n = <N> ...
///   claim1_delta = <D>
inline AuditGrid parse_audit_grid(std::istream& in) {
    AuditGrid grid;
    std::string raw;
    std::size_t lineno = 0;
    auto words = [](const std::string& s) {
        std::vector<std::string> out;
        std::istringstream is(s);
        for (std::string w; is >> w;) out.push_back(w);
        return out;
    };
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        try {
            if (line.rfind("point", 0) == 0 && (line.size() == 5 || line[5] == ' ' || line[5] == '\t')) {
                AuditGridPoint pt;
                pt.line = lineno;
                std::optional<double> c;
                std::optional<double> p;
                bool have_n = false;
                bool have_delta = false;
                for (const auto& w : words(line.substr(5))) {
                    const auto eq = w.find('=');
                    if (eq == std::string::npos) throw ConfigError(w, "expected key=value");
                    const auto key = w.substr(0, eq);
                    const auto val = w.substr(eq + 1);
                    if (key == "n") {
                        pt.n = detail::parse_count(key, val);
                        have_n = true;
                    } else if (key == "c") {
                        c = detail::parse_number<double>(key, val);
                    } else if (key == "p") {
                        p = detail::parse_number<double>(key, val);
                    } else if (key == "delta") {
                        pt.delta = static_cast<unsigned>(detail::parse_count(key, val));
                        have_delta = true;
                    } else if (key == "b") {
                        pt.b = detail::parse_count(key, val);
                    } else {
                        throw ConfigError(key, "unknown point field");
                    }
                }
                if (!have_n || !have_delta || (c.has_value() == p.has_value())) {
                    throw ConfigError("point", "needs n, delta and exactly one of c or p");
                }
                pt.p = p ? *p : *c / static_cast<double>(pt.n);
                if (!(pt.p > 0.0 && pt.p < 1.0)) throw ConfigError("point", "p = c/n must lie in (0, 1)");
                if (pt.delta < 1) throw ConfigError("delta", "must be at least 1");
                (void)threshold_value(pt.n, pt.p, ThresholdForm::lnform);
                grid.points.push_back(pt);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("line", "expected \"point ...\" or key = values");
            const auto key = detail::trim(line.substr(0, eq));
            const auto vals = words(line.substr(eq + 1));
            if (key == "ells" || key == "claim2_ells") {
                std::vector<EllSpec> specs;
                for (const auto& v : vals) specs.push_back(EllSpec::parse(v));
                if (key == "ells") grid.ells = specs;
                else grid.claim2_ells = specs;
            } else if (key == "ts") {
                grid.ts.clear();
                for (const auto& v : vals) grid.ts.push_back(detail::parse_number<double>(key, v));
            } else if (key == "claim1_n") {
                grid.claim1_ns.clear();
                for (const auto& v : vals) grid.claim1_ns.push_back(detail::parse_count(key, v));
            } else if (key == "claim1_delta") {
                if (vals.size() != 1) throw ConfigError(key, "expects one value");
                grid.claim1_delta = static_cast<unsigned>(detail::parse_count(key, vals[0]));
            } else {
                throw ConfigError(key, "unknown grid key");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return grid;
}

struct AuditBundle {
    AuditReport claim2{"claim2", {}, {}};
    AuditReport claim3{"claim3", {}, {}};
    AuditReport proof_chain{"proof_chain", {}, {}};
    AuditReport claim1{"claim1", {}, {}};

    [[nodiscard]] bool pass() const { return claim2.pass() && claim3.pass() && proof_chain.pass() && claim1.pass(); }

    [[nodiscard]] std::string summary() const {
        std::ostringstream os;
        os << "summary claim2=" << claim2.pass() << " claim3=" << claim3.pass() << " proof_chain=" << proof_chain.pass()
           << " claim1=" << claim1.pass() << " overall=" << pass();
        return os.str();
    }
};

inline MomentParams params_for(const AuditGridPoint& pt) {
    const auto b = pt.b ? *pt.b : threshold_size(pt.n, pt.p, ThresholdForm::lnform);
    return MomentParams::make(pt.n, pt.p, pt.delta, b);
}

/// All audits over every grid point (parallel over points, merged in file
/// order).
inline AuditBundle run_audits(const AuditGrid& grid, std::size_t threads = 1) {
    struct PerPoint {
        AuditReport claim2, claim3, chain;
    };
    std::vector<PerPoint> parts(grid.points.size());
    const ProofChainGrid chain_grid{grid.ells, grid.ts, 2000};
    const auto& c2_ells = grid.claim2_ells ? *grid.claim2_ells : grid.ells;
    parallel_for(grid.points.size(), threads, [&](std::size_t i) {
        const auto m = params_for(grid.points[i]);
        parts[i].claim2 = audit_claim2(m, c2_ells);
        parts[i].claim3 = AuditReport{"claim3", {}, {}};
        for (const auto ell : resolve_ells(grid.ells, m.b, 0)) parts[i].claim3.append(audit_claim3(m.n, m.b, ell));
        parts[i].chain = audit_proof_chain(m, chain_grid);
    });
    AuditBundle out;
    for (const auto& part : parts) {
        out.claim2.append(part.claim2);
        out.claim3.append(part.claim3);
        out.proof_chain.append(part.chain);
    }
    if (!grid.claim1_ns.empty()) out.claim1 = audit_claim1(grid.claim1_ns, grid.claim1_delta);
    return out;
}

}  // namespace itree
