// netauct — batch front-end for the diffusion-auction toolkit: run mechanisms on
// instance files, audit incentive properties over seeded corpora, sweep parameters
// into CSV, generate instances, and replay the canned take-away counter-example.
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netauct/analysis.hpp"
#include "netauct/io.hpp"
#include "netauct/mechanisms.hpp"
#include "netauct/model.hpp"
#include "netauct/verifier.hpp"
#include "netauct/witnesses.hpp"

namespace {

using namespace netauct;

int default_corpus_size() {
    const char* env = std::getenv("NETAUCT_CORPUS_SIZE");
    if (!env) return 200;
    try {
        std::size_t used = 0;
        const int value = std::stoi(env, &used);
        if (used != std::strlen(env) || value < 1) throw std::invalid_argument(env);
        return value;
    } catch (const std::exception&) {
        throw input_error("NETAUCT_CORPUS_SIZE must be a positive integer");
    }
}

GenParams::Topology topology_from_string(const std::string& name) {
    if (name == "path") return GenParams::Topology::path;
    if (name == "star") return GenParams::Topology::star;
    if (name == "random-tree") return GenParams::Topology::random_tree;
    if (name == "random-graph") return GenParams::Topology::random_graph;
    throw input_error("unknown topology: " + name);
}

GenParams::ValueDist dist_from_string(const std::string& name) {
    if (name == "uniform") return GenParams::ValueDist::uniform_int;
    if (name == "unit-demand") return GenParams::ValueDist::unit_demand;
    if (name == "zero") return GenParams::ValueDist::zero;
    throw input_error("unknown value distribution: " + name);
}

std::string buyer_name(const AuctionInstance& instance, BuyerId buyer) {
    if (auto it = instance.labels.find(buyer); it != instance.labels.end())
        return it->second;
    return "buyer " + std::to_string(buyer);
}

std::string join_rats(const std::vector<Rat>& values) {
    std::string out;
    for (const Rat& v : values) {
        if (!out.empty()) out += ", ";
        out += v.to_string();
    }
    return out;
}

std::string describe_deviation(const AuctionInstance& instance, const Deviation& dev) {
    std::string text = "reports (" + join_rats(dev.reported_valuations) + ")";
    const std::set<BuyerId>& truth = instance.truth(dev.buyer).neighbors;
    if (dev.reported_neighbors == truth) {
        text += ", keeps all links";
    } else if (dev.reported_neighbors.empty()) {
        text += ", cuts all links";
    } else {
        text += ", keeps links to ";
        bool first = true;
        for (BuyerId b : dev.reported_neighbors) {
            if (!first) text += ", ";
            text += buyer_name(instance, b);
            first = false;
        }
    }
    return text;
}

std::string describe_sp_violation(const AuctionInstance& instance,
                                  const DeviationReport& report) {
    return "strategy-proofness: " + buyer_name(instance, report.buyer) + ": " +
           describe_deviation(instance, report.deviation) + "; utility " +
           report.truthful_utility.to_string() + " -> " +
           report.deviant_utility.to_string() + " (gain " + report.gain.to_string() + ")";
}

std::string describe_ir_violation(const AuctionInstance& instance,
                                  const IrViolation& violation) {
    std::string text = "individual rationality: " + buyer_name(instance, violation.buyer) +
                       ": utility " + violation.utility.to_string() +
                       " under truthful play";
    if (violation.rival_deviation)
        text += " when " + buyer_name(instance, violation.rival_deviation->buyer) + " " +
                describe_deviation(instance, *violation.rival_deviation);
    return text;
}

// Shared knobs for verify/sweep/gen corpora.
struct CorpusOptions {
    int count = -1;  // -1: resolve from NETAUCT_CORPUS_SIZE / 200
    std::uint64_t seed = 0;
    int n = 0;  // 0: per-mechanism default
    int k = 0;
    std::string topology;  // empty: per-mechanism default
    std::string dist;
    std::int64_t cap = 10;
    std::string alpha;  // run/verify: empty means instance/default
};

struct MechanismSetup {
    MechanismFn fn;
    std::string parameter;  // printable ("alpha=1/2", "variant=kth", ...)
    GenParams gen_defaults;
};

// Resolves the mechanism name plus flags into a runnable closure and the corpus
// defaults that make sense for it.
MechanismSetup make_setup(const std::string& mechanism, const std::string& alpha_text,
                          const std::string& variant) {
    MechanismSetup setup;
    if (mechanism == "alpha-apg") {
        const Rat alpha = Rat::parse(alpha_text.empty() ? "1/2" : alpha_text);
        setup.fn = [alpha](const AuctionInstance& inst) {
            return alpha_apg(inst, alpha).first;
        };
        setup.parameter = "alpha=" + alpha.to_string();
        setup.gen_defaults.n = 6;
        setup.gen_defaults.k = 1;
        setup.gen_defaults.alpha = alpha;
    } else if (mechanism == "gapg") {
        setup.fn = [](const AuctionInstance& inst) { return gapg(inst, inst.k); };
        setup.gen_defaults.n = 5;
        setup.gen_defaults.k = 4;
    } else if (mechanism == "gapg-topk") {
        const LoserTransfer transfer =
            variant == "max" ? LoserTransfer::max_statistic : LoserTransfer::kth_statistic;
        setup.fn = [transfer](const AuctionInstance& inst) {
            return gapg_top_k_unit(inst, inst.k, transfer);
        };
        setup.parameter = std::string("variant=") + (variant == "max" ? "max" : "kth");
        setup.gen_defaults.n = 5;
        setup.gen_defaults.k = 2;
        setup.gen_defaults.dist = GenParams::ValueDist::unit_demand;
    } else if (mechanism == "gidm") {
        setup.fn = [](const AuctionInstance& inst) {
            return gidm_revised(inst, inst.k).first;
        };
        setup.gen_defaults.n = 6;
        setup.gen_defaults.k = 4;
        setup.gen_defaults.dist = GenParams::ValueDist::unit_demand;
    } else {
        throw input_error("unknown mechanism: " + mechanism);
    }
    return setup;
}

GenParams resolve_gen_params(const CorpusOptions& opts, const GenParams& defaults) {
    GenParams params = defaults;
    if (opts.n > 0) params.n = opts.n;
    if (opts.k > 0) params.k = opts.k;
    if (!opts.topology.empty()) params.topology = topology_from_string(opts.topology);
    if (!opts.dist.empty()) params.dist = dist_from_string(opts.dist);
    params.value_cap = opts.cap;
    return params;
}

std::string instance_id_from_path(const std::string& path) {
    std::string id = std::filesystem::path(path).filename().string();
    if (id.size() > 5 && id.substr(id.size() - 5) == ".json") id.resize(id.size() - 5);
    return id;
}

void append_csv_row(const std::string& path, const std::string& header,
                    const std::string& row) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) ||
                       std::filesystem::file_size(path, ec) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw input_error("cannot write file: " + path);
    if (fresh) out << header;
    out << row;
}

// ---- run ---------------------------------------------------------------------

struct RunOptions {
    std::string file;
    std::string mechanism;
    std::string alpha;
    int k = 0;
    std::string variant = "kth";
    std::string csv;
};

int cmd_run(const RunOptions& opts) {
    AuctionInstance instance = load_instance_file(opts.file);
    if (opts.k > 0) {
        instance.k = opts.k;
        validate_instance(instance);
    }
    if (opts.mechanism == "alpha-apg" && opts.alpha.empty() && !instance.alpha)
        throw input_error("alpha-apg needs --alpha or an instance-level alpha");

    std::string alpha_text = opts.alpha;
    if (alpha_text.empty() && instance.alpha) alpha_text = instance.alpha->to_string();
    const MechanismSetup setup = make_setup(opts.mechanism, alpha_text, opts.variant);

    if (opts.mechanism == "gidm") {
        const auto [outcome, state] = gidm_revised(instance, instance.k);
        std::cout << "trace:\n" << format_gidm_trace(instance, state) << "\n";
        const RunRecord record = make_run_record(
            opts.mechanism, instance_id_from_path(opts.file), instance, outcome,
            setup.parameter);
        std::cout << format_run_record(record);
        if (!opts.csv.empty()) append_csv_row(opts.csv, run_csv_header(), run_csv_row(record));
        return 0;
    }

    const Outcome outcome = setup.fn(instance);
    const RunRecord record = make_run_record(
        opts.mechanism, instance_id_from_path(opts.file), instance, outcome,
        setup.parameter);
    std::cout << format_run_record(record);
    if (!opts.csv.empty()) append_csv_row(opts.csv, run_csv_header(), run_csv_row(record));
    return 0;
}

// ---- verify ------------------------------------------------------------------

struct VerifyOptions {
    std::string mechanism;
    std::string scenario;
    std::string checks = "both";
    std::string variant = "kth";
    CorpusOptions corpus;
};

int verify_fig2() {
    const AuctionInstance instance = reconstruct_gidm_counterexample();
    const auto mech = [](const AuctionInstance& inst) {
        return gidm_revised(inst, inst.k).first;
    };
    const AuditResult result = audit(mech, instance);
    std::cout << "scenario: fig2 (seven-buyer take-away counter-example, k=4)\n";
    std::cout << "instances checked: 1\n";
    std::cout << "deviations evaluated: " << result.deviations_evaluated << "\n";
    const int violations = result.strategy_proof_violation ? 1 : 0;
    std::cout << "violations found: " << violations << "\n";
    if (result.strategy_proof_violation)
        std::cout << describe_sp_violation(instance, *result.strategy_proof_violation)
                  << "\n";
    return violations > 0 ? 1 : 0;
}

int cmd_verify(const VerifyOptions& opts) {
    if (!opts.scenario.empty()) {
        if (opts.scenario != "fig2")
            throw input_error("unknown scenario: " + opts.scenario);
        if (opts.mechanism != "gidm")
            throw input_error("--scenario fig2 applies to --mechanism gidm");
        return verify_fig2();
    }
    if (opts.checks != "both" && opts.checks != "sp" && opts.checks != "ir")
        throw input_error("--checks must be both, sp, or ir");

    const MechanismSetup setup =
        make_setup(opts.mechanism, opts.corpus.alpha, opts.variant);
    GenParams params = resolve_gen_params(opts.corpus, setup.gen_defaults);
    const int count =
        opts.corpus.count >= 0 ? opts.corpus.count : default_corpus_size();
    if (count < 1) throw input_error("empty corpus");

    std::size_t deviations = 0;
    int violating_instances = 0;
    std::vector<std::string> details;
    for (int i = 0; i < count; ++i) {
        params.seed = opts.corpus.seed + static_cast<std::uint64_t>(i);
        const AuctionInstance instance = gen_instance(params);
        const AuditResult result = audit(setup.fn, instance);
        deviations += result.deviations_evaluated;

        const bool sp_hit =
            opts.checks != "ir" && result.strategy_proof_violation.has_value();
        const bool ir_hit = opts.checks != "sp" && result.ir_violation.has_value();
        if (!sp_hit && !ir_hit) continue;
        ++violating_instances;
        if (details.size() < 5) {
            std::ostringstream line;
            line << "instance #" << i << " (seed " << params.seed << "): ";
            if (sp_hit)
                line << describe_sp_violation(instance, *result.strategy_proof_violation);
            if (sp_hit && ir_hit) line << "; ";
            if (ir_hit) line << describe_ir_violation(instance, *result.ir_violation);
            details.push_back(line.str());
        }
    }

    std::cout << "mechanism: " << opts.mechanism;
    if (!setup.parameter.empty()) std::cout << " (" << setup.parameter << ")";
    std::cout << "\ninstances checked: " << count << "\n";
    std::cout << "deviations evaluated: " << deviations << "\n";
    std::cout << "violations found: " << violating_instances << "\n";
    for (const std::string& line : details) std::cout << line << "\n";
    return violating_instances > 0 ? 1 : 0;
}

// ---- sweep -------------------------------------------------------------------

struct SweepOptions {
    std::vector<std::string> alphas;
    std::vector<int> ks;
    std::string out;
    CorpusOptions corpus;
};

int cmd_sweep(const SweepOptions& opts) {
    if (opts.alphas.empty() == opts.ks.empty())
        throw input_error("sweep needs exactly one of --alpha ... or --k ...");
    const int count =
        opts.corpus.count >= 0 ? opts.corpus.count : default_corpus_size();
    if (count < 1) throw input_error("empty corpus");
    const Rat cap(opts.corpus.cap);

    std::string csv = sweep_csv_header();
    if (!opts.alphas.empty()) {
        for (const std::string& alpha_text : opts.alphas) {
            const Rat alpha = Rat::parse(alpha_text);
            const MechanismFn mech = [alpha](const AuctionInstance& inst) {
                return alpha_apg(inst, alpha).first;
            };

            // Random instances can only sit above the analytic floor, so seeding each
            // corpus with its hand-built witness pins the min to the exact value.
            std::vector<AuctionInstance> efficiency_corpus{
                alpha_efficiency_witness(alpha, cap)};
            std::vector<AuctionInstance> beta_corpus{alpha_beta_witness(alpha, cap)};
            for (int i = 0; i < count; ++i) {
                GenParams p;
                p.n = 4;
                p.k = 1;
                p.alpha = alpha;
                p.value_cap = opts.corpus.cap;
                p.seed = opts.corpus.seed + static_cast<std::uint64_t>(i);
                efficiency_corpus.push_back(gen_instance(p));

                GenParams q = p;
                q.n = 5;
                q.topology = GenParams::Topology::path;
                q.seed = opts.corpus.seed + 1000003 + static_cast<std::uint64_t>(i);
                beta_corpus.push_back(gen_instance(q));
            }
            const Rat efficiency = empirical_efficiency(mech, efficiency_corpus);
            const Rat beta = empirical_beta(mech, beta_corpus, cap);
            csv += sweep_csv_row("alpha=" + alpha.to_string(), efficiency, beta);
        }
    } else {
        for (int k : opts.ks) {
            if (k < 1) throw input_error("sweep k values must be positive");
            const MechanismFn mech = [](const AuctionInstance& inst) {
                return gapg(inst, inst.k);
            };
            std::vector<AuctionInstance> corpus{gapg_flat_witness(k, cap)};
            for (int i = 0; i < count; ++i) {
                GenParams p;
                p.n = 4;
                p.k = k;
                p.value_cap = opts.corpus.cap;
                p.seed = opts.corpus.seed + static_cast<std::uint64_t>(i);
                corpus.push_back(gen_instance(p));
            }
            // The witness family is a single direct buyer, so there is no shared n to
            // normalize revenue against; the beta cell stays empty for the k sweep.
            csv += sweep_csv_row("k=" + std::to_string(k),
                                 empirical_efficiency(mech, corpus), std::nullopt);
        }
    }

    if (opts.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(opts.out);
        if (!out) throw input_error("cannot write file: " + opts.out);
        out << csv;
    }
    return 0;
}

// ---- gen ---------------------------------------------------------------------

struct GenOptions {
    CorpusOptions corpus;
    std::string out;
};

int cmd_gen(const GenOptions& opts) {
    GenParams defaults;
    defaults.n = 4;
    defaults.k = 1;
    GenParams params = resolve_gen_params(opts.corpus, defaults);
    const int count = opts.corpus.count >= 0 ? opts.corpus.count : 1;
    if (count < 1) throw input_error("gen needs a positive --count");
    if (!opts.corpus.alpha.empty()) params.alpha = Rat::parse(opts.corpus.alpha);

    if (count == 1) {
        params.seed = opts.corpus.seed;
        const AuctionInstance instance = gen_instance(params);
        if (opts.out.empty()) {
            std::cout << serialize_instance(instance);
        } else {
            save_instance_file(instance, opts.out);
            std::cout << "wrote " << opts.out << "\n";
        }
        return 0;
    }

    if (opts.out.empty()) throw input_error("--count above 1 needs --out <directory>");
    std::filesystem::create_directories(opts.out);
    for (int i = 0; i < count; ++i) {
        params.seed = opts.corpus.seed + static_cast<std::uint64_t>(i);
        std::ostringstream file;
        file << opts.out << "/instance-" << std::setw(3) << std::setfill('0') << i
             << ".json";
        save_instance_file(gen_instance(params), file.str());
        std::cout << "wrote " << file.str() << "\n";
    }
    return 0;
}

// ---- counterexample ----------------------------------------------------------

struct CounterexampleOptions {
    int search = 0;
    std::string out;
};

int cmd_counterexample(const CounterexampleOptions& opts) {
    if (opts.search > 0) {
        const auto found = search_gidm_counterexamples(opts.search);
        for (const auto& values : found) {
            const char* letters = "abcdefg";
            std::string line;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (!line.empty()) line += " ";
                line += std::string(1, letters[i]) + "=" + std::to_string(values[i]);
            }
            std::cout << line << "\n";
        }
        std::cout << found.size() << " value assignments reproduce the counter-example "
                  << "with distinct values in 1.." << opts.search << "\n";
        return 0;
    }

    const AuctionInstance instance = reconstruct_gidm_counterexample();
    const BuyerId d = 1;
    const int k = instance.k;

    const auto [truthful_outcome, truthful_state] = gidm_revised(instance, k);
    std::cout << "seven-buyer take-away counter-example (k=" << k << ")\n\n";
    std::cout << "truthful declarations:\n"
              << format_gidm_trace(instance, truthful_state);
    std::cout << "d utility: " << utility(instance, d, truthful_outcome).to_string()
              << "\n\n";

    AuctionInstance cut = instance;
    cut.buyers.at(d).neighbors.clear();
    const auto [cut_outcome, cut_state] = gidm_revised(cut, k);
    std::cout << "after d cuts its link to e (e stays uninformed):\n"
              << format_gidm_trace(cut, cut_state);
    std::cout << "d utility: " << utility(cut, d, cut_outcome).to_string() << "\n\n";

    std::cout << "withholding the link raises d's utility from "
              << utility(instance, d, truthful_outcome).to_string() << " to "
              << utility(cut, d, cut_outcome).to_string()
              << ": the rule is not strategy-proof.\n";

    if (!opts.out.empty()) {
        save_instance_file(instance, opts.out);
        std::cout << "wrote " << opts.out << "\n";
    }
    return 0;
}

void add_corpus_flags(CLI::App* cmd, CorpusOptions& corpus, bool with_alpha) {
    cmd->add_option("--count", corpus.count, "corpus size (default NETAUCT_CORPUS_SIZE or 200)");
    cmd->add_option("--seed", corpus.seed, "base seed (instance i uses seed+i)");
    cmd->add_option("--n", corpus.n, "buyers per instance");
    cmd->add_option("--k", corpus.k, "items per instance");
    cmd->add_option("--topology", corpus.topology, "path | star | random-tree | random-graph");
    cmd->add_option("--dist", corpus.dist, "uniform | unit-demand | zero");
    cmd->add_option("--cap", corpus.cap, "value cap (default 10)");
    if (with_alpha) cmd->add_option("--alpha", corpus.alpha, "candidate threshold share");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diffusion auction toolkit"};
    app.require_subcommand(1);
    const std::vector<std::string> mechanisms = {"alpha-apg", "gapg", "gapg-topk", "gidm"};

    RunOptions run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "evaluate a mechanism on an instance file");
    run_cmd->add_option("file", run_opts.file, "instance file (JSON)")->required();
    run_cmd->add_option("--mechanism", run_opts.mechanism, "mechanism name")
        ->required()
        ->check(CLI::IsMember(mechanisms));
    run_cmd->add_option("--alpha", run_opts.alpha, "candidate threshold share (alpha-apg)");
    run_cmd->add_option("--k", run_opts.k, "override the instance item count");
    run_cmd->add_option("--variant", run_opts.variant, "gapg-topk loser transfer: kth | max")
        ->check(CLI::IsMember({"kth", "max"}));
    run_cmd->add_option("--csv", run_opts.csv, "append a CSV row to this file");

    VerifyOptions verify_opts;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "audit incentives over a seeded corpus");
    verify_cmd->add_option("--mechanism", verify_opts.mechanism, "mechanism name")
        ->required()
        ->check(CLI::IsMember(mechanisms));
    verify_cmd->add_option("--scenario", verify_opts.scenario,
                           "canned scenario (fig2: take-away counter-example)");
    verify_cmd->add_option("--checks", verify_opts.checks, "both | sp | ir");
    verify_cmd->add_option("--variant", verify_opts.variant,
                           "gapg-topk loser transfer: kth | max")
        ->check(CLI::IsMember({"kth", "max"}));
    add_corpus_flags(verify_cmd, verify_opts.corpus, /*with_alpha=*/true);

    SweepOptions sweep_opts;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "sweep alpha or k and emit efficiency/beta CSV");
    sweep_cmd->add_option("--alpha", sweep_opts.alphas, "alpha values (comma separated)")
        ->delimiter(',');
    sweep_cmd->add_option("--k", sweep_opts.ks, "item counts (comma separated)")
        ->delimiter(',');
    sweep_cmd->add_option("--out", sweep_opts.out, "CSV output path (default stdout)");
    sweep_cmd->add_option("--count", sweep_opts.corpus.count,
                          "random instances per parameter value");
    sweep_cmd->add_option("--seed", sweep_opts.corpus.seed, "base seed");
    sweep_cmd->add_option("--cap", sweep_opts.corpus.cap, "value cap (default 10)");

    GenOptions gen_opts;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate seeded instance files");
    add_corpus_flags(gen_cmd, gen_opts.corpus, /*with_alpha=*/true);
    gen_cmd->add_option("--out", gen_opts.out,
                        "output file (or directory when --count > 1; default stdout)");

    CounterexampleOptions ce_opts;
    CLI::App* ce_cmd = app.add_subcommand(
        "counterexample", "replay the seven-buyer take-away counter-example");
    ce_cmd->add_option("--search", ce_opts.search,
                       "search distinct values in 1..N for reproducing assignments");
    ce_cmd->add_option("--out", ce_opts.out, "write the instance file here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (verify_cmd->parsed()) return cmd_verify(verify_opts);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
        if (gen_cmd->parsed()) return cmd_gen(gen_opts);
        if (ce_cmd->parsed()) return cmd_counterexample(ce_opts);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 3;
    } catch (const verifier_error& e) {
        std::cerr << "verifier error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
