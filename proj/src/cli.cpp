#include "martlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "martlab/serialize.hpp"

namespace martlab {

namespace {

json load_doc(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_document(ss.str());
}

void emit(const std::string& out_path, std::ostream& fallback, const std::string& text) {
    if (out_path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw Error("cannot write \"" + out_path + "\"");
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Options {
    std::string martingale_path;
    std::string sequence_path;
    std::string strategy_path;
    std::string scanner_path;
    std::string g_path;
    std::string alg_path;
    std::string base_path;
    std::string out_path;
    std::string w_bits;
    std::uint64_t depth = 6;
    std::uint64_t steps = 10;
    std::uint64_t t = 0;
    std::uint64_t t2 = 0;
    std::uint64_t lemma_depth = 0;
    std::uint64_t n = 0;
    std::uint64_t length = 12;
    std::uint64_t blocks = 2;
    std::uint64_t fair_depth = 0;
    std::uint64_t max = 100;
    std::uint64_t witness_k = 3;
    std::uint64_t max_runs = Budget{}.max_runs;

    Budget budget() const { return Budget{max_runs}; }
};

int cmd_check(const Options& o, std::ostream& out) {
    Martingale m = martingale_from_json(load_doc(o.martingale_path), o.budget());
    FairnessReport r = fairness_check(m, static_cast<std::size_t>(o.depth));
    emit(o.out_path, out, dump(fairness_report_to_json(r)));
    return r.ok() ? kExitOk : kExitViolation;
}

int cmd_trace(const Options& o, std::ostream& out) {
    Martingale m = martingale_from_json(load_doc(o.martingale_path), o.budget());
    SequenceOracle z = sequence_from_json(load_doc(o.sequence_path));
    auto trace = capital_trace(m, z, static_cast<std::size_t>(o.steps));
    std::ostringstream csv;
    write_trace_csv(csv, z, trace);
    emit(o.out_path, out, csv.str());
    return kExitOk;
}

int cmd_avg(const Options& o, std::ostream& out) {
    BettingStrategy g = strategy_from_json(load_doc(o.strategy_path), o.budget());
    BitString w = BitString::parse(o.w_bits);
    std::uint64_t t = o.t != 0 ? o.t : g.g_at(w.size());
    json result;
    bool violation = false;

    result["avg"] = avg_report_to_json(averaging_value(g, w, t, o.budget()));
    if (o.t2 != 0) {
        bool same = t_independence_check(g, w, t, o.t2, o.budget());
        result["t_independence"] = json{{"t1", t}, {"t2", o.t2}, {"equal", same}};
        violation |= !same;
    }
    if (o.lemma_depth != 0) {
        FairnessReport r = fairness_lemma_check(g, static_cast<std::size_t>(o.lemma_depth),
                                                o.budget());
        result["fairness_lemma"] = fairness_report_to_json(r);
        violation |= !r.ok();
    }
    emit(o.out_path, out, dump(result));
    return violation ? kExitViolation : kExitOk;
}

int cmd_fill(const Options& o, std::ostream& out) {
    ScanningFunction v = scanner_from_json(load_doc(o.scanner_path));
    PolynomialNat g = polynomial_from_json(load_doc(o.g_path));
    FillingReport r = filling_check(v, g, o.n, o.budget());
    emit(o.out_path, out, dump(filling_report_to_json(r)));
    return r.ok ? kExitOk : kExitViolation;
}

int cmd_path(const Options& o, std::ostream& out) {
    Martingale l = martingale_from_json(load_doc(o.martingale_path), o.budget());
    BitString z = leftmost_path(l, static_cast<std::size_t>(o.length));
    json trace = json::array();
    Rational prev;
    bool nonincreasing = true;
    for (std::size_t m = 0; m <= z.size(); ++m) {
        Rational v = l.value(z.prefix(m));
        trace.push_back(json{{"step", m}, {"value", rat_str(v)}});
        if (m > 0 && v > prev) nonincreasing = false;
        prev = std::move(v);
    }
    json result{{"bits", z.str()}, {"trace", trace}, {"nonincreasing", nonincreasing}};
    emit(o.out_path, out, dump(result));
    return nonincreasing ? kExitOk : kExitViolation;
}

int cmd_pipeline(const Options& o, std::ostream& out) {
    SyntheticBPP alg = synthetic_from_json(load_doc(o.alg_path));
    SequenceOracle base = o.base_path.empty() ? SequenceOracle::pseudorandom(alg.seed())
                                              : sequence_from_json(load_doc(o.base_path));
    auto blocks = pipeline_run(alg, base, static_cast<std::size_t>(o.blocks), o.budget());
    Rational h_capital(1);
    std::uint64_t correct = 0;
    for (const BlockReport& b : blocks) {
        h_capital *= b.h_factor;
        if (b.prediction_correct) ++correct;
    }
    json result{{"blocks", block_reports_to_json(blocks)},
                {"h_capital", rat_str(h_capital)},
                {"correct_blocks", correct}};
    emit(o.out_path, out, dump(result));
    return kExitOk;
}

int cmd_bins(const Options& o, std::ostream& out) {
    SyntheticBPP alg = synthetic_from_json(load_doc(o.alg_path));
    MeasureReport measure = bad_block_measure(alg, o.n, o.budget());
    json result{{"measure", measure_report_to_json(measure)}};
    bool violation = !measure.within_bound;

    const Rational stake = pow2(-static_cast<long long>(o.n) - 1);
    json bin{{"stake", rat_str(stake)}};
    if (measure.bad_count > 0) {
        Rational gain =
            stake * pow2(static_cast<long long>(alg.p_at(o.n))) / Int(measure.bad_count);
        bin["gain_on_bad"] = rat_str(gain);
        bin["reaches_one"] = gain >= 1;
        violation |= gain < 1;
    }
    result["bin"] = bin;

    if (o.fair_depth != 0) {
        FairnessReport r = fairness_check(bin_martingale(alg, o.budget()),
                                          static_cast<std::size_t>(o.fair_depth));
        result["fairness"] = fairness_report_to_json(r);
        violation |= !r.ok();
    }
    emit(o.out_path, out, dump(result));
    return violation ? kExitViolation : kExitOk;
}

int cmd_dishonest(const Options& o, std::ostream& out) {
    json table = json::array();
    for (std::uint64_t n = 0; n < o.max; ++n)
        table.push_back(json::array({n, static_cast<std::uint64_t>(dishonest_forward(Int(n)))}));

    json witnesses = json::array();
    const std::uint64_t scan_to = std::max<std::uint64_t>(o.max, 10000);
    for (std::uint64_t k = 0; k <= o.witness_k; ++k) {
        for (std::uint64_t n = 0; n < scan_to; ++n) {
            Int image = dishonest_forward(Int(n));
            if (pk_at_most(Int(k), image, Int(n)) &&
                cantor_unpair(Int(n)).first == Int(k)) {
                witnesses.push_back(json{{"k", k},
                                         {"n", n},
                                         {"image", image.str()},
                                         {"p_k_of_image", pk_poly(Int(k), image).str()}});
                break;
            }
        }
    }
    json result{{"table", table}, {"witnesses", witnesses}};
    emit(o.out_path, out, dump(result));
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact martingales, scanners, and permutation constructions"};
    app.require_subcommand(1);
    Options o;

    auto add_budget = [&o](CLI::App* sub) {
        sub->add_option("--budget", o.max_runs, "enumeration budget (max brute-force runs)");
    };
    auto add_out = [&o](CLI::App* sub) {
        sub->add_option("--out", o.out_path, "output file (default stdout)");
    };

    CLI::App* check = app.add_subcommand("check", "verify the fairness identity of a descriptor");
    check->add_option("--martingale", o.martingale_path, "martingale descriptor")->required();
    check->add_option("--depth", o.depth, "check every string shorter than this");
    add_budget(check);
    add_out(check);

    CLI::App* trace = app.add_subcommand("trace", "capital trace along a sequence, as CSV");
    trace->add_option("--martingale", o.martingale_path, "martingale descriptor")->required();
    trace->add_option("--sequence", o.sequence_path, "sequence descriptor")->required();
    trace->add_option("--steps", o.steps, "number of prefix steps");
    add_budget(trace);
    add_out(trace);

    CLI::App* avg = app.add_subcommand("avg", "averaging value of a betting strategy");
    avg->add_option("--strategy", o.strategy_path, "strategy descriptor")->required();
    avg->add_option("--w", o.w_bits, "monotone prefix w")->required();
    avg->add_option("--t", o.t, "run length (default: the filling bound at |w|)");
    avg->add_option("--t2", o.t2, "also check independence against this run length");
    avg->add_option("--lemma-depth", o.lemma_depth, "also check the averaging fairness identity");
    add_budget(avg);
    add_out(avg);

    CLI::App* fill = app.add_subcommand("fill", "check that a scanner fills all positions below n");
    fill->add_option("--scanner", o.scanner_path, "scanner descriptor")->required();
    fill->add_option("--g", o.g_path, "filling polynomial descriptor")->required();
    fill->add_option("--n", o.n, "positions below this must be queried")->required();
    add_budget(fill);
    add_out(fill);

    CLI::App* path = app.add_subcommand("path", "leftmost non-ascending path of a martingale");
    path->add_option("--martingale", o.martingale_path, "martingale descriptor")->required();
    path->add_option("--length", o.length, "path length");
    add_budget(path);
    add_out(path);

    CLI::App* pipeline = app.add_subcommand("pipeline", "interleave, rearrange, and play both block martingales");
    pipeline->add_option("--alg", o.alg_path, "synthetic evaluator descriptor")->required();
    pipeline->add_option("--base", o.base_path, "base sequence descriptor (default: seeded pseudorandom)");
    pipeline->add_option("--blocks", o.blocks, "number of blocks to play");
    add_budget(pipeline);
    add_out(pipeline);

    CLI::App* bins = app.add_subcommand("bins", "bad-block measure and the bin martingale's gain");
    bins->add_option("--alg", o.alg_path, "synthetic evaluator descriptor")->required();
    bins->add_option("--n", o.n, "block index");
    bins->add_option("--fair-depth", o.fair_depth, "also fairness-check the bin martingale");
    add_budget(bins);
    add_out(bins);

    CLI::App* dishonest = app.add_subcommand("dishonest", "dishonest permutation table and witnesses");
    dishonest->add_option("--max", o.max, "table positions to list");
    dishonest->add_option("--witness-k", o.witness_k, "find a witness for each row up to k");
    add_out(dishonest);

    std::vector<const char*> argv;
    argv.push_back("martlab");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (check->parsed()) return cmd_check(o, out);
        if (trace->parsed()) return cmd_trace(o, out);
        if (avg->parsed()) return cmd_avg(o, out);
        if (fill->parsed()) return cmd_fill(o, out);
        if (path->parsed()) return cmd_path(o, out);
        if (pipeline->parsed()) return cmd_pipeline(o, out);
        if (bins->parsed()) return cmd_bins(o, out);
        if (dishonest->parsed()) return cmd_dishonest(o, out);
        err << "error: no subcommand\n";
        return kExitBadInput;
    } catch (const BudgetError& e) {
        err << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

}  // namespace martlab
