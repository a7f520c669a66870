#include "martlab/serialize.hpp"

#include <utility>

namespace martlab {

namespace {

const json& need(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        throw ParseError("descriptor is missing field \"" + std::string(name) + "\"");
    return *it;
}

std::string need_str(const json& j, const char* name) {
    const json& v = need(j, name);
    if (!v.is_string()) throw ParseError("field \"" + std::string(name) + "\" must be a string");
    return v.get<std::string>();
}

bool nonneg_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::uint64_t need_u64(const json& j, const char* name) {
    const json& v = need(j, name);
    if (!nonneg_integer(v))
        throw ParseError("field \"" + std::string(name) + "\" must be a non-negative integer");
    return v.get<std::uint64_t>();
}

Rational need_rat(const json& j, const char* name) {
    return rat_parse_or_throw(need_str(j, name));
}

int need_bit(const json& j, const char* name) {
    std::uint64_t b = need_u64(j, name);
    if (b > 1) throw ParseError("field \"" + std::string(name) + "\" must be 0 or 1");
    return static_cast<int>(b);
}

std::string need_kind(const json& j) {
    if (!j.is_object()) throw ParseError("descriptor must be an object");
    return need_str(j, "kind");
}

}  // namespace

json parse_document(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("document is not valid JSON");
    return j;
}

// --- polynomial ---

json polynomial_to_json(const PolynomialNat& p) {
    return json{{"coeffs", p.coeffs()}};
}

PolynomialNat polynomial_from_json(const json& j) {
    const json& c = need(j, "coeffs");
    if (!c.is_array()) throw ParseError("polynomial \"coeffs\" must be an array");
    std::vector<std::uint64_t> coeffs;
    for (const json& v : c) {
        if (!nonneg_integer(v)) throw ParseError("polynomial coefficients must be naturals");
        coeffs.push_back(v.get<std::uint64_t>());
    }
    try {
        return PolynomialNat(std::move(coeffs));
    } catch (const PreconditionError& e) {
        throw ParseError(e.what());
    }
}

// --- prefix functions and sequences ---

json prefix_function_to_json(const PrefixFunction& f) {
    if (auto* c = dynamic_cast<const ConstantPrefixRule*>(&f.rule()))
        return json{{"kind", "constant"}, {"bit", c->constant_bit()}};
    if (dynamic_cast<const ParityPrefixRule*>(&f.rule())) return json{{"kind", "parity"}};
    if (auto* p = dynamic_cast<const PseudorandomPrefixRule*>(&f.rule()))
        return json{{"kind", "pseudorandom"}, {"seed", p->seed()}};
    throw EvalError("prefix function \"" + f.rule().kind() + "\" is not serializable");
}

PrefixFunction prefix_function_from_json(const json& j) {
    std::string kind = need_kind(j);
    if (kind == "constant") return PrefixFunction::constant(need_bit(j, "bit"));
    if (kind == "parity") return PrefixFunction::parity();
    if (kind == "pseudorandom") return PrefixFunction::pseudorandom(need_u64(j, "seed"));
    throw ParseError("unknown prefix function kind \"" + kind + "\"");
}

json sequence_to_json(const SequenceOracle& z) {
    const SequenceRule& rule = z.rule();
    if (auto* p = dynamic_cast<const ExplicitPrefixRule*>(&rule))
        return json{{"kind", "prefix"}, {"bits", p->bits().str()}, {"default", p->default_bit()}};
    if (auto* p = dynamic_cast<const PseudorandomRule*>(&rule))
        return json{{"kind", "pseudorandom"}, {"seed", p->seed()}};
    if (auto* p = dynamic_cast<const InterleavedRule*>(&rule))
        return json{{"kind", "interleaved"},
                    {"target", prefix_function_to_json(p->target())},
                    {"base", sequence_to_json(p->base())}};
    if (auto* p = dynamic_cast<const LeftmostPathRule*>(&rule))
        return json{{"kind", "leftmost_path"}, {"martingale", martingale_to_json(p->martingale())}};
    throw EvalError("sequence rule \"" + rule.kind() + "\" is not serializable");
}

SequenceOracle sequence_from_json(const json& j) {
    std::string kind = need_kind(j);
    if (kind == "prefix")
        return SequenceOracle::from_prefix(BitString::parse(need_str(j, "bits")),
                                           need_bit(j, "default"));
    if (kind == "pseudorandom") return SequenceOracle::pseudorandom(need_u64(j, "seed"));
    if (kind == "interleaved")
        return interleaved_oracle(prefix_function_from_json(need(j, "target")),
                                  sequence_from_json(need(j, "base")));
    if (kind == "leftmost_path")
        return leftmost_path_oracle(martingale_from_json(need(j, "martingale")));
    throw ParseError("unknown sequence kind \"" + kind + "\"");
}

// --- permutations and scanners ---

json permutation_to_json(const Permutation& s) {
    const PermRule& rule = s.rule();
    std::string kind = rule.kind();
    if (kind == "identity" || kind == "pair_swap" || kind == "dishonest")
        return json{{"kind", kind}};
    if (auto* t = dynamic_cast<const TablePermRule*>(&rule)) {
        json pairs = json::array();
        for (std::uint64_t n = 0; n < t->image().size(); ++n)
            pairs.push_back(json::array({n, t->image()[n]}));
        return json{{"kind", "table"}, {"pairs", pairs}};
    }
    if (auto* b = dynamic_cast<const BlockRearrangementRule*>(&rule))
        return json{{"kind", "block_rearrangement"}, {"p", polynomial_to_json(b->layout().p())}};
    throw EvalError("permutation rule \"" + kind + "\" is not serializable");
}

Permutation permutation_from_json(const json& j) {
    std::string kind = need_kind(j);
    if (kind == "identity") return Permutation::identity();
    if (kind == "pair_swap") return Permutation::pair_swap();
    if (kind == "dishonest") return dishonest_permutation();
    if (kind == "block_rearrangement")
        return rearrangement_permutation(polynomial_from_json(need(j, "p")));
    if (kind == "table") {
        const json& pairs = need(j, "pairs");
        if (!pairs.is_array()) throw ParseError("table permutation \"pairs\" must be an array");
        std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
        for (const json& pr : pairs) {
            if (!pr.is_array() || pr.size() != 2 || !nonneg_integer(pr[0]) ||
                !nonneg_integer(pr[1]))
                throw ParseError("table permutation entries must be [n, image] pairs");
            entries.emplace_back(pr[0].get<std::uint64_t>(), pr[1].get<std::uint64_t>());
        }
        return Permutation::table(entries);
    }
    throw ParseError("unknown permutation kind \"" + kind + "\"");
}

json scanner_to_json(const ScanningFunction& v) {
    if (auto* p = dynamic_cast<const PermutationScanRule*>(&v.rule()))
        return json{{"kind", "from_permutation"},
                    {"permutation", permutation_to_json(p->permutation())}};
    if (auto* t = dynamic_cast<const TableScanRule*>(&v.rule())) {
        json entries = json::object();
        for (const auto& [run, pos] : t->entries()) entries[run] = pos;
        return json{{"kind", "table"}, {"depth", t->depth()}, {"entries", entries}};
    }
    throw EvalError("scanner \"" + v.rule().kind() + "\" is not serializable");
}

ScanningFunction scanner_from_json(const json& j) {
    std::string kind = need_kind(j);
    if (kind == "from_permutation")
        return permutation_to_scanner(permutation_from_json(need(j, "permutation")));
    if (kind == "table") {
        std::uint64_t depth = need_u64(j, "depth");
        const json& entries = need(j, "entries");
        if (!entries.is_object()) throw ParseError("scanner table \"entries\" must be an object");
        std::map<std::string, std::uint64_t> table;
        for (auto it = entries.begin(); it != entries.end(); ++it) {
            if (!nonneg_integer(it.value()))
                throw ParseError("scanner table positions must be naturals");
            BitString::parse(it.key());  // validates the run label
            table[it.key()] = it.value().get<std::uint64_t>();
        }
        return ScanningFunction::from_table(static_cast<std::size_t>(depth), std::move(table));
    }
    throw ParseError("unknown scanner kind \"" + kind + "\"");
}

// --- synthetic evaluator ---

json synthetic_to_json(const SyntheticBPP& alg) {
    json j{{"kind", "synthetic"},
           {"p", polynomial_to_json(alg.p())},
           {"target", prefix_function_to_json(alg.target())},
           {"seed", alg.seed()},
           {"key_mode", alg.key_mode() == KeyMode::shared ? "shared" : "per_x"}};
    if (alg.bad_count_override()) j["bad_count"] = *alg.bad_count_override();
    return j;
}

SyntheticBPP synthetic_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("synthetic evaluator descriptor must be an object");
    PolynomialNat p = polynomial_from_json(need(j, "p"));
    PrefixFunction target =
        j.contains("target") ? prefix_function_from_json(j["target"]) : PrefixFunction::parity();
    std::uint64_t seed = j.contains("seed") ? need_u64(j, "seed") : 0;
    KeyMode mode = KeyMode::per_x;
    if (j.contains("key_mode")) {
        std::string m = need_str(j, "key_mode");
        if (m == "shared")
            mode = KeyMode::shared;
        else if (m != "per_x")
            throw ParseError("key_mode must be \"per_x\" or \"shared\"");
    }
    std::optional<std::uint64_t> bad_count;
    if (j.contains("bad_count") && !j["bad_count"].is_null())
        bad_count = need_u64(j, "bad_count");
    return SyntheticBPP(std::move(p), std::move(target), seed, mode, bad_count);
}

// --- martingales ---

namespace {

json stake_table_values(const StakeTableNode& node) {
    json values = json::object();
    std::size_t idx = 0;
    for (std::size_t len = 0; len <= node.depth(); ++len)
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i)
            values[BitString::from_index(len, i).str()] = rat_str(node.values()[idx++]);
    return values;
}

}  // namespace

json martingale_to_json(const Martingale& m) {
    const MartingaleNode& node = m.node();
    if (auto* c = dynamic_cast<const ConstantNode*>(&node))
        return json{{"kind", "constant"}, {"value", rat_str(c->constant())}};
    if (auto* f = dynamic_cast<const FavorBitNode*>(&node))
        return json{{"kind", "favor_bit"},
                    {"bit", f->favored_bit()},
                    {"factor", rat_str(f->factor())},
                    {"initial", rat_str(f->initial())}};
    if (auto* t = dynamic_cast<const StakeTableNode*>(&node))
        return json{{"kind", "stake_table"}, {"depth", t->depth()}, {"values", stake_table_values(*t)}};
    if (auto* d = dynamic_cast<const DelayedNode*>(&node))
        return json{{"kind", "delayed"},
                    {"delay", d->delay()},
                    {"child", martingale_to_json(d->child())}};
    if (auto* w = dynamic_cast<const WeightedSumNode*>(&node)) {
        json children = json::array();
        json weights = json::array();
        for (const Martingale& c : w->children()) children.push_back(martingale_to_json(c));
        for (const Rational& q : w->weights()) weights.push_back(rat_str(q));
        return json{{"kind", "weighted_sum"},
                    {"children", children},
                    {"weights", weights},
                    {"tail", rat_str(w->tail())}};
    }
    if (auto* s = dynamic_cast<const SavingsNode*>(&node))
        return json{{"kind", "savings"}, {"child", martingale_to_json(s->child())}};
    if (auto* a = dynamic_cast<const AveragingNode*>(&node))
        return json{{"kind", "averaging"}, {"strategy", strategy_to_json(a->strategy())}};
    if (auto* b = dynamic_cast<const BinNode*>(&node))
        return json{{"kind", "bin"}, {"alg", synthetic_to_json(b->alg())}};
    if (auto* p = dynamic_cast<const PredictorNode*>(&node))
        return json{{"kind", "predictor"}, {"alg", synthetic_to_json(p->alg())}};
    throw EvalError("martingale node \"" + node.kind() + "\" is not serializable");
}

Martingale martingale_from_json(const json& j, const Budget& budget) {
    std::string kind = need_kind(j);
    if (kind == "constant") return Martingale::constant(need_rat(j, "value"));
    if (kind == "favor_bit") {
        Rational initial = j.contains("initial") ? need_rat(j, "initial") : Rational(1);
        try {
            return Martingale::favor_bit(need_bit(j, "bit"), need_rat(j, "factor"), initial);
        } catch (const PreconditionError& e) {
            throw ParseError(e.what());
        }
    }
    if (kind == "stake_table") {
        std::uint64_t depth = need_u64(j, "depth");
        if (depth > 20) throw ParseError("stake table depth too large");
        const json& values = need(j, "values");
        if (!values.is_object()) throw ParseError("stake table \"values\" must be an object");
        std::vector<Rational> table;
        table.reserve((std::size_t{1} << (depth + 1)) - 1);
        for (std::uint64_t len = 0; len <= depth; ++len) {
            for (std::uint64_t i = 0; i < (std::uint64_t{1} << len); ++i) {
                std::string key = BitString::from_index(static_cast<std::size_t>(len), i).str();
                auto it = values.find(key);
                if (it == values.end())
                    throw ParseError("malformed stake table: missing entry for \"" + key + "\"");
                if (!it->is_string())
                    throw ParseError("malformed stake table: entry \"" + key +
                                     "\" must be a rational string");
                table.push_back(rat_parse_or_throw(it->get<std::string>()));
            }
        }
        return Martingale::stake_table(static_cast<std::size_t>(depth), std::move(table));
    }
    if (kind == "delayed")
        return delayed(martingale_from_json(need(j, "child"), budget),
                       static_cast<std::size_t>(need_u64(j, "delay")));
    if (kind == "weighted_sum") {
        const json& cj = need(j, "children");
        if (!cj.is_array() || cj.empty())
            throw ParseError("weighted_sum \"children\" must be a non-empty array");
        std::vector<Martingale> children;
        for (const json& c : cj) children.push_back(martingale_from_json(c, budget));
        if (!j.contains("weights")) return weighted_sum(std::move(children));
        const json& wj = need(j, "weights");
        if (!wj.is_array()) throw ParseError("weighted_sum \"weights\" must be an array");
        std::vector<Rational> weights;
        for (const json& w : wj) {
            if (!w.is_string()) throw ParseError("weights must be rational strings");
            weights.push_back(rat_parse_or_throw(w.get<std::string>()));
        }
        try {
            return weighted_sum(std::move(children), std::move(weights), need_rat(j, "tail"));
        } catch (const PreconditionError& e) {
            throw ParseError(e.what());
        }
    }
    if (kind == "savings") return savings_transform(martingale_from_json(need(j, "child"), budget));
    if (kind == "averaging")
        return averaging_martingale(strategy_from_json(need(j, "strategy"), budget), budget);
    if (kind == "bin") return bin_martingale(synthetic_from_json(need(j, "alg")), budget);
    if (kind == "predictor") return predictor_martingale(synthetic_from_json(need(j, "alg")));
    throw ParseError("unknown martingale kind \"" + kind + "\"");
}

// --- betting strategies ---

json strategy_to_json(const BettingStrategy& g) {
    return json{{"scanner", scanner_to_json(g.scanner())},
                {"martingale", martingale_to_json(g.martingale())},
                {"filling", polynomial_to_json(g.filling())},
                {"certify_to", g.certified_to()}};
}

BettingStrategy strategy_from_json(const json& j, const Budget& budget) {
    if (!j.is_object()) throw ParseError("strategy descriptor must be an object");
    std::uint64_t certify_to = j.contains("certify_to") ? need_u64(j, "certify_to") : 4;
    return BettingStrategy::make(scanner_from_json(need(j, "scanner")),
                                 martingale_from_json(need(j, "martingale"), budget),
                                 polynomial_from_json(need(j, "filling")), certify_to, budget);
}

// --- reports ---

json fairness_report_to_json(const FairnessReport& r) {
    json j{{"ok", r.ok()}, {"status", r.status_name()}, {"depth", r.depth}};
    if (r.witness) j["witness"] = r.witness->str();
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

json filling_report_to_json(const FillingReport& r) {
    json j{{"ok", r.ok},
           {"n", r.n},
           {"run_length", r.run_length},
           {"runs_enumerated", r.runs_enumerated}};
    if (r.witness_run) j["witness_run"] = r.witness_run->str();
    if (r.missed_position) j["missed_position"] = *r.missed_position;
    return j;
}

json avg_report_to_json(const AvgReport& r) {
    return json{{"w", r.w.str()},
                {"t", r.t},
                {"value", rat_str(r.value)},
                {"runs_enumerated", r.runs_enumerated},
                {"consistent_count", r.consistent_count}};
}

json success_report_to_json(const SuccessReport& r) {
    json j{{"found", r.found},
           {"threshold", rat_str(r.threshold)},
           {"depth_checked", r.depth_checked}};
    if (r.found) {
        j["run_length"] = r.run_length;
        j["prefix_length"] = r.prefix_length;
        j["value"] = rat_str(r.value);
    }
    return j;
}

json measure_report_to_json(const MeasureReport& r) {
    return json{{"n", r.n},
                {"bad_count", r.bad_count},
                {"total", r.total},
                {"measure", rat_str(r.measure)},
                {"bound", rat_str(r.bound)},
                {"within_bound", r.within_bound}};
}

json block_reports_to_json(const std::vector<BlockReport>& rs) {
    json arr = json::array();
    for (const BlockReport& r : rs)
        arr.push_back(json{{"n", r.n},
                           {"y", r.y.str()},
                           {"is_bad", r.is_bad},
                           {"prediction_correct", r.prediction_correct},
                           {"h_factor", rat_str(r.h_factor)},
                           {"bin_gain", rat_str(r.bin_gain)}});
    return arr;
}

json delay_points_to_json(const DelayPoints& d) {
    return json{{"points", d.points}, {"exhausted", d.exhausted}, {"searched_to", d.searched_to}};
}

}  // namespace martlab
