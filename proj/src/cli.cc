#include "downclose/cli.hh"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "downclose/decision.hh"
#include "downclose/oracle.hh"

namespace downclose::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Options {
    bool json = false;
    bool no_witness = false;
    bool assume_directed = false;
    Caps caps;
};

struct Report {
    int code = exit_yes;
    std::string text;
    json record;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot read file '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json base_record(const std::string& kind, const std::string& input) {
    json r;
    r["kind"] = kind;
    r["input"] = input;
    r["directed"] = nullptr;
    r["candidate"] = nullptr;
    r["witness"] = nullptr;
    r["probabilistic"] = false;
    r["millis"] = 0;
    return r;
}

std::string slp_candidate_text(const AtomSlp& s, const Caps& caps) {
    if (s.length() <= caps.expand) {
        return to_string(rep_of(s, caps.expand));
    }
    return "SLP of length " + s.length().str() + "\n" + to_string(s);
}

void check_kind(const std::string& kind, std::initializer_list<const char*> allowed) {
    for (const char* k : allowed) {
        if (kind == k) {
            return;
        }
    }
    throw ParseError("unsupported input kind '" + kind + "'");
}

Report verdict_report(const std::string& kind, const std::string& input, const Verdict& v, const Options& o,
                      bool candidate_only) {
    Report r;
    r.record = base_record(kind, input);
    std::ostringstream s;
    std::string cand;
    if (v.candidate) {
        cand = to_string(*v.candidate);
    } else if (v.candidate_slp) {
        cand = slp_candidate_text(*v.candidate_slp, o.caps);
    }
    if (v.empty) {
        s << "directed (vacuously), no ideal\n";
        r.record["directed"] = true;
    } else if (candidate_only) {
        s << cand << '\n';
        r.record["candidate"] = cand;
    } else {
        s << (v.directed ? "directed" : "not directed") << '\n';
        s << "candidate: " << cand << '\n';
        r.record["directed"] = v.directed;
        r.record["candidate"] = cand;
        if (!v.directed) {
            if (v.witness) {
                s << "witness: " << to_string(*v.witness) << '\n';
                r.record["witness"] = to_string(*v.witness);
            } else {
                s << "witness: not computed\n";
            }
            r.code = exit_no;
        }
    }
    r.record["probabilistic"] = v.probabilistic;
    r.text = s.str();
    return r;
}

Report directed_query(const std::string& kind, const std::string& file, const Options& o, bool candidate_only) {
    check_kind(kind, {"nfa", "cfg"});
    std::string text = read_file(file);
    Verdict v;
    if (kind == "nfa") {
        LetterNfa a = parse_nfa(text);
        if (candidate_only) {
            if (is_empty_language(trim(a))) {
                v.empty = true;
                v.directed = true;
            } else {
                v.candidate = nfa_candidate_ideal(a, o.caps);
            }
        } else {
            v = nfa_directed(a, o.caps, !o.no_witness);
        }
    } else {
        LetterCfg g = parse_cfg(text);
        if (candidate_only) {
            if (is_empty_language(g)) {
                v.empty = true;
                v.directed = true;
            } else {
                v.candidate_slp = cfg_candidate_ideal(g);
            }
        } else {
            v = cfg_directed(g, o.caps, !o.no_witness);
        }
    }
    return verdict_report(candidate_only ? "candidate" : "directed", file, v, o, candidate_only);
}

Report include_query(const std::string& kind, const std::string& file, const std::string& ideal, const Options& o) {
    check_kind(kind, {"nfa", "cfg"});
    std::string text = read_file(file);
    std::optional<AtomSlp> slp;
    std::optional<IdealRep> rep;
    std::error_code ec;
    std::string ideal_text = ideal;
    if (fs::is_regular_file(ideal, ec)) {
        ideal_text = read_file(ideal);
        if (ideal_text.find("->") != std::string::npos) {
            slp = parse_slp(ideal_text);
        }
    }
    if (!slp) {
        rep = parse_rep(ideal_text);
    }
    Inclusion inc;
    std::string cand;
    if (kind == "nfa") {
        if (!rep) {
            rep = rep_of(*slp, o.caps.expand);
        }
        inc = nfa_included_in_ideal(parse_nfa(text), *rep, !o.no_witness);
        cand = to_string(*rep);
    } else {
        if (!slp) {
            slp = slp_of(*rep);
        }
        inc = cfg_included_in_ideal(parse_cfg(text), *slp, o.caps, InclusionRoute::automatic, !o.no_witness);
        cand = slp_candidate_text(*slp, o.caps);
    }
    Report r;
    r.record = base_record("include", file);
    r.record["candidate"] = cand;
    r.record["directed"] = nullptr;
    std::ostringstream s;
    if (inc.included) {
        s << "included\n";
    } else {
        s << "not included\n";
        s << "witness: " << (inc.witness ? to_string(*inc.witness) : std::string("not computed")) << '\n';
        if (inc.witness) {
            r.record["witness"] = to_string(*inc.witness);
        }
        r.code = exit_no;
    }
    r.record["included"] = inc.included;
    r.text = s.str();
    return r;
}

Report dce_query(const std::string& kind, const std::string& f1, const std::string& f2, const Options& o) {
    check_kind(kind, {"nfa", "cfg"});
    DceResult d;
    if (kind == "nfa") {
        d = dce_directed_nfa(parse_nfa(read_file(f1)), parse_nfa(read_file(f2)), o.assume_directed, o.caps);
    } else {
        d = dce_directed_cfg(parse_cfg(read_file(f1)), parse_cfg(read_file(f2)), o.assume_directed, o.caps);
    }
    Report r;
    r.record = base_record("dce", f1 + " " + f2);
    r.record["probabilistic"] = d.probabilistic;
    r.record["equal"] = d.equal;
    r.text = std::string(d.equal ? "equal" : "not equal") + (d.probabilistic ? " (probabilistic)" : "") + "\n";
    r.code = d.equal ? exit_yes : exit_no;
    return r;
}

Report count_query(const std::string& kind, const std::string& file, const Options& o, bool list) {
    check_kind(kind, {"nfa"});
    auto ideals = maximal_ideals(parse_nfa(read_file(file)), o.caps);
    Report r;
    r.record = base_record(list ? "decompose" : "count-ideals", file);
    std::ostringstream s;
    if (list) {
        json arr = json::array();
        for (const auto& i : ideals) {
            s << to_string(i) << '\n';
            arr.push_back(to_string(i));
        }
        r.record["candidate"] = arr;
    } else {
        s << ideals.size() << '\n';
        r.record["count"] = ideals.size();
    }
    r.text = s.str();
    return r;
}

Report text_report(const std::string& kind, const std::string& input, std::string text) {
    Report r;
    r.record = base_record(kind, input);
    r.record["candidate"] = text;
    r.text = std::move(text) + "\n";
    return r;
}

/// Runs a query and maps library errors to exit codes.
Report guarded(const std::string& input, const std::function<Report()>& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        return {exit_usage, std::string("error: ") + input + ": " + e.what() + "\n", {}};
    } catch (const PreconditionError& e) {
        return {exit_usage, std::string("error: ") + e.what() + "\n", {}};
    } catch (const CapExceeded& e) {
        return {exit_cap, std::string("cap exceeded: ") + e.what() + "\n", {}};
    } catch (const InternalError& e) {
        return {exit_internal, std::string("internal error: ") + e.what() + "\n", {}};
    }
}

int emit(const Report& r, const Options& o, std::ostream& out, std::ostream& err, double millis) {
    if (r.record.is_null()) {
        err << r.text;
        return r.code;
    }
    if (o.json) {
        json rec = r.record;
        rec["millis"] = static_cast<std::int64_t>(millis);
        out << rec.dump() << '\n';
    } else {
        out << r.text;
    }
    return r.code;
}

template <class F>
int timed(const std::string& input, const Options& o, std::ostream& out, std::ostream& err, F f) {
    auto t0 = std::chrono::steady_clock::now();
    Report r = guarded(input, f);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return emit(r, o, out, err, ms);
}

int batch(const std::string& kind, const std::string& dir, const Options& o, bool candidate_only, std::ostream& out,
          std::ostream& err) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        err << "error: '" << dir << "' is not a directory\n";
        return exit_usage;
    }
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == "." + kind) {
            files.push_back(e.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<std::future<std::pair<Report, double>>> jobs;
    for (const auto& f : files) {
        jobs.push_back(std::async(std::launch::async, [&, f] {
            auto t0 = std::chrono::steady_clock::now();
            Report r = guarded(f, [&] { return directed_query(kind, f, o, candidate_only); });
            double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            return std::make_pair(std::move(r), ms);
        }));
    }
    int code = exit_yes;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto [r, ms] = jobs[i].get();
        if (!o.json) {
            out << "== " << files[i] << '\n';
        }
        code = std::max(code, emit(r, o, out, err, ms));
    }
    return code;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Directedness and ideal decompositions of regular and context-free languages"};
    app.name("downclose");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_flag("--json", o.json, "Print one JSON record per query");
    app.add_flag("--no-witness", o.no_witness, "Skip witness search");
    app.add_flag("--assume-directed", o.assume_directed, "dce: trust that both inputs are directed");
    app.add_option("--cap-states", o.caps.states, "Largest reduced ideal automaton")->capture_default_str();
    app.add_option("--cap-expand", o.caps.expand, "Longest candidate expanded for CFG inclusion")->capture_default_str();
    app.add_option("--cap-enum", o.caps.enumerate, "Most representations enumerated")->capture_default_str();

    std::string kind, file, file2, ideal, batch_dir, op, word, alphabet;
    std::vector<std::string> rep_parts;
    std::size_t bound = 5;
    bool downward = false;

    auto* directed = app.add_subcommand("directed", "Decide directedness");
    directed->add_option("kind", kind, "nfa or cfg")->required();
    directed->add_option("file", file, "Input file");
    directed->add_option("--batch", batch_dir, "Process every .nfa or .cfg file of a directory");

    auto* candidate = app.add_subcommand("candidate", "Print the candidate ideal");
    candidate->add_option("kind", kind, "nfa or cfg")->required();
    candidate->add_option("file", file, "Input file");
    candidate->add_option("--batch", batch_dir, "Process every .nfa or .cfg file of a directory");

    auto* include = app.add_subcommand("include", "Decide inclusion of the downward closure in an ideal");
    include->add_option("kind", kind, "nfa or cfg")->required();
    include->add_option("file", file, "Input file")->required();
    include->add_option("--ideal", ideal, "Representation text, or a file with a representation or an SLP")->required();

    auto* dce = app.add_subcommand("dce", "Equivalence of downward closures of directed languages");
    dce->add_option("kind", kind, "nfa or cfg")->required();
    dce->add_option("file1", file, "First input")->required();
    dce->add_option("file2", file2, "Second input")->required();

    auto* count = app.add_subcommand("count-ideals", "Number of maximal ideals of the downward closure");
    count->add_option("kind", kind, "nfa")->required();
    count->add_option("file", file, "Input file")->required();

    auto* decompose = app.add_subcommand("decompose", "Maximal ideals of the downward closure");
    decompose->add_option("kind", kind, "nfa")->required();
    decompose->add_option("file", file, "Input file")->required();

    auto* complement = app.add_subcommand("complement-ideal", "Ideal of all other words of the same length and longer");
    complement->add_option("kind", kind, "slp")->required();
    complement->add_option("file", file, "SLP over letters")->required();
    complement->add_option("--alphabet", alphabet, "Comma separated alphabet (default: letters of the SLP)");

    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce an ideal representation");
    reduce_cmd->add_option("rep", rep_parts, "Representation")->required();

    auto* transform = app.add_subcommand("transform", "Directedness-preserving automaton transforms");
    transform->add_option("op", op, "pad-eps or determinize")->required()->check(CLI::IsMember({"pad-eps", "determinize"}));
    transform->add_option("kind", kind, "nfa")->required();
    transform->add_option("file", file, "Input file")->required();

    auto* orc = app.add_subcommand("oracle", "Brute-force reference procedures (debugging)");
    orc->require_subcommand(1);
    auto* o_directed = orc->add_subcommand("directed", "Brute-force directedness");
    o_directed->add_option("kind", kind, "nfa")->required();
    o_directed->add_option("file", file, "Input file")->required();
    auto* o_decompose = orc->add_subcommand("decompose", "Brute-force maximal ideals");
    o_decompose->add_option("kind", kind, "nfa")->required();
    o_decompose->add_option("file", file, "Input file")->required();
    auto* o_dcl = orc->add_subcommand("dcl", "Words of the downward closure up to a length");
    o_dcl->add_option("kind", kind, "nfa or cfg")->required();
    o_dcl->add_option("file", file, "Input file")->required();
    o_dcl->add_option("--bound", bound, "Length bound")->capture_default_str();
    auto* o_member = orc->add_subcommand("member", "Membership of a word in an ideal");
    o_member->add_option("word", word, "Word")->required();
    o_member->add_option("rep", rep_parts, "Representation")->required();
    auto* o_cyk = orc->add_subcommand("cyk", "Membership of a word in a context-free language");
    o_cyk->add_option("kind", kind, "cfg")->required();
    o_cyk->add_option("file", file, "Input file")->required();
    o_cyk->add_option("word", word, "Word")->required();
    o_cyk->add_flag("--downward", downward, "Test the downward closure");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_yes;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_yes;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    auto join = [](const std::vector<std::string>& parts) {
        std::string s;
        for (const auto& p : parts) {
            s += (s.empty() ? "" : " ") + p;
        }
        return s;
    };

    for (auto* sub : {directed, candidate}) {
        if (sub->parsed()) {
            bool cand = sub == candidate;
            if (!batch_dir.empty()) {
                if (!file.empty()) {
                    err << "error: give either a file or --batch\n";
                    return exit_usage;
                }
                if (kind != "nfa" && kind != "cfg") {
                    err << "error: unsupported input kind '" << kind << "'\n";
                    return exit_usage;
                }
                return batch(kind, batch_dir, o, cand, out, err);
            }
            if (file.empty()) {
                err << "error: missing input file\n";
                return exit_usage;
            }
            return timed(file, o, out, err, [&] { return directed_query(kind, file, o, cand); });
        }
    }
    if (include->parsed()) {
        return timed(file, o, out, err, [&] { return include_query(kind, file, ideal, o); });
    }
    if (dce->parsed()) {
        return timed(file, o, out, err, [&] { return dce_query(kind, file, file2, o); });
    }
    if (count->parsed() || decompose->parsed()) {
        bool list = decompose->parsed();
        return timed(file, o, out, err, [&] { return count_query(kind, file, o, list); });
    }
    if (complement->parsed()) {
        return timed(file, o, out, err, [&] {
            check_kind(kind, {"slp"});
            LetterSlp b = parse_letter_slp(read_file(file));
            Alphabet sigma(b.grammar().terminals());
            if (!alphabet.empty()) {
                std::vector<Letter> ls;
                std::stringstream ss(alphabet);
                for (std::string t; std::getline(ss, t, ',');) {
                    if (!is_valid_letter_token(t)) {
                        throw ParseError("invalid letter '" + t + "' in --alphabet");
                    }
                    ls.push_back(Letter{t});
                }
                sigma = Alphabet(ls);
            }
            return text_report("complement-ideal", file, to_string(complement_ideal(b, sigma)));
        });
    }
    if (reduce_cmd->parsed()) {
        std::string text = join(rep_parts);
        return timed(text, o, out, err, [&] { return text_report("reduce", text, to_string(reduce(parse_rep(text)))); });
    }
    if (transform->parsed()) {
        return timed(file, o, out, err, [&] {
            check_kind(kind, {"nfa"});
            LetterNfa a = parse_nfa(read_file(file));
            LetterNfa t = op == "pad-eps" ? pad_epsilon(a) : determinize_preserving(a);
            std::string s = to_string(t);
            s.pop_back();
            return text_report("transform", file, s);
        });
    }
    if (o_directed->parsed() || o_decompose->parsed()) {
        bool list = o_decompose->parsed();
        return timed(file, o, out, err, [&] {
            check_kind(kind, {"nfa"});
            LetterNfa a = parse_nfa(read_file(file));
            auto ideals = oracle::decompose_bruteforce(a, o.caps.enumerate);
            Report r;
            r.record = base_record(list ? "oracle-decompose" : "oracle-directed", file);
            std::ostringstream s;
            if (list) {
                for (const auto& i : ideals) {
                    s << to_string(i) << '\n';
                }
            } else {
                bool d = ideals.size() <= 1;
                s << (d ? "directed" : "not directed") << '\n';
                r.record["directed"] = d;
                r.code = d ? exit_yes : exit_no;
            }
            r.text = s.str();
            return r;
        });
    }
    if (o_dcl->parsed()) {
        return timed(file, o, out, err, [&] {
            check_kind(kind, {"nfa", "cfg"});
            std::set<Word> words;
            if (kind == "nfa") {
                words = oracle::dcl_words(parse_nfa(read_file(file)), bound).words;
            } else {
                words = oracle::cfg_words(parse_cfg(read_file(file)), bound, true);
            }
            std::vector<Word> sorted(words.begin(), words.end());
            std::stable_sort(sorted.begin(), sorted.end(),
                             [](const Word& x, const Word& y) { return x.size() < y.size(); });
            std::string s;
            for (const auto& w : sorted) {
                s += (s.empty() ? "" : "\n") + to_string(w);
            }
            return text_report("oracle-dcl", file, s);
        });
    }
    if (o_member->parsed()) {
        std::string text = join(rep_parts);
        return timed(text, o, out, err, [&] {
            IdealRep r = parse_rep(text);
            bool m = oracle::ideal_member_dp(parse_word(word, &r.ambient), r);
            Report rep = text_report("oracle-member", text, m ? "member" : "not member");
            rep.code = m ? exit_yes : exit_no;
            return rep;
        });
    }
    if (o_cyk->parsed()) {
        return timed(file, o, out, err, [&] {
            check_kind(kind, {"cfg"});
            LetterCfg g = parse_cfg(read_file(file));
            Alphabet sigma(g.terminals());
            bool m = oracle::cyk(g, parse_word(word, &sigma), downward);
            Report rep = text_report("oracle-cyk", file, m ? "member" : "not member");
            rep.code = m ? exit_yes : exit_no;
            return rep;
        });
    }
    err << "error: no command\n";
    return exit_usage;
}

} // namespace downclose::cli
