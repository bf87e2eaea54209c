// fstmorph: compile lexical transducers and run morphological analysis,
// generation, corpus extraction, and evaluation over them.
//
// Exit codes: 0 success, 1 empty/failed run (no usable evaluation rows, no
// generated line, grammar validation errors), 2 usage or I/O errors.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fstmorph/fstmorph.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

constexpr const char* kUnanalyzable = "+?";

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

// Runs `fn` over every line of the given inputs ("-" or empty = stdin).
int for_each_input_line(const std::vector<std::string>& inputs,
                        const std::function<void(const std::string&)>& fn) {
    std::vector<std::string> files = inputs;
    if (files.empty()) files.emplace_back("-");
    for (const std::string& path : files) {
        std::istream* in = &std::cin;
        std::ifstream file;
        if (path != "-") {
            file.open(path, std::ios::binary);
            if (!file) {
                std::cerr << "fstmorph: cannot open " << path << '\n';
                return kExitUsage;
            }
            in = &file;
        }
        std::string line;
        while (std::getline(*in, line)) fn(line);
    }
    return kExitOk;
}

void print_analysis(const std::string& word, const fstmorph::Analysis& a,
                    const std::string& format) {
    using fstmorph::display_of;
    if (format == "structured") {
        std::cout << "word=" << word << " root=" << a.root;
        if (a.suffix) std::cout << " suffix=" << *a.suffix;
        std::cout << " pos=" << display_of(a.pos);
        if (a.mood) std::cout << " mood=" << display_of(*a.mood);
        std::cout << " number=" << display_of(a.number);
        if (a.gender) std::cout << " gender=" << display_of(*a.gender);
        std::cout << '\n';
    } else if (format == "tsv") {
        std::cout << word << '\t' << a.root << '\t' << (a.suffix ? *a.suffix : "") << '\t'
                  << display_of(a.pos) << '\t' << (a.mood ? display_of(*a.mood) : "") << '\t'
                  << display_of(a.number) << '\t' << (a.gender ? display_of(*a.gender) : "")
                  << '\n';
    } else {
        std::cout << word << '\t' << fstmorph::render_analysis(a) << '\n';
    }
}

int cmd_compile(const std::string& roots_path, const std::string& suffixes_path,
                const std::string& rules_path, const std::string& lexc_path,
                const std::string& out_path) {
    using namespace fstmorph;
    try {
        Transducer fst;
        std::vector<rules::RewriteRule> cascade;
        if (!rules_path.empty()) {
            if (!file_exists(rules_path)) {
                std::cerr << "fstmorph: cannot open " << rules_path << '\n';
                return kExitUsage;
            }
            cascade = rules::parse_rule_file(rules_path);
        }
        if (!lexc_path.empty()) {
            if (!file_exists(lexc_path)) {
                std::cerr << "fstmorph: cannot open " << lexc_path << '\n';
                return kExitUsage;
            }
            fst = lexc::compile(lexc::parse_lexicon_file(lexc_path));
            SymbolTable& symbols = fst.symbols_mutable();
            for (const auto& rule : cascade) {
                symbols.intern(rule.source);
                if (!rule.target.empty()) symbols.intern(rule.target);
                if (!rule.left_context.empty() && rule.left_context != rules::kBoundary)
                    symbols.intern(rule.left_context);
                if (!rule.right_context.empty() && rule.right_context != rules::kBoundary)
                    symbols.intern(rule.right_context);
            }
            for (const auto& rule : cascade)
                fst = compose(fst, rules::compile_rule(rule, fst.symbols()));
            fst = minimize(fst);
        } else {
            for (const std::string& path : {roots_path, suffixes_path}) {
                if (!file_exists(path)) {
                    std::cerr << "fstmorph: cannot open " << path << '\n';
                    return kExitUsage;
                }
            }
            const auto dicts = grammar::load_dictionaries(roots_path, suffixes_path);
            for (const std::string& warning : dicts.warnings)
                std::cerr << "fstmorph: warning: " << warning << '\n';
            fst = grammar::build_analyzer(dicts, cascade);
        }
        save_file(fst, out_path);
        std::cout << "wrote " << out_path << ": " << fst.num_states() << " states, "
                  << fst.num_arcs() << " arcs, " << fst.symbols().size() << " symbols\n";
        return kExitOk;
    } catch (const lexc::ValidationFailedError& e) {
        std::cerr << "fstmorph: lexicon validation failed:\n";
        for (const auto& diag : e.diagnostics) std::cerr << "  " << diag.message << '\n';
        return kExitFailed;
    } catch (const fstmorph::FstError& e) {
        std::cerr << "fstmorph: " << e.what() << '\n';
        return kExitFailed;
    }
}

int cmd_analyze(const std::string& fst_path, const std::vector<std::string>& inputs,
                const std::string& format) {
    using namespace fstmorph;
    Transducer fst;
    try {
        fst = load_file(fst_path);
    } catch (const FstError& e) {
        std::cerr << "fstmorph: " << e.what() << '\n';
        return kExitUsage;
    }
    return for_each_input_line(inputs, [&](const std::string& raw) {
        const std::string word = trim(raw);
        std::vector<Analysis> analyses;
        try {
            for (const auto& upper : apply_up(fst, std::string_view(word)))
                analyses.push_back(parse_analysis(upper, fst.symbols()));
        } catch (const FstError&) {
            // Unknown symbols or non-analysis output: treated as unanalyzable.
        }
        if (analyses.empty()) {
            std::cout << word << '\t' << kUnanalyzable << '\n';
            return;
        }
        for (const Analysis& a : analyses) print_analysis(word, a, format);
    });
}

int cmd_generate(const std::string& fst_path, const std::vector<std::string>& inputs) {
    using namespace fstmorph;
    Transducer fst;
    try {
        fst = load_file(fst_path);
    } catch (const FstError& e) {
        std::cerr << "fstmorph: " << e.what() << '\n';
        return kExitUsage;
    }
    std::size_t succeeded = 0, attempted = 0;
    const int status = for_each_input_line(inputs, [&](const std::string& raw) {
        const std::string line = trim(raw);
        if (line.empty()) return;
        ++attempted;
        try {
            const Analysis a = analysis_of_pattern(parse_display(line));
            const auto surfaces = apply_down_text(fst, upper_string(a));
            if (surfaces.empty()) {
                std::cout << line << '\t' << kUnanalyzable << '\n';
                return;
            }
            for (const std::string& surface : surfaces)
                std::cout << line << '\t' << surface << '\n';
            ++succeeded;
        } catch (const FstError& e) {
            std::cout << line << '\t' << "!error: " << e.what() << '\n';
        }
    });
    if (status != kExitOk) return status;
    return (attempted == 0 || succeeded > 0) ? kExitOk : kExitFailed;
}

int cmd_evaluate(const std::string& fst_path, const std::string& gold_path,
                 const std::string& format) {
    using namespace fstmorph;
    Transducer fst;
    try {
        fst = load_file(fst_path);
    } catch (const FstError& e) {
        std::cerr << "fstmorph: " << e.what() << '\n';
        return kExitUsage;
    }
    std::ifstream gold(gold_path, std::ios::binary);
    if (!gold) {
        std::cerr << "fstmorph: cannot open " << gold_path << '\n';
        return kExitUsage;
    }
    const auto report = eval::evaluate(fst, gold);
    for (const std::string& err : report.row_errors)
        std::cerr << "fstmorph: gold: " << err << '\n';
    if (format == "tsv")
        eval::print_report_tsv(report, std::cout);
    else
        eval::print_report(report, std::cout);
    return report.total_words == 0 ? kExitFailed : kExitOk;
}

int cmd_words(const std::vector<std::string>& inputs, const std::string& sort_order) {
    using namespace fstmorph;
    const auto order = sort_order == "freq" ? corpus::SortOrder::FrequencyDescending
                                            : corpus::SortOrder::Codepoint;
    corpus::WordList all;
    std::vector<std::string> files = inputs;
    if (files.empty()) files.emplace_back("-");
    std::uint64_t types = 0;
    // Merge word lists across inputs by re-extracting over a concatenation.
    std::stringstream merged;
    for (const std::string& path : files) {
        if (path == "-") {
            merged << std::cin.rdbuf();
        } else {
            std::ifstream file(path, std::ios::binary);
            if (!file) {
                std::cerr << "fstmorph: cannot open " << path << '\n';
                return kExitUsage;
            }
            merged << file.rdbuf();
        }
        merged << '\n';
    }
    try {
        all = corpus::extract_words(merged, order);
    } catch (const Utf8Error& e) {
        std::cerr << "fstmorph: " << e.what() << '\n';
        return kExitFailed;
    }
    for (const auto& [word, freq] : all.entries) {
        std::cout << word << '\t' << freq << '\n';
        ++types;
    }
    std::cerr << "types\t" << types << "\ntokens\t" << all.total_tokens << '\n';
    return kExitOk;
}

int cmd_suggest(const std::string& suffixes_path, const std::string& rules_path,
                const std::vector<std::string>& inputs) {
    using namespace fstmorph;
    if (!file_exists(suffixes_path)) {
        std::cerr << "fstmorph: cannot open " << suffixes_path << '\n';
        return kExitUsage;
    }
    std::vector<grammar::SuffixEntry> suffixes;
    std::vector<rules::RewriteRule> cascade;
    try {
        std::ifstream in(suffixes_path, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        suffixes = grammar::parse_suffixes(buffer.str());
        if (!rules_path.empty()) {
            if (!file_exists(rules_path)) {
                std::cerr << "fstmorph: cannot open " << rules_path << '\n';
                return kExitUsage;
            }
            cascade = rules::parse_rule_file(rules_path);
        }
    } catch (const FstError& e) {
        std::cerr << "fstmorph: " << e.what() << '\n';
        return kExitFailed;
    }
    corpus::WordList words;
    const int status = for_each_input_line(inputs, [&](const std::string& raw) {
        // Accept bare words or `word<TAB>freq` rows.
        std::string word = raw;
        const std::size_t tab = word.find('\t');
        if (tab != std::string::npos) word.resize(tab);
        word = trim(word);
        if (word.empty() || word[0] == '#') return;
        words.entries.emplace_back(nfc_normalize(word), 1);
    });
    if (status != kExitOk) return status;
    const auto suggestions = rules_path.empty()
                                 ? corpus::suggest_classes(words, suffixes)
                                 : corpus::suggest_classes(words, suffixes, cascade);
    for (const auto& s : suggestions)
        std::cout << s.word << '\t' << s.candidate_root << '\t' << s.matched_suffix << '\t'
                  << s.candidate_class << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-state morphology toolkit"};
    app.require_subcommand(1);

    std::string roots_path, suffixes_path, rules_path, lexc_path, out_path;
    std::string fst_path, gold_path;
    std::string format = "plain";
    std::string sort_order = "codepoint";
    std::vector<std::string> inputs;

    auto* compile = app.add_subcommand("compile", "compile dictionaries and rules to a transducer");
    compile->add_option("--roots", roots_path, "root dictionary TSV");
    compile->add_option("--suffixes", suffixes_path, "suffix dictionary TSV");
    compile->add_option("--rules", rules_path, "rewrite rule file");
    compile->add_option("--lexc", lexc_path, "compile a lexicon source file instead of dictionaries");
    compile->add_option("-o,--out", out_path, "output transducer file")->required();

    auto* analyze = app.add_subcommand("analyze", "analyze words, one per line");
    analyze->add_option("--fst", fst_path, "compiled transducer")->required();
    analyze->add_option("--format", format, "plain|tsv|structured")
        ->check(CLI::IsMember({"plain", "tsv", "structured"}));
    analyze->add_option("inputs", inputs, "input files (default stdin)");

    auto* generate = app.add_subcommand("generate", "generate surface forms from analyses");
    generate->add_option("--fst", fst_path, "compiled transducer")->required();
    generate->add_option("inputs", inputs, "input files (default stdin)");

    auto* evaluate = app.add_subcommand("evaluate", "score analyses against gold data");
    evaluate->add_option("--fst", fst_path, "compiled transducer")->required();
    evaluate->add_option("--gold", gold_path, "gold TSV: word, category, expected analysis")
        ->required();
    evaluate->add_option("--format", format, "plain|tsv")->check(CLI::IsMember({"plain", "tsv"}));

    auto* words = app.add_subcommand("words", "extract unique words with frequencies");
    words->add_option("--sort", sort_order, "codepoint|freq")
        ->check(CLI::IsMember({"codepoint", "freq"}));
    words->add_option("inputs", inputs, "corpus files (default stdin)");

    auto* suggest = app.add_subcommand("suggest", "suggest classifications by suffix match");
    suggest->add_option("--suffixes", suffixes_path, "suffix dictionary TSV")->required();
    suggest->add_option("--rules", rules_path, "verify suggestions against this rule cascade");
    suggest->add_option("inputs", inputs, "word-list files (default stdin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (compile->parsed()) {
        if (lexc_path.empty() && (roots_path.empty() || suffixes_path.empty())) {
            std::cerr << "fstmorph: compile needs --roots and --suffixes (or --lexc)\n";
            return kExitUsage;
        }
        return cmd_compile(roots_path, suffixes_path, rules_path, lexc_path, out_path);
    }
    if (analyze->parsed()) return cmd_analyze(fst_path, inputs, format);
    if (generate->parsed()) return cmd_generate(fst_path, inputs);
    if (evaluate->parsed()) return cmd_evaluate(fst_path, gold_path, format);
    if (words->parsed()) return cmd_words(inputs, sort_order);
    if (suggest->parsed()) return cmd_suggest(suffixes_path, rules_path, inputs);
    return kExitUsage;
}
