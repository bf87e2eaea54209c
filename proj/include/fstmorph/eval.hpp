// Accuracy evaluation against gold data.
//
// Gold rows are `word<TAB>category<TAB>expected-analysis`. A word counts as
// correct when the expected analysis, normalized for tag-abbreviation
// variants, is among the analyses the transducer produces. Results are
// grouped by category with integer percentages.
#pragma once

#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"
#include "transducer.hpp"

namespace fstmorph {
namespace eval {

struct CategoryRow {
    std::string category;
    std::uint64_t words = 0;
    std::uint64_t correct = 0;

    int percentage() const {
        if (words == 0) return 0;
        return static_cast<int>((correct * 100 + words / 2) / words);
    }
};

struct EvalReport {
    std::vector<CategoryRow> rows;  // category order of first appearance
    std::uint64_t total_words = 0;
    std::uint64_t total_correct = 0;
    std::uint64_t skipped_rows = 0;
    std::vector<std::string> row_errors;

    int percentage() const {
        if (total_words == 0) return 0;
        return static_cast<int>((total_correct * 100 + total_words / 2) / total_words);
    }
};

namespace detail {

inline std::string normalize_category(const std::string& raw) {
    std::string c = raw;
    while (!c.empty() && c.back() == '.') c.pop_back();
    if (c == "Noun" || c == "N") return "Noun";
    if (c == "Adjective" || c == "Adj") return "Adjective";
    if (c == "Verb" || c == "V") return "Verb";
    if (c == "Pronoun" || c == "Pron") return "Pronoun";
    if (c == "Adverb" || c == "Adv") return "Adverb";
    return std::string();
}

}  // namespace detail

inline EvalReport evaluate(const Transducer& fst, std::istream& gold) {
    EvalReport report;
    std::map<std::string, std::size_t> row_index;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(gold, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line) {
            if (c != ' ' && c != '\t') {
                blank = (c == '#');
                break;
            }
        }
        if (blank || line.empty()) continue;

        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                           : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            report.row_errors.push_back("line " + std::to_string(line_no) +
                                        ": expected word<TAB>category<TAB>analysis");
            ++report.skipped_rows;
            continue;
        }
        const std::string word = line.substr(0, tab1);
        const std::string category = detail::normalize_category(
            line.substr(tab1 + 1, tab2 - tab1 - 1));
        const std::string expected = line.substr(tab2 + 1);
        if (word.empty() || category.empty()) {
            report.row_errors.push_back("line " + std::to_string(line_no) +
                                        ": bad word or category");
            ++report.skipped_rows;
            continue;
        }
        DisplayPattern pattern;
        try {
            pattern = parse_display(expected);
        } catch (const MalformedAnalysisError& e) {
            report.row_errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
            ++report.skipped_rows;
            continue;
        }

        auto it = row_index.find(category);
        if (it == row_index.end()) {
            it = row_index.emplace(category, report.rows.size()).first;
            report.rows.push_back({category, 0, 0});
        }
        CategoryRow& row = report.rows[it->second];
        ++row.words;
        ++report.total_words;

        bool correct = false;
        try {
            for (const auto& upper : apply_up(fst, std::string_view(word))) {
                if (pattern.matches(parse_analysis(upper, fst.symbols()))) {
                    correct = true;
                    break;
                }
            }
        } catch (const FstError&) {
            // Unanalyzable (unknown symbols, malformed output): counts as wrong.
        }
        if (correct) {
            ++row.correct;
            ++report.total_correct;
        }
    }
    return report;
}

inline void print_report(const EvalReport& report, std::ostream& out) {
    out << std::left << std::setw(24) << "Category" << std::right << std::setw(8) << "Words"
        << std::setw(10) << "Correct" << std::setw(10) << "Percent" << '\n';
    for (const CategoryRow& row : report.rows) {
        out << std::left << std::setw(24) << row.category << std::right << std::setw(8)
            << row.words << std::setw(10) << row.correct << std::setw(9) << row.percentage()
            << "%" << '\n';
    }
    out << std::left << std::setw(24) << "Overall" << std::right << std::setw(8)
        << report.total_words << std::setw(10) << report.total_correct << std::setw(9)
        << report.percentage() << "%" << '\n';
    if (report.skipped_rows > 0)
        out << "(skipped " << report.skipped_rows << " malformed gold rows)\n";
}

inline void print_report_tsv(const EvalReport& report, std::ostream& out) {
    for (const CategoryRow& row : report.rows)
        out << row.category << '\t' << row.words << '\t' << row.correct << '\t'
            << row.percentage() << '\n';
    out << "Overall\t" << report.total_words << '\t' << report.total_correct << '\t'
        << report.percentage() << '\n';
}

}  // namespace eval
}  // namespace fstmorph
