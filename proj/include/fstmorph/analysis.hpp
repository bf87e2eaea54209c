// Structured analyses and their textual forms.
//
// The analyzer's upper tape carries `root ^ suffix +Tags...` (bare roots omit
// `^ suffix`). Tags come from a closed vocabulary and are emitted in the
// canonical order POS, mood, number, gender. The display form is
// `root(suffix) + POS [+ Mood] + Number + Gender` with long tag names, e.g.
// `सोनार(इन) + Noun + SG + Feminine`.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "symbol_table.hpp"

namespace fstmorph {

inline constexpr std::string_view kMorphemeBoundary = "^";

enum class Pos { Noun, Adj, Verb, Pron, Adv };
enum class Number { SG, PL };
enum class Gender { Masc, Fem };
enum class Mood { Imperative, Optative };

// Tag symbol texts (the upper-tape vocabulary).
inline const char* tag_of(Pos p) {
    switch (p) {
        case Pos::Noun: return "+Noun";
        case Pos::Adj: return "+Adj";
        case Pos::Verb: return "+Verb";
        case Pos::Pron: return "+Pron";
        case Pos::Adv: return "+Adv";
    }
    return "";
}
inline const char* tag_of(Number n) { return n == Number::SG ? "+SG" : "+PL"; }
inline const char* tag_of(Gender g) { return g == Gender::Masc ? "+Masc" : "+Fem"; }
inline const char* tag_of(Mood m) { return m == Mood::Imperative ? "+Imp" : "+Opt"; }

// Display names (the rendered output vocabulary).
inline const char* display_of(Pos p) {
    switch (p) {
        case Pos::Noun: return "Noun";
        case Pos::Adj: return "Adj";
        case Pos::Verb: return "Verb";
        case Pos::Pron: return "Pron";
        case Pos::Adv: return "Adv";
    }
    return "";
}
inline const char* display_of(Number n) { return n == Number::SG ? "SG" : "PL"; }
inline const char* display_of(Gender g) { return g == Gender::Masc ? "Masculine" : "Feminine"; }
inline const char* display_of(Mood m) {
    return m == Mood::Imperative ? "Imperative" : "Optative";
}

inline std::vector<std::string> all_tags() {
    return {"+Noun", "+Adj", "+Verb", "+Pron", "+Adv", "+SG",
            "+PL",   "+Masc", "+Fem", "+Imp",  "+Opt"};
}

struct Analysis {
    std::string root;
    std::optional<std::string> suffix;  // lexical form, e.g. आइन
    Pos pos = Pos::Noun;
    std::optional<Mood> mood;
    Number number = Number::SG;
    std::optional<Gender> gender;

    friend bool operator==(const Analysis&, const Analysis&) = default;
};

// Canonical tag sequence for an analysis: POS, mood, number, gender.
inline std::vector<std::string> tag_sequence(Pos pos, std::optional<Mood> mood, Number number,
                                             std::optional<Gender> gender) {
    std::vector<std::string> tags{tag_of(pos)};
    if (mood) tags.push_back(tag_of(*mood));
    tags.push_back(tag_of(number));
    if (gender) tags.push_back(tag_of(*gender));
    return tags;
}

// The upper-tape string of an analysis, e.g. "ओझा^आइन+Noun+SG+Fem".
inline std::string upper_string(const Analysis& a) {
    std::string out = a.root;
    if (a.suffix) {
        out += kMorphemeBoundary;
        out += *a.suffix;
    }
    for (const std::string& tag : tag_sequence(a.pos, a.mood, a.number, a.gender)) out += tag;
    return out;
}

namespace detail {

inline std::optional<Pos> pos_of_tag(std::string_view tag) {
    if (tag == "+Noun") return Pos::Noun;
    if (tag == "+Adj") return Pos::Adj;
    if (tag == "+Verb") return Pos::Verb;
    if (tag == "+Pron") return Pos::Pron;
    if (tag == "+Adv") return Pos::Adv;
    return std::nullopt;
}
inline std::optional<Number> number_of_tag(std::string_view tag) {
    if (tag == "+SG") return Number::SG;
    if (tag == "+PL") return Number::PL;
    return std::nullopt;
}
inline std::optional<Gender> gender_of_tag(std::string_view tag) {
    if (tag == "+Masc") return Gender::Masc;
    if (tag == "+Fem") return Gender::Fem;
    return std::nullopt;
}
inline std::optional<Mood> mood_of_tag(std::string_view tag) {
    if (tag == "+Imp") return Mood::Imperative;
    if (tag == "+Opt") return Mood::Optative;
    return std::nullopt;
}

}  // namespace detail

// Splits an upper-tape token sequence at `^` and the tag boundary. Tags may
// appear in any order but each category at most once; a POS tag is required.
inline Analysis parse_analysis(const std::vector<SymbolId>& upper, const SymbolTable& symbols) {
    Analysis a;
    std::optional<Pos> pos;
    std::optional<Number> number;
    bool in_suffix = false;
    bool in_tags = false;
    for (SymbolId id : upper) {
        const std::string& text = symbols.text_of(id);
        if (const auto p = detail::pos_of_tag(text)) {
            if (pos) throw MalformedAnalysisError("duplicate POS tag in analysis");
            pos = p;
            in_tags = true;
        } else if (const auto n = detail::number_of_tag(text)) {
            if (number) throw MalformedAnalysisError("duplicate number tag in analysis");
            number = n;
            in_tags = true;
        } else if (const auto g = detail::gender_of_tag(text)) {
            if (a.gender) throw MalformedAnalysisError("duplicate gender tag in analysis");
            a.gender = g;
            in_tags = true;
        } else if (const auto m = detail::mood_of_tag(text)) {
            if (a.mood) throw MalformedAnalysisError("duplicate mood tag in analysis");
            a.mood = m;
            in_tags = true;
        } else if (text == kMorphemeBoundary) {
            if (in_tags || in_suffix)
                throw MalformedAnalysisError("unexpected morpheme boundary in analysis");
            in_suffix = true;
            a.suffix = std::string();
        } else {
            if (in_tags) throw MalformedAnalysisError("symbol '" + text + "' after tags");
            if (in_suffix)
                *a.suffix += text;
            else
                a.root += text;
        }
    }
    if (a.root.empty()) throw MalformedAnalysisError("analysis has an empty root");
    if (a.suffix && a.suffix->empty())
        throw MalformedAnalysisError("morpheme boundary without a suffix");
    if (!pos) throw MalformedAnalysisError("analysis has no POS tag");
    a.pos = *pos;
    a.number = number.value_or(Number::SG);
    return a;
}

inline Analysis parse_analysis(std::string_view upper_text, const SymbolTable& symbols) {
    return parse_analysis(symbols.tokenize(upper_text), symbols);
}

// Renders the display form, e.g. `चल(उ) + Verb + Imperative + SG + Masculine`.
inline std::string render_analysis(const Analysis& a) {
    std::string out = a.root;
    if (a.suffix) {
        out += '(';
        out += *a.suffix;
        out += ')';
    }
    out += " + ";
    out += display_of(a.pos);
    if (a.mood) {
        out += " + ";
        out += display_of(*a.mood);
    }
    out += " + ";
    out += display_of(a.number);
    if (a.gender) {
        out += " + ";
        out += display_of(*a.gender);
    }
    return out;
}

// A display-form analysis as printed in gold data. Number, gender, and mood
// may be left unspecified (some printed analyses omit them); an unspecified
// category matches anything.
struct DisplayPattern {
    std::string root;
    std::optional<std::string> suffix;
    Pos pos = Pos::Noun;
    std::optional<Mood> mood;
    std::optional<Number> number;
    std::optional<Gender> gender;

    bool matches(const Analysis& a) const {
        if (root != a.root || suffix != a.suffix || pos != a.pos) return false;
        if (number && *number != a.number) return false;
        if (gender && gender != a.gender) return false;
        if (mood && mood != a.mood) return false;
        return true;
    }
};

namespace detail {

inline std::string trim_spaces(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

// Parses a printed analysis like `ओझा(आइन) + Noun + SG + Feminine` or the
// abbreviated `ओझा + N + F`. Throws MalformedAnalysisError on anything else.
inline DisplayPattern parse_display(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t plus = text.find('+', pos);
        parts.push_back(detail::trim_spaces(text.substr(pos, plus - pos)));
        if (plus == std::string_view::npos) break;
        pos = plus + 1;
    }
    if (parts.size() < 2) throw MalformedAnalysisError("analysis needs at least a POS tag");
    DisplayPattern p;
    const std::string& head = parts[0];
    if (head.empty()) throw MalformedAnalysisError("analysis has an empty root");
    const std::size_t open = head.find('(');
    if (open != std::string::npos) {
        if (head.back() != ')' || open == 0)
            throw MalformedAnalysisError("malformed root(suffix) in '" + head + "'");
        p.root = detail::trim_spaces(head.substr(0, open));
        p.suffix = head.substr(open + 1, head.size() - open - 2);
        if (p.suffix->empty()) throw MalformedAnalysisError("empty suffix in '" + head + "'");
    } else {
        p.root = head;
    }
    bool pos_seen = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        std::string tag = parts[i];
        while (!tag.empty() && tag.back() == '.') tag.pop_back();
        std::optional<Pos> as_pos;
        if (tag == "N" || tag == "Noun") as_pos = Pos::Noun;
        else if (tag == "Adj" || tag == "Adjective") as_pos = Pos::Adj;
        else if (tag == "V" || tag == "Verb") as_pos = Pos::Verb;
        else if (tag == "Pron" || tag == "Pronoun") as_pos = Pos::Pron;
        else if (tag == "Adv" || tag == "Adverb") as_pos = Pos::Adv;
        if (as_pos) {
            if (pos_seen) throw MalformedAnalysisError("duplicate POS tag '" + parts[i] + "'");
            p.pos = *as_pos;
            pos_seen = true;
            continue;
        }
        if (tag == "SG" || tag == "Sg") {
            if (p.number) throw MalformedAnalysisError("duplicate number tag");
            p.number = Number::SG;
        } else if (tag == "PL" || tag == "Pl") {
            if (p.number) throw MalformedAnalysisError("duplicate number tag");
            p.number = Number::PL;
        } else if (tag == "M" || tag == "Masc" || tag == "Masculine") {
            if (p.gender) throw MalformedAnalysisError("duplicate gender tag");
            p.gender = Gender::Masc;
        } else if (tag == "F" || tag == "Fem" || tag == "Feminine") {
            if (p.gender) throw MalformedAnalysisError("duplicate gender tag");
            p.gender = Gender::Fem;
        } else if (tag == "Imp" || tag == "Imperative") {
            if (p.mood) throw MalformedAnalysisError("duplicate mood tag");
            p.mood = Mood::Imperative;
        } else if (tag == "Opt" || tag == "Optative") {
            if (p.mood) throw MalformedAnalysisError("duplicate mood tag");
            p.mood = Mood::Optative;
        } else {
            throw MalformedAnalysisError("unknown tag '" + parts[i] + "'");
        }
    }
    if (!pos_seen) throw MalformedAnalysisError("analysis has no POS tag");
    return p;
}

// The analysis a display pattern describes, with unspecified number defaulted
// to SG (used by the generation direction).
inline Analysis analysis_of_pattern(const DisplayPattern& p) {
    Analysis a;
    a.root = p.root;
    a.suffix = p.suffix;
    a.pos = p.pos;
    a.mood = p.mood;
    a.number = p.number.value_or(Number::SG);
    a.gender = p.gender;
    return a;
}

}  // namespace fstmorph
