#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "fstmorph/fstmorph.hpp"
#include "support/oracles.hpp"

using namespace fstmorph;
using grammar::Dictionaries;
using grammar::RootEntry;
using grammar::SuffixEntry;
using testsupport::enumerate_relation;

namespace {

const std::string kDataDir = FSTMORPH_DATA_DIR;

const Dictionaries& bundled_dictionaries() {
    static const Dictionaries dicts =
        grammar::load_dictionaries(kDataDir + "/roots.tsv", kDataDir + "/suffixes.tsv");
    return dicts;
}

const std::vector<rules::RewriteRule>& bundled_rules() {
    static const auto cascade = rules::parse_rule_file(kDataDir + "/rules.rul");
    return cascade;
}

const Transducer& bundled_analyzer() {
    static const Transducer fst =
        grammar::build_analyzer(bundled_dictionaries(), bundled_rules());
    return fst;
}

std::vector<std::string> analyses_of(const Transducer& fst, const std::string& word) {
    std::vector<std::string> out;
    for (const auto& upper : apply_up(fst, std::string_view(word)))
        out.push_back(fst.symbols().join(upper));
    return out;
}

// Temp dictionary pair with one duplicate root row and one unused class.
struct TestDictFiles {
    std::filesystem::path dir;
    std::string roots;
    std::string suffixes;

    TestDictFiles() {
        dir = std::filesystem::temp_directory_path() /
              ("fstmorph-grammar-" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
        roots = (dir / "roots.tsv").string();
        suffixes = (dir / "suffixes.tsv").string();
        std::ofstream r(roots);
        r << "बाघ\tNoun\tn_in\tMasc\nबाघ\tNoun\tn_in\tMasc\n";
        std::ofstream s(suffixes);
        s << "इन\tn_in\t+Fem,+SG\nनी\tunused\t+Fem,+SG\n";
    }
    ~TestDictFiles() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
};

}  // namespace

TEST_CASE("parse_roots reads lemma, pos, class, and gender") {
    const auto roots = grammar::parse_roots("बाघ\tNoun\tanimate_masc\tMasc\n");
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].lemma == "बाघ");
    CHECK_FALSE(roots[0].surface_stem.has_value());
    CHECK(roots[0].pos == Pos::Noun);
    CHECK(roots[0].inflection_class == "animate_masc");
    CHECK(roots[0].inherent_gender == Gender::Masc);
}

TEST_CASE("parse_roots reads irregular stems and classless rows") {
    const auto roots = grammar::parse_roots("जा:ज\tVerb\tv_opt_o\nओझैली\tNoun\t-\tMasc\n");
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].lemma == "जा");
    REQUIRE(roots[0].surface_stem.has_value());
    CHECK(*roots[0].surface_stem == "ज");
    CHECK(roots[0].stem() == "ज");
    CHECK_FALSE(roots[0].inherent_gender.has_value());
    CHECK(roots[1].inflection_class == "-");
}

TEST_CASE("parse_suffixes reads the dual-field rows") {
    const auto suffixes = grammar::parse_suffixes("इन\tanimate_masc\t+Fem,+SG\n");
    REQUIRE(suffixes.size() == 1);
    CHECK(suffixes[0].form == "इन");
    CHECK(suffixes[0].applicable_class == "animate_masc");
    CHECK(suffixes[0].gender == Gender::Fem);
    CHECK(suffixes[0].number == Number::SG);
    CHECK_FALSE(suffixes[0].mood.has_value());
}

TEST_CASE("an empty suffix file is an empty list") {
    CHECK(grammar::parse_suffixes("").empty());
    CHECK(grammar::parse_suffixes("# only comments\n\n").empty());
}

TEST_CASE("dictionary rows with bad shape or tags are rejected") {
    CHECK_THROWS_AS(grammar::parse_roots("बाघ\tNoun\n"), grammar::ParseError);
    CHECK_THROWS_AS(grammar::parse_roots("बाघ\tNoun\tcls\tMasc\textra\n"), grammar::ParseError);
    CHECK_THROWS_AS(grammar::parse_roots("बाघ\tVerbish\tcls\n"), grammar::UnknownTagError);
    CHECK_THROWS_AS(grammar::parse_roots("बाघ\tNoun\tcls\tNeuter\n"), grammar::UnknownTagError);
    CHECK_THROWS_AS(grammar::parse_suffixes("इन\tcls\t+Bogus\n"), grammar::UnknownTagError);
    CHECK_THROWS_AS(grammar::parse_suffixes("इन\tcls\t+SG,+PL\n"), grammar::ParseError);
    try {
        grammar::parse_suffixes("इन\tcls\t+Fem\nनी\tcls\t+Bogus\n");
        FAIL("expected UnknownTagError");
    } catch (const grammar::UnknownTagError& e) {
        CHECK(e.line == 2);
        CHECK(e.tag == "+Bogus");
    }
}

TEST_CASE("load_dictionaries validates classes across files") {
    CHECK_THROWS_AS(
        grammar::load_dictionaries(kDataDir + "/roots.tsv", kDataDir + "/gold.tsv"),
        FstError);
    const Dictionaries& dicts = bundled_dictionaries();
    CHECK(dicts.roots.size() == 17);
    CHECK(dicts.suffixes.size() == 15);
    CHECK(dicts.warnings.empty());
}

TEST_CASE("duplicate rows and unused classes are warnings, not errors") {
    TestDictFiles files;
    const auto dicts = grammar::load_dictionaries(files.roots, files.suffixes);
    REQUIRE(dicts.warnings.size() == 2);
    std::string joined;
    for (const auto& w : dicts.warnings) joined += w + "\n";
    CHECK(joined.find("duplicate root") != std::string::npos);
    CHECK(joined.find("'unused'") != std::string::npos);
}

TEST_CASE("load_dictionaries reports a missing file by name") {
    try {
        grammar::load_dictionaries(kDataDir + "/no_such_file.tsv", kDataDir + "/suffixes.tsv");
        FAIL("expected FstError");
    } catch (const FstError& e) {
        CHECK(std::string(e.what()).find("no_such_file.tsv") != std::string::npos);
    }
}

TEST_CASE("the generated lexicon validates cleanly and compiles acyclic") {
    const Dictionaries& dicts = bundled_dictionaries();
    const lexc::LexiconAst ast = grammar::generate_lexicon(dicts.roots, dicts.suffixes);
    CHECK(lexc::validate(ast).empty());
    const Transducer t = lexc::compile(ast);
    CHECK_FALSE(is_cyclic(t));
    CHECK(enumerate_relation(t) == testsupport::expand_lexicon_chains(ast));
}

TEST_CASE("build_analyzer on a minimal grammar matches the attested pair") {
    const std::vector<RootEntry> roots{
        {"ओझा", std::nullopt, Pos::Noun, "n_ain", Gender::Masc, 1}};
    const std::vector<SuffixEntry> suffixes{
        {"आइन", "n_ain", std::nullopt, Number::SG, Gender::Fem, 1}};
    const Transducer fst = grammar::build_analyzer(roots, suffixes, bundled_rules());
    CHECK(analyses_of(fst, "ओझाइन") == std::vector<std::string>{"ओझा^आइन+Noun+SG+Fem"});
    CHECK(analyses_of(fst, "ओझा") == std::vector<std::string>{"ओझा+Noun+SG+Masc"});
    CHECK(apply_down_text(fst, "ओझा^आइन+Noun+SG+Fem") == std::vector<std::string>{"ओझाइन"});
}

TEST_CASE("build_analyzer with empty dictionaries yields the empty relation") {
    const Transducer fst = grammar::build_analyzer({}, {}, bundled_rules());
    CHECK(enumerate_relation(fst).empty());
}

TEST_CASE("the bundled analyzer is acyclic and analyzes the verb forms") {
    const Transducer& fst = bundled_analyzer();
    CHECK_FALSE(is_cyclic(fst));
    CHECK(analyses_of(fst, "चलू") == std::vector<std::string>{"चल^उ+Verb+Imp+SG+Masc"});
    CHECK(analyses_of(fst, "जो") == std::vector<std::string>{"जा^ओ+Verb+Opt+SG+Masc"});
    CHECK(analyses_of(fst, "अइलीह") == std::vector<std::string>{"अईल^ईह+Verb+SG+Fem"});
}

TEST_CASE("gender suffixation holds for the animate nouns") {
    const Transducer& fst = bundled_analyzer();
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"बाघिन", "बाघ"}, {"जातिन", "जात"}, {"दासिन", "दास"}};
    for (const auto& [feminine, masculine] : pairs) {
        const auto results = apply_up(fst, std::string_view(feminine));
        REQUIRE(results.size() == 1);
        const Analysis a = parse_analysis(results[0], fst.symbols());
        CHECK(a.root == masculine);
        CHECK(a.gender == Gender::Fem);
    }
}

TEST_CASE("every dictionary combination round-trips through the analyzer") {
    const Dictionaries& dicts = bundled_dictionaries();
    const Transducer& fst = bundled_analyzer();
    std::size_t combinations = 0;
    for (const RootEntry& root : dicts.roots) {
        if (root.inflection_class == std::string(grammar::kNoClass)) continue;
        for (const SuffixEntry& suffix : dicts.suffixes) {
            if (suffix.applicable_class != root.inflection_class) continue;
            ++combinations;
            Analysis expected;
            expected.root = root.lemma;
            expected.suffix = suffix.form;
            expected.pos = root.pos;
            expected.mood = suffix.mood;
            expected.number = suffix.number.value_or(Number::SG);
            expected.gender = suffix.gender;

            const auto surfaces = apply_down_text(fst, upper_string(expected));
            REQUIRE(surfaces.size() == 1);
            bool recovered = false;
            for (const auto& upper : apply_up(fst, std::string_view(surfaces[0])))
                if (parse_analysis(upper, fst.symbols()) == expected) recovered = true;
            CHECK(recovered);
        }
    }
    CHECK(combinations == 18);
}

TEST_CASE("rendering round-trips over everything the analyzer can emit") {
    const Transducer& fst = bundled_analyzer();
    const auto relation = enumerate_relation(fst);
    CHECK(relation.size() >= 26);
    for (const auto& [upper, lower] : relation) {
        const Analysis a = parse_analysis(upper, fst.symbols());
        // Well-formedness: parse_analysis enforces single tags per category.
        const DisplayPattern p = parse_display(render_analysis(a));
        CHECK(p.matches(a));
        CHECK(upper_string(a) == upper);
    }
}

TEST_CASE("bare analyses exist only for roots with an inherent gender") {
    const Transducer& fst = bundled_analyzer();
    CHECK(analyses_of(fst, "ओझागिरी") == std::vector<std::string>{"ओझागिरी+Noun+SG+Masc"});
    CHECK(analyses_of(fst, "ओझैली") == std::vector<std::string>{"ओझैली+Noun+SG+Masc"});
    CHECK(analyses_of(fst, "निक").empty());
    CHECK(analyses_of(fst, "चल").empty());
    CHECK(analyses_of(fst, "जरल").empty());
}

TEST_CASE("class and data errors in the builder are reported") {
    const std::vector<RootEntry> noun{{"बाघ", std::nullopt, Pos::Noun, "mixed", Gender::Masc, 1}};
    const std::vector<RootEntry> verb{{"चल", std::nullopt, Pos::Verb, "mixed", std::nullopt, 2}};
    std::vector<RootEntry> both = noun;
    both.push_back(verb[0]);
    const std::vector<SuffixEntry> suffixes{
        {"इन", "mixed", std::nullopt, Number::SG, Gender::Fem, 1}};
    CHECK_THROWS_AS(grammar::build_analyzer(both, suffixes, {}), grammar::GrammarError);

    // Nominal suffixes must carry gender and number.
    const std::vector<SuffixEntry> bare_features{
        {"इन", "mixed", std::nullopt, std::nullopt, std::nullopt, 1}};
    CHECK_THROWS_AS(grammar::build_analyzer(noun, bare_features, {}), grammar::GrammarError);
}
