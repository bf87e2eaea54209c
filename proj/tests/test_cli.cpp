// End-to-end tests of the fstmorph binary: every subcommand, the streaming
// formats, and the exit-status contract.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = FSTMORPH_CLI_PATH;
const std::string kDataDir = FSTMORPH_DATA_DIR;

struct RunResult {
    int status = -1;
    std::string output;  // stdout only
};

RunResult run(const std::string& command) {
    RunResult result;
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
    const int raw = pclose(pipe);
    result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fstmorph-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name, const std::string& contents) const {
        const fs::path p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << contents;
        return p.string();
    }
    static inline int counter = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::string& compiled_fst() {
    static const TempDir dir;
    static const std::string path = [] {
        const std::string out = (dir.path / "maithili.fst").string();
        const RunResult r = run(kCli + " compile --roots " + kDataDir + "/roots.tsv" +
                                " --suffixes " + kDataDir + "/suffixes.tsv" + " --rules " +
                                kDataDir + "/rules.rul -o " + out);
        REQUIRE(r.status == 0);
        return out;
    }();
    return path;
}

}  // namespace

TEST_CASE("compile writes a transducer and reports its size") {
    TempDir dir;
    const std::string out = (dir.path / "g.fst").string();
    const RunResult r = run(kCli + " compile --roots " + kDataDir + "/roots.tsv" +
                            " --suffixes " + kDataDir + "/suffixes.tsv" + " --rules " +
                            kDataDir + "/rules.rul -o " + out);
    CHECK(r.status == 0);
    CHECK(r.output.find("states") != std::string::npos);
    CHECK(fs::file_size(out) > 0);
}

TEST_CASE("recompiling produces a byte-identical transducer") {
    TempDir dir;
    const std::string a = (dir.path / "a.fst").string();
    const std::string b = (dir.path / "b.fst").string();
    const std::string cmd = kCli + " compile --roots " + kDataDir + "/roots.tsv" +
                            " --suffixes " + kDataDir + "/suffixes.tsv" + " --rules " +
                            kDataDir + "/rules.rul -o ";
    REQUIRE(run(cmd + a).status == 0);
    REQUIRE(run(cmd + b).status == 0);
    CHECK(read_file(a) == read_file(b));
    CHECK(!read_file(a).empty());
}

TEST_CASE("compile exits 2 when an input file is missing") {
    TempDir dir;
    const RunResult r = run(kCli + " compile --roots " + dir.path.string() +
                            "/absent.tsv --suffixes " + kDataDir + "/suffixes.tsv -o " +
                            (dir.path / "x.fst").string());
    CHECK(r.status == 2);
}

TEST_CASE("compile reports undeclared classes") {
    TempDir dir;
    const std::string roots = dir.file("roots.tsv", "बाघ\tNoun\tno_such_class\tMasc\n");
    const std::string suffixes = dir.file("suffixes.tsv", "इन\tn_in\t+Fem,+SG\n");
    const RunResult r = run(kCli + " compile --roots " + roots + " --suffixes " + suffixes +
                            " -o " + (dir.path / "x.fst").string());
    CHECK(r.status == 1);
}

TEST_CASE("compile accepts a lexicon source file") {
    TempDir dir;
    const std::string lexc = dir.file("words.lexc",
                                      "Multichar_Symbols +Noun\n"
                                      "LEXICON Root\n"
                                      "ओझा Tags ;\n"
                                      "LEXICON Tags\n"
                                      "+Noun:0 # ;\n");
    const std::string out = (dir.path / "l.fst").string();
    REQUIRE(run(kCli + " compile --lexc " + lexc + " -o " + out).status == 0);
    const std::string words = dir.file("in.txt", "ओझा\n");
    const RunResult r = run(kCli + " analyze --fst " + out + " " + words);
    CHECK(r.status == 0);
    CHECK(r.output.find("ओझा") != std::string::npos);
}

TEST_CASE("analyze renders one line per analysis with the word prefix") {
    TempDir dir;
    const std::string words = dir.file("in.txt", "ओझाइन\nनिकहा\nxyz\n");
    const RunResult r = run(kCli + " analyze --fst " + compiled_fst() + " " + words);
    CHECK(r.status == 0);
    CHECK(r.output ==
          "ओझाइन\tओझा(आइन) + Noun + SG + Feminine\n"
          "निकहा\tनिक(हा) + Adj + SG + Masculine\n"
          "xyz\t+?\n");
}

TEST_CASE("analyze reads stdin and supports structured output") {
    const RunResult r = run("echo चलू | " + kCli + " analyze --format structured --fst " +
                            compiled_fst());
    CHECK(r.status == 0);
    CHECK(r.output ==
          "word=चलू root=चल suffix=उ pos=Verb mood=Imperative number=SG gender=Masculine\n");

    const RunResult tsv = run("echo चलू | " + kCli + " analyze --format tsv --fst " +
                              compiled_fst());
    CHECK(tsv.output == "चलू\tचल\tउ\tVerb\tImperative\tSG\tMasculine\n");
}

TEST_CASE("analyze keeps streaming past unanalyzable words") {
    TempDir dir;
    const std::string words = dir.file("in.txt", "zz\nओझा\nzz\n");
    const RunResult r = run(kCli + " analyze --fst " + compiled_fst() + " " + words);
    CHECK(r.status == 0);
    CHECK(r.output == "zz\t+?\nओझा\tओझा + Noun + SG + Masculine\nzz\t+?\n");
}

TEST_CASE("analyze exits 2 on a missing transducer file") {
    const RunResult r = run("echo x | " + kCli + " analyze --fst /nonexistent.fst");
    CHECK(r.status == 2);
}

TEST_CASE("generate maps analyses back to surface forms") {
    TempDir dir;
    const std::string lines = dir.file(
        "in.txt", "चल(उ) + Verb + Imperative + SG + Masculine\nजा(ओ) + Verb + Optative + SG + Masculine\n");
    const RunResult r = run(kCli + " generate --fst " + compiled_fst() + " " + lines);
    CHECK(r.status == 0);
    CHECK(r.output ==
          "चल(उ) + Verb + Imperative + SG + Masculine\tचलू\n"
          "जा(ओ) + Verb + Optative + SG + Masculine\tजो\n");
}

TEST_CASE("generate reports malformed lines and keeps going") {
    TempDir dir;
    const std::string lines = dir.file("in.txt",
                                       "not an analysis\n"
                                       "ओझा + Noun + SG + Masculine\n");
    const RunResult r = run(kCli + " generate --fst " + compiled_fst() + " " + lines);
    CHECK(r.status == 0);  // one line succeeded
    CHECK(r.output.find("!error") != std::string::npos);
    CHECK(r.output.find("ओझा + Noun + SG + Masculine\tओझा\n") != std::string::npos);
}

TEST_CASE("generate exits 1 when nothing succeeds") {
    TempDir dir;
    const std::string lines = dir.file("in.txt", "garbage\n");
    const RunResult r = run(kCli + " generate --fst " + compiled_fst() + " " + lines);
    CHECK(r.status == 1);
}

TEST_CASE("analyze then generate round-trips the bundled surface forms") {
    TempDir dir;
    const std::string surface_words =
        "ओझा\nओझागिरी\nओझाइन\nओझैली\nबाघ\nबाघिन\nजात\nजातिन\nदास\nदासिन\n"
        "मास्टर\nमास्टरनी\nसोनार\nसोनारिन\nनिकहा\nनिकही\nजरलाहा\nजरलाही\nमोटका\nमोटकी\n"
        "अईलाह\nअइलीह\nचलू\nचलह\nजाई\nजो\n";
    const std::string words = dir.file("words.txt", surface_words);
    const RunResult analyzed = run(kCli + " analyze --fst " + compiled_fst() + " " + words);
    REQUIRE(analyzed.status == 0);

    // Feed the rendered analyses back through generate.
    std::string analyses;
    std::istringstream lines(analyzed.output);
    std::string line;
    std::vector<std::string> inputs;
    while (std::getline(lines, line)) {
        const auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        inputs.push_back(line.substr(0, tab));
        analyses += line.substr(tab + 1);
        analyses += '\n';
    }
    const std::string analyses_file = dir.file("analyses.txt", analyses);
    const RunResult generated = run(kCli + " generate --fst " + compiled_fst() + " " +
                                    analyses_file);
    REQUIRE(generated.status == 0);
    std::istringstream gen_lines(generated.output);
    std::size_t index = 0;
    while (std::getline(gen_lines, line)) {
        const auto tab = line.rfind('\t');
        REQUIRE(tab != std::string::npos);
        CHECK(line.substr(tab + 1) == inputs[index]);
        ++index;
    }
    CHECK(index == inputs.size());
}

TEST_CASE("evaluate prints a per-category report at 100 percent") {
    const RunResult r = run(kCli + " evaluate --fst " + compiled_fst() + " --gold " + kDataDir +
                            "/gold.tsv");
    CHECK(r.status == 0);
    for (const char* needle : {"Noun", "Adjective", "Verb", "Overall", "100%"})
        CHECK(r.output.find(needle) != std::string::npos);

    const RunResult tsv = run(kCli + " evaluate --format tsv --fst " + compiled_fst() +
                              " --gold " + kDataDir + "/gold.tsv");
    CHECK(tsv.status == 0);
    CHECK(tsv.output.find("Overall\t20\t20\t100") != std::string::npos);
}

TEST_CASE("evaluate exits 1 on an empty gold file") {
    TempDir dir;
    const std::string gold = dir.file("gold.tsv", "# empty\n");
    const RunResult r = run(kCli + " evaluate --fst " + compiled_fst() + " --gold " + gold);
    CHECK(r.status == 1);
}

TEST_CASE("evaluate counts a wrong gold row against its category") {
    TempDir dir;
    const std::string gold = dir.file("gold.tsv",
                                      "ओझा\tNoun\tओझा + Noun + SG + Masculine\n"
                                      "ओझाइन\tNoun\tWRONG(इन) + Noun\n");
    const RunResult r = run(kCli + " evaluate --format tsv --fst " + compiled_fst() +
                            " --gold " + gold);
    CHECK(r.status == 0);
    CHECK(r.output.find("Noun\t2\t1\t50") != std::string::npos);
}

TEST_CASE("words extracts, counts, and sorts") {
    TempDir dir;
    const std::string corpus = dir.file("c.txt", "ओझा ओझा ओझाइन। बाघ\n");
    const RunResult r = run(kCli + " words " + corpus);
    CHECK(r.status == 0);
    CHECK(r.output == "ओझा\t2\nओझाइन\t1\nबाघ\t1\n");

    const RunResult freq = run(kCli + " words --sort freq " + corpus);
    CHECK(freq.output == "ओझा\t2\nओझाइन\t1\nबाघ\t1\n");
}

TEST_CASE("suggest emits candidate decompositions as TSV") {
    TempDir dir;
    const std::string words = dir.file("w.txt", "बाघिन\n");
    const RunResult r = run(kCli + " suggest --suffixes " + kDataDir + "/suffixes.tsv " + words);
    CHECK(r.status == 0);
    CHECK(r.output.find("बाघिन\tबाघ\tइन\tn_in\n") != std::string::npos);

    const RunResult verified = run(kCli + " suggest --suffixes " + kDataDir +
                                   "/suffixes.tsv --rules " + kDataDir + "/rules.rul " + words);
    CHECK(verified.status == 0);
    CHECK(verified.output.find("बाघिन\tबाघ\tइन\tn_in\n") != std::string::npos);
}

TEST_CASE("usage errors exit with status 2") {
    CHECK(run(kCli).status == 2);
    CHECK(run(kCli + " analyze").status == 2);
    CHECK(run(kCli + " compile -o /tmp/x.fst").status == 2);
    CHECK(run(kCli + " nonsense").status == 2);
}
