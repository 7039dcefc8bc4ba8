#include "test_support.hpp"
#include "typdiv/error.hpp"
#include "typdiv/frame.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace typdiv;
using typdiv::testing::Gen;

namespace {

FeatureMatrix parse(const std::string& text, const BinarizationMap* map = nullptr)
{
    std::istringstream in(text);
    return parse_wide_csv(in, "fixture.csv", map);
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected typdiv::Error");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("wide csv maps tokens to values")
{
    auto m = parse("glottocode,F1,F2,F3\nabcd1234,1,0,?\nefgh5678,0,,no_cov\n");
    REQUIRE(m.num_languages() == 2);
    REQUIRE(m.dimension() == 3);
    CHECK(m.value(0, 0) == FeatureValue::One);
    CHECK(m.value(0, 1) == FeatureValue::Zero);
    CHECK(m.value(0, 2) == FeatureValue::Missing);
    CHECK(m.value(1, 1) == FeatureValue::Missing);
    CHECK(m.value(1, 2) == FeatureValue::Missing);
}

TEST_CASE("wide csv of no_cov cells is entirely missing")
{
    auto m = parse("glottocode,A,B,C,D\nl1,no_cov,no_cov,no_cov,no_cov\nl2,no_cov,no_cov,no_cov,no_cov\n"
                   "l3,no_cov,no_cov,no_cov,no_cov\n");
    for (std::size_t r = 0; r < 3; ++r) CHECK(m.missing_count(r) == 4);
}

TEST_CASE("wide csv errors")
{
    CHECK(kind_of([] { parse("glottocode,F1\ndutc1256,1\ndutc1256,0\n"); }) == ErrorKind::DuplicateLanguage);
    CHECK(kind_of([] { parse("glottocode,F1,F1\nl1,1,0\n"); }) == ErrorKind::DuplicateFeature);
    CHECK(kind_of([] { parse("glottocode,F1,F2\nl1,1\n"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { parse("glottocode,F1\nl1,maybe\n"); }) == ErrorKind::Parse);
    // Multistate tokens are only accepted in mapped columns.
    CHECK(kind_of([] { parse("glottocode,GB024\nl1,Num-N\n"); }) == ErrorKind::Parse);

    try {
        parse("glottocode,F1,F2\nl1,1,0\nl2,0\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("fixture.csv:3") != std::string::npos);
    }
    try {
        parse("glottocode,F1,F2\nl1,1,x\n");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("F2") != std::string::npos);
    }
}

TEST_CASE("cldf pivot, conflicts and outer join")
{
    std::istringstream values("ID,Language_ID,Parameter_ID,Value\n"
                              "1,l1,f1,1\n2,l1,f2,0\n3,l2,f1,?\n");
    std::istringstream languages("ID,Name,Family_name,Latitude,Longitude\nl1,One,Fam,10,20\n");
    CldfData data = parse_cldf(values, languages);
    const auto& m = data.matrix;
    REQUIRE(m.language_ids() == std::vector<std::string>{"l1", "l2"});
    REQUIRE(m.feature_ids() == std::vector<std::string>{"f1", "f2"});
    CHECK(m.value(0, 0) == FeatureValue::One);
    CHECK(m.value(0, 1) == FeatureValue::Zero);
    CHECK(m.value(1, 0) == FeatureValue::Missing);
    CHECK(m.value(1, 1) == FeatureValue::Missing);

    const LanguageRecord* l2 = data.languages.find("l2");
    REQUIRE(l2 != nullptr);
    CHECK_FALSE(l2->family.has_value());
    CHECK_FALSE(l2->has_coordinates());
    REQUIRE(data.languages.find("l1")->family == std::optional<std::string>("Fam"));

    std::istringstream conflicting("Language_ID,Parameter_ID,Value\nl1,f1,1\nl1,f1,0\n");
    std::istringstream empty_langs("ID,Name\n");
    try {
        parse_cldf(conflicting, empty_langs);
        FAIL("expected conflict");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Conflict);
        CHECK(std::string(e.what()).find("(l1, f1)") != std::string::npos);
    }
}

TEST_CASE("language table validation")
{
    std::istringstream dup("glottocode,name\na,A\na,B\n");
    CHECK(kind_of([&] { parse_language_table(dup, "meta"); }) == ErrorKind::DuplicateLanguage);
    std::istringstream bad_lat("glottocode,Latitude,Longitude\na,95,0\n");
    CHECK(kind_of([&] { parse_language_table(bad_lat, "meta"); }) == ErrorKind::Validation);
    std::istringstream quoted("ID,Name,child_count\nabc1,\"Name, with comma\",3\n");
    auto table = parse_language_table(quoted, "meta");
    CHECK(table.find("abc1")->name == "Name, with comma");
    CHECK(table.find("abc1")->child_count == 3);
}

TEST_CASE("default binarization map")
{
    const auto& map = default_binarization_map();
    CHECK_NOTHROW(map.validate());
    CHECK(map.size() == 6);
    for (const auto& source : map.sources()) {
        REQUIRE(map.derived(source).size() == 2);
        CHECK(map.derived(source)[0].id == source + "a");
        CHECK(map.derived(source)[1].id == source + "b");
    }

    // The shipped config file is the same map.
    const auto shipped = std::filesystem::path(TYPDIV_SOURCE_DIR) / "data" / "grambank_binarization.csv";
    std::ifstream in(shipped);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == default_binarization_map_csv());
}

TEST_CASE("binarize GB024")
{
    const auto& map = default_binarization_map().restricted_to(std::vector<std::string>{"GB024"});
    auto m = parse("glottocode,GB020,GB024\nl1,1,Num-N\nl2,0,?\nl3,1,both\nl4,?,2\n", &map);
    CHECK_FALSE(m.is_binary());
    auto b = binarize(m, map);
    REQUIRE(b.feature_ids() == std::vector<std::string>{"GB020", "GB024a", "GB024b"});
    CHECK(b.num_languages() == m.num_languages());
    CHECK(b.value(0, 1) == FeatureValue::One);
    CHECK(b.value(0, 2) == FeatureValue::Zero);
    CHECK(b.value(1, 1) == FeatureValue::Missing);
    CHECK(b.value(1, 2) == FeatureValue::Missing);
    CHECK(b.value(2, 1) == FeatureValue::One);
    CHECK(b.value(2, 2) == FeatureValue::One);
    CHECK(b.value(3, 1) == FeatureValue::Zero);
    CHECK(b.value(3, 2) == FeatureValue::One);
    CHECK(b.value(3, 0) == FeatureValue::Missing);
}

TEST_CASE("binarize errors")
{
    auto m = parse("glottocode,F1\nl1,1\n");
    CHECK(kind_of([&] { binarize(m, default_binarization_map()); }) == ErrorKind::Config);

    BinarizationMap map;
    map.add("S", "S1", "x", FeatureValue::One);
    map.add("S", "S2", "y", FeatureValue::One);
    CHECK(kind_of([&] { map.validate(); }) == ErrorKind::Config);  // x has no image in S2

    BinarizationMap clash;
    clash.add("S", "T", "x", FeatureValue::One);
    clash.add("T", "U", "x", FeatureValue::One);
    CHECK(kind_of([&] { clash.validate(); }) == ErrorKind::Config);
}

TEST_CASE("full Grambank-shaped table binarizes 6 multistate features into pairs")
{
    // 189 binary features plus the six multistate ones.
    std::vector<std::string> features;
    for (int i = 0; i < 189; ++i) features.push_back("B" + std::to_string(i));
    for (const auto& s : default_binarization_map().sources()) features.push_back(s);
    std::ostringstream csv;
    csv << "glottocode";
    for (const auto& f : features) csv << ',' << f;
    csv << "\nl1";
    for (std::size_t i = 0; i < features.size(); ++i) csv << (i < 189 ? ",1" : ",3");
    csv << '\n';
    auto m = parse(csv.str(), &default_binarization_map());
    CHECK(m.dimension() == 195);
    auto b = binarize(m, default_binarization_map());
    CHECK(b.dimension() == 201);
}

TEST_CASE("crop_languages")
{
    std::vector<std::vector<FeatureValue>> rows(3, std::vector<FeatureValue>(10, FeatureValue::One));
    for (int f = 0; f < 3; ++f) rows[0][f] = FeatureValue::Missing;  // 0.30
    auto m = FeatureMatrix::from_rows({"thirty", "full", "quarter"}, {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"},
                                      rows);
    auto cropped = crop_languages(m, 0.25);
    CHECK(cropped.language_ids() == std::vector<std::string>{"full", "quarter"});

    auto q = FeatureMatrix::from_rows({"q"}, {"a", "b", "c", "d"},
                                      {{FeatureValue::Missing, FeatureValue::One, FeatureValue::Zero, FeatureValue::One}});
    CHECK(crop_languages(q, 0.25).num_languages() == 1);
    CHECK(crop_languages(m, 0.0).language_ids() == std::vector<std::string>{"full", "quarter"});
}

TEST_CASE("crop_languages properties")
{
    Gen gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto m = typdiv::testing::random_matrix(gen, 1 + gen.below(30), 1 + gen.below(20), gen.unit() * 0.6);
        const double t = gen.unit();
        auto once = crop_languages(m, t);
        CHECK(once.dimension() == m.dimension());
        CHECK(crop_languages(once, t) == once);
        for (std::size_t r = 0; r < once.num_languages(); ++r) CHECK(once.missing_proportion(r) <= t);
    }
}

TEST_CASE("remove_macrolanguages")
{
    auto m = FeatureMatrix::from_rows({"macr1", "leaf1"}, {"a"}, {{FeatureValue::One}, {FeatureValue::Zero}});
    LanguageTable records({{"macr1", "Macro", {}, {}, {}, {}, 12}, {"leaf1", "Leaf", {}, {}, {}, {}, 0}});
    auto out = remove_macrolanguages(m, records);
    CHECK(out.language_ids() == std::vector<std::string>{"leaf1"});
    CHECK(out.dimension() == m.dimension());

    LanguageTable partial({{"leaf1", "Leaf", {}, {}, {}, {}, 0}});
    try {
        remove_macrolanguages(m, partial);
        FAIL("expected metadata error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Metadata);
        CHECK(std::string(e.what()).find("macr1") != std::string::npos);
    }
}

TEST_CASE("subselect_features")
{
    Gen gen(3);
    auto m = typdiv::testing::random_matrix(gen, 4, 209, 0.1);
    std::vector<std::string> five(m.feature_ids().begin() + 10, m.feature_ids().begin() + 15);
    CHECK(subselect_features(m, five).dimension() == 5);
    CHECK(subselect_features(m, m.feature_ids()) == m);

    std::vector<std::string> reordered = {"F3", "F1"};
    auto r = subselect_features(m, reordered);
    CHECK(r.feature_ids() == reordered);
    CHECK(r.value(2, 0) == m.value(2, 3));

    std::vector<std::string> unknown = {"GB999"};
    CHECK(kind_of([&] { subselect_features(m, unknown); }) == ErrorKind::UnknownFeature);
}

TEST_CASE("wide csv round-trips through save")
{
    Gen gen(99);
    const auto& map = default_binarization_map();
    const char* raw[] = {"1", "2", "3", "Num-N", "N-Num", "both", "?"};
    for (int trial = 0; trial < 20; ++trial) {
        std::ostringstream csv;
        csv << "glottocode,F0,GB024,F1\n";
        const std::size_t n = 1 + gen.below(15);
        for (std::size_t i = 0; i < n; ++i) {
            const char* binary[] = {"0", "1", "?", "no_cov", ""};
            csv << typdiv::testing::lang_id(i) << ',' << binary[gen.below(5)] << ',' << raw[gen.below(7)] << ','
                << binary[gen.below(5)] << '\n';
        }
        auto m = parse(csv.str(), &map);
        std::ostringstream saved;
        save_wide_csv(saved, m);
        CHECK(parse(saved.str(), &map) == m);
    }
}
