#include "test_support.hpp"
#include "typdiv/error.hpp"
#include "typdiv/persistence.hpp"

#include <doctest.h>

#include <sstream>

using namespace typdiv;
using typdiv::testing::Gen;

TEST_CASE("distance matrix round-trips exactly")
{
    Gen gen(6);
    for (int trial = 0; trial < 10; ++trial) {
        auto dm = build_typ_matrix(typdiv::testing::random_matrix(gen, 1 + gen.below(30), 50, 0.2));
        if (dm.size() > 1 && trial % 2 == 0) dm = normalize_minmax(dm);
        std::ostringstream out;
        save_distance_matrix(out, dm, {{"frame_hash", "abc"}});
        std::istringstream in(out.str());
        CHECK(parse_distance_matrix(in, "dm.csv") == dm);
    }
}

TEST_CASE("distance matrix file layout")
{
    DistanceMatrix dm({"a", "b"}, {0, 0.1, 0.1, 0}, DistanceKind::Geographic, false);
    std::ostringstream out;
    save_distance_matrix(out, dm);
    const std::string text = out.str();
    CHECK(text.find("# kind=geographic\n") != std::string::npos);
    CHECK(text.find("# normalized=false\n") != std::string::npos);
    CHECK(text.find("\na,0,0.10000000000000001\n") != std::string::npos);

    std::istringstream asymmetric("language_id,a,b\na,0,1\nb,2,0\n");
    CHECK_THROWS_AS(parse_distance_matrix(asymmetric, "bad.csv"), Error);
    std::istringstream mismatched("language_id,a,b\nb,0,1\na,1,0\n");
    CHECK_THROWS_AS(parse_distance_matrix(mismatched, "bad.csv"), Error);
}

TEST_CASE("sample files round-trip")
{
    Sample s{{"x", "y", "z"}, Method::Random, 3, 42, 0};
    std::ostringstream out;
    save_sample(out, s, {{"frame_hash", "0123"}});
    CHECK(out.str().find("# seed=42\n") != std::string::npos);
    std::istringstream in(out.str());
    CHECK(parse_sample(in, "s.txt") == s);

    Sample ext{{"x", "y"}, Method::Extension, 2, std::nullopt, 1};
    std::ostringstream out2;
    save_sample(out2, ext);
    std::istringstream in2(out2.str());
    CHECK(parse_sample(in2, "s.txt") == ext);

    std::istringstream bad("# method=bogus\nx\n");
    CHECK_THROWS_AS(parse_sample(bad, "s.txt"), Error);
}

TEST_CASE("auxiliary tables")
{
    auto freq = typdiv::testing::write_temp("freq.csv", "language_id,count\nstan1293,120\nmand1415,40\n");
    auto f = load_frequency_list(freq);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == std::pair<std::string, long long>{"stan1293", 120});

    auto scores = typdiv::testing::write_temp("scores.csv", "language_id,score\na,0.5\nb,0.75\n");
    auto s = load_score_table(scores);
    REQUIRE(s.size() == 2);
    CHECK(s[1].second == 0.75);

    auto ids = typdiv::testing::write_temp("ids.txt", "# wishlist\nabc1\n\nabc2\n");
    CHECK(load_id_list(ids) == std::vector<std::string>{"abc1", "abc2"});

    auto bad = typdiv::testing::write_temp("badfreq.csv", "language_id,count\na,many\n");
    CHECK_THROWS_AS(load_frequency_list(bad), Error);
    try {
        load_sample(typdiv::testing::temp_dir() / "does_not_exist.txt");
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}

TEST_CASE("number formatting")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    CHECK(format_fixed(0.123456, 5) == "0.12346");
    CHECK(format_fixed(1.0 / 3.0, 2) == "0.33");
}
