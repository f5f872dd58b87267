#include <gtest/gtest.h>

#include "support.hpp"

using namespace postvrp;
using namespace testing_support;

namespace {

struct GridFixture : ::testing::Test {
    std::string model_bytes = slurp(data_path("grid.model"));
    StreetModel model = parse_model(model_bytes);
    StreetGraph graph = build_graph(model);
    std::string fp = model_fingerprint(model_bytes);
    Catalog catalog = parse_catalog(slurp(data_path("example.cat")));
};

}

TEST(Catalog, ExampleRows) {
    auto cat = parse_catalog(slurp(data_path("example.cat")));
    ASSERT_EQ(cat.rows.size(), 5u);
    const std::int64_t n[] = {0, 10, 100, 1000, 10000};
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& r = cat.rows[i];
        EXPECT_EQ(r.id, static_cast<std::int64_t>(i));
        EXPECT_EQ(r.n, n[i]);
        EXPECT_EQ(r.k, i == 0 ? 0 : 5);
        EXPECT_EQ(r.w_max, 2941.15);
        EXPECT_EQ(r.seed, 100 + i);
        EXPECT_EQ(r.dir, "ex");
        EXPECT_EQ(r.subdir, "ex_" + std::to_string(n[i]) + "_" + std::to_string(r.k));
    }
    EXPECT_FALSE(cat.hours_to_units);
}

TEST(Catalog, EmptyInput) {
    EXPECT_TRUE(parse_catalog("").rows.empty());
    EXPECT_TRUE(parse_catalog(std::string(catalog_header) + "\n").rows.empty());
}

TEST(Catalog, RowErrors) {
    auto row = [](const std::string& fields) { return parse_catalog(fields + "\n"); };
    EXPECT_THROW(row("0 d s -1 1 10 \"c\" 1 -"), ParseError);
    EXPECT_THROW(row("0 d s 1 -1 10 \"c\" 1 -"), ParseError);
    EXPECT_THROW(row("0 d s 1 1 0 \"c\" 1 -"), ParseError);
    EXPECT_THROW(row("0 d s 1 1 10 c 1 -"), ParseError);
    EXPECT_THROW(row("0 d s 1 1 10 \"c\" 1 abc"), ParseError);
    EXPECT_THROW(row("0 .. s 1 1 10 \"c\" 1 -"), ParseError);
    EXPECT_THROW(row("0 d a/b 1 1 10 \"c\" 1 -"), ParseError);
    EXPECT_THROW(row("0 d s 1 1 10 \"c\" 1"), ParseError);
    EXPECT_THROW(row("0 d s 1 1 10 \"c\" 1 -\n0 e t 1 1 10 \"c\" 2 -"), ParseError);
    EXPECT_THROW(row("0 d s 1 1 10 \"c\" 1 -\nHOURS_TO_UNITS 3"), ParseError);
}

TEST(Catalog, PrintParseRoundTrip) {
    auto cat = parse_catalog(slurp(data_path("example.cat")));
    EXPECT_EQ(parse_catalog(print_catalog(cat)), cat);
    auto toy = preset_catalog(Preset::toy);
    EXPECT_EQ(parse_catalog(print_catalog(toy)), toy);
}

TEST_F(GridFixture, GenerationIsDeterministic) {
    const auto& row = catalog.rows[1];
    auto a = serialize_instance(generate_instance(model, fp, graph, row));
    auto b = serialize_instance(generate_instance(model, fp, graph, row));
    EXPECT_EQ(a, b);
    EXPECT_EQ(md5_hex(a), row.md5);
}

TEST_F(GridFixture, DifferentSeedsDifferentDeliveries) {
    auto row = catalog.rows[2];
    auto a = generate_instance(model, fp, graph, row);
    row.seed += 1;
    auto b = generate_instance(model, fp, graph, row);
    EXPECT_NE(a.deliveries, b.deliveries);
}

TEST_F(GridFixture, ZeroRowIsDepotOnly) {
    auto inst = generate_instance(model, fp, graph, catalog.rows[0]);
    ASSERT_EQ(inst.deliveries.deliveries.size(), 1u);
    auto text = serialize_instance(inst);
    EXPECT_NE(text.find("\nD 7 0.50 +\n"), std::string::npos) << text;
}

TEST_F(GridFixture, SerializeParseRoundTrip) {
    for (const auto& row : catalog.rows) {
        auto inst = generate_instance(model, fp, graph, row);
        auto text = serialize_instance(inst);
        auto back = parse_instance(text);
        back.row.md5 = row.md5;
        EXPECT_EQ(back, inst);
        EXPECT_EQ(serialize_instance(back), text);
        EXPECT_NO_THROW(check_against_graph(back, graph));
    }
}

TEST_F(GridFixture, VerifyStatuses) {
    auto results = verify_catalog(model, fp, graph, catalog);
    ASSERT_EQ(results.size(), 5u);
    for (const auto& r : results)
        EXPECT_EQ(r.status, VerifyStatus::pass) << r.id;

    Catalog tampered = catalog;
    tampered.rows[2].seed = 999;
    tampered.rows[3].md5 = "-";
    results = verify_catalog(model, fp, graph, tampered);
    EXPECT_EQ(results[2].status, VerifyStatus::fail);
    EXPECT_EQ(results[3].status, VerifyStatus::skip);
    EXPECT_EQ(results[3].actual, catalog.rows[3].md5);
    EXPECT_STREQ(to_string(results[2].status), "FAIL");
}

TEST_F(GridFixture, ModelBytesAreHashed) {
    auto results = verify_catalog(model, model_fingerprint(model_bytes + "\n"), graph, catalog);
    for (const auto& r : results)
        EXPECT_EQ(r.status, VerifyStatus::fail);
}

TEST(Fingerprint, HeaderOnlyGolden) {
    // Digest computed independently with Python's hashlib over the same bytes.
    Instance inst;
    inst.row = {0, "ex", "ex_0_0", 0, 0, 2941.15, "", 0, "-"};
    inst.precision = 2;
    inst.model_fingerprint = std::string(32, '0');
    EXPECT_EQ(fingerprint(inst), "3d10d651a4ac7d7036fb5ea83717bc7d");
}

TEST_F(GridFixture, OneByteChangesDigest) {
    auto inst = generate_instance(model, fp, graph, catalog.rows[1]);
    auto text = serialize_instance(inst);
    auto pos = text.rfind('+') != std::string::npos ? text.rfind('+') : text.rfind('-');
    std::string changed = text;
    changed[pos] = changed[pos] == '+' ? '-' : '+';
    EXPECT_NE(md5_hex(text), md5_hex(changed));
}

TEST(InstanceParse, Errors) {
    std::string good = "POSTVRP 1\nID 0\nDIR d\nSUBDIR s\nN 1\nK 1\nWMAX 10\nCOMMENT \"c\"\nSEED 1\nPRECISION 2\nMODEL " +
                       std::string(32, 'a') + "\nD 0 0.50 +\nD 0 0.25 -\n";
    EXPECT_NO_THROW(parse_instance(good));
    auto with = [&](const std::string& from, const std::string& to) {
        std::string t = good;
        t.replace(t.find(from), from.size(), to);
        return t;
    };
    EXPECT_THROW(parse_instance(with("POSTVRP 1", "POSTVRP 2")), ParseError);
    EXPECT_THROW(parse_instance(with("D 0 0.25 -", "D 0 1.25 -")), ParseError);
    EXPECT_THROW(parse_instance(with("D 0 0.25 -", "D 0 0.25 x")), ParseError);
    EXPECT_THROW(parse_instance(with("D 0 0.25 -\n", "")), ValidationError);
    EXPECT_THROW(parse_instance(with("COMMENT \"c\"", "COMMENT c")), ParseError);
    EXPECT_THROW(parse_instance(good.substr(0, 20)), ParseError);
}

TEST(Presets, RowCountsAndRanges) {
    struct Want {
        Preset p;
        const char* file;
        std::size_t rows;
        std::int64_t n_lo, n_hi, k_lo, k_hi;
        double hours;
    };
    const Want wants[] = {{Preset::toy, "toy.cat", 30, 3, 5000, 5, 15, 6},
                          {Preset::normal, "normal.cat", 15, 10000, 14000, 30, 30, 6},
                          {Preset::on_strike, "onstrike.cat", 15, 15000, 19000, 30, 30, 8},
                          {Preset::christmas, "christmas.cat", 18, 20000, 30000, 30, 30, 8}};
    for (const auto& w : wants) {
        auto cat = parse_catalog(slurp(data_path(std::string("presets/") + w.file)));
        EXPECT_EQ(cat, preset_catalog(w.p)) << w.file;
        ASSERT_EQ(cat.rows.size(), w.rows) << w.file;
        ASSERT_TRUE(cat.hours_to_units);
        EXPECT_EQ(cat.rows.front().n, w.n_lo);
        EXPECT_EQ(cat.rows.back().n, w.n_hi);
        EXPECT_EQ(cat.rows.front().k, w.k_lo);
        EXPECT_EQ(cat.rows.back().k, w.k_hi);
        for (const auto& r : cat.rows) {
            EXPECT_GE(r.n, w.n_lo);
            EXPECT_LE(r.n, w.n_hi);
            EXPECT_EQ(r.w_max, w.hours * *cat.hours_to_units);
        }
    }
}
