#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "tasselab/dataset_io.hpp"
#include "tasselab/model.hpp"
#include "tasselab/sha256.hpp"
#include "test_support.hpp"

using namespace tasselab;
using testsupport::small_config;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("tasselab_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

}  // namespace

TEST_CASE("sha256 matches the FIPS test vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("PGM writes tea as black and round-trips exactly") {
    TempDir dir("pgm");
    BaseImageSpec spec;
    spec.tea_fraction = 0.37;
    spec.seed = 5;
    const TeaImage img = synthesize_base_image(spec, 17, 9);

    const fs::path file = dir.path / "img.pgm";
    write_pgm(img, file);
    const TeaImage back = read_pgm(file);
    CHECK(back == img);
    CHECK(back.tea_count() == img.tea_count());

    const std::string raw = slurp(file);
    CHECK(raw.substr(0, 3) == "P5\n");
    CHECK(raw.find("17 9\n255\n") != std::string::npos);
}

TEST_CASE("PGM reader rejects malformed files by name") {
    TempDir dir("pgm_bad");

    const fs::path bad_magic = dir.path / "bad_magic.pgm";
    spit(bad_magic, "P2\n2 2\n255\n....");
    CHECK_THROWS_WITH_AS((void)read_pgm(bad_magic), doctest::Contains("bad_magic.pgm"),
                         data_error);
    CHECK_THROWS_WITH_AS((void)read_pgm(bad_magic), doctest::Contains("magic"), data_error);

    const fs::path truncated = dir.path / "short.pgm";
    spit(truncated, std::string("P5\n4 4\n255\n") + std::string(3, '\0'));
    CHECK_THROWS_AS((void)read_pgm(truncated), data_error);

    const fs::path gray = dir.path / "gray.pgm";
    spit(gray, std::string("P5\n1 1\n255\n") + static_cast<char>(128));
    CHECK_THROWS_WITH_AS((void)read_pgm(gray), doctest::Contains("128"), data_error);

    CHECK_THROWS_AS((void)read_pgm(dir.path / "missing.pgm"), data_error);
}

TEST_CASE("dataset export/import is an identity") {
    TempDir dir("roundtrip");
    SimConfig cfg = small_config(12, 3, 2024, 16, 16);
    const Dataset ds = generate_dataset(cfg);

    const ExportManifest manifest = export_dataset(ds, dir.path);
    CHECK(manifest.record_count == 12);
    CHECK(manifest.provenance == ds.provenance);

    // one image per round plus the base image
    CHECK(fs::exists(dir.path / "img_00000.pgm"));
    CHECK(fs::exists(dir.path / "img_00012.pgm"));

    // manifest rows = record count
    const std::string manifest_text = slurp(dir.path / "manifest.csv");
    const auto rows = std::count(manifest_text.begin(), manifest_text.end(), '\n');
    CHECK(rows == 13);  // header + 12 records
    CHECK(manifest_text.find("\r") == std::string::npos);

    const Dataset back = import_dataset(dir.path);
    CHECK(back.provenance == ds.provenance);
    CHECK(back.relabeled == ds.relabeled);
    CHECK(back.base_image == ds.base_image);
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.records[i].round == ds.records[i].round);
        CHECK(back.records[i].label == ds.records[i].label);
        CHECK(back.records[i].image == ds.records[i].image);
    }
}

TEST_CASE("import failures name the offending file") {
    TempDir dir("import_bad");
    const Dataset ds = generate_dataset(small_config(3, 1, 7, 4, 4));
    export_dataset(ds, dir.path);

    SUBCASE("corrupt magic number in one PGM") {
        std::string body = slurp(dir.path / "img_00002.pgm");
        body[0] = 'X';
        spit(dir.path / "img_00002.pgm", body);
        CHECK_THROWS_WITH_AS((void)import_dataset(dir.path),
                             doctest::Contains("img_00002.pgm"), data_error);
    }

    SUBCASE("manifest header broken") {
        spit(dir.path / "manifest.csv", "round,filename,label\n1,img_00001.pgm,1\n");
        CHECK_THROWS_WITH_AS((void)import_dataset(dir.path), doctest::Contains("manifest.csv:1"),
                             data_error);
    }

    SUBCASE("manifest row with wrong tea count names the line") {
        std::string body = slurp(dir.path / "manifest.csv");
        const auto pos = body.rfind(",");
        body = body.substr(0, pos) + ",99999\n";
        spit(dir.path / "manifest.csv", body);
        CHECK_THROWS_WITH_AS((void)import_dataset(dir.path), doctest::Contains(":4"), data_error);
    }

    SUBCASE("a tampered label contradicting the flip formula is rejected") {
        std::string body = slurp(dir.path / "manifest.csv");
        // round 1 is heads (1); flip it to 0
        const auto pos = body.find("1,img_00001.pgm,1");
        REQUIRE(pos != std::string::npos);
        body.replace(pos, 17, "1,img_00001.pgm,0");
        spit(dir.path / "manifest.csv", body);
        CHECK_THROWS_WITH_AS((void)import_dataset(dir.path), doctest::Contains("relabeled"),
                             data_error);
    }

    SUBCASE("non-consecutive rounds are rejected") {
        std::string body = slurp(dir.path / "manifest.csv");
        const auto pos = body.find("2,img_00002.pgm");
        REQUIRE(pos != std::string::npos);
        body.replace(pos, 15, "3,img_00002.pgm");
        spit(dir.path / "manifest.csv", body);
        CHECK_THROWS_WITH_AS((void)import_dataset(dir.path), doctest::Contains("consecutive"),
                             data_error);
    }

    SUBCASE("provenance hash mismatch is rejected") {
        std::string body = slurp(dir.path / "config.json");
        const auto pos = body.find("\"seed\": 7");
        REQUIRE(pos != std::string::npos);
        body.replace(pos, 9, "\"seed\": 8");
        spit(dir.path / "config.json", body);
        CHECK_THROWS_WITH_AS((void)import_dataset(dir.path), doctest::Contains("provenance"),
                             data_error);
    }
}

TEST_CASE("relabeled flag survives the round trip") {
    TempDir dir("relabel_io");
    Dataset ds = generate_dataset(small_config(4, 1, 3, 4, 4));
    ds.relabeled = true;
    ds.records[0].label = FlipOutcome::tails;  // no longer coin_outcome(1)
    export_dataset(ds, dir.path);
    const Dataset back = import_dataset(dir.path);
    CHECK(back.relabeled);
    CHECK(back.records[0].label == FlipOutcome::tails);
}

TEST_CASE("model checkpoints round-trip bit-exactly") {
    TempDir dir("ckpt");
    Xoshiro256ss rng(77);

    for (int variant = 0; variant < 20; ++variant) {
        const bool mlp = variant % 2 == 1;
        const int width = 2 + static_cast<int>(rng.below(6));
        const int height = 2 + static_cast<int>(rng.below(6));
        const auto scheme = static_cast<FeatureScheme>(rng.below(4));
        ModelState m = init_model(mlp ? ModelKind::mlp : ModelKind::linear, scheme, width,
                                  height, mlp ? 1 + static_cast<int>(rng.below(5)) : 0, rng());
        // awkward values should also survive
        if (!m.w2.empty()) m.w2[0] = -0.0;
        m.b2 = 1.0 / 3.0;

        const fs::path file = dir.path / ("model_" + std::to_string(variant) + ".ckpt");
        save_checkpoint(m, file);
        const ModelState back = load_checkpoint(file);
        CHECK(back.bit_identical_to(m));
        CHECK(back.kind == m.kind);
        CHECK(back.scheme == m.scheme);
        CHECK(back.width == m.width);
        CHECK(back.height == m.height);
        CHECK(back.hidden_width == m.hidden_width);
        CHECK(back.init_seed == m.init_seed);
    }
}

TEST_CASE("checkpoint loader rejects garbage") {
    TempDir dir("ckpt_bad");
    const fs::path file = dir.path / "junk.ckpt";
    spit(file, "definitely not a checkpoint");
    CHECK_THROWS_AS((void)load_checkpoint(file), data_error);
}
