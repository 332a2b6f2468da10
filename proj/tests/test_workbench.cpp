#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "workbench.hpp"

using namespace sturm;
using namespace sturm::workbench;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Workbench : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("sturm-wb-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

const std::string data_dir = STURM_TEST_DATA;

}  // namespace

TEST(ModelJson, RoundTripIsExact) {
    const DressedModel m = gen_dressed(5, 9);
    const ModelFile back = model_from_json(json::parse(dump(model_to_json(m.pencil, 9))));
    EXPECT_EQ(back.pencil.H, m.pencil.H);
    EXPECT_EQ(back.pencil.W, m.pencil.W);
    EXPECT_EQ(back.pencil.provenance, Provenance::Dressed);
    EXPECT_EQ(back.pencil.label, m.pencil.label);
    ASSERT_TRUE(back.seed.has_value());
    EXPECT_EQ(*back.seed, 9u);
}

TEST(ModelJson, Rejections) {
    json j = model_to_json(canned_incompatible(), std::nullopt);
    j["schemaVersion"] = 2;
    EXPECT_THROW(model_from_json(j), InputError);
    j = model_to_json(canned_incompatible(), std::nullopt);
    j["H"][0] = json::array({1.0});
    EXPECT_THROW(model_from_json(j), InputError);
    j = model_to_json(canned_incompatible(), std::nullopt);
    j["n"] = 3;
    EXPECT_THROW(model_from_json(j), InputError);
}

TEST(Sha256, KnownDigests) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(Workbench, ForgeWritesModelAndTruth) {
    const Result r = invoke({"forge", "dressed", "--n", "6", "--seed", "4", "--out", path("m.json")});
    ASSERT_EQ(r.code, kPass) << r.err;
    EXPECT_NE(r.out.find("sha256=" + sha256_hex(slurp(path("m.json")))), std::string::npos);
    const ModelFile mf = read_model(path("m.json"));
    const DressedModel m = gen_dressed(6, 4);
    EXPECT_EQ(mf.pencil.H, m.pencil.H);
    const auto truth = read_truth(path("m.json"), 6);
    ASSERT_TRUE(truth.has_value());
    EXPECT_EQ(truth->theta_true, m.theta_true);
    EXPECT_EQ(truth->spectrum_true, m.spectrum_true);
}

TEST_F(Workbench, ForgeIsDeterministic) {
    ASSERT_EQ(invoke({"forge", "dressed", "--n", "8", "--seed", "42", "--out", path("a.json")}).code, kPass);
    ASSERT_EQ(invoke({"forge", "dressed", "--n", "8", "--seed", "42", "--out", path("b.json")}).code, kPass);
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    EXPECT_EQ(invoke({"forge", "hermitian", "--n", "4", "--seed", "1"}).out,
              invoke({"forge", "hermitian", "--n", "4", "--seed", "1"}).out);
}

TEST_F(Workbench, ForgeIncompatibleContents) {
    const Result r = invoke({"forge", "incompatible"});
    ASSERT_EQ(r.code, kPass);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["label"], "incompatible-2x2");
    EXPECT_EQ(j["provenance"], "canned");
    EXPECT_FALSE(j.contains("seed"));
    EXPECT_EQ(j["H"], json::parse("[[1.0,0.0],[1.0,0.0],[0.0,0.0],[2.0,0.0]]"));
    EXPECT_EQ(j["W"], json::parse("[[1.0,0.0],[1.0,0.0],[0.0,0.0],[1.0,0.0]]"));
}

TEST_F(Workbench, ForgeInputErrors) {
    EXPECT_EQ(invoke({"forge", "mystery"}).code, kInputError);
    EXPECT_EQ(invoke({"forge", "dressed", "--n", "1"}).code, kInputError);
    EXPECT_EQ(invoke({"forge", "dressed", "--n", "eight"}).code, kInputError);
    EXPECT_EQ(invoke({}).code, kInputError);
}

TEST_F(Workbench, MetricDressedPasses) {
    ASSERT_EQ(invoke({"forge", "dressed", "--n", "8", "--seed", "42", "--out", path("m.json")}).code, kPass);
    const Result r = invoke({"metric", path("m.json"), "--method", "both", "--dress"});
    ASSERT_EQ(r.code, kPass) << r.err << r.out;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_EQ(j["normalization"], "balanced");
    EXPECT_LE(j["methods"]["double-series"]["singleDoubleDisagreement"].get<double>(), 1e-9);
    EXPECT_LE(j["methods"]["double-series"]["mFormDisagreement"].get<double>(), 1e-10);
    EXPECT_EQ(j["methods"]["ground-truth"]["verdict"], "pass");
    EXPECT_LE(j["methods"]["ground-truth"]["spectrumDeviation"].get<double>(), 1e-9);
    EXPECT_LE(j["dressing"]["hResidual"].get<double>(), 1e-9);
    EXPECT_EQ(j["input"]["sha256"], sha256_hex(slurp(path("m.json"))));
    EXPECT_FALSE(j.contains("wallTimeSeconds"));
}

TEST_F(Workbench, MetricReportIsByteIdentical) {
    ASSERT_EQ(invoke({"forge", "dressed", "--n", "6", "--seed", "2", "--out", path("m.json")}).code, kPass);
    const std::vector<std::string> args{"metric", path("m.json"), "--method", "both", "--truncate", path("t.csv")};
    const Result a = invoke(args);
    const std::string csv_a = slurp(path("t.csv"));
    const Result b = invoke(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(csv_a, slurp(path("t.csv")));
    const Result timed = invoke({"metric", path("m.json"), "--timing"});
    EXPECT_TRUE(json::parse(timed.out).contains("wallTimeSeconds"));
}

TEST_F(Workbench, MetricIncompatibleFailsVerification) {
    ASSERT_EQ(invoke({"forge", "incompatible", "--out", path("c.json")}).code, kPass);
    const Result r = invoke({"metric", path("c.json")});
    EXPECT_EQ(r.code, kVerificationFailure);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "fail");
    EXPECT_GT(j["methods"]["single-series"]["hermiticityResidual"].get<double>(), 0.1);
}

TEST_F(Workbench, MetricSingularWeightIsNumericalFailure) {
    const Result r = invoke({"metric", data_dir + "/singular_weight.json"});
    EXPECT_EQ(r.code, kNumericalFailure);
    EXPECT_NE(r.err.find("SingularWeight"), std::string::npos) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["error"]["kind"], "SingularWeight");
    EXPECT_EQ(j["verdict"], "error");
}

TEST_F(Workbench, MetricInputErrors) {
    EXPECT_EQ(invoke({"metric", data_dir + "/malformed.json"}).code, kInputError);
    EXPECT_EQ(invoke({"metric", path("missing.json")}).code, kInputError);
    ASSERT_EQ(invoke({"forge", "hermitian", "--n", "3", "--out", path("h.json")}).code, kPass);
    EXPECT_EQ(invoke({"metric", path("h.json"), "--weights", "1,2"}).code, kInputError);
    EXPECT_EQ(invoke({"metric", path("h.json"), "--weights", "1,-2,3"}).code, kInputError);
    EXPECT_EQ(invoke({"metric", path("h.json"), "--weights", "1,x,3"}).code, kInputError);
    EXPECT_EQ(invoke({"metric", path("h.json"), "--method", "triple"}).code, kInputError);
    std::ofstream(path("junk.json")) << "{ not json";
    EXPECT_EQ(invoke({"metric", path("junk.json")}).code, kInputError);
}

TEST_F(Workbench, TruncationCsv) {
    ASSERT_EQ(invoke({"forge", "dressed", "--n", "16", "--seed", "3", "--out", path("m.json")}).code, kPass);
    ASSERT_EQ(invoke({"metric", path("m.json"), "--truncate", path("t.csv"), "--out", path("r.json")}).code, kPass);
    std::istringstream csv(slurp(path("t.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "K,hermiticity,intertwineH,intertwineW,minEigTheta,minEigThetaW");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        EXPECT_EQ(line.substr(0, line.find(',')), std::to_string(rows));
    }
    EXPECT_EQ(rows, 16);
    const json j = json::parse(slurp(path("r.json")));
    EXPECT_EQ(j["truncation"].size(), 16u);
}

TEST_F(Workbench, LiouvilleIdentityPasses) {
    const Result r = invoke({"liouville", "--map", "identity", "--domain", "-3,5", "--n", "150", "--metric"});
    ASSERT_EQ(r.code, kPass) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["comparison"]["worst"].get<double>(), 0.0);
    EXPECT_EQ(j["metric"]["verdict"], "pass");
}

TEST_F(Workbench, LiouvilleExponentialDefaultRun) {
    const Result r = invoke({"liouville", "--refine"});
    ASSERT_EQ(r.code, kPass) << r.err;
    const json j = json::parse(r.out);
    EXPECT_LE(j["comparison"]["worst"].get<double>(), 5e-3);
    EXPECT_GE(j["refinement"]["ratio"].get<double>(), 2.0);
    EXPECT_EQ(j["refinement"]["N"], 8001);
}

TEST_F(Workbench, LiouvilleInputErrors) {
    EXPECT_EQ(invoke({"liouville", "--n", "2"}).code, kInputError);
    EXPECT_EQ(invoke({"liouville", "--map", "sine"}).code, kInputError);
    EXPECT_EQ(invoke({"liouville", "--potential", "poly:"}).code, kInputError);
    EXPECT_EQ(invoke({"liouville", "--map", "exp", "--domain", "-1,2"}).code, kInputError);
    EXPECT_EQ(invoke({"liouville", "--domain", "3,1"}).code, kInputError);
    EXPECT_EQ(invoke({"liouville", "--n", "10", "--k", "11"}).code, kInputError);
}
