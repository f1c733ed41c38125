#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

// MAPX_BIN and FIXTURES_DIR are injected by the build.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

RunResult run_mapx(const std::string& args) {
    std::string command = std::string(MAPX_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buffer[4096];
    std::size_t n = 0;
    while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.output.append(buffer, n);
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<nlohmann::json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<nlohmann::json> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) records.push_back(nlohmann::json::parse(line));
    }
    return records;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help lists every subcommand") {
    RunResult result = run_mapx("--help");
    CHECK(result.exit_code == 0);
    for (const char* sub : {"synth", "train", "predict", "explain", "evaluate", "degrade",
                            "temporal"}) {
        CAPTURE(sub);
        CHECK(result.output.find(sub) != std::string::npos);
    }
}

TEST_CASE("bad invocations exit nonzero with a diagnostic") {
    CHECK(run_mapx("synth").exit_code != 0);                       // missing --out
    CHECK(run_mapx("predict --bogus x").exit_code != 0);           // unknown flag
    CHECK(run_mapx("frobnicate").exit_code != 0);                  // unknown subcommand
    RunResult result = run_mapx("degrade --data x --out y");       // missing --factor
    CHECK(result.exit_code != 0);
    CHECK(result.output.find("--factor") != std::string::npos);
}

TEST_CASE("synth is byte-deterministic per seed") {
    test::TempDir tmp;
    std::string a = tmp.sub("a");
    std::string b = tmp.sub("b");
    std::string c = tmp.sub("c");
    CHECK(run_mapx("synth --out " + a + " --docs 40 --seed 9").exit_code == 0);
    CHECK(run_mapx("synth --out " + b + " --docs 40 --seed 9").exit_code == 0);
    CHECK(run_mapx("synth --out " + c + " --docs 40 --seed 10").exit_code == 0);

    CHECK(read_file(a + "/documents.jsonl") == read_file(b + "/documents.jsonl"));
    CHECK(read_file(a + "/items.jsonl") == read_file(b + "/items.jsonl"));
    CHECK(read_file(a + "/documents.jsonl") != read_file(c + "/documents.jsonl"));

    nlohmann::json manifest = nlohmann::json::parse(read_file(a + "/run_manifest.json"));
    CHECK(manifest["command"] == "synth");
    CHECK(manifest["config"]["seed"] == 9);
}

TEST_CASE("synth rejects invalid settings") {
    test::TempDir tmp;
    RunResult result = run_mapx("synth --out " + tmp.sub("x") + " --docs 40 --false-rate 1.5");
    CHECK(result.exit_code != 0);
    CHECK(result.output.find("false_rate") != std::string::npos);
}

TEST_CASE("train, predict, and explain round-trip") {
    test::TempDir tmp;
    std::string data = tmp.sub("data");
    std::string models = tmp.sub("models");
    std::string preds = tmp.sub("preds");
    REQUIRE(run_mapx("synth --out " + data + " --docs 80 --seed 3").exit_code == 0);

    RunResult train = run_mapx("train --data " + data + " --model-dir " + models + " --seed 4");
    CHECK(train.exit_code == 0);
    CHECK(train.output.find("trained 3 models") != std::string::npos);
    for (const char* file : {"index.json", "content_words.json", "publisher_credibility.json",
                             "user_credibility.json", "run_manifest.json"}) {
        CAPTURE(file);
        CHECK(std::ifstream(models + "/" + file).good());
    }

    RunResult predict = run_mapx("predict --data " + data + " --model-dir " + models +
                                 " --out " + preds);
    CHECK(predict.exit_code == 0);
    std::vector<nlohmann::json> records = read_jsonl(preds + "/predictions.jsonl");
    REQUIRE(records.size() == 80);
    for (const nlohmann::json& record : records) {
        double p = record["prob_false"].get<double>();
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(record["strategy"] == "dapa");
        REQUIRE(record["per_model"].size() == 3);
        double share_sum = 0.0;
        for (const auto& entry : record["per_model"]) {
            share_sum += entry["share"].get<double>();
        }
        CHECK(share_sum == doctest::Approx(1.0).epsilon(1e-9));
    }

    std::string doc_id = records.front()["doc_id"].get<std::string>();
    RunResult text = run_mapx("explain --data " + data + " --model-dir " + models + " --doc " +
                              doc_id + " --format text");
    CHECK(text.exit_code == 0);
    CHECK(text.output.find("T1 model:") != std::string::npos);
    CHECK(text.output.find("T4 factors:") != std::string::npos);

    RunResult json = run_mapx("explain --data " + data + " --model-dir " + models + " --doc " +
                              doc_id + " --format json");
    CHECK(json.exit_code == 0);
    nlohmann::json explanation = nlohmann::json::parse(json.output);
    CHECK(explanation["doc_id"] == doc_id);
    for (const char* tier : {"tier1", "tier2", "tier3", "tier4"}) {
        CAPTURE(tier);
        CHECK(explanation.contains(tier));
    }

    CHECK(run_mapx("explain --data " + data + " --model-dir " + models +
                   " --doc no_such_doc").exit_code != 0);
    CHECK(run_mapx("explain --data " + data + " --model-dir " + models + " --doc " + doc_id +
                   " --format yaml").exit_code != 0);
}

TEST_CASE("the bundled walkthrough corpus reproduces its documented numbers") {
    std::string fixtures = FIXTURES_DIR;
    std::string data = fixtures + "/walkthrough/case";
    std::string models = fixtures + "/walkthrough/models";
    test::TempDir tmp;
    std::string out = tmp.sub("out");

    RunResult predict = run_mapx("predict --data " + data + " --model-dir " + models +
                                 " --out " + out + " --at-hours 2");
    REQUIRE(predict.exit_code == 0);

    bool found = false;
    for (const nlohmann::json& record : read_jsonl(out + "/predictions.jsonl")) {
        if (record["doc_id"] != "doc_spring") continue;
        found = true;
        double prob = record["prob_false"].get<double>();
        CHECK(std::abs(prob - 0.5983 / 1.02) < 1e-6);
        char display[8];
        std::snprintf(display, sizeof(display), "%.2f", prob);
        CHECK(std::string(display) == "0.59");
        for (const auto& entry : record["per_model"]) {
            double p = entry["prob_false"].get<double>();
            double r = entry["model_reliability"].get<double>();
            if (entry["model_id"] == "content_words") {
                CHECK(p == doctest::Approx(0.62).epsilon(1e-9));
                CHECK(r == doctest::Approx(0.8).epsilon(1e-12));
            } else if (entry["model_id"] == "publisher_credibility") {
                CHECK(p == doctest::Approx(0.50).epsilon(1e-12));
                CHECK(r == doctest::Approx(0.15).epsilon(1e-12));
            } else {
                CHECK(entry["model_id"] == "user_credibility");
                CHECK(p == doctest::Approx(0.39).epsilon(1e-12));
                CHECK(r == doctest::Approx(0.07).epsilon(1e-12));
            }
        }
    }
    CHECK(found);

    RunResult explain = run_mapx("explain --data " + data + " --model-dir " + models +
                                 " --doc doc_spring --at-hours 2 --format text");
    REQUIRE(explain.exit_code == 0);
    CHECK(explain.output.find("T1 model: content_words contributed 78%") != std::string::npos);
    CHECK(explain.output.find("T3 information: words, reliability 0.80") != std::string::npos);
    CHECK(explain.output.find("word_count=542 -> 0.80") != std::string::npos);
}

TEST_CASE("evaluate writes reports and rejects oversized fold counts") {
    test::TempDir tmp;
    std::string data = tmp.sub("data");
    std::string out = tmp.sub("eval");
    REQUIRE(run_mapx("synth --out " + data + " --docs 80 --seed 3").exit_code == 0);

    RunResult eval = run_mapx("evaluate --data " + data + " --out " + out +
                              " --folds 2 --seed 5");
    CHECK(eval.exit_code == 0);
    nlohmann::json report = nlohmann::json::parse(read_file(out + "/evaluation.json"));
    CHECK(report["folds"] == 2);
    CHECK(report["systems"].size() == 7);
    CHECK(read_file(out + "/evaluation.csv").rfind("system,fold,f1,accuracy", 0) == 0);

    std::string tiny = tmp.sub("tiny");
    REQUIRE(run_mapx("synth --out " + tiny + " --docs 5 --publishers 2 --users 3 --seed 1")
                .exit_code == 0);
    RunResult too_many = run_mapx("evaluate --data " + tiny + " --out " + tmp.sub("e2") +
                                  " --folds 10");
    CHECK(too_many.exit_code != 0);
    CHECK(too_many.output.find("documents") != std::string::npos);
}

}  // TEST_SUITE
