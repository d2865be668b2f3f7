#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tamed/cli/config.hpp"
#include "tamed/cli/runner.hpp"
#include "tamed/core/errors.hpp"

using namespace tamed;
namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "tamed_test_cli";

std::string small_config(const std::string& scheme = "model2",
                         const std::string& extra_norms = "")
{
    return "[model]\n"
           "name = \"three-half\"\n"
           "lambda = 2.5\n"
           "[taming]\n"
           "scheme = \"" + scheme + "\"\n"
           "alpha = 0.5\n"
           "l = 1\n"
           "[grid]\n"
           "resolutions = [8, 16, 32]\n"
           "reference_resolution = 128\n"
           "[montecarlo]\n"
           "paths = 300\n"
           "seed = 99\n"
           "[norms]\n"
           "strong = [2]\n"
           "uniform = [1.5]\n"
           "moments = [2]\n"
           "one_step = [2]\n" +
           extra_norms;
}

std::string write(const std::string& name, const std::string& text)
{
    fs::create_directories(scratch);
    const auto path = scratch / name;
    std::ofstream(path) << text;
    return path.string();
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunOutcome run_into(const std::string& text, const std::string& dir,
                    std::optional<unsigned> threads = 1)
{
    RunOptions options;
    options.output_dir = (scratch / dir).string();
    options.threads = threads;
    return run_experiment(parse_config(text), text, options);
}

} // namespace

TEST_CASE("config errors name the offending key")
{
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    std::string text = small_config();
    const auto bad_grid = text.replace(text.find("[8, 16, 32]"), 11, "[8, 12]");
    CHECK(message(bad_grid).find("12 does not divide 128") != std::string::npos);
    CHECK(message(small_config() + "bogus = 1\n").find("norms.bogus") != std::string::npos);
    CHECK(message(small_config() + "[extra]\nx = 1\n").find("extra") != std::string::npos);
    CHECK(message(small_config() + "assert_rate = yes\n").find("norms.assert_rate") !=
          std::string::npos);
    std::string no_seed = small_config();
    no_seed.erase(no_seed.find("seed = 99\n"), 10);
    CHECK(message(no_seed).find("montecarlo.seed") != std::string::npos);
    CHECK(message(small_config("euler")).find("taming.scheme") != std::string::npos);
    CHECK_THROWS_AS(load_config((scratch / "missing.toml").string()), ConfigError);
}

TEST_CASE("unknown model and refused p are configuration failures")
{
    std::string text = small_config();
    text.replace(text.find("three-half"), 10, "nope");
    CHECK(run_experiment(write("nope.toml", text)).exit_code == exit_config_error);

    const auto refused = small_config("model2", "assert_rate = true\n");
    std::string wide = refused;
    wide.replace(wide.find("strong = [2]"), 12, "strong = [2.5]");
    const auto outcome = run_experiment(write("refused.toml", wide));
    CHECK(outcome.exit_code == exit_config_error);
    CHECK(outcome.message.find("2.5") != std::string::npos);
    CHECK(validate_experiment(write("refused.toml", wide)).exit_code == exit_config_error);
    CHECK(validate_experiment(write("ok.toml", refused)).exit_code == exit_ok);
}

TEST_CASE("outputs are byte-identical across reruns and thread counts")
{
    const std::string text = small_config();
    const auto a = run_into(text, "a", 1);
    const auto b = run_into(text, "b", 1);
    const auto c = run_into(text, "c", 4);
    REQUIRE(a.exit_code == exit_ok);
    for (const char* file : {"errors.csv", "moments.csv"}) {
        const auto first = slurp(scratch / "a" / file);
        CHECK_FALSE(first.empty());
        CHECK(first == slurp(scratch / "b" / file));
        CHECK(first == slurp(scratch / "c" / file));
    }
    const auto header = slurp(scratch / "a" / "errors.csv").substr(0, 80);
    CHECK(header.rfind("model,scheme,alpha,l,n,p,statistic,value,std_err,path_count,seed", 0) == 0);

    const auto manifest = nlohmann::json::parse(slurp(scratch / "a" / "manifest.json"));
    CHECK(manifest["master_seed"] == 99);
    for (const auto& f : manifest["files"]) {
        const auto bytes = slurp(scratch / "a" / f["name"].get<std::string>());
        CHECK(f["sha256"] == sha256_hex(bytes));
        CHECK(f["bytes"] == bytes.size());
    }
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("summary reports the fitted orders")
{
    const auto outcome = run_into(small_config(), "summary");
    const auto j = nlohmann::json::parse(slurp(scratch / "summary" / "summary.json"));
    CHECK(j["model"] == "three-half");
    REQUIRE(j["strong"].size() == 1);
    CHECK(j["strong"][0]["p"] == 2.0);
    CHECK(j["strong"][0]["fitted_order"].is_number());
    CHECK(j["pass"].is_boolean());
    CHECK(j["exit_code"] == outcome.exit_code);
    CHECK_FALSE(j["checks"].empty());
}

TEST_CASE("classical Euler divergence completes with findings")
{
    std::string text = small_config("identity");
    text.replace(text.find("lambda = 2.5"), 12, "lambda = 40\nxi = 6");
    text.replace(text.find("[8, 16, 32]"), 11, "[16, 32]");
    text.replace(text.find("reference_resolution = 128"), 26, "reference_resolution = 64");
    const auto outcome = run_into(text, "identity");
    CHECK(outcome.exit_code == exit_divergence);
    CHECK(outcome.divergence_found);
    const auto moments = slurp(scratch / "identity" / "moments.csv");
    CHECK(moments.find(",inf,") != std::string::npos);
    CHECK(moments.find(",true,") != std::string::npos);
}

TEST_CASE("output directory precedence")
{
    const std::string text = small_config() + "[output]\ndirectory = \"" +
                             (scratch / "from_config").string() + "\"\n";
    const auto cfg = parse_config(text);
    RunOptions none;
    ::unsetenv("TAMED_OUTPUT_DIR");
    CHECK(resolve_output_dir(cfg, none) == (scratch / "from_config").string());
    ::setenv("TAMED_OUTPUT_DIR", (scratch / "from_env").string().c_str(), 1);
    CHECK(resolve_output_dir(cfg, none) == (scratch / "from_env").string());
    RunOptions explicit_dir;
    explicit_dir.output_dir = (scratch / "explicit").string();
    CHECK(resolve_output_dir(cfg, explicit_dir) == (scratch / "explicit").string());
    const auto outcome = run_experiment(cfg, text, none);
    CHECK(fs::exists(scratch / "from_env" / "summary.json"));
    CHECK(outcome.output_dir == (scratch / "from_env").string());
    ::unsetenv("TAMED_OUTPUT_DIR");
}

TEST_CASE("command-line front end")
{
    const std::string cli = TAMED_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("list-models") == 0);
    CHECK(status("describe-model three-half lambda=2.5") == 0);
    CHECK(status("describe-model nope") == exit_config_error);
    CHECK(status("validate " + write("cli_ok.toml", small_config())) == 0);
    CHECK(status("run " + (scratch / "does-not-exist.toml").string()) == exit_config_error);
}
