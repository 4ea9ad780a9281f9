// Exit-status contract of the command-line tool, exercised through the real
// binary: 0 success, 1 validation failure, 2 divergence, 64 usage.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

int g_failures = 0;

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

void expect(const std::string& what, int got, int want) {
    const bool ok = got == want;
    std::printf("%s %s (exit %d, want %d)\n", ok ? "ok  " : "FAIL", what.c_str(), got, want);
    if (!ok) ++g_failures;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli> [out-dir]\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    const std::string out = argc > 2 ? argv[2] : "cli_contract_out";
    std::filesystem::create_directories(out);
    {
        std::ofstream bad(out + "/bad.cfg");
        bad << "c_f = 3.0\n"; // 4*C_f = 12 > pi^2 fails the spectral gap
    }

    expect("validate on the default spec", run(cli + " validate"), 0);
    expect("epsilon without a noise kind",
           run(cli + " simulate --noise none --epsilon 0.3 --out-dir " + out), 64);
    expect("unknown flag", run(cli + " simulate --no-such-flag"), 64);
    expect("unknown subcommand", run(cli + " frobnicate"), 64);
    expect("unreadable config", run(cli + " validate --config /nonexistent.cfg"), 1);
    expect("small simulate run",
           run(cli + " simulate --noise diffq --delta 0.05 --epsilon 0.1 --t1 0.125 "
                     "--n-modes 8 --out-dir " + out),
           0);
    {
        std::ifstream csv(out + "/simulate.csv");
        std::string first;
        std::getline(csv, first);
        const bool ok = first.rfind("# manifest: ", 0) == 0;
        std::printf("%s output csv starts with the manifest line\n", ok ? "ok  " : "FAIL");
        if (!ok) ++g_failures;
    }
    expect("validation failure exits 1",
           run(cli + " validate --config " + out + "/bad.cfg"), 1);
    return g_failures == 0 ? 0 : 1;
}
