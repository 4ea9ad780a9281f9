#include <doctest.h>

#include "nrd/manifest.hpp"
#include "nrd/parallel.hpp"

#include <cmath>
#include <vector>

using namespace nrd;

TEST_CASE("manifest hash is stable and order independent in parameters") {
    RunManifest a;
    a.subcommand = "simulate";
    a.add("epsilon", 0.1);
    a.add("delta", 0.05);
    a.seeds = {7};
    RunManifest b;
    b.subcommand = "simulate";
    b.add("delta", 0.05);
    b.add("epsilon", 0.1);
    b.seeds = {7};
    CHECK(a.hash() == b.hash());
    CHECK(a.manifest_line().rfind("# manifest: ", 0) == 0);

    RunManifest c = a;
    c.seeds = {8};
    CHECK(c.hash() != a.hash());
}

TEST_CASE("seventeen digit formatting round trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, 9.869604401089358, 1e-17, -2.5e300}) {
        const std::string s = format17(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("manifest json lists outputs and params") {
    RunManifest m;
    m.subcommand = "converge";
    m.add("t1", 1.0);
    m.outputs = {"converge.csv"};
    const std::string j = m.to_json();
    CHECK(j.find("\"subcommand\": \"converge\"") != std::string::npos);
    CHECK(j.find("converge.csv") != std::string::npos);
    CHECK(j.find(m.hash_hex()) != std::string::npos);
}

TEST_CASE("parallel_for produces identical slots regardless of worker count") {
    auto run = [](unsigned workers) {
        std::vector<double> out(64);
        parallel_for(out.size(), workers, [&](std::size_t i) {
            double acc = 0.0;
            for (int j = 0; j < 1000; ++j) acc += std::sin((double)i + j * 1e-3);
            out[i] = acc;
        });
        return out;
    };
    const auto s1 = run(1);
    const auto s4 = run(4);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s4[i]);
}

TEST_CASE("parallel_for propagates task failures") {
    CHECK_THROWS_AS(parallel_for(8, 4,
                                 [](std::size_t i) {
                                     if (i == 5) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}
