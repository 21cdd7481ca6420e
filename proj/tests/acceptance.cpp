#include <cstdio>
#include <cstdlib>

#include "slcr/validation.hpp"

int main(int argc, char** argv) {
    slcr::ValidationOptions opts;
    if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
    auto results = slcr::run_validation(opts);
    int failed = 0;
    for (const auto& r : results) {
        std::printf("criterion %d: %s  %s  (%.2fs)  %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                    r.metrics.dump().c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
    }
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 && results.size() == 12 ? 0 : 1;
}
