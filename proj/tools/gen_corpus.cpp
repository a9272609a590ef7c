// Writes the random chainmap corpus used by the examples suite. Instances
// are kept when both secat and relcat land under the cap, with at most a
// third of them trivial, so the bundled set exercises nonzero values.
#include "secat/ganea.hpp"
#include "secat/instances.hpp"
#include "secat/io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "data/corpus";
    std::filesystem::create_directories(dir);
    std::mt19937 rng(4242);
    const int want = 6, max_trivial = 2;
    int written = 0, trivial = 0;
    for (int attempt = 0; written < want && attempt < 400; ++attempt) {
        secat::ChainBackend bk;
        secat::ObjRef a = secat::props::small_object(bk, rng);
        secat::ObjRef x = secat::props::small_object(bk, rng);
        secat::MapRef f = secat::props::map_between(bk, rng, a, x);
        secat::InvariantResult s = secat::secat(bk, f, 3);
        secat::InvariantResult rc = secat::relcat(bk, f, 3);
        if (s.over_cap || rc.over_cap) continue;
        if (s.value == 0 && trivial >= max_trivial) continue;
        if (s.value == 0) ++trivial;

        secat::ChainMapFile cmf;
        cmf.complexes.emplace_back("a", bk.complex_of(a));
        cmf.complexes.emplace_back("x", bk.complex_of(x));
        cmf.maps.push_back({"f", "a", "x", bk.graded(f)});
        std::string path = dir + "/map" + std::to_string(written) + ".chainmap";
        std::ofstream out(path);
        secat::write_chainmap_file(out, cmf);
        std::cout << path << ": secat " << s.value << ", relcat " << rc.value << "\n";
        ++written;
    }
    if (written < want) {
        std::cerr << "only generated " << written << " corpus instances\n";
        return 1;
    }
    return 0;
}
