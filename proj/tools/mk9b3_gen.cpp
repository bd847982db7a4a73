// Writes the mk9-b3 benchmark matrix (boundary operator of the K9 matching
// complex on 4-edge matchings) in Matrix Market coordinate integer format.

#include "matching_complex.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: mk9b3_gen <output.mtx>\n";
        return 2;
    }

    const auto B = kaczmarz::tools::boundary_matrix(9, 4);

    std::ofstream out(argv[1]);
    if (!out) {
        std::cerr << "mk9b3_gen: cannot open " << argv[1] << "\n";
        return 1;
    }
    out << "%%MatrixMarket matrix coordinate integer general\n";
    out << "% boundary operator of the K9 matching complex (4-edge matchings\n";
    out << "% to 3-edge matchings), lexicographic face order\n";
    out << B.rows << " " << B.cols << " " << B.entries.size() << "\n";
    for (const auto& e : B.entries) {
        out << e[0] + 1 << " " << e[1] + 1 << " " << e[2] << "\n";
    }
    if (!out) {
        std::cerr << "mk9b3_gen: write failed\n";
        return 1;
    }
    std::cout << "wrote " << B.rows << "x" << B.cols << " with " << B.entries.size()
              << " entries to " << argv[1] << "\n";
    return 0;
}
