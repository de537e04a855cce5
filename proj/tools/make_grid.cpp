// Generates a rows x cols grid edge list, the synthetic stand-in for the
// roadmap dataset when the real edge list is not available.
#include <cstdlib>
#include <iostream>
#include <string>

#include "nnsp/experiment.hpp"
#include "nnsp/io.hpp"

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: " << argv[0] << " ROWS COLS OUT.csv\n";
        return 1;
    }
    try {
        int rows = std::stoi(argv[1]);
        int cols = std::stoi(argv[2]);
        nnsp::io::write_edge_list(argv[3], nnsp::grid_edge_list(rows, cols));
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
