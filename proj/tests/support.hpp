#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "twistxxz/bae.hpp"
#include "twistxxz/core.hpp"

namespace testsupport {

using twistxxz::cplx;

struct Table1Row {
    int level = 0;
    std::vector<cplx> lambdas;
    double energy = 0.0;
};

inline std::vector<Table1Row> load_table1(const std::string& path = std::string(TWISTXXZ_DATA_DIR) + "/table1.csv") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Table1Row> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        Table1Row r;
        r.level = static_cast<int>(v[0]);
        for (int k = 0; k < 5; ++k) r.lambdas.emplace_back(v[1 + 2 * k], v[2 + 2 * k]);
        r.energy = v[11];
        rows.push_back(r);
    }
    return rows;
}

inline twistxxz::ZeroPointSet table_set(const Table1Row& r) { return twistxxz::ZeroPointSet::from_shifted(r.lambdas); }

inline double rel_diff(const twistxxz::DenseMatrix& a, const twistxxz::DenseMatrix& b) {
    return (a - b).frobenius_norm() / std::max(b.frobenius_norm(), 1e-300);
}

}  // namespace testsupport
