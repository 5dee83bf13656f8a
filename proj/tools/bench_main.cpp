#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "propsign/covmap.hpp"
#include "propsign/fields.hpp"
#include "propsign/parallel.hpp"
#include "propsign/rwa.hpp"

namespace {

using namespace propsign;

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

struct Row {
    std::string kernel;
    std::size_t n;
    double serial_ms;
    double parallel_ms;
    bool identical;
};

void print(const std::vector<Row>& rows) {
    std::printf("%-22s %10s %12s %12s %9s %10s\n", "kernel", "n", "serial ms",
                "parallel ms", "speedup", "identical");
    for (const Row& r : rows)
        std::printf("%-22s %10zu %12.1f %12.1f %8.2fx %10s\n", r.kernel.c_str(), r.n,
                    r.serial_ms, r.parallel_ms, r.serial_ms / r.parallel_ms,
                    r.identical ? "yes" : "NO");
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());
    std::vector<Row> rows;

    {
        const auto fs = fields::random_functions(17, 64);
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = fields::positivity_batch(fs, 1.0, false);
        const double s_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = fields::positivity_batch(fs, 1.0, true);
        const double p_ms = ms_since(t0);
        bool same = serial.size() == parallel.size();
        for (std::size_t i = 0; same && i < serial.size(); ++i)
            same = serial[i].value == parallel[i].value && serial[i].scale == parallel[i].scale;
        rows.push_back({"positivity_batch", fs.size(), s_ms, p_ms, same});
    }

    {
        std::vector<double> scalars;
        for (int i = 0; i < 48; ++i) scalars.push_back(0.05 * i);
        const covmap::MomentumBasis basis = covmap::basis_from_scalars(scalars);
        covmap::Vector psi = covmap::Vector::Constant(48, std::complex<double>(1.0, 0.0));
        psi.normalize();
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = covmap::sigma_pm(psi, basis, 0.7, +1, false);
        const double s_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = covmap::sigma_pm(psi, basis, 0.7, +1, true);
        const double p_ms = ms_since(t0);
        const bool same = (serial.rho - parallel.rho).cwiseAbs().maxCoeff() == 0.0;
        rows.push_back({"sigma_pm (dim 48)", scalars.size(), s_ms, p_ms, same});
    }

    {
        const std::size_t n = 2000000;
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = rwa::make_sweep(static_cast<int>(n), 23, false);
        const double s_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = rwa::make_sweep(static_cast<int>(n), 23, true);
        const double p_ms = ms_since(t0);
        bool same = true;
        for (std::size_t i = 0; same && i < n; ++i)
            same = serial[i].value == parallel[i].value;
        rows.push_back({"make_sweep", n, s_ms, p_ms, same});
    }

    print(rows);
    bool all_same = true;
    for (const Row& r : rows) all_same = all_same && r.identical;
    return all_same ? 0 : 1;
}
