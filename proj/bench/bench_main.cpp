// Timing harness for the parallel kernels against their serial
// reference implementations. Each pair must produce identical results;
// the point of the run is the wall-clock ratio, printed as a table.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "coinpi/estimator.hpp"
#include "coinpi/oracle.hpp"

namespace {

double time_ms(const std::function<void()>& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void row(const std::string& name, double serial_ms, double parallel_ms,
         bool same) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%.2f   %s\n", name.c_str(),
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                same ? "identical" : "MISMATCH");
    if (!same) std::exit(1);
}

} // namespace

int main() {
    using namespace coinpi;

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %6s\n", "workload", "serial", "parallel",
                "ratio");

    {
        const ExperimentConfig config{
            1, Method::Walk, (std::uint64_t{1} << 24) - 1,
            {BudgetKind::Trials, 200000}, 0};
        std::string serial_out;
        std::string parallel_out;
        const double s =
            time_ms([&] { serial_out = estimate_pi_serial(config).to_json(); });
        const double p =
            time_ms([&] { parallel_out = estimate_pi(config).to_json(); });
        row("walk, 2e5 trials", s, p, serial_out == parallel_out);
    }

    {
        const ExperimentConfig config{
            2, Method::Walk, (std::uint64_t{1} << 24) - 1,
            {BudgetKind::Flips, 20000000}, 0};
        std::string serial_out;
        std::string parallel_out;
        const double s =
            time_ms([&] { serial_out = estimate_pi_serial(config).to_json(); });
        const double p =
            time_ms([&] { parallel_out = estimate_pi(config).to_json(); });
        row("walk, 2e7 flip budget", s, p, serial_out == parallel_out);
    }

    {
        const ExperimentConfig config{
            3, Method::Direct, 100, {BudgetKind::Trials, 2000000}, 0};
        std::string serial_out;
        std::string parallel_out;
        const double s =
            time_ms([&] { serial_out = estimate_pi_serial(config).to_json(); });
        const double p =
            time_ms([&] { parallel_out = estimate_pi(config).to_json(); });
        row("direct, 2e6 trials", s, p, serial_out == parallel_out);
    }

    {
        std::string serial_out;
        std::string parallel_out;
        const double s = time_ms([&] {
            serial_out = oracle::enumerate_first_passage(
                             25, oracle::EnumerationMode::PrunedSerial)
                             .to_json();
        });
        const double p = time_ms([&] {
            parallel_out = oracle::enumerate_first_passage(
                               25, oracle::EnumerationMode::PrunedParallel)
                               .to_json();
        });
        row("enumeration, length 25", s, p, serial_out == parallel_out);
    }

    {
        // No serial twin for the needle kernel; run it at two thread
        // counts and require the identical summary.
        const int saved = omp_get_max_threads();
        std::string one;
        std::string many;
        omp_set_num_threads(1);
        const double s = time_ms([&] { one = run_buffon(2000000, 4).to_json(); });
        omp_set_num_threads(saved);
        const double p =
            time_ms([&] { many = run_buffon(2000000, 4).to_json(); });
        row("needle drops, 2e6", s, p, one == many);
    }

    return 0;
}
