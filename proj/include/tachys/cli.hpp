#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace tachys::cli {

inline constexpr const char* kSchema = "tachys.report/1";

// Absent values render as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct ConfigEntry {
  std::string key;  // long flag name without the leading dashes
  Cell value;
};

struct Report {
  std::string command;
  std::vector<ConfigEntry> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// printf("%.17g"); non-finite values become "nan", "inf", "-inf".
std::string format_number(double x);

std::string render_csv(const Report& report);
std::string render_json(const Report& report);

// Evenly spaced, endpoints included. points == 1 yields {lo}.
std::vector<double> linspace(double lo, double hi, int points);
// Geometric spacing between positive endpoints, endpoints included.
std::vector<double> logspace(double lo, double hi, int points);

// Worker count for sweeps: TACHYS_THREADS if set to a positive integer, else
// the hardware concurrency (at least 1).
unsigned worker_count();

// Parses argv (argv[0] is the program name), runs the selected command and
// writes the report to --output or `out`. Returns 0 on success, 1 when a
// module rejects the inputs, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tachys::cli
