#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmetro/hcrb.hpp"

namespace qmetro {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Quantity { c_s, c_h, heterodyne, z_opt, f_opt, double_homodyne };

std::string quantity_name(Quantity q);

/// Parses a comma-separated quantity list; rejects unknown names and
/// quantities unavailable for the model.
std::vector<Quantity> parse_quantities(const std::string& csv, Model model);

std::vector<Quantity> default_quantities(Model model);

struct ScanSpec {
    Model model;
    double r_min;
    double r_max;
    int steps;
    std::vector<Quantity> quantities;
    MinimizerConfig minimizer;

    ScanSpec(Model m, double lo, double hi, int n, std::vector<Quantity> q,
             MinimizerConfig cfg = {});
};

/// Column-labelled numeric table; first column is always r.
struct ScanTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Evaluates the requested quantities over the r grid. Rows are computed in
/// parallel and gathered in r order.
ScanTable run_scan(const ScanSpec& spec);

/// 12 significant digits, '.' decimal separator, trailing zeros kept.
std::string format_number(double v);

std::string to_csv(const ScanTable& t);
std::string to_json(const ScanTable& t);

/// Reads a table back from CSV; throws IoError on malformed or empty input.
ScanTable parse_csv(std::istream& in);

/// Line plot of every column against the first, as a standalone SVG string.
/// A column named c_s is drawn dashed.
std::string render_svg(const ScanTable& t);

struct VerifyCheck {
    std::string name;
    double deviation;
    double threshold;
    bool pass;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

struct VerifyOptions {
    std::optional<int> trunc;       // overrides both policies below when set
    double r_max = 1.25;
    std::optional<Model> model;
    std::optional<std::string> check;  // substring filter on check names
};

/// Cross-checks the closed forms against the truncated-Fock oracle:
/// QFI, Uhlmann curvature, derivative coefficients, beam-splitter
/// factorization. Truncation failures count as check failures.
VerifyReport run_verify(const VerifyOptions& opt);

}  // namespace qmetro
