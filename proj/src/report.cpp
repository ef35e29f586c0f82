#include "qmetro/report.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qmetro/fock.hpp"

namespace qmetro {

namespace {

const std::map<std::string, Quantity> kQuantityByName = {
    {"c_s", Quantity::c_s},
    {"c_h", Quantity::c_h},
    {"heterodyne", Quantity::heterodyne},
    {"z_opt", Quantity::z_opt},
    {"f_opt", Quantity::f_opt},
    {"double_homodyne", Quantity::double_homodyne},
};

bool available_for(Quantity q, Model m) {
    switch (q) {
        case Quantity::c_s:
        case Quantity::c_h:
            return true;
        case Quantity::heterodyne:
        case Quantity::z_opt:
        case Quantity::f_opt:
            return m == Model::single_mode;
        case Quantity::double_homodyne:
            return m == Model::two_mode;
    }
    return false;
}

std::vector<double> scan_row(const ScanSpec& spec, double r) {
    ModelPoint p(spec.model, 0.0, 0.0, r);
    std::vector<double> row{r};
    std::optional<GendyneOptimum> gd;
    std::optional<double> c_h;
    for (Quantity q : spec.quantities) {
        switch (q) {
            case Quantity::c_s:
                row.push_back(sld_crb(p));
                break;
            case Quantity::c_h:
                if (!c_h) c_h = minimize_h(p, spec.minimizer).value;
                row.push_back(*c_h);
                break;
            case Quantity::heterodyne:
                row.push_back(heterodyne_precision(r));
                break;
            case Quantity::z_opt:
            case Quantity::f_opt:
                if (!gd) gd = optimal_gendyne(r, spec.minimizer);
                row.push_back(q == Quantity::z_opt ? gd->z_opt : gd->f_opt);
                break;
            case Quantity::double_homodyne:
                row.push_back(
                    Eigen::Matrix3d(double_homodyne_fisher_two(r).entries)
                        .inverse()
                        .trace());
                break;
        }
    }
    return row;
}

}  // namespace

std::string quantity_name(Quantity q) {
    for (const auto& [name, value] : kQuantityByName)
        if (value == q) return name;
    return "?";
}

std::vector<Quantity> parse_quantities(const std::string& csv, Model model) {
    std::vector<Quantity> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        auto it = kQuantityByName.find(token);
        if (it == kQuantityByName.end())
            throw std::invalid_argument("unknown quantity: " + token);
        if (!available_for(it->second, model))
            throw std::invalid_argument("quantity " + token
                                        + " is not defined for the "
                                        + to_string(model) + " model");
        out.push_back(it->second);
    }
    if (out.empty()) throw std::invalid_argument("empty quantity list");
    return out;
}

std::vector<Quantity> default_quantities(Model model) {
    if (model == Model::single_mode) return {Quantity::z_opt, Quantity::f_opt};
    return {Quantity::c_s, Quantity::c_h, Quantity::double_homodyne};
}

ScanSpec::ScanSpec(Model m, double lo, double hi, int n, std::vector<Quantity> q,
                   MinimizerConfig cfg)
    : model(m), r_min(lo), r_max(hi), steps(n), quantities(std::move(q)),
      minimizer(cfg) {
    if (!(r_min >= 0.0) || !(r_max > r_min) || steps < 2)
        throw std::invalid_argument(
            "ScanSpec: need 0 <= r_min < r_max and steps >= 2");
    for (Quantity qq : quantities)
        if (!available_for(qq, model))
            throw std::invalid_argument("quantity " + quantity_name(qq)
                                        + " is not defined for the "
                                        + to_string(model) + " model");
}

ScanTable run_scan(const ScanSpec& spec) {
    ScanTable t;
    t.columns.push_back("r");
    for (Quantity q : spec.quantities) t.columns.push_back(quantity_name(q));
    t.rows.resize(spec.steps);

    const double dr = (spec.r_max - spec.r_min) / (spec.steps - 1);
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int i = next++; i < spec.steps; i = next++) {
            try {
                t.rows[i] = scan_row(spec, spec.r_min + i * dr);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, spec.steps);
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return t;
}

std::string format_number(double v) {
    char buf[64];
    if (v == 0.0) {
        std::snprintf(buf, sizeof(buf), "%.12f", 0.0);
        return buf;
    }
    int e = static_cast<int>(std::floor(std::log10(std::abs(v))));
    if (e < -4 || e > 14) {
        std::snprintf(buf, sizeof(buf), "%.11e", v);
    } else {
        int decimals = std::max(0, 11 - e);
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    }
    return buf;
}

std::string to_csv(const ScanTable& t) {
    std::string out;
    for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const ScanTable& t) {
    nlohmann::json j;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    return j.dump(2) + "\n";
}

ScanTable parse_csv(std::istream& in) {
    ScanTable t;
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw IoError("csv: missing header row");
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row_ss(line);
        std::vector<double> row;
        while (std::getline(row_ss, cell, ',')) {
            try {
                size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw IoError("csv: bad numeric cell '" + cell + "'");
            }
        }
        if (row.size() != t.columns.size())
            throw IoError("csv: row width does not match header");
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw IoError("csv: no data rows");
    if (t.columns.size() < 2) throw IoError("csv: need at least two columns");
    return t;
}

std::string render_svg(const ScanTable& t) {
    const double width = 640, height = 460;
    const double x0 = 80, x1 = 600, y0 = 420, y1 = 40;
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                             "#9467bd", "#8c564b", "#17becf"};

    double xmin = t.rows.front()[0], xmax = xmin;
    double ymin = t.rows.front()[1], ymax = ymin;
    for (const auto& row : t.rows) {
        xmin = std::min(xmin, row[0]);
        xmax = std::max(xmax, row[0]);
        for (size_t c = 1; c < row.size(); ++c) {
            ymin = std::min(ymin, row[c]);
            ymax = std::max(ymax, row[c]);
        }
    }
    double xspan = xmax > xmin ? xmax - xmin : 1.0;
    double yspan = ymax > ymin ? ymax - ymin : 1.0;
    auto px = [&](double x) { return x0 + (x - xmin) / xspan * (x1 - x0); };
    auto py = [&](double y) { return y0 + (y - ymin) / yspan * (y1 - y0); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width)
        + "\" height=\"" + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1)
        + "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0)
        + "\" y2=\"" + num(y1) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(height - 10)
        + "\" text-anchor=\"middle\">" + t.columns[0] + "</text>\n";
    svg += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(y0 + 4)
        + "\" text-anchor=\"end\">" + num(ymin) + "</text>\n";
    svg += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(y1 + 4)
        + "\" text-anchor=\"end\">" + num(ymax) + "</text>\n";
    svg += "<text x=\"" + num(x0) + "\" y=\"" + num(y0 + 16)
        + "\" text-anchor=\"middle\">" + num(xmin) + "</text>\n";
    svg += "<text x=\"" + num(x1) + "\" y=\"" + num(y0 + 16)
        + "\" text-anchor=\"middle\">" + num(xmax) + "</text>\n";

    for (size_t c = 1; c < t.columns.size(); ++c) {
        const char* color = palette[(c - 1) % 6];
        std::string dash =
            t.columns[c] == "c_s" ? " stroke-dasharray=\"6 4\"" : "";
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color)
            + "\" stroke-width=\"1.5\"" + dash + " points=\"";
        for (const auto& row : t.rows)
            svg += num(px(row[0])) + "," + num(py(row[c])) + " ";
        svg += "\"/>\n";
        svg += "<text x=\"" + num(x1 - 140)
            + "\" y=\"" + num(y1 + 16.0 * static_cast<double>(c))
            + "\" fill=\"" + color + "\">" + t.columns[c] + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

bool VerifyReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

std::vector<double> verify_r_grid(double r_max) {
    std::vector<double> rs;
    for (double r = 0.0; r <= r_max + 1e-12; r += 0.25) rs.push_back(r);
    if (rs.empty() || rs.back() < r_max - 1e-12) rs.push_back(r_max);
    return rs;
}

void add_check(VerifyReport& report, const VerifyOptions& opt,
               const std::string& name, Model model, double threshold,
               const std::function<double()>& deviation) {
    if (opt.model && *opt.model != model) return;
    if (opt.check && name.find(*opt.check) == std::string::npos) return;
    VerifyCheck c{name, 0.0, threshold, false};
    try {
        c.deviation = deviation();
        c.pass = c.deviation < threshold;
    } catch (const TruncationError&) {
        c.deviation = std::numeric_limits<double>::infinity();
    }
    report.checks.push_back(c);
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opt) {
    const TruncationPolicy state_policy(opt.trunc.value_or(160));
    const TruncationPolicy bs_policy(opt.trunc.value_or(220));
    const std::vector<double> rs = verify_r_grid(opt.r_max);
    const double alphas[][2] = {{0.0, 0.0}, {0.3, 0.7}};

    VerifyReport report;
    for (Model model : {Model::single_mode, Model::two_mode}) {
        std::string suffix =
            model == Model::single_mode ? "_single" : "_two";
        add_check(report, opt, "qfi" + suffix, model, 1e-6, [&] {
            double dev = 0.0;
            for (double r : rs)
                for (const auto& a : alphas) {
                    ModelPoint p(model, a[0], a[1], r);
                    OracleCurvature oc = oracle_qfi_uhlmann(p, state_policy);
                    dev = std::max(
                        dev, (oc.qfi - qfi_matrix(p).entries).cwiseAbs().maxCoeff());
                }
            return dev;
        });
        add_check(report, opt, "uhlmann" + suffix, model, 1e-6, [&] {
            double dev = 0.0;
            for (double r : rs)
                for (const auto& a : alphas) {
                    ModelPoint p(model, a[0], a[1], r);
                    OracleCurvature oc = oracle_qfi_uhlmann(p, state_policy);
                    dev = std::max(
                        dev,
                        (oc.uhlmann - uhlmann_matrix(p).entries).cwiseAbs().maxCoeff());
                }
            return dev;
        });
    }

    add_check(report, opt, "derivatives_single", Model::single_mode, 1e-8, [&] {
        const int n = state_policy.dim;
        auto d0 = fd_derivatives(ModelPoint(Model::single_mode, 0, 0, 0),
                                 state_policy);
        Eigen::VectorXcd e2 = Eigen::VectorXcd::Zero(n);
        e2(2) = 1.0;
        double dev = (d0[2].amplitudes - e2 / std::sqrt(2.0)).norm();

        ModelPoint p(Model::single_mode, 0.3, 0.7, 0.5);
        auto d = fd_derivatives(p, state_policy);
        Eigen::VectorXcd e1 = displacement_matrix(n, {0.3, 0.7})
            * (squeeze_matrix(n, 0.5)
               * Eigen::VectorXcd::Unit(n, 1).eval());
        std::complex<double> coeff = e1.dot(d[0].amplitudes);
        dev = std::max(dev, std::abs(coeff - std::exp(-0.5)));
        return dev;
    });

    add_check(report, opt, "derivatives_two", Model::two_mode, 1e-8, [&] {
        const int n = state_policy.dim;
        ModelPoint p(Model::two_mode, 0.2, 0.1, 0.4);
        auto d = fd_derivatives(p, state_policy);
        const std::complex<double> half_alpha =
            std::complex<double>(0.2, 0.1) / std::sqrt(2.0);
        Eigen::VectorXcd e1 = displacement_matrix(n, half_alpha)
            * (squeeze_matrix(n, 0.4) * Eigen::VectorXcd::Unit(n, 1).eval());
        Eigen::VectorXcd f0 = displacement_matrix(n, -half_alpha)
            * (squeeze_matrix(n, -0.4) * Eigen::VectorXcd::Unit(n, 0).eval());
        std::complex<double> coeff = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                coeff += std::conj(e1(a) * f0(b)) * d[1].amplitudes(a * n + b);
        std::complex<double> expected =
            std::complex<double>(0, 1) * std::exp(0.4) / std::sqrt(2.0);
        return std::abs(coeff - expected);
    });

    add_check(report, opt, "bs", Model::two_mode, 1e-8, [&] {
        const double thetas[][3] = {{0, 0, 0.5}, {0.5, 0.5, 0.8}, {1, 0, 1.2}};
        double dev = 0.0;
        for (const auto& th : thetas) {
            if (th[2] > opt.r_max) continue;
            ModelPoint p(Model::two_mode, th[0], th[1], th[2]);
            dev = std::max(dev, bs_factorization_check(p, bs_policy));
        }
        return dev;
    });

    return report;
}

}  // namespace qmetro
