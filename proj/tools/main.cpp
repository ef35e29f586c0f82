#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmetro/fock.hpp"
#include "qmetro/report.hpp"

namespace {

using namespace qmetro;

Model parse_model(const std::string& name) {
    if (name == "single") return Model::single_mode;
    if (name == "two") return Model::two_mode;
    throw std::invalid_argument("unknown model: " + name);
}

struct RRange {
    double lo;
    double hi;
    int steps;
};

RRange parse_r_range(const std::string& s) {
    RRange rr{};
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &rr.lo, &rr.hi, &rr.steps, &tail)
            != 3)
        throw std::invalid_argument("bad range '" + s + "', expected min:max:steps");
    return rr;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path, std::string* out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
    return *out;
}

std::string render_bounds_table(const BoundsReport& b) {
    std::string out;
    auto line = [&](const char* name, double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%-16s%s\n", name,
                      format_number(v).c_str());
        out += buf;
    };
    line("c_s", b.c_s);
    line("c_h", b.c_h);
    line("R", b.r_quantumness);
    if (b.gendyne_best) {
        line("z_opt", b.gendyne_best->z_opt);
        line("f_opt", b.gendyne_best->f_opt);
    }
    if (b.heterodyne) line("heterodyne", *b.heterodyne);
    if (b.double_homodyne) line("double_homodyne", *b.double_homodyne);
    return out;
}

std::string render_bounds_json(const BoundsReport& b) {
    nlohmann::json j;
    j["c_s"] = b.c_s;
    j["c_h"] = b.c_h;
    j["R"] = b.r_quantumness;
    if (b.gendyne_best) {
        j["z_opt"] = b.gendyne_best->z_opt;
        j["f_opt"] = b.gendyne_best->f_opt;
    }
    if (b.heterodyne) j["heterodyne"] = *b.heterodyne;
    if (b.double_homodyne) j["double_homodyne"] = *b.double_homodyne;
    return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimation bounds for single- and two-mode Gaussian models"};
    app.require_subcommand(1);

    std::string model_name, format = "table", out_path, quantities, r_range;
    double r = 0.0, theta1 = 0.0, theta2 = 0.0, tol = 1e-10, r_max = 1.25;
    int restarts = 24;
    std::uint64_t seed = 20240214;
    std::optional<int> trunc;
    std::optional<std::string> check_filter, model_filter;
    std::string plot_in, plot_out;
    int status = 0;

    auto add_minimizer_flags = [&](CLI::App* cmd) {
        cmd->add_option("--restarts", restarts, "minimizer restarts");
        cmd->add_option("--tol", tol, "minimizer tolerance");
        cmd->add_option("--seed", seed, "restart sampling seed");
    };
    auto minimizer_config = [&] {
        MinimizerConfig cfg;
        cfg.restarts = restarts;
        cfg.tol = tol;
        cfg.seed = seed;
        return cfg;
    };

    CLI::App* bounds = app.add_subcommand("bounds", "bound report at one point");
    bounds->add_option("--model", model_name, "single or two")
        ->required()
        ->check(CLI::IsMember({"single", "two"}));
    bounds->add_option("--r", r, "squeezing parameter");
    bounds->add_option("--theta1", theta1, "Re alpha");
    bounds->add_option("--theta2", theta2, "Im alpha");
    bounds->add_option("--format", format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));
    bounds->add_option("--out", out_path, "output file (default stdout)");
    add_minimizer_flags(bounds);
    bounds->callback([&] {
        ModelPoint p(parse_model(model_name), theta1, theta2, r);
        BoundsReport b = compute_bounds(p, minimizer_config());
        write_output(out_path, format == "json" ? render_bounds_json(b)
                                                : render_bounds_table(b));
    });

    CLI::App* scan = app.add_subcommand("scan", "quantities over an r grid");
    scan->add_option("--model", model_name, "single or two")
        ->required()
        ->check(CLI::IsMember({"single", "two"}));
    scan->add_option("--r,--r-range", r_range, "grid as min:max:steps");
    scan->add_option("--quantities", quantities, "comma-separated column list");
    scan->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("--out", out_path, "output file (default stdout)");
    add_minimizer_flags(scan);
    scan->callback([&] {
        Model model = parse_model(model_name);
        RRange rr = model == Model::single_mode ? RRange{0.0, 3.0, 61}
                                                : RRange{0.0, 1.5, 7};
        if (!r_range.empty()) rr = parse_r_range(r_range);
        std::vector<Quantity> qs = quantities.empty()
            ? default_quantities(model)
            : parse_quantities(quantities, model);
        ScanSpec spec(model, rr.lo, rr.hi, rr.steps, qs, minimizer_config());
        ScanTable t = run_scan(spec);
        write_output(out_path,
                     format == "json" ? to_json(t) : to_csv(t));
    });

    CLI::App* verify = app.add_subcommand("verify", "oracle cross-checks");
    verify->add_option("--model", model_filter, "restrict to single or two")
        ->check(CLI::IsMember({"single", "two"}));
    verify->add_option("--trunc", trunc, "Fock truncation override");
    verify->add_option("--r-max", r_max, "largest r on the check grid");
    verify->add_option("--check", check_filter, "substring filter on check names");
    verify->callback([&] {
        VerifyOptions opt;
        opt.trunc = trunc;
        opt.r_max = r_max;
        opt.check = check_filter;
        if (model_filter) opt.model = parse_model(*model_filter);
        VerifyReport report = run_verify(opt);
        if (report.checks.empty())
            throw std::invalid_argument("no checks match the given filters");
        for (const auto& c : report.checks)
            std::printf("%-20s max deviation %.3e (threshold %.0e)  %s\n",
                        c.name.c_str(), c.deviation, c.threshold,
                        c.pass ? "pass" : "FAIL");
        if (!report.all_pass()) status = 5;
    });

    CLI::App* plot = app.add_subcommand("plot", "render a scan CSV as SVG");
    plot->add_option("input", plot_in, "CSV file from scan")->required();
    plot->add_option("output", plot_out, "SVG output path");
    plot->callback([&] {
        std::string csv;
        read_file(plot_in, &csv);
        std::istringstream in(csv);
        ScanTable t = parse_csv(in);
        std::string out = plot_out.empty() ? plot_in + ".svg" : plot_out;
        write_output(out, render_svg(t));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const OptimizerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return status;
}
