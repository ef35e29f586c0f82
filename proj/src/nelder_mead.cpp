#include "qmetro/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qmetro {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, double step, double tol,
                             int max_iter) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    for (int i = 0; i < n; ++i) pts[i + 1](i) += step;
    std::vector<double> vals(n + 1);
    int evals = 0;
    for (int i = 0; i <= n; ++i) {
        vals[i] = f(pts[i]);
        ++evals;
    }
    std::vector<int> order(n + 1);

    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return vals[a] < vals[b]; });
    };

    NelderMeadResult res;
    for (int iter = 0; iter < max_iter; ++iter) {
        sort_simplex();
        const int best = order[0], worst = order[n], second = order[n - 1];
        res.spread = vals[worst] - vals[best];
        if (res.spread <= tol) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        double fr = f(xr);
        ++evals;
        if (fr < vals[best]) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            double fe = f(xe);
            ++evals;
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            Eigen::VectorXd xc = (fr < vals[worst])
                ? centroid + 0.5 * (xr - centroid)
                : centroid + 0.5 * (pts[worst] - centroid);
            double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    vals[i] = f(pts[i]);
                    ++evals;
                }
            }
        }
    }
    sort_simplex();
    res.x = pts[order[0]];
    res.value = vals[order[0]];
    res.spread = vals[order[n]] - vals[order[0]];
    res.evals = evals;
    return res;
}

double golden_section(const std::function<double(double)>& f, double a, double b,
                      double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace qmetro
