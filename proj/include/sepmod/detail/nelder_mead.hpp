#ifndef SEPMOD_DETAIL_NELDER_MEAD_HPP
#define SEPMOD_DETAIL_NELDER_MEAD_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace sepmod::detail {

struct NelderMeadResult {
    Eigen::VectorXd argmax;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    long evaluations = 0;
};

/// Plain Nelder-Mead MAXIMIZATION with deterministic tie handling.
/// Convergence: the best value improved by less than rel_tol (relatively)
/// over the last `stall_window` iterations.
inline NelderMeadResult nelder_mead_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                             const Eigen::VectorXd& start, double step,
                                             int max_iters, double rel_tol, int stall_window) {
    const int n = static_cast<int>(start.size());
    NelderMeadResult out;
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> vals;
    pts.reserve(static_cast<size_t>(n) + 1);
    pts.push_back(start);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd p = start;
        p(i) += step;
        pts.push_back(p);
    }
    for (const auto& p : pts) {
        vals.push_back(f(p));
        ++out.evaluations;
    }

    auto order = [&]() {
        // descending by value; stable so earlier vertices win ties
        std::vector<int> idx(pts.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] > vals[b]; });
        std::vector<Eigen::VectorXd> p2;
        std::vector<double> v2;
        for (int i : idx) {
            p2.push_back(pts[i]);
            v2.push_back(vals[i]);
        }
        pts.swap(p2);
        vals.swap(v2);
    };
    order();

    double stall_reference = vals[0];
    int stall_age = 0;
    for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
        // centroid of all but the worst
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (size_t i = 0; i + 1 < pts.size(); ++i) centroid += pts[i];
        centroid /= static_cast<double>(pts.size() - 1);
        const Eigen::VectorXd& worst = pts.back();

        const Eigen::VectorXd reflected = centroid + (centroid - worst);
        const double fr = f(reflected);
        ++out.evaluations;
        if (fr > vals[0]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst);
            const double fe = f(expanded);
            ++out.evaluations;
            if (fe > fr) {
                pts.back() = expanded;
                vals.back() = fe;
            } else {
                pts.back() = reflected;
                vals.back() = fr;
            }
        } else if (fr > vals[vals.size() - 2]) {
            pts.back() = reflected;
            vals.back() = fr;
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (worst - centroid);
            const double fc = f(contracted);
            ++out.evaluations;
            if (fc > vals.back()) {
                pts.back() = contracted;
                vals.back() = fc;
            } else {
                for (size_t i = 1; i < pts.size(); ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    vals[i] = f(pts[i]);
                    ++out.evaluations;
                }
            }
        }
        order();

        ++stall_age;
        if (stall_age >= stall_window) {
            const double scale = std::max(1.0, std::abs(vals[0]));
            if (vals[0] - stall_reference < rel_tol * scale) {
                out.converged = true;
                break;
            }
            stall_reference = vals[0];
            stall_age = 0;
        }
    }
    out.argmax = pts[0];
    out.value = vals[0];
    return out;
}

} // namespace sepmod::detail

#endif // SEPMOD_DETAIL_NELDER_MEAD_HPP
