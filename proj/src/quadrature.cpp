#include "dicke/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace dicke::quad {

namespace {

constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class Map { identity, upper_tail, lower_tail };

// Integrand in the variable actually sampled, including the Jacobian.
struct Piece {
    Map map{Map::identity};
    double origin{0.0};
};

Eigen::VectorXcd eval(const Integrand& f, const Piece& piece, double t) {
    switch (piece.map) {
        case Map::identity:
            return f(t);
        case Map::upper_tail: {
            const double s = 1.0 - t;
            return f(piece.origin + t / s) / (s * s);
        }
        case Map::lower_tail: {
            const double s = 1.0 - t;
            return f(piece.origin - t / s) / (s * s);
        }
    }
    return {};
}

struct Interval {
    int piece{0};
    double a{0.0};
    double b{0.0};
    Eigen::VectorXcd value;
    double error{0.0};

    bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gauss_kronrod(const Integrand& f, const std::vector<Piece>& pieces, int piece,
                       double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Piece& pc = pieces[piece];

    const Eigen::VectorXcd fc = eval(f, pc, c);
    Eigen::VectorXcd k = kWgk[7] * fc;
    Eigen::VectorXcd g = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const Eigen::VectorXcd sum = eval(f, pc, c - dx) + eval(f, pc, c + dx);
        k += kWgk[j] * sum;
        if (j % 2 == 1) {
            g += kWg[j / 2] * sum;
        }
    }
    Interval iv;
    iv.piece = piece;
    iv.a = a;
    iv.b = b;
    iv.value = h * k;
    iv.error = (h * (k - g)).cwiseAbs().maxCoeff();
    return iv;
}

Result adapt(const Integrand& f, const std::vector<Piece>& pieces,
             const std::vector<std::array<double, 2>>& spans, const std::vector<int>& owner,
             const Options& opt) {
    std::priority_queue<Interval> heap;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        heap.push(gauss_kronrod(f, pieces, owner[i], spans[i][0], spans[i][1]));
    }

    Result r;
    while (true) {
        // Recompute totals from scratch to avoid drift from repeated subtraction.
        std::vector<Interval> all;
        all.reserve(heap.size());
        Eigen::VectorXcd total = Eigen::VectorXcd::Zero(heap.top().value.size());
        double err = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            total += copy.top().value;
            err += copy.top().error;
            copy.pop();
        }
        r.value = total;
        r.error = err;
        r.intervals = static_cast<int>(heap.size());
        const double scale = total.cwiseAbs().maxCoeff();
        if (err <= std::max(opt.abs_tol, opt.rel_tol * scale)) {
            r.converged = true;
            return r;
        }
        if (r.intervals >= opt.max_intervals) {
            return r;
        }
        // Split a batch of the worst intervals per pass so the totals are
        // not recomputed after every single bisection.
        const int batch = std::max(1, r.intervals / 8);
        for (int i = 0; i < batch && !heap.empty(); ++i) {
            const Interval worst = heap.top();
            heap.pop();
            const double mid = 0.5 * (worst.a + worst.b);
            heap.push(gauss_kronrod(f, pieces, worst.piece, worst.a, mid));
            heap.push(gauss_kronrod(f, pieces, worst.piece, mid, worst.b));
        }
    }
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Options& opt) {
    return adapt(f, {Piece{}}, {{a, b}}, {0}, opt);
}

Result integrate_real_line(const Integrand& f, std::span<const double> breakpoints,
                           const Options& opt) {
    std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.empty()) {
        cuts.push_back(0.0);
    }

    std::vector<Piece> pieces{{Map::identity, 0.0},
                              {Map::lower_tail, cuts.front()},
                              {Map::upper_tail, cuts.back()}};
    std::vector<std::array<double, 2>> spans;
    std::vector<int> owner;
    spans.push_back({0.0, 1.0});
    owner.push_back(1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        spans.push_back({cuts[i], cuts[i + 1]});
        owner.push_back(0);
    }
    spans.push_back({0.0, 1.0});
    owner.push_back(2);
    return adapt(f, pieces, spans, owner, opt);
}

}  // namespace dicke::quad
