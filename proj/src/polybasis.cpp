#include "rbfqf/polybasis.hpp"

#include "rbfqf/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace rbfqf {

namespace {

// int_lo^hi ((x - s) / h)^e dx
double monomial_integral(int e, double lo, double hi, double s, double h) {
    const double tl = (lo - s) / h;
    const double th = (hi - s) / h;
    return h * (std::pow(th, e + 1) - std::pow(tl, e + 1)) / (e + 1);
}

// Integrals of the product of monomials i and j over the box, shifted frame.
Eigen::MatrixXd monomial_product_integrals(const PolyBasis& b, const Domain& domain) {
    const int k = b.size();
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double v = 1.0;
            for (int ax = 0; ax < domain.dim; ++ax)
                v *= monomial_integral(b.exponents[i][ax] + b.exponents[j][ax], domain.lo[ax],
                                       domain.hi[ax], b.shift[ax], b.scale[ax]);
            m(i, j) = v;
        }
    return m;
}

} // namespace

int poly_dim(int dim, int degree) {
    if (degree < -1)
        throw std::invalid_argument("polynomial degree must be >= -1");
    if (degree < 0)
        return 0;
    return dim == 1 ? degree + 1 : (degree + 1) * (degree + 2) / 2;
}

std::vector<std::array<int, 2>> graded_lex_exponents(int dim, int degree) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("polynomial dimension must be 1 or 2");
    std::vector<std::array<int, 2>> out;
    out.reserve(poly_dim(dim, degree));
    for (int t = 0; t <= degree; ++t) {
        if (dim == 1)
            out.push_back({t, 0});
        else
            for (int ex = t; ex >= 0; --ex)
                out.push_back({ex, t - ex});
    }
    return out;
}

void PolyBasis::monomials(const Point& x, double* out) const {
    const double t0 = (x[0] - shift[0]) / scale[0];
    const double t1 = dim == 2 ? (x[1] - shift[1]) / scale[1] : 0.0;
    // powers up to the degree, reused across monomials
    std::array<double, 32> p0{}, p1{};
    p0[0] = p1[0] = 1.0;
    for (int e = 1; e <= degree; ++e) {
        p0[e] = p0[e - 1] * t0;
        p1[e] = p1[e - 1] * t1;
    }
    for (int j = 0; j < size(); ++j)
        out[j] = p0[exponents[j][0]] * p1[exponents[j][1]];
}

void PolyBasis::eval(const Point& x, double* out) const {
    const int k = size();
    std::array<double, 512> mono{};
    monomials(x, mono.data());
    for (int i = 0; i < k; ++i) {
        double s = 0.0;
        for (int j = 0; j < k; ++j)
            s += coeffs(i, j) * mono[j];
        out[i] = s;
    }
}

Eigen::VectorXd PolyBasis::eval(const Point& x) const {
    Eigen::VectorXd v(size());
    eval(x, v.data());
    return v;
}

Eigen::MatrixXd PolyBasis::eval_matrix(const PointSet& ps) const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(ps.size()), size());
    Eigen::VectorXd row(size());
    for (std::size_t n = 0; n < ps.size(); ++n) {
        eval(ps[n], row.data());
        m.row(static_cast<Eigen::Index>(n)) = row.transpose();
    }
    return m;
}

PolyBasis monomial_basis(int dim, int degree) {
    if (degree > 30)
        throw std::invalid_argument("polynomial degree above 30 is not supported");
    PolyBasis b;
    b.dim = dim;
    b.degree = degree;
    b.exponents = graded_lex_exponents(dim, degree);
    b.coeffs = Eigen::MatrixXd::Identity(b.size(), b.size());
    return b;
}

double discrete_ip(const PointSet& ps, const std::function<double(const Point&)>& u,
                   const std::function<double(const Point&)>& v) {
    if (ps.size() == 0)
        throw std::invalid_argument("discrete inner product over an empty point set");
    double s = 0.0;
    for (const auto& x : ps.points)
        s += u(x) * v(x);
    return ps.domain.volume() / static_cast<double>(ps.size()) * s;
}

PolyBasis build_dops(const PointSet& ps, int degree) {
    if (degree < 0)
        throw std::invalid_argument("discrete orthogonal polynomials need degree >= 0");
    PolyBasis b = monomial_basis(ps.domain.dim, degree);
    const Domain& dom = ps.domain;
    b.shift = dom.center();
    b.scale = {0.5 * dom.width(0), dom.dim == 2 ? 0.5 * dom.width(1) : 1.0};
    const int k = b.size();
    const auto n = static_cast<Eigen::Index>(ps.size());

    Eigen::MatrixXd v(n, k);
    Eigen::VectorXd buf(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        b.monomials(ps[static_cast<std::size_t>(i)], buf.data());
        v.row(i) = buf.transpose();
    }

    if (n < k)
        throw RankDeficientError("point set is not P_d-unisolvent", static_cast<std::size_t>(n),
                                 static_cast<std::size_t>(k));
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        rank += sv(i) > cutoff ? 1 : 0;
    if (rank < k)
        throw RankDeficientError("point set is not P_d-unisolvent", static_cast<std::size_t>(rank),
                                 static_cast<std::size_t>(k));

    // Columns of q hold the orthonormalized values at the points, rows of c
    // the matching monomial coefficients.
    const double w = dom.volume() / static_cast<double>(n);
    Eigen::MatrixXd q = v;
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(k, k);
    for (int j = 0; j < k; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i) {
                const double r = w * q.col(i).dot(q.col(j));
                q.col(j) -= r * q.col(i);
                c.row(j) -= r * c.row(i);
            }
        const double norm = std::sqrt(w * q.col(j).squaredNorm());
        q.col(j) /= norm;
        c.row(j) /= norm;
    }
    b.coeffs = c;
    return b;
}

Eigen::VectorXd poly_moments(const PolyBasis& basis, const Domain& domain) {
    if (basis.dim != domain.dim)
        throw std::invalid_argument("basis and domain dimensions differ");
    const int k = basis.size();
    Eigen::VectorXd mono(k);
    for (int j = 0; j < k; ++j) {
        double v = 1.0;
        for (int ax = 0; ax < domain.dim; ++ax)
            v *= monomial_integral(basis.exponents[j][ax], domain.lo[ax], domain.hi[ax],
                                   basis.shift[ax], basis.scale[ax]);
        mono(j) = v;
    }
    return basis.coeffs * mono;
}

Eigen::MatrixXd continuous_gram(const PolyBasis& basis, const Domain& domain) {
    if (basis.dim != domain.dim)
        throw std::invalid_argument("basis and domain dimensions differ");
    return basis.coeffs * monomial_product_integrals(basis, domain) * basis.coeffs.transpose();
}

Eigen::MatrixXd discrete_gram(const PolyBasis& basis, const PointSet& ps) {
    const Eigen::MatrixXd p = basis.eval_matrix(ps);
    return ps.domain.volume() / static_cast<double>(ps.size()) * (p.transpose() * p);
}

} // namespace rbfqf
