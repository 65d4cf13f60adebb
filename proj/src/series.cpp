#include "slab/series.hpp"

#include <algorithm>
#include <cmath>

namespace slab {

TaylorSeries TaylorSeries::constant(cdouble value, cdouble x0, int order) {
    std::vector<cdouble> c(static_cast<std::size_t>(order) + 1, cdouble(0.0));
    c[0] = value;
    return TaylorSeries(x0, std::move(c));
}

TaylorSeries TaylorSeries::identity(cdouble x0, int order) {
    std::vector<cdouble> c(static_cast<std::size_t>(order) + 1, cdouble(0.0));
    c[0] = x0;
    if (order >= 1) c[1] = 1.0;
    return TaylorSeries(x0, std::move(c));
}

void TaylorSeries::check_compatible(const TaylorSeries& o) const {
    if (std::abs(x0_ - o.x0_) > 1e-12)
        throw lab_error("series basepoints differ");
    if (c_.empty() || o.c_.empty()) throw TruncationUnderflow("empty series operand");
}

TaylorSeries TaylorSeries::operator+(const TaylorSeries& o) const {
    check_compatible(o);
    std::size_t n = std::min(c_.size(), o.c_.size());
    std::vector<cdouble> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = c_[k] + o.c_[k];
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::operator-(const TaylorSeries& o) const {
    check_compatible(o);
    std::size_t n = std::min(c_.size(), o.c_.size());
    std::vector<cdouble> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = c_[k] - o.c_[k];
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::operator*(const TaylorSeries& o) const {
    check_compatible(o);
    std::size_t n = std::min(c_.size(), o.c_.size());
    std::vector<cdouble> out(n, cdouble(0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) out[i + j] += c_[i] * o.c_[j];
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::operator*(cdouble s) const {
    std::vector<cdouble> out(c_);
    for (auto& v : out) v *= s;
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::operator+(cdouble s) const {
    std::vector<cdouble> out(c_);
    if (out.empty()) throw TruncationUnderflow("empty series");
    out[0] += s;
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::operator-() const { return (*this) * cdouble(-1.0); }

TaylorSeries TaylorSeries::derivative() const {
    if (c_.size() <= 1) throw TruncationUnderflow("derivative exhausts the series");
    std::vector<cdouble> out(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
        out[k - 1] = static_cast<double>(k) * c_[k];
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::derivative(int k) const {
    TaylorSeries t = *this;
    for (int i = 0; i < k; ++i) t = t.derivative();
    return t;
}

TaylorSeries TaylorSeries::antiderivative() const {
    std::vector<cdouble> out(c_.size() + 1);
    out[0] = 0.0;
    for (std::size_t k = 0; k < c_.size(); ++k)
        out[k + 1] = c_[k] / static_cast<double>(k + 1);
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::reciprocal() const {
    if (c_.empty()) throw TruncationUnderflow("empty series");
    if (std::abs(c_[0]) < 1e-14)
        throw NonUnitLeadingCoefficient("series is not a unit at the basepoint");
    std::vector<cdouble> out(c_.size());
    out[0] = 1.0 / c_[0];
    for (std::size_t k = 1; k < c_.size(); ++k) {
        cdouble acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * out[k - j];
        out[k] = -acc / c_[0];
    }
    return TaylorSeries(x0_, std::move(out));
}

double TaylorSeries::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

TaylorSeries TaylorSeries::derivative_padded() const {
    std::vector<cdouble> out(c_.size(), cdouble(0.0));
    for (std::size_t k = 1; k < c_.size(); ++k)
        out[k - 1] = static_cast<double>(k) * c_[k];
    return TaylorSeries(x0_, std::move(out));
}

TaylorSeries TaylorSeries::truncated(int order) const {
    std::size_t n = std::min(c_.size(), static_cast<std::size_t>(order) + 1);
    return TaylorSeries(x0_, std::vector<cdouble>(c_.begin(), c_.begin() + static_cast<long>(n)));
}

BiSeries BiSeries::operator+(const BiSeries& o) const {
    BiSeries out(x0_, y0_, std::min(nx_, o.nx_), std::min(ny_, o.ny_));
    for (int i = 0; i <= out.nx_; ++i)
        for (int j = 0; j <= out.ny_; ++j) out.set(i, j, coeff(i, j) + o.coeff(i, j));
    return out;
}

BiSeries BiSeries::operator-(const BiSeries& o) const {
    BiSeries out(x0_, y0_, std::min(nx_, o.nx_), std::min(ny_, o.ny_));
    for (int i = 0; i <= out.nx_; ++i)
        for (int j = 0; j <= out.ny_; ++j) out.set(i, j, coeff(i, j) - o.coeff(i, j));
    return out;
}

BiSeries BiSeries::operator*(const BiSeries& o) const {
    BiSeries out(x0_, y0_, std::min(nx_, o.nx_), std::min(ny_, o.ny_));
    for (int i = 0; i <= out.nx_; ++i)
        for (int j = 0; j <= out.ny_; ++j) {
            cdouble acc = 0.0;
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b) acc += coeff(a, b) * o.coeff(i - a, j - b);
            out.set(i, j, acc);
        }
    return out;
}

BiSeries BiSeries::operator*(cdouble s) const {
    BiSeries out = *this;
    for (auto& v : out.c_) v *= s;
    return out;
}

BiSeries BiSeries::dx() const {
    if (nx_ < 1) throw TruncationUnderflow("x-derivative exhausts the series");
    BiSeries out(x0_, y0_, nx_ - 1, ny_);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j <= ny_; ++j) out.set(i, j, static_cast<double>(i + 1) * coeff(i + 1, j));
    return out;
}

BiSeries BiSeries::dy() const {
    if (ny_ < 1) throw TruncationUnderflow("y-derivative exhausts the series");
    BiSeries out(x0_, y0_, nx_, ny_ - 1);
    for (int i = 0; i <= nx_; ++i)
        for (int j = 0; j < ny_; ++j) out.set(i, j, static_cast<double>(j + 1) * coeff(i, j + 1));
    return out;
}

BiSeries BiSeries::antiderivative_x() const {
    BiSeries out(x0_, y0_, nx_ + 1, ny_);
    for (int i = 0; i <= nx_; ++i)
        for (int j = 0; j <= ny_; ++j) out.set(i + 1, j, coeff(i, j) / static_cast<double>(i + 1));
    return out;
}

double BiSeries::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

TriSeries TriSeries::zero(cdouble x0, cdouble y0, int nx, int ny) {
    TriSeries t;
    for (int k = 0; k < 3; ++k) t.comp[k] = BiSeries(x0, y0, nx, ny);
    return t;
}

TriSeries TriSeries::operator+(const TriSeries& o) const {
    TriSeries t;
    for (int k = 0; k < 3; ++k) t.comp[k] = comp[k] + o.comp[k];
    return t;
}

TriSeries TriSeries::operator-(const TriSeries& o) const {
    TriSeries t;
    for (int k = 0; k < 3; ++k) t.comp[k] = comp[k] - o.comp[k];
    return t;
}

TriSeries TriSeries::operator*(const TriSeries& o) const {
    TriSeries t;
    t.comp[0] = comp[0] * o.comp[0];
    t.comp[1] = comp[0] * o.comp[1] + comp[1] * o.comp[0];
    t.comp[2] = comp[0] * o.comp[2] + comp[1] * o.comp[1] + comp[2] * o.comp[0];
    return t;
}

TriSeries TriSeries::operator*(cdouble s) const {
    TriSeries t;
    for (int k = 0; k < 3; ++k) t.comp[k] = comp[k] * s;
    return t;
}

TriSeries TriSeries::dx() const {
    TriSeries t;
    for (int k = 0; k < 3; ++k) t.comp[k] = comp[k].dx();
    return t;
}

TriSeries TriSeries::dy() const {
    TriSeries t;
    for (int k = 0; k < 3; ++k) t.comp[k] = comp[k].dy();
    return t;
}

TriSeries TriSeries::dt() const {
    TriSeries t;
    t.comp[0] = comp[1];
    t.comp[1] = comp[2] * cdouble(2.0);
    t.comp[2] = comp[2] * cdouble(0.0);
    return t;
}

double TriSeries::max_abs_coeff() const {
    double m = 0.0;
    for (int k = 0; k < 3; ++k) m = std::max(m, comp[k].max_abs_coeff());
    return m;
}

}  // namespace slab
