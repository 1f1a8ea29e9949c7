#include "dephasim/format.hpp"

#include <cstdio>

namespace dephasim {

std::string format_real(double value, int significant_digits) {
    if (value == 0.0) {
        value = 0.0;  // normalize -0
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
    return buf;
}

std::string format_complex(Complex value, int significant_digits) {
    return format_real(value.real(), significant_digits) + "," + format_real(value.imag(), significant_digits);
}

void dump_matrix(std::ostream& out, const Matrix& m, int significant_digits) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) {
                out << ' ';
            }
            out << format_complex(m(r, c), significant_digits);
        }
        out << '\n';
    }
}

}  // namespace dephasim
