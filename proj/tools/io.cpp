#include "io.hpp"

#include "mlmat/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mlmat::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
    if (!line.empty() && line.back() == sep) parts.emplace_back();
    return parts;
}

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }
[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }

CMatrix read_matrix_market(std::istream& in, const std::string& banner) {
    std::string lower = banner;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower.find("array") == std::string::npos)
        parse_error("Matrix Market: only the array (dense) format is supported");
    const bool complex = lower.find("complex") != std::string::npos;
    std::string line;
    int line_no = 1;
    long rows = -1, cols = -1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '%') continue;
        std::istringstream is(line);
        if (!(is >> rows >> cols) || rows < 1 || cols < 1)
            parse_error("Matrix Market line " + std::to_string(line_no) + ": bad size line");
        break;
    }
    if (rows < 0) parse_error("Matrix Market: missing size line");
    CMatrix M(rows, cols);
    long idx = 0;
    while (idx < rows * cols && std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '%') continue;
        std::istringstream is(line);
        double re = 0.0, im = 0.0;
        if (!(is >> re) || (complex && !(is >> im)))
            parse_error("Matrix Market line " + std::to_string(line_no) + ": bad entry");
        M(idx % rows, idx / rows) = {re, im};  // column-major
        ++idx;
    }
    if (idx != rows * cols) parse_error("Matrix Market: too few entries");
    return M;
}

RVector json_vector(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) schema_error("field '" + field + "': expected an array of numbers");
    RVector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            schema_error("field '" + field + "[" + std::to_string(i) + "]': expected a number");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

std::vector<double> to_std(const RVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

cplx parse_complex(const std::string& token) {
    std::string s = trim(token);
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) parse_error("empty number");
    double re = 0.0, im = 0.0;
    const char last = s.back();
    if (last != 'i' && last != 'j' && last != 'I' && last != 'J') {
        if (!parse_double(s, re)) parse_error("not a number: '" + token + "'");
        return {re, 0.0};
    }
    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last sign that does not belong to an exponent.
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    const std::string re_s = split == std::string::npos ? "" : body.substr(0, split);
    std::string im_s = split == std::string::npos ? body : body.substr(split);
    if (im_s.empty() || im_s == "+") im_s = "1";
    else if (im_s == "-") im_s = "-1";
    if (!re_s.empty() && !parse_double(re_s, re)) parse_error("bad real part in '" + token + "'");
    if (!parse_double(im_s, im)) parse_error("bad imaginary part in '" + token + "'");
    return {re, im};
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", x == 0.0 ? 0.0 : x);
    return buf;
}

std::string format_complex(cplx z) {
    std::string im = format_real(z.imag());
    if (im[0] != '-') im = "+" + im;
    return format_real(z.real()) + im + "i";
}

CMatrix read_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) parse_error("empty matrix input");
    if (line.rfind("%%MatrixMarket", 0) == 0) return read_matrix_market(in, line);

    std::vector<std::vector<cplx>> rows;
    int line_no = 0;
    bool first = true;
    do {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cells = split(t, ',');
        std::vector<cplx> row;
        try {
            for (const auto& c : cells) row.push_back(parse_complex(c));
        } catch (const Error& e) {
            if (first) {  // header row
                first = false;
                continue;
            }
            parse_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        first = false;
        rows.push_back(std::move(row));
    } while (std::getline(in, line));

    if (rows.empty()) parse_error("matrix input has no rows");
    const size_t n = rows.size();
    for (size_t i = 0; i < n; ++i)
        if (rows[i].size() != rows[0].size())
            throw Error(ErrorCode::DimensionError, "row " + std::to_string(i + 1) + " has " +
                                                       std::to_string(rows[i].size()) + " entries, expected " +
                                                       std::to_string(rows[0].size()));
    CMatrix M(n, rows[0].size());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < rows[0].size(); ++j) M(i, j) = rows[i][j];
    return M;
}

CMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open '" + path + "'");
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const CMatrix& M) {
    const bool real = M.imag().isZero(0.0);
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << "c" << j;
    out << "\n";
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out << ",";
            out << (real ? format_real(M(i, j).real()) : format_complex(M(i, j)));
        }
        out << "\n";
    }
}

std::vector<double> parse_time_grid(const std::string& spec) {
    const std::string s = trim(spec);
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        double a = 0, h = 0, b = 0;
        if (parts.size() != 3 || !parse_double(parts[0], a) || !parse_double(parts[1], h) ||
            !parse_double(parts[2], b) || !(h > 0.0) || b < a)
            parse_error("time grid must be start:step:end with step > 0: '" + spec + "'");
        const long count = std::lround((b - a) / h);
        for (long i = 0; i <= count; ++i) out.push_back(a + i * h);
        return out;
    }
    for (const auto& p : split(s, ',')) {
        double v = 0;
        if (!parse_double(p, v)) parse_error("bad time value '" + p + "'");
        out.push_back(v);
    }
    if (out.empty()) parse_error("empty time grid");
    return out;
}

Rational rational_from_double(double x, long max_den) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::IrrationalOrder, "order must be positive");
    // Continued fraction convergents.
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        const long p2 = static_cast<long>(a) * p1 + p0, q2 = static_cast<long>(a) * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (std::abs(static_cast<double>(p1) / q1 - x) <= 1e-12 * x) return {p1, q1};
        const double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    throw Error(ErrorCode::IrrationalOrder, "order " + format_real(x) + " is not p/q with q <= " +
                                                std::to_string(max_den));
}

FdeProblem parse_problem(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        schema_error(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) schema_error("top level must be an object");
    if (!j.contains("type") || !j["type"].is_string()) schema_error("field 'type': expected \"multiterm\" or \"system\"");

    FdeProblem pr;
    const std::string type = j["type"];
    if (j.contains("forcing")) {
        const auto& f = j["forcing"];
        if (!f.is_object()) schema_error("field 'forcing': expected {\"poly\": [...]} or {\"none\": true}");
        if (f.contains("poly")) pr.poly = to_std(json_vector(f["poly"], "forcing.poly"));
        else if (!f.contains("none")) schema_error("field 'forcing': expected key 'poly' or 'none'");
        if (f.contains("direction")) pr.direction = json_vector(f["direction"], "forcing.direction");
    }

    if (type == "multiterm") {
        pr.type = FdeProblem::Type::Multiterm;
        if (!j.contains("a")) schema_error("field 'a': missing");
        pr.multiterm.a = to_std(json_vector(j["a"], "a"));
        if (pr.multiterm.a.size() < 2) schema_error("field 'a': need at least two coefficients");
        if (!j.contains("alpha")) schema_error("field 'alpha': missing");
        const auto& al = j["alpha"];
        if (al.is_object()) {
            if (!al.contains("p") || !al.contains("q") || !al["p"].is_number_integer() || !al["q"].is_number_integer())
                schema_error("field 'alpha': expected {\"p\": int, \"q\": int}");
            pr.multiterm.alpha = {al["p"].get<long>(), al["q"].get<long>()};
        } else if (al.is_number()) {
            pr.multiterm.alpha = rational_from_double(al.get<double>());
        } else {
            schema_error("field 'alpha': expected {p, q} or a number");
        }
        if (j.contains("b")) pr.multiterm.b = to_std(json_vector(j["b"], "b"));
        pr.multiterm.f = pr.poly;
    } else if (type == "system") {
        pr.type = FdeProblem::Type::System;
        if (!j.contains("A") || !j["A"].is_array() || j["A"].empty()) schema_error("field 'A': expected array of rows");
        const size_t n = j["A"].size();
        pr.system.A.resize(n, n);
        for (size_t r = 0; r < n; ++r) {
            const RVector row = json_vector(j["A"][r], "A[" + std::to_string(r) + "]");
            if (static_cast<size_t>(row.size()) != n) schema_error("field 'A': matrix must be square");
            pr.system.A.row(r) = row.transpose();
        }
        if (!j.contains("alpha") || !j["alpha"].is_number()) schema_error("field 'alpha': expected a number");
        pr.system.alpha = j["alpha"].get<double>();
        if (!(pr.system.alpha > 0.0)) schema_error("field 'alpha': must be positive");
        const int m = std::max(1, static_cast<int>(std::ceil(pr.system.alpha - 1e-12)));
        if (!j.contains("Y0") || !j["Y0"].is_array()) schema_error("field 'Y0': expected array of vectors");
        for (size_t l = 0; l < j["Y0"].size(); ++l) {
            pr.system.Y0.push_back(json_vector(j["Y0"][l], "Y0[" + std::to_string(l) + "]"));
            if (static_cast<size_t>(pr.system.Y0.back().size()) != n) schema_error("field 'Y0': vector size must match A");
        }
        if (static_cast<int>(pr.system.Y0.size()) != m)
            schema_error("field 'Y0': need ceil(alpha) = " + std::to_string(m) + " vectors");
        if (!pr.poly.empty() && static_cast<size_t>(pr.direction.size()) != n)
            schema_error("field 'forcing.direction': required with poly forcing, size must match A");
    } else {
        schema_error("field 'type': expected \"multiterm\" or \"system\", got \"" + type + "\"");
    }
    return pr;
}

FdeProblem read_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

}  // namespace mlmat::io
