#include "toepexp/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace toepexp {

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
}

Vec vec_from_json(const json& a, Index n, const char* what) {
    if (!a.is_array() || static_cast<Index>(a.size()) != n)
        throw ConfigError(std::string("expected ") + std::to_string(n) + " entries in '" + what + "'");
    Vec v(n);
    for (Index i = 0; i < n; ++i) {
        const json& e = a[static_cast<std::size_t>(i)];
        if (e.is_number()) v(i) = e.get<double>();
        else if (e.is_array() && e.size() == 2) v(i) = cplx(e[0].get<double>(), e[1].get<double>());
        else throw ConfigError(std::string("malformed entry in '") + what + "'");
    }
    return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const char magic[8] = {'T', 'O', 'E', 'P', 'G', 'E', 'N', '\0'};

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw ConfigError("generator file: truncated header");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(d);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw ConfigError("generator file: truncated data");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(u);
}

} // namespace

std::string toeplitz_to_json(const ToeplitzMatrix& t) {
    json j;
    j["n"] = t.n();
    j["col"] = vec_to_json(t.col());
    j["row"] = vec_to_json(t.row());
    return j.dump();
}

ToeplitzMatrix toeplitz_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const Index n = j.at("n").get<Index>();
        if (n < 1) throw ConfigError("toeplitz json: n must be positive");
        return make_toeplitz(vec_from_json(j.at("col"), n, "col"), vec_from_json(j.at("row"), n, "row"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("toeplitz json: ") + e.what());
    }
}

void write_toeplitz_csv(std::ostream& os, const ToeplitzMatrix& t) {
    os << "index,col_re,col_im,row_re,row_im\n";
    os.precision(17);
    for (Index i = 0; i < t.n(); ++i)
        os << i << ',' << t.col()(i).real() << ',' << t.col()(i).imag() << ',' << t.row()(i).real() << ','
           << t.row()(i).imag() << '\n';
}

ToeplitzMatrix read_toeplitz_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("toeplitz csv: empty input");
    if (line.rfind("index", 0) != 0) throw ConfigError("toeplitz csv: missing header");
    std::vector<cplx> col, row;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ss, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("toeplitz csv: bad number '" + cell + "'");
            }
        }
        if (v.size() != 5) throw ConfigError("toeplitz csv: expected 5 columns");
        if (static_cast<std::size_t>(v[0]) != col.size()) throw ConfigError("toeplitz csv: indices out of order");
        col.emplace_back(v[1], v[2]);
        row.emplace_back(v[3], v[4]);
    }
    Vec c = Eigen::Map<Vec>(col.data(), static_cast<Index>(col.size()));
    Vec r = Eigen::Map<Vec>(row.data(), static_cast<Index>(row.size()));
    return make_toeplitz(c, r);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ToeplitzMatrix read_toeplitz_file(const std::string& path) {
    if (ends_with(path, ".csv")) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open '" + path + "'");
        return read_toeplitz_csv(in);
    }
    return toeplitz_from_json(read_text_file(path));
}

void write_toeplitz_file(const std::string& path, const ToeplitzMatrix& t) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    if (ends_with(path, ".csv")) write_toeplitz_csv(out, t);
    else out << toeplitz_to_json(t) << '\n';
}

std::string generator_to_json(const Generator& gen) {
    json j;
    j["n"] = gen.n();
    j["r"] = gen.length();
    j["G"] = json::array();
    j["B"] = json::array();
    for (Index c = 0; c < gen.length(); ++c) {
        j["G"].push_back(vec_to_json(gen.G.col(c)));
        j["B"].push_back(vec_to_json(gen.B.col(c)));
    }
    return j.dump();
}

Generator generator_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const Index n = j.at("n").get<Index>();
        const Index r = j.at("r").get<Index>();
        if (n < 1 || r < 0) throw ConfigError("generator json: bad dimensions");
        const json& g = j.at("G");
        const json& b = j.at("B");
        if (!g.is_array() || !b.is_array() || static_cast<Index>(g.size()) != r || static_cast<Index>(b.size()) != r)
            throw ConfigError("generator json: expected r columns in G and B");
        Mat gm(n, r), bm(n, r);
        for (Index c = 0; c < r; ++c) {
            gm.col(c) = vec_from_json(g[static_cast<std::size_t>(c)], n, "G");
            bm.col(c) = vec_from_json(b[static_cast<std::size_t>(c)], n, "B");
        }
        return Generator(std::move(gm), std::move(bm));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("generator json: ") + e.what());
    }
}

void write_generator_binary(std::ostream& os, const Generator& gen) {
    os.write(magic, 8);
    put_u32(os, static_cast<std::uint32_t>(gen.n()));
    put_u32(os, static_cast<std::uint32_t>(gen.length()));
    for (const Mat* m : {&gen.G, &gen.B})
        for (Index c = 0; c < m->cols(); ++c)
            for (Index i = 0; i < m->rows(); ++i) {
                put_f64(os, (*m)(i, c).real());
                put_f64(os, (*m)(i, c).imag());
            }
}

Generator read_generator_binary(std::istream& is) {
    char head[8];
    if (!is.read(head, 8) || std::memcmp(head, magic, 8) != 0) throw ConfigError("generator file: bad magic");
    const Index n = get_u32(is);
    const Index r = get_u32(is);
    Mat g(n, r), b(n, r);
    for (Mat* m : {&g, &b})
        for (Index c = 0; c < r; ++c)
            for (Index i = 0; i < n; ++i) {
                const double re = get_f64(is);
                const double im = get_f64(is);
                (*m)(i, c) = cplx(re, im);
            }
    return Generator(std::move(g), std::move(b));
}

Generator read_generator_file(const std::string& path) {
    if (ends_with(path, ".bin")) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open '" + path + "'");
        return read_generator_binary(in);
    }
    return generator_from_json(read_text_file(path));
}

void write_generator_file(const std::string& path, const Generator& gen) {
    if (ends_with(path, ".bin")) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + path + "'");
        write_generator_binary(out, gen);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << generator_to_json(gen) << '\n';
}

void write_dense_csv(std::ostream& os, const Mat& a) {
    const bool real = a.imag().cwiseAbs().maxCoeff() == 0.0;
    os.precision(17);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            if (j) os << ',';
            if (real) {
                os << a(i, j).real();
            } else {
                os << a(i, j).real() << (a(i, j).imag() < 0 || std::signbit(a(i, j).imag()) ? "" : "+")
                   << a(i, j).imag() << 'i';
            }
        }
        os << '\n';
    }
}

} // namespace toepexp
