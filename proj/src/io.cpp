#include "asbarron/io.hpp"

#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>

namespace asb {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return j;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
    if (!out) throw InputError("write failed for " + path);
}

Eigen::VectorXd read_vector(const json& j, std::size_t expected, const std::string& what) {
    if (!j.is_array() || j.size() != expected)
        throw InputError(what + ": expected an array of " + std::to_string(expected) + " numbers");
    Eigen::VectorXd v(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        if (!j[i].is_number()) throw InputError(what + ": non-numeric entry");
        v(static_cast<long>(i)) = j[i].get<double>();
    }
    return v;
}

} // namespace

BarronMeasure parse_measure(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("measure parse: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("atoms"))
        throw InputError("measure: need top-level keys n, d, atoms");
    BarronMeasure rho;
    rho.n = j["n"].get<int>();
    rho.d = j["d"].get<int>();
    if (rho.n < 1 || rho.d < 1) throw InputError("measure: n, d must be >= 1");
    const std::size_t nd = static_cast<std::size_t>(rho.n) * rho.d;
    if (!j["atoms"].is_array()) throw InputError("measure: atoms must be an array");
    std::size_t idx = 0;
    for (const auto& ja : j["atoms"]) {
        const std::string what = "measure atom " + std::to_string(idx);
        if (!ja.is_object() || !ja.contains("a") || !ja.contains("b") || !ja.contains("w"))
            throw InputError(what + ": need keys a, b, w");
        BarronAtom atom;
        atom.a = ja["a"].get<double>();
        atom.b = ja["b"].get<double>();
        atom.w = read_vector(ja["w"], nd, what + ".w");
        rho.atoms.push_back(std::move(atom));
        ++idx;
    }
    rho.validate();
    return rho;
}

std::string measure_to_json(const BarronMeasure& rho) {
    std::ostringstream os;
    os << "{\n  \"n\": " << rho.n << ",\n  \"d\": " << rho.d << ",\n  \"atoms\": [";
    for (std::size_t i = 0; i < rho.atoms.size(); ++i) {
        const auto& atom = rho.atoms[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{ \"a\": " << format_double(atom.a) << ", \"b\": " << format_double(atom.b)
           << ", \"w\": [";
        for (long k = 0; k < atom.w.size(); ++k)
            os << (k ? ", " : "") << format_double(atom.w(k));
        os << "] }";
    }
    os << (rho.atoms.empty() ? "]" : "\n  ]") << "\n}\n";
    return os.str();
}

BarronMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_measure(buf.str());
}

void save_measure(const std::string& path, const BarronMeasure& rho) {
    write_file(path, measure_to_json(rho));
}

void save_slater_sum(const std::string& path, const SlaterSum& s) {
    s.validate();
    std::ostringstream os;
    os << "{\n  \"n\": " << s.n() << ",\n  \"d\": " << s.d() << ",\n  \"terms\": [";
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        const auto& t = s.terms[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{ \"re\": " << format_double(t.coeff.real())
           << ", \"im\": " << format_double(t.coeff.imag()) << ", \"w\": [";
        const Eigen::VectorXd flat = t.w.flat();
        for (long k = 0; k < flat.size(); ++k) os << (k ? ", " : "") << format_double(flat(k));
        os << "] }";
    }
    os << (s.terms.empty() ? "]" : "\n  ]") << "\n}\n";
    write_file(path, os.str());
}

SlaterSum load_slater_sum(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("terms"))
        throw InputError("slater sum: need top-level keys n, d, terms");
    const int n = j["n"].get<int>();
    const int d = j["d"].get<int>();
    if (n < 1 || d < 1) throw InputError("slater sum: n, d must be >= 1");
    SlaterSum s;
    std::size_t idx = 0;
    for (const auto& jt : j["terms"]) {
        const std::string what = "slater term " + std::to_string(idx);
        if (!jt.is_object() || !jt.contains("re") || !jt.contains("im") || !jt.contains("w"))
            throw InputError(what + ": need keys re, im, w");
        const Eigen::VectorXd flat =
            read_vector(jt["w"], static_cast<std::size_t>(n) * d, what + ".w");
        s.terms.push_back({Complex(jt["re"].get<double>(), jt["im"].get<double>()),
                           WaveMatrix::from_flat(flat, n, d)});
        ++idx;
    }
    s.validate();
    return s;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), width_(header.size()) {
    if (!out_) throw InputError("cannot write " + path);
    if (header.empty()) throw InputError("CsvWriter: empty header");
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw InputError("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (double v : cells) text.push_back(format_double(v));
    row(text);
}

} // namespace asb
