#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "bigreen/oracles.hpp"
#include "bigreen/sym.hpp"

namespace bigreen::cli {

using nlohmann::json;

// exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitEmptySurface = 5;

/// Strict, locale-independent complex literal parser: "a", "a+bi", "a-bi",
/// "bi", "i", "-i" with decimal-point floats only.
inline Complex parse_complex(const std::string& text) {
    const char* b = text.data();
    const char* e = b + text.size();
    if (b == e) throw OutOfRange("empty complex literal");

    auto read_num = [&](const char*& it) -> double {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(it, e, v);
        if (ec != std::errc()) throw OutOfRange("malformed complex literal: " + text);
        it = ptr;
        return v;
    };

    const char* it = b;
    // pure imaginary forms: i, -i, +i, bi
    if (*it == 'i' && it + 1 == e) return Complex(0.0, 1.0);
    if ((*it == '+' || *it == '-') && it + 1 < e && it[1] == 'i' && it + 2 == e)
        return Complex(0.0, *it == '-' ? -1.0 : 1.0);

    double first = read_num(it);
    if (it == e) return Complex(first, 0.0);
    if (*it == 'i') {
        if (it + 1 != e) throw OutOfRange("malformed complex literal: " + text);
        return Complex(0.0, first);
    }
    if (*it != '+' && *it != '-') throw OutOfRange("malformed complex literal: " + text);
    const char* sign_pos = it;
    double second;
    if ((it + 1 < e && it[1] == 'i') && it + 2 == e) {
        second = (*sign_pos == '-') ? -1.0 : 1.0;
        it += 2;
    } else {
        it = (*sign_pos == '+') ? sign_pos + 1 : sign_pos;  // from_chars rejects '+'
        second = read_num(it);
        if (it == e || *it != 'i' || it + 1 != e)
            throw OutOfRange("malformed complex literal: " + text);
        ++it;
    }
    return Complex(first, second);
}

/// "re+imi,re+imi" -> pair of complex numbers.
inline std::pair<Complex, Complex> parse_complex_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw OutOfRange("expected 'c1,c2' complex pair: " + text);
    return {parse_complex(text.substr(0, comma)), parse_complex(text.substr(comma + 1))};
}

inline std::string fmt(double v) {
    if (v == kNegInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

/// RFC-4180 style quoting: quote fields containing comma, quote, or newline.
inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline json complex_json(Complex v) { return json::array({v.real(), v.imag()}); }

inline json certificate_json(const GreenResult& r) {
    json cert;
    cert["value"] = r.value;
    if (r.certificate) {
        cert["gap"] = r.certificate->gap;
        cert["lower_bound"] = r.certificate->lower;
        cert["upper_bound"] = r.certificate->upper;
    }
    cert["frame"] = r.frame == CertFrame::AxisFrame ? "G_z" : "T";
    if (r.frame_z) cert["frame_z"] = complex_json(*r.frame_z);
    if (r.lower_witness) {
        const auto& f = *r.lower_witness;
        cert["lower"] = {{"t", f.t},
                         {"tau", complex_json(f.tau.value())},
                         {"omega", complex_json(f.omega.value())},
                         {"c", complex_json(f.c.value())},
                         {"d", complex_json(f.d.value())}};
    }
    if (r.disk_params) {
        const auto& d = *r.disk_params;
        json upper = {{"alpha", complex_json(d.alpha.value())},
                      {"beta", complex_json(d.beta.value())},
                      {"c", complex_json(d.c.value())},
                      {"t", d.t},
                      {"gamma", complex_json(d.gamma.value())},
                      {"omega", complex_json(d.omega.value())},
                      {"theta", d.theta.angle()}};
        if (r.zeta) upper["zeta"] = complex_json(*r.zeta);
        cert["upper"] = upper;
    }
    return cert;
}

struct GreenArgs {
    std::string pole_a, pole_b, eval;
    bool certify = false;
};

inline int cmd_green(const GreenArgs& args, std::ostream& out) {
    const auto [a1, a2] = parse_complex_pair(args.pole_a);
    const auto [b1, b2] = parse_complex_pair(args.pole_b);
    const auto [e1, e2] = parse_complex_pair(args.eval);
    const auto r = green(BidiskPoint(a1, a2), BidiskPoint(b1, b2), BidiskPoint(e1, e2));
    out << "region: " << int(r.region.region) << "\n";
    out << "value: " << fmt(r.value) << "\n";
    if (r.theta_branch) out << "theta: " << fmt(r.theta_branch->theta.angle()) << "\n";
    if (r.certificate) out << "cert_gap: " << fmt(r.certificate->gap) << "\n";
    if (args.certify) out << certificate_json(r).dump(2) << "\n";
    return kExitOk;
}

enum class SweepDomain { BidiskEvalGrid, AxisZGrid, SymBidiskGrid };

/// Grid sweep request; resolutions must be at least 2 per axis.
struct SweepSpec {
    SweepDomain domain = SweepDomain::AxisZGrid;
    int n1 = 2;
    int n2 = 2;
    double p = 0.5, q = 0.5;
    double z1min = -0.9, z1max = 0.9;
    double z2min = -0.9, z2max = 0.9;
    std::string sym_pole = "0.5,0";
    std::string format = "csv";
    std::string out_path;  // empty = stdout
    unsigned threads = 1;
};

struct SweepRow {
    Complex z1, z2;
    std::string region = "error";
    double value = kNegInf;
    std::optional<double> theta;
    std::optional<double> cert_gap;
    std::string reason;
};

namespace detail_cli {

inline SweepRow eval_row(const SweepSpec& spec, Complex z1, Complex z2) {
    SweepRow row;
    row.z1 = z1;
    row.z2 = z2;
    try {
        GreenResult r;
        if (spec.domain == SweepDomain::SymBidiskGrid) {
            const auto [ps, pp] = parse_complex_pair(spec.sym_pole);
            r = green_sym(SymPoint{z1, z2}, SymPoint{ps, pp});
        } else {
            r = green(BidiskPoint(Complex(spec.p), Complex(0.0)),
                      BidiskPoint(Complex(0.0), Complex(spec.q)), BidiskPoint(z1, z2));
        }
        row.region = std::to_string(int(r.region.region));
        row.value = r.value;
        if (r.theta_branch) row.theta = r.theta_branch->theta.angle();
        if (r.certificate) row.cert_gap = r.certificate->gap;
    } catch (const Error& e) {
        row.region = "error";
        row.reason = e.what();
    }
    return row;
}

inline void write_rows(const SweepSpec& spec, const std::vector<SweepRow>& rows,
                       std::ostream& out) {
    if (spec.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json o = {{"z1", complex_json(r.z1)},
                      {"z2", complex_json(r.z2)},
                      {"region", r.region},
                      {"value", r.value == kNegInf ? json("-inf") : json(r.value)}};
            if (r.theta) o["theta"] = *r.theta;
            if (r.cert_gap) o["cert_gap"] = *r.cert_gap;
            if (!r.reason.empty()) o["reason"] = r.reason;
            arr.push_back(o);
        }
        out << arr.dump(2) << "\n";
        return;
    }
    out << "re_z1,im_z1,re_z2,im_z2,region,value,theta,cert_gap,reason\n";
    for (const auto& r : rows) {
        out << fmt(r.z1.real()) << ',' << fmt(r.z1.imag()) << ',' << fmt(r.z2.real()) << ','
            << fmt(r.z2.imag()) << ',' << r.region << ',' << fmt(r.value) << ','
            << (r.theta ? fmt(*r.theta) : "") << ',' << (r.cert_gap ? fmt(*r.cert_gap) : "")
            << ',' << csv_quote(r.reason) << "\n";
    }
}

}  // namespace detail_cli

inline int cmd_sweep(const SweepSpec& spec, std::ostream& out) {
    if (spec.n1 < 2 || (spec.domain != SweepDomain::AxisZGrid && spec.n2 < 2))
        throw OutOfRange("sweep: resolution must be at least 2 per axis");

    std::vector<std::pair<Complex, Complex>> cells;
    if (spec.domain == SweepDomain::AxisZGrid) {
        for (int i = 0; i < spec.n1; ++i) {
            const double z = spec.z2min + (spec.z2max - spec.z2min) * i / double(spec.n1 - 1);
            cells.emplace_back(Complex(0.0), Complex(z));
        }
    } else {
        for (int i = 0; i < spec.n1; ++i)
            for (int j = 0; j < spec.n2; ++j) {
                const double a =
                    spec.z1min + (spec.z1max - spec.z1min) * i / double(spec.n1 - 1);
                const double b =
                    spec.z2min + (spec.z2max - spec.z2min) * j / double(spec.n2 - 1);
                cells.emplace_back(Complex(a), Complex(b));
            }
    }

    std::vector<SweepRow> rows(cells.size());
    parallel_for(cells.size(), spec.threads, [&](std::size_t i) {
        rows[i] = detail_cli::eval_row(spec, cells[i].first, cells[i].second);
    });

    if (spec.out_path.empty()) {
        detail_cli::write_rows(spec, rows, out);
        return kExitOk;
    }
    std::ofstream file(spec.out_path);
    if (!file) throw std::ios_base::failure("cannot open " + spec.out_path);
    detail_cli::write_rows(spec, rows, file);
    return kExitOk;
}

struct TraceArgs {
    double theta = 0.0;
    double p = 0.5, q = 0.5;
    int nz = 8;
    int nlambda = 16;
    std::string out_path;
};

inline int cmd_trace(const TraceArgs& args, std::ostream& out) {
    const auto sample = trace_hypersurface(args.theta, args.p, args.q, args.nz, args.nlambda);
    json o;
    o["theta"] = sample.theta.angle();
    o["p"] = args.p;
    o["q"] = args.q;
    o["z_parameters"] = json::array();
    for (const auto& z : sample.z_parameters) o["z_parameters"].push_back(complex_json(z));
    o["points"] = json::array();
    for (const auto& pt : sample.points)
        o["points"].push_back({{"point", json::array({complex_json(pt.point.z1.value()),
                                                      complex_json(pt.point.z2.value())})},
                               {"lambda", complex_json(pt.lambda)},
                               {"z_index", pt.z_index},
                               {"value", pt.green_value},
                               {"membership_residual", pt.membership_residual}});
    if (args.out_path.empty()) {
        out << o.dump(2) << "\n";
        return kExitOk;
    }
    std::ofstream file(args.out_path);
    if (!file) throw std::ios_base::failure("cannot open " + args.out_path);
    file << o.dump(2) << "\n";
    return kExitOk;
}

struct SymcaraArgs {
    std::string a, b;
    bool oracle = false;
    int grid = 100000;
};

inline int cmd_symcara(const SymcaraArgs& args, std::ostream& out) {
    const auto [as, ap] = parse_complex_pair(args.a);
    const auto [bs, bp] = parse_complex_pair(args.b);
    const SymPoint ea{as, ap}, eb{bs, bp};
    if (!in_G(ea) || !in_G(eb)) throw NotInG("symcara: argument outside G");
    const auto r = green_sym(ea, eb);
    out << "value: " << fmt(r.value) << "\n";
    if (args.oracle) {
        const double o = agler_young_sup(ea, eb, std::size_t(args.grid));
        out << "oracle: " << fmt(o) << "\n";
        out << "discrepancy: "
            << fmt(r.value == kNegInf && o == kNegInf ? 0.0
                                                      : std::abs(std::exp(r.value) - std::exp(o)))
            << "\n";
    }
    return kExitOk;
}

/// Map a thrown error to the documented exit code.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const EmptySurface*>(&e)) return kExitEmptySurface;
    if (dynamic_cast<const OutOfRange*>(&e)) return kExitUsage;
    if (dynamic_cast<const OutOfDomain*>(&e) || dynamic_cast<const NotInG*>(&e) ||
        dynamic_cast<const DegenerateConfiguration*>(&e) ||
        dynamic_cast<const DegeneratePole*>(&e))
        return kExitDomain;
    if (dynamic_cast<const std::ios_base::failure*>(&e)) return kExitIo;
    if (dynamic_cast<const Error*>(&e)) return kExitSolver;
    return kExitUsage;
}

}  // namespace bigreen::cli
