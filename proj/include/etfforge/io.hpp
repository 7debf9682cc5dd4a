// SPDX-License-Identifier: Apache-2.0
//
// etfforge: equiangular tight frame construction and certification toolkit
// Copyright (C) 2026 The etfforge authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "etfforge/certify.hpp"
#include "etfforge/errors.hpp"
#include "etfforge/frames.hpp"
#include "etfforge/harmonic.hpp"
#include "etfforge/linalg.hpp"
#include "json.hpp"

#ifndef ETFFORGE_VERSION
#define ETFFORGE_VERSION "1.0.0"
#endif

namespace etfforge {

using json = nlohmann::ordered_json;

inline std::string tool_version() { return ETFFORGE_VERSION; }

inline std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Compact JSON with every floating value printed at 17 significant digits.
inline void dump17(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump17(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump17(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) throw InvalidArgument("dump17: non-finite number");
            out += format17(v);
            break;
        }
        default: out += j.dump();
    }
}

inline std::string dump17(const json& j) {
    std::string s;
    dump17(j, s);
    return s;
}

inline std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw NumericFailure("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << text;
    if (!out) throw InvalidArgument("write failed for '" + path + "'");
}

inline json read_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
}

namespace detail {
inline json real_array(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

inline std::vector<double> get_reals(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw InvalidArgument(std::string("missing array '") + key + "'");
    std::vector<double> v;
    for (const auto& x : j[key]) {
        if (!x.is_number()) throw InvalidArgument(std::string("non-numeric entry in '") + key + "'");
        v.push_back(x.get<double>());
    }
    return v;
}

inline long long get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw InvalidArgument(std::string("missing integer '") + key + "'");
    return j[key].get<long long>();
}
}  // namespace detail

inline json matrix_to_json(const ComplexMatrix& a) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json r = json::array(), c = json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            r.push_back(a.m(i, j).real());
            c.push_back(a.m(i, j).imag());
        }
        re.push_back(r);
        im.push_back(c);
    }
    json j;
    j["kind"] = role_name(a.role);
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw InvalidArgument("matrix JSON needs a kind");
    ComplexMatrix a;
    a.role = parse_role(j["kind"].get<std::string>());
    const auto rows = detail::get_int(j, "rows"), cols = detail::get_int(j, "cols");
    if (rows < 0 || cols < 0) throw InvalidArgument("matrix JSON has negative dimensions");
    if (!j.contains("re") || !j.contains("im") || !j["re"].is_array() || !j["im"].is_array() ||
        static_cast<long long>(j["re"].size()) != rows || static_cast<long long>(j["im"].size()) != rows)
        throw InvalidArgument("matrix JSON re/im row count disagrees with rows");
    a.m.resize(rows, cols);
    for (long long i = 0; i < rows; ++i) {
        const auto& r = j["re"][static_cast<size_t>(i)];
        const auto& c = j["im"][static_cast<size_t>(i)];
        if (!r.is_array() || !c.is_array() || static_cast<long long>(r.size()) != cols ||
            static_cast<long long>(c.size()) != cols)
            throw InvalidArgument("matrix JSON row length disagrees with cols");
        for (long long k = 0; k < cols; ++k) {
            if (!r[static_cast<size_t>(k)].is_number() || !c[static_cast<size_t>(k)].is_number())
                throw InvalidArgument("matrix JSON has a non-numeric entry");
            a.m(i, k) = cplx(r[static_cast<size_t>(k)].get<double>(), c[static_cast<size_t>(k)].get<double>());
        }
    }
    validate(a);
    return a;
}

inline json pair_to_json(const CirculantPair& p) {
    json j;
    j["kind"] = "circulant-generators";
    j["d"] = p.d;
    j["t"] = 2;
    std::vector<double> xr, xi, yr, yi;
    for (int k = 0; k < p.d; ++k) {
        xr.push_back(p.x(k).real());
        xi.push_back(p.x(k).imag());
        yr.push_back(p.y(k).real());
        yi.push_back(p.y(k).imag());
    }
    j["x_re"] = detail::real_array(xr);
    j["x_im"] = detail::real_array(xi);
    j["y_re"] = detail::real_array(yr);
    j["y_im"] = detail::real_array(yi);
    return j;
}

inline CirculantPair pair_from_json(const json& j) {
    if (!j.is_object() || j.value("kind", "") != "circulant-generators")
        throw InvalidArgument("expected kind 'circulant-generators'");
    const auto d = detail::get_int(j, "d");
    if (d < 1) throw InvalidArgument("generator JSON needs d >= 1");
    if (j.contains("t") && detail::get_int(j, "t") != 2) throw UnsupportedInput("only t = 2 generator files are supported");
    const auto xr = detail::get_reals(j, "x_re"), xi = detail::get_reals(j, "x_im");
    const auto yr = detail::get_reals(j, "y_re"), yi = detail::get_reals(j, "y_im");
    for (const auto* v : {&xr, &xi, &yr, &yi})
        if (static_cast<long long>(v->size()) != d) throw InvalidArgument("generator length disagrees with d");
    CirculantPair p{static_cast<int>(d), CVec(d), CVec(d)};
    for (long long k = 0; k < d; ++k) {
        p.x(k) = cplx(xr[static_cast<size_t>(k)], xi[static_cast<size_t>(k)]);
        p.y(k) = cplx(yr[static_cast<size_t>(k)], yi[static_cast<size_t>(k)]);
    }
    return p;
}

inline json witness_to_json(const AutomorphismWitness& w) {
    json j;
    j["sigma"] = w.sigma;
    std::vector<double> re, im;
    for (const auto& c : w.c) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    j["c_re"] = detail::real_array(re);
    j["c_im"] = detail::real_array(im);
    j["m"] = w.m;
    j["t"] = w.t;
    return j;
}

inline AutomorphismWitness witness_from_json(const json& j) {
    if (!j.is_object() || !j.contains("sigma") || !j["sigma"].is_array()) throw InvalidArgument("witness JSON needs sigma");
    AutomorphismWitness w;
    for (const auto& s : j["sigma"]) {
        if (!s.is_number_integer()) throw InvalidArgument("witness sigma entries must be integers");
        w.sigma.push_back(s.get<int>());
    }
    const auto re = detail::get_reals(j, "c_re"), im = detail::get_reals(j, "c_im");
    if (re.size() != w.sigma.size() || im.size() != w.sigma.size()) throw InvalidArgument("witness c length disagrees with sigma");
    for (size_t i = 0; i < re.size(); ++i) w.c.emplace_back(re[i], im[i]);
    w.m = static_cast<int>(detail::get_int(j, "m"));
    w.t = static_cast<int>(detail::get_int(j, "t"));
    w.validate(static_cast<Eigen::Index>(w.sigma.size()));
    return w;
}

/// Digest of the certified point: %.17g values joined by commas.
inline std::string x0_digest(const std::vector<double>& x0) {
    std::string s;
    for (size_t i = 0; i < x0.size(); ++i) {
        if (i) s += ',';
        s += format17(x0[i]);
    }
    return sha256_hex(s);
}

inline json certificate_to_json(const Certificate& c) {
    auto bound = [](double v, const char* dir) {
        json b;
        b["value"] = v;
        b["certifies"] = dir;
        return b;
    };
    json j;
    j["kind"] = "certificate";
    j["tool_version"] = tool_version();
    j["d"] = c.d;
    j["verified"] = c.verified;
    if (!c.failure.empty()) j["failure"] = c.failure;
    j["kernel_dim"] = c.kernel_dim;
    j["seed"] = c.seed;
    j["delta"] = c.delta;
    j["epsilon"] = c.epsilon;
    j["bound_ST_minus_I"] = bound(c.bound_ST_minus_I, "upper");
    j["bound_T_norm"] = bound(c.bound_T_norm, "upper");
    j["bound_f_x0"] = bound(c.bound_f_x0, "upper");
    j["f_abs_bound"] = c.f_abs_bound;
    j["lhs_upper"] = bound(c.lhs_upper, "upper");
    j["rhs_lower"] = bound(c.rhs_lower, "lower");
    j["gap"] = c.gap;
    j["x0_digest"] = x0_digest(c.x0);
    j["x0"] = detail::real_array(c.x0);
    return j;
}

struct RunManifest {
    std::vector<std::string> command_line;
    std::vector<std::uint64_t> seeds;
    std::string version = tool_version();
    std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
    std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256
    double wall_time = 0.0;

    /// Digest of command line, seeds, version and inputs; outputs embed it.
    std::string digest() const {
        json core;
        core["command_line"] = command_line;
        core["seeds"] = seeds;
        core["version"] = version;
        json in = json::array();
        for (const auto& [p, h] : inputs) in.push_back({{"path", p}, {"sha256", h}});
        core["inputs"] = in;
        return sha256_hex(dump17(core));
    }

    json to_json() const {
        json j;
        j["kind"] = "manifest";
        j["manifest_digest"] = digest();
        j["command_line"] = command_line;
        j["seeds"] = seeds;
        j["version"] = version;
        json in = json::array(), out = json::array();
        for (const auto& [p, h] : inputs) in.push_back({{"path", p}, {"sha256", h}});
        for (const auto& [p, h] : outputs) out.push_back({{"path", p}, {"sha256", h}});
        j["inputs"] = in;
        j["outputs"] = out;
        j["wall_time_s"] = wall_time;
        return j;
    }
};

/// Writes j (tagged with the manifest digest) to path and records its digest.
inline void write_output(RunManifest& man, const std::string& path, json j) {
    j["manifest_digest"] = man.digest();
    const std::string text = dump17(j) + "\n";
    write_text_file(path, text);
    man.outputs.emplace_back(path, sha256_hex(text));
}

}  // namespace etfforge
