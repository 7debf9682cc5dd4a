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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "etfforge/certify.hpp"
#include "etfforge/constructions.hpp"
#include "etfforge/frames.hpp"
#include "etfforge/harmonic.hpp"
#include "etfforge/io.hpp"
#include "etfforge/parallel.hpp"
#include "etfforge/solver.hpp"

using namespace etfforge;

namespace {

enum Exit { ok = 0, failed = 1, bad_input = 2, broken = 3 };

struct Options {
    std::string family;
    std::uint64_t q = 0;
    std::uint64_t v = 0;
    int m = 0;
    int epsilon = 1;
    std::string d;
    std::uint64_t seed = 1;
    double tol = -1.0;
    int max_iter = 2000;
    double delta = 1e-10;
    int jobs = 0;
    std::string in;
    std::string out;
    std::string out_dir;
};

struct Loaded {
    std::string kind;
    CMat gram;
    std::optional<CMat> frame;
    std::optional<CirculantPair> pair;
    std::optional<AutomorphismWitness> witness;
    Eigen::Index d = 0;
};

Eigen::Index numeric_rank(const CMat& g) {
    const auto e = hermitian_eigen(g);
    const double top = std::max(1.0, std::abs(e.eigenvalues(e.eigenvalues.size() - 1)));
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) r += e.eigenvalues(i) > 1e-6 * top;
    return r;
}

Loaded load_any(const std::string& path, const std::string& d_flag) {
    const json j = read_json_file(path);
    if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("'" + path + "' has no kind field");
    Loaded l;
    l.kind = j["kind"].get<std::string>();
    if (l.kind == "circulant-generators") {
        l.pair = pair_from_json(j);
        l.frame = assemble_2circulant(*l.pair);
        l.gram = gram(*l.frame);
        l.d = l.pair->d;
    } else {
        const ComplexMatrix a = matrix_from_json(j);
        if (a.role == Role::frame || a.role == Role::generic) {
            l.frame = a.m;
            l.gram = gram(a.m);
            l.d = a.rows();
        } else if (a.role == Role::gram) {
            l.gram = a.m;
            l.d = numeric_rank(a.m);
        } else {
            const Eigen::Index n = a.rows();
            l.d = d_flag.empty() ? n / 2 : std::stoi(d_flag);
            l.gram = gram_of_signature(a.m, l.d);
        }
    }
    if (j.contains("witness")) l.witness = witness_from_json(j["witness"]);
    return l;
}

void print_report(const EtfReport& r) {
    std::printf("etf %s: d=%ld n=%ld gamma=%.17g norm_dev=%.3e tight_dev=%.3e equi_dev=%.3e tol=%.3e\n",
                r.pass ? "PASS" : "FAIL", static_cast<long>(r.d), static_cast<long>(r.n), r.gamma, r.max_norm_dev,
                r.max_tight_dev, r.max_equi_dev, r.tol);
}

RunManifest start_manifest(int argc, char** argv, std::vector<std::uint64_t> seeds,
                           const std::vector<std::string>& inputs) {
    RunManifest m;
    for (int i = 0; i < argc; ++i) m.command_line.emplace_back(argv[i]);
    m.seeds = std::move(seeds);
    for (const auto& p : inputs) m.inputs.emplace_back(p, sha256_hex(read_text_file(p)));
    return m;
}

void finish_manifest(RunManifest& m, const std::string& path, std::chrono::steady_clock::time_point t0) {
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_text_file(path, dump17(m.to_json()) + "\n");
}

json frame_json(const CMat& phi) { return matrix_to_json(ComplexMatrix{Role::frame, phi}); }

int cmd_construct(const Options& o, int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.epsilon != 1 && o.epsilon != -1) throw InvalidArgument("--epsilon must be 1 or -1");
    json doc;
    CMat phi;
    const std::string& f = o.family;
    if (f == "paley-plus" || f == "double-paley-plus") {
        if (o.q == 0) throw InvalidArgument("--q is required for " + f);
        const Family fam = f == "paley-plus" ? Family::paley_plus : Family::double_paley_plus;
        const int d = family_dimension(fam, o.q);
        phi = frame_from_gram(gram_of_signature(family_signature(fam, o.q), d), d);
        doc = frame_json(phi);
        doc["witness"] = witness_to_json(family_automorphism(fam, o.q));
    } else if (f == "paley-conference") {
        if (o.q == 0) throw InvalidArgument("--q is required for paley-conference");
        const ConferenceMatrix c = paley_conference(o.q);
        const int d = static_cast<int>(c.n / 2);
        phi = frame_from_gram(gram_of_signature(c.signature(), d), d);
        doc = frame_json(phi);
    } else if (f == "double-paley") {
        const std::uint64_t q = o.q ? o.q : o.v;
        if (q == 0) throw InvalidArgument("--q (or --v) is required for double-paley");
        if (!is_odd_prime_power(q)) throw InvalidArgument("double-paley needs an odd prime power");
        if (q % 4 == 1) {
            const DoubledFrame df = synthesize_doubled_frame(paley_graph(q), o.epsilon);
            phi = df.frame;
            doc = df.pair ? pair_to_json(*df.pair) : frame_json(phi);
        } else {
            const int d = static_cast<int>(q);
            phi = frame_from_gram(gram_of_signature(double_paley_signature(q, o.epsilon), d), d);
            doc = frame_json(phi);
        }
    } else if (f == "renes-strohmer") {
        if (o.q == 0) throw InvalidArgument("--q is required for renes-strohmer");
        const RenesStrohmer rs = renes_strohmer_gram(o.q);
        phi = frame_from_gram(rs.gram, rs.d);
        doc = frame_json(phi);
    } else if (f == "steiner") {
        if (o.m < 1) throw InvalidArgument("--m is required for steiner");
        const auto D = find_planar_difference_set(o.m);
        if (!D) throw UnsupportedInput("no planar difference set of order " + std::to_string(o.m));
        const int k1 = o.m + 2;
        const CMat h = (k1 & (k1 - 1)) == 0 ? sylvester_hadamard(k1) : CMat(std::sqrt(double(k1)) * dft_matrix(k1));
        phi = steiner_circulant(o.m, h, *D);
        doc = frame_json(phi);
    } else if (f == "zauner-2x4" || f == "zauner") {
        phi = frame_from_gram(gram_of_signature(zauner_2x4_signature(), 2), 2);
        doc = frame_json(phi);
    } else if (f == "family-3x6") {
        // member alpha = exp(2 pi i / m); alpha = 1 without --m
        const int m = o.m < 1 ? 1 : o.m;
        const cplx alpha = std::polar(1.0, 2.0 * std::numbers::pi / m);
        phi = frame_from_gram(gram_of_signature(family_3x6(alpha), 3), 3);
        doc = frame_json(phi);
    } else {
        throw InvalidArgument("unknown --family '" + f + "'");
    }
    const EtfReport rep = check_etf(phi, o.tol < 0 ? 1e-9 : o.tol);
    print_report(rep);
    if (!rep.pass) {
        std::fprintf(stderr, "construction failed its ETF check\n");
        return broken;
    }
    if (!o.out.empty()) {
        RunManifest man = start_manifest(argc, argv, {}, {});
        doc["family"] = f;
        write_output(man, o.out, doc);
        finish_manifest(man, o.out + ".manifest.json", t0);
    }
    return ok;
}

int cmd_check(const Options& o) {
    if (o.in.empty()) throw InvalidArgument("--in is required");
    const Loaded l = load_any(o.in, o.d);
    const CMat phi = l.frame ? *l.frame : frame_from_gram(l.gram, l.d);
    const EtfReport rep = check_etf(phi, o.tol < 0 ? 1e-10 : o.tol);
    print_report(rep);
    return rep.pass ? ok : failed;
}

int cmd_solve(const Options& o, int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.d.empty()) throw InvalidArgument("--d is required");
    const int d = std::stoi(o.d);
    if (d < 2) throw InvalidArgument("--d must be at least 2");
    const SolveResult r = solve(d, o.seed, o.tol < 0 ? 1e-12 : o.tol, o.max_iter);
    std::printf("solve d=%d seed=%llu converged=%s iterations=%d residual_inf=%.3e\n", d,
                static_cast<unsigned long long>(r.seed), r.converged ? "yes" : "no", r.iterations, r.residual_inf);
    if (!o.out.empty()) {
        RunManifest man = start_manifest(argc, argv, {o.seed}, {});
        json doc = pair_to_json(r.pair);
        doc["converged"] = r.converged;
        doc["residual_inf"] = r.residual_inf;
        doc["seed"] = r.seed;
        write_output(man, o.out, doc);
        finish_manifest(man, o.out + ".manifest.json", t0);
    }
    return r.converged ? ok : failed;
}

void print_certificate(const Certificate& c) {
    if (c.verified)
        std::printf("certify d=%d VERIFIED epsilon=%.3e lhs_upper=%.17g rhs_lower=%.17g kernel_dim=%d\n", c.d, c.epsilon,
                    c.lhs_upper, c.rhs_lower, c.kernel_dim);
    else
        std::printf("certify d=%d NOT VERIFIED reason=%s gap=%.3e\n", c.d, c.failure.c_str(), c.gap);
}

int cmd_certify(const Options& o, int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.in.empty()) throw InvalidArgument("--in is required");
    const CirculantPair p = pair_from_json(read_json_file(o.in));
    const Certificate c = certify_or_record(p, o.delta);
    print_certificate(c);
    if (!o.out.empty()) {
        RunManifest man = start_manifest(argc, argv, {}, {o.in});
        write_output(man, o.out, certificate_to_json(c));
        finish_manifest(man, o.out + ".manifest.json", t0);
    }
    return c.verified ? ok : failed;
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto pos = s.find("..");
    try {
        if (pos == std::string::npos) {
            const int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
    } catch (const std::exception&) {
        throw InvalidArgument("--d must look like LO..HI");
    }
}

int cmd_sweep(const Options& o, int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.d.empty()) throw InvalidArgument("--d LO..HI is required");
    const auto [lo, hi] = parse_range(o.d);
    if (lo < 2) throw InvalidArgument("sweep range must start at 2 or above");
    const int jobs = o.jobs > 0 ? o.jobs : default_jobs();
    const auto certs = certify_range(lo, hi, SeedPolicy{o.seed, 3}, jobs, o.delta);
    int verified = 0;
    for (const auto& c : certs) {
        print_certificate(c);
        verified += c.verified;
    }
    const std::string summary =
        std::to_string(verified) + "/" + std::to_string(certs.size()) + " verified";
    std::printf("%s\n", summary.c_str());
    if (!o.out_dir.empty()) {
        std::filesystem::create_directories(o.out_dir);
        RunManifest man = start_manifest(argc, argv, {o.seed}, {});
        json table = json::array();
        for (const auto& c : certs) {
            const std::string path = (std::filesystem::path(o.out_dir) / ("cert_d" + std::to_string(c.d) + ".json")).string();
            write_output(man, path, certificate_to_json(c));
            table.push_back({{"d", c.d}, {"verified", c.verified}, {"epsilon", c.epsilon}, {"failure", c.failure}});
        }
        json s;
        s["kind"] = "sweep-summary";
        s["summary"] = summary;
        s["rows"] = table;
        write_output(man, (std::filesystem::path(o.out_dir) / "summary.json").string(), s);
        finish_manifest(man, (std::filesystem::path(o.out_dir) / "manifest.json").string(), t0);
    }
    return verified == static_cast<int>(certs.size()) ? ok : failed;
}

int block_size(const Options& o, const Loaded& l) {
    if (o.m > 0) return o.m;
    if (l.witness) return l.witness->m;
    if (l.pair) return l.pair->d;
    throw InvalidArgument("--m is required for this input");
}

// circulantized Gram when a witness is present, else the Gram as given
CMat harmonic_candidate(const Loaded& l) {
    if (!l.witness) return l.gram;
    if (!verify_automorphism(l.gram, *l.witness, 1e-8)) throw InvalidArgument("embedded witness is not an automorphism");
    return circulantize(l.gram, *l.witness).gram.g;
}

int cmd_detect(const Options& o) {
    if (o.in.empty()) throw InvalidArgument("--in is required");
    const Loaded l = load_any(o.in, "");
    const int m = block_size(o, l);
    const auto n = static_cast<int>(l.gram.rows());
    if (m < 1 || n % m != 0) throw InvalidArgument("--m must divide the number of vectors");
    const int t = n / m;
    CMat g = harmonic_candidate(l);
    BlockGram bg(t, m, g);
    auto rep = detect_harmonic_gram(bg);
    if (!rep.stable && !l.witness && n <= 12) {
        if (auto w = brute_force_automorphism_search(l.gram, m, t, 0)) {
            std::printf("automorphism found by search: cycle type %d^%d\n", m, t);
            bg = circulantize(l.gram, *w).gram;
            rep = detect_harmonic_gram(bg);
        }
    }
    bool regular = false;
    if (rep.stable) {
        try {
            regular = check_regular_representation(bg);
        } catch (const NumericFailure&) {
            regular = false;
        }
    }
    std::printf("stability: %s (max deviation %.3e)\n", rep.stable ? "pass" : "fail", rep.stability_dev);
    std::printf("psd: %s (min eigenvalue %.3e)\n", rep.psd_ok ? "pass" : "fail", rep.min_eigenvalue);
    std::printf("regular representation: %s\n", regular ? "pass" : "fail");
    if (!rep.stable) {
        std::printf("detection failed: stability\n");
        return failed;
    }
    if (!rep.psd_ok) {
        std::printf("detection failed: psd\n");
        return failed;
    }
    if (!regular) {
        std::printf("detection failed: regular representation\n");
        return failed;
    }
    std::printf("harmonic structure found (cycle type %d^%d)\n", m, t);
    return ok;
}

int cmd_circulantize(const Options& o, int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    if (o.in.empty()) throw InvalidArgument("--in is required");
    const Loaded l = load_any(o.in, "");
    std::optional<AutomorphismWitness> w = l.witness;
    if (!w) {
        if (o.m < 1) throw InvalidArgument("input has no witness; pass --m to search for one");
        const auto n = static_cast<int>(l.gram.rows());
        if (n % o.m != 0) throw InvalidArgument("--m must divide the number of vectors");
        w = brute_force_automorphism_search(l.gram, o.m, n / o.m, 1000000, o.seed);
        if (!w) {
            std::printf("circulantize failed: no automorphism of cycle type %d^%d found\n", o.m, n / o.m);
            return failed;
        }
    }
    if (!verify_automorphism(l.gram, *w, 1e-8)) {
        std::printf("circulantize failed: witness is not an automorphism\n");
        return failed;
    }
    const Circulantized cz = circulantize(l.gram, *w);
    bool regular = false;
    try {
        regular = check_regular_representation(cz.gram);
    } catch (const NumericFailure&) {
    }
    if (!regular) {
        std::printf("circulantize failed: regular representation\n");
        return failed;
    }
    const auto gens = circulant_generators(cz.gram);
    const CMat phi = assemble_circulant(gens);
    print_report(check_etf(phi, 1e-9));
    std::printf("circulantized: %d generators of length %d\n", cz.gram.t, cz.gram.m);
    if (!o.out.empty()) {
        RunManifest man = start_manifest(argc, argv, {}, {o.in});
        json doc = gens.size() == 2 ? pair_to_json(CirculantPair{cz.gram.m, gens[0], gens[1]}) : frame_json(phi);
        write_output(man, o.out, doc);
        finish_manifest(man, o.out + ".manifest.json", t0);
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"etfforge: equiangular tight frame construction, detection and certification"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);
    Options o;

    auto* construct = app.add_subcommand("construct", "build an ETF from an explicit family");
    construct->add_option("--family", o.family,
                          "paley-plus | double-paley-plus | double-paley | paley-conference | renes-strohmer | steiner | "
                          "family-3x6 | zauner-2x4")
        ->required();
    construct->add_option("--q", o.q, "odd prime power");
    construct->add_option("--v", o.v, "conference graph order (double-paley)");
    construct->add_option("--m", o.m, "difference set order (steiner); alpha = exp(2 pi i/m) (family-3x6)");
    construct->add_option("--epsilon", o.epsilon, "doubling sign, 1 or -1");
    construct->add_option("--tol", o.tol, "ETF check tolerance");
    construct->add_option("--out", o.out, "output JSON");

    auto* check = app.add_subcommand("check", "test a frame, Gram, signature or generator file");
    check->add_option("--in", o.in)->required();
    check->add_option("--tol", o.tol, "tolerance (default 1e-10)");
    check->add_option("--d", o.d, "dimension for signature inputs");

    auto* solvec = app.add_subcommand("solve", "numerically find a 2-circulant d x 2d ETF");
    solvec->add_option("--d", o.d)->required();
    solvec->add_option("--seed", o.seed);
    solvec->add_option("--tol", o.tol, "residual tolerance (default 1e-12)");
    solvec->add_option("--max-iter", o.max_iter);
    solvec->add_option("--out", o.out);

    auto* certifyc = app.add_subcommand("certify", "certify exact existence near a generator pair");
    certifyc->add_option("--in", o.in)->required();
    certifyc->add_option("--delta", o.delta);
    certifyc->add_option("--out", o.out);

    auto* sweep = app.add_subcommand("sweep", "solve and certify a range of dimensions");
    sweep->add_option("--d", o.d, "LO..HI")->required();
    sweep->add_option("--seed", o.seed);
    sweep->add_option("--delta", o.delta);
    sweep->add_option("--jobs", o.jobs, "worker count (default ETFFORGE_THREADS or hardware)");
    sweep->add_option("--out-dir", o.out_dir);

    auto* detect = app.add_subcommand("detect", "test for 2-circulant (t-generator harmonic) structure");
    detect->add_option("--in", o.in)->required();
    detect->add_option("--m", o.m, "cycle length");

    auto* circ = app.add_subcommand("circulantize", "switch a frame into circulant form");
    circ->add_option("--in", o.in)->required();
    circ->add_option("--m", o.m, "cycle length for witness search");
    circ->add_option("--seed", o.seed);
    circ->add_option("--out", o.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : bad_input;
    }
    try {
        if (*construct) return cmd_construct(o, argc, argv);
        if (*check) return cmd_check(o);
        if (*solvec) return cmd_solve(o, argc, argv);
        if (*certifyc) return cmd_certify(o, argc, argv);
        if (*sweep) return cmd_sweep(o, argc, argv);
        if (*detect) return cmd_detect(o);
        if (*circ) return cmd_circulantize(o, argc, argv);
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return bad_input;
    } catch (const UnsupportedInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return bad_input;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: bad number: %s\n", e.what());
        return bad_input;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return broken;
    }
    return bad_input;
}
