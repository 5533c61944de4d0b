#include "mixedvol/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mixedvol/brascamp_lieb.hpp"
#include "mixedvol/legendre.hpp"
#include "mixedvol/metric.hpp"
#include "mixedvol/mixed_discriminant.hpp"
#include "mixedvol/monge_ampere.hpp"
#include "mixedvol/parallel.hpp"
#include "mixedvol/rng.hpp"
#include "mixedvol/t_hodge.hpp"

namespace mixedvol {

namespace {

using json = nlohmann::ordered_json;

GridConfig default_grid(int dim) {
    GridConfig g;
    if (dim <= 2) {
        g.nodes_per_axis = 161;
    } else if (dim == 3) {
        g.nodes_per_axis = 101;
    } else {
        g.mode = GridMode::monte_carlo;
        g.samples = 200000;
    }
    return g;
}

struct Csv {
    std::ostringstream os;
    explicit Csv(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    }
    std::string str() const { return os.str(); }
};

std::vector<ConvexBody> parse_bodies(const std::vector<std::string>& specs) {
    std::vector<ConvexBody> bodies;
    bodies.reserve(specs.size());
    for (const auto& s : specs) bodies.push_back(resolve_body(s));
    return bodies;
}

// One Alexandrov-Fenchel style triple of mixed volumes for bodies
// [A1, A2, fixed...]: (V(A1,A2,..), V(A1,A1,..), V(A2,A2,..)).
struct AfTriple {
    double v12 = 0.0, v11 = 0.0, v22 = 0.0;
};

AfTriple af_exact(const std::vector<ConvexBody>& family) {
    std::vector<ConvexBody> args = family;
    AfTriple t;
    t.v12 = mixed_volume_inclusion_exclusion(args);
    args[1] = family[0];
    t.v11 = mixed_volume_inclusion_exclusion(args);
    args[0] = family[1];
    args[1] = family[1];
    t.v22 = mixed_volume_inclusion_exclusion(args);
    return t;
}

AfTriple af_quadrature(const std::vector<ConvexBody>& family, const QuadratureGrid& grid) {
    std::vector<Potential> pots;
    pots.reserve(family.size());
    for (const auto& b : family) pots.push_back(lse_potential(b.vertices()));
    AfTriple t;
    std::vector<Potential> args = pots;
    t.v12 = mixed_volume_quadrature(args, grid).value;
    args[1] = pots[0];
    t.v11 = mixed_volume_quadrature(args, grid).value;
    args[0] = pots[1];
    args[1] = pots[1];
    t.v22 = mixed_volume_quadrature(args, grid).value;
    return t;
}

ConvexBody scaled_body(const ConvexBody& b, double c, const std::string& name) {
    return ConvexBody::from_vertices(Mat(c * b.vertices()), name);
}

}  // namespace

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size() && c < width.size(); ++c)
            width[c] = std::max(width[c], r[c].size());
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            os << cells[c];
            if (c + 1 < cells.size()) os << std::string(width[c] - cells[c].size() + 2, ' ');
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
}

std::vector<ConvexBody> shipped_bodies() {
    std::vector<ConvexBody> bodies;
    bodies.push_back(cube(2));
    bodies.push_back(simplex(2));
    bodies.push_back(cross_polytope(2));
    Rng rng(4242);
    Rng r2a = rng.split(1), r2b = rng.split(2), r3a = rng.split(3), r3b = rng.split(4);
    ConvexBody b2a = random_body(r2a, 2, 7);
    ConvexBody b2b = random_body(r2b, 2, 9);
    bodies.push_back(ConvexBody::from_vertices(b2a.vertices(), "random2a"));
    bodies.push_back(ConvexBody::from_vertices(b2b.vertices(), "random2b"));
    bodies.push_back(cube(3));
    bodies.push_back(simplex(3));
    bodies.push_back(cross_polytope(3));
    ConvexBody b3a = random_body(r3a, 3, 9);
    ConvexBody b3b = random_body(r3b, 3, 12);
    bodies.push_back(ConvexBody::from_vertices(b3a.vertices(), "random3a"));
    bodies.push_back(ConvexBody::from_vertices(b3b.vertices(), "random3b"));
    return bodies;
}

std::vector<std::vector<ConvexBody>> shipped_mixed_volume_cases() {
    const auto bodies = shipped_bodies();
    auto by_name = [&](const std::string& name) -> const ConvexBody& {
        for (const auto& b : bodies)
            if (b.name() == name) return b;
        throw std::logic_error("shipped body not found: " + name);
    };
    std::vector<std::vector<ConvexBody>> cases;
    cases.push_back({by_name("cube2"), by_name("simplex2")});
    cases.push_back({by_name("cube2"), by_name("cross2")});
    cases.push_back({by_name("simplex2"), by_name("random2a")});
    cases.push_back({by_name("random2a"), by_name("random2b")});
    cases.push_back({by_name("cube3"), by_name("simplex3"), by_name("cross3")});
    cases.push_back({by_name("cube3"), by_name("cube3"), by_name("simplex3")});
    return cases;
}

namespace {

ExperimentResult run_mixed_volume(const ExperimentSpec& spec) {
    ExperimentResult res;
    const auto bodies = parse_bodies(spec.inputs);
    if (bodies.empty()) throw std::invalid_argument("mixed-volume: need n body specs");
    const int n = bodies[0].dim();
    const GridConfig gc = spec.grid_set ? spec.grid : default_grid(n);
    const QuadratureGrid grid = QuadratureGrid::from_config(n, gc);

    std::vector<Potential> pots;
    for (const auto& b : bodies)
        pots.push_back(b.degenerate() ? lse_potential_degenerate(b.vertices())
                                      : lse_potential(b.vertices()));
    const MixedVolumeResult quad = mixed_volume_quadrature(pots, grid);
    bool have_polyfit = true;
    MixedVolumeResult fit;
    try {
        fit = mixed_volume_polyfit(bodies);
    } catch (const std::exception&) {
        have_polyfit = false;  // degenerate summands without joint span etc.
    }

    json j;
    j["bodies"] = json::array();
    for (const auto& b : bodies) j["bodies"].push_back(b.name());
    j["quadrature"] = json::parse(quad.to_json());
    if (have_polyfit) j["polyfit"] = json::parse(fit.to_json());
    j["grid"] = json::parse(gc.to_json());
    res.artifact = j.dump(2) + "\n";
    res.exit_code = 0;
    return res;
}

ExperimentResult run_verify_af(const ExperimentSpec& spec) {
    ExperimentResult res;
    Csv csv({"family", "V12_sq", "V11_V22", "margin"});
    std::vector<std::string> failures;

    std::vector<std::pair<std::string, std::vector<ConvexBody>>> families;
    if (!spec.inputs.empty()) {
        families.emplace_back("input", parse_bodies(spec.inputs));
    } else {
        Rng rng(spec.seed);
        const int per_dim = std::max(1, spec.families / 2);
        for (int dim = 2; dim <= 3; ++dim) {
            for (int f = 0; f < per_dim; ++f) {
                Rng stream = rng.split(static_cast<std::uint64_t>(dim) * 1000 + f);
                std::vector<ConvexBody> fam;
                for (int b = 0; b < dim; ++b) {
                    ConvexBody body = random_body(stream, dim, dim == 2 ? 7 : 9);
                    fam.push_back(ConvexBody::from_vertices(
                        body.vertices(),
                        "rnd" + std::to_string(dim) + "_" + std::to_string(f) + "_" + std::to_string(b)));
                }
                families.emplace_back("random" + std::to_string(dim) + "_" + std::to_string(f), fam);
            }
        }
        // Homothetic pairs: equality cases of the inequality.
        families.emplace_back("homothety2",
                              std::vector<ConvexBody>{cube(2), scaled_body(cube(2), 2.0, "2cube2")});
        families.emplace_back("homothety3",
                              std::vector<ConvexBody>{simplex(3), scaled_body(simplex(3), 2.0, "2simplex3"),
                                                      cube(3)});
    }

    std::vector<AfTriple> triples(families.size());
    std::vector<std::string> errors(families.size());
    parallel_for(families.size(), [&](std::size_t i) {
        try {
            triples[i] = af_exact(families[i].second);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error("verify-af: " + e);

    for (std::size_t i = 0; i < families.size(); ++i) {
        const AfTriple& t = triples[i];
        const double lhs = t.v12 * t.v12;
        const double rhs = t.v11 * t.v22;
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
        const double margin = lhs - rhs;
        csv.row({families[i].first, fmt_g(lhs), fmt_g(rhs), fmt_g(margin)});
        if (margin < -1e-8 * scale) failures.push_back(families[i].first);
        if (families[i].first.rfind("homothety", 0) == 0 && std::abs(margin) > 1e-3 * scale)
            failures.push_back(families[i].first + ":equality");
    }

    res.artifact = csv.str();
    if (!failures.empty()) {
        json f;
        f["command"] = "verify-af";
        f["failures"] = failures;
        res.failure_record = f.dump() + "\n";
        res.exit_code = 1;
    }
    return res;
}

ExperimentResult run_verify_bm(const ExperimentSpec& spec) {
    ExperimentResult res;
    Csv csv({"pair", "sum_root", "root_sum", "margin"});
    std::vector<std::string> failures;

    std::vector<std::pair<ConvexBody, ConvexBody>> pairs;
    if (spec.inputs.size() >= 2) {
        auto bodies = parse_bodies(spec.inputs);
        for (std::size_t i = 0; i + 1 < bodies.size(); i += 2) pairs.emplace_back(bodies[i], bodies[i + 1]);
    } else {
        pairs.emplace_back(cube(2), simplex(2));
        pairs.emplace_back(cube(2), cross_polytope(2));
        pairs.emplace_back(cube(3), simplex(3));
        pairs.emplace_back(simplex(3), cross_polytope(3));
    }
    for (const auto& [a, b] : pairs) {
        const int n = a.dim();
        const double va = polytope_volume_exact(a);
        const double vb = polytope_volume_exact(b);
        const double vs = polytope_volume_exact(minkowski_sum(a, b));
        const double lhs = std::pow(vs, 1.0 / n);
        const double rhs = std::pow(va, 1.0 / n) + std::pow(vb, 1.0 / n);
        const double margin = lhs - rhs;
        const std::string name = a.name() + "+" + b.name();
        csv.row({name, fmt_g(lhs), fmt_g(rhs), fmt_g(margin)});
        if (margin < -1e-9 * std::max(1.0, rhs)) failures.push_back(name);
    }
    res.artifact = csv.str();
    if (!failures.empty()) {
        json f;
        f["command"] = "verify-bm";
        f["failures"] = failures;
        res.failure_record = f.dump() + "\n";
        res.exit_code = 1;
    }
    return res;
}

ExperimentResult run_verify_kt(const ExperimentSpec& spec) {
    ExperimentResult res;
    Csv csv({"family", "V12_sq", "V11_V22", "margin"});
    std::vector<std::string> failures;

    std::vector<std::vector<ConvexBody>> families;
    if (!spec.inputs.empty()) {
        families.push_back(parse_bodies(spec.inputs));
    } else {
        families.push_back({cube(2), simplex(2)});
        families.push_back({cube(2), cross_polytope(2)});
        families.push_back({cube(3), simplex(3), cross_polytope(3)});
    }
    for (const auto& fam : families) {
        const int n = fam[0].dim();
        const GridConfig gc = spec.grid_set ? spec.grid : default_grid(n);
        const QuadratureGrid grid = QuadratureGrid::from_config(n, gc);
        const AfTriple t = af_quadrature(fam, grid);
        const double lhs = t.v12 * t.v12;
        const double rhs = t.v11 * t.v22;
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
        const double margin = lhs - rhs;
        std::string name;
        for (const auto& b : fam) name += (name.empty() ? "" : "+") + b.name();
        csv.row({name, fmt_g(lhs), fmt_g(rhs), fmt_g(margin)});
        if (margin < -1e-6 * scale) failures.push_back(name);
    }
    res.artifact = csv.str();
    if (!failures.empty()) {
        json f;
        f["command"] = "verify-kt";
        f["failures"] = failures;
        res.failure_record = f.dump() + "\n";
        res.exit_code = 1;
    }
    return res;
}

ExperimentResult run_lefschetz(const ExperimentSpec& spec) {
    ExperimentResult res;
    Csv csv({"trial", "n", "m", "roundtrip", "reconstruction", "primitivity", "star_involution"});
    const std::vector<std::pair<int, int>> shapes = {{2, 2}, {3, 2}, {3, 3}, {4, 2}, {4, 3}, {4, 4}};
    const Rng base(spec.seed);
    int failures = 0;

    struct Row {
        double roundtrip = 0.0, reconstruction = 0.0, primitivity = 0.0, star = 0.0;
        int n = 0, m = 0;
        std::string error;
    };
    std::vector<Row> rows(static_cast<std::size_t>(spec.count));
    parallel_for(rows.size(), [&](std::size_t i) {
        Row& row = rows[i];
        try {
            Rng rng = base.split(i);
            const auto [n, m] = shapes[i % shapes.size()];
            row.n = n;
            row.m = m;
            const TContext ctx = random_context(rng, n, m);
            for (int k = 0; k <= m; ++k) {
                // Round trip: solve then re-wedge against a random target.
                AlternatingForm target(n);
                for (const auto& [mi, mj] : basis_of_degree(n, 2 * n - k))
                    target.at(mi, mj) = Complex(rng.normal(), rng.normal());
                const AlternatingForm u = hard_lefschetz_solve(ctx, k, target);
                const AlternatingForm back =
                    wedge(wedge(ctx.t_form(), u), ctx.omega_power(m - k));
                row.roundtrip = std::max(
                    row.roundtrip, (back - target).sup_norm() / (1.0 + target.sup_norm()));

                // Decomposition: reconstruct and check primitivity.
                const AlternatingForm v = random_form(rng, n, k);
                const auto parts = lefschetz_decompose(ctx, v);
                AlternatingForm recon(n);
                for (std::size_t r = 0; r < parts.size(); ++r) {
                    AlternatingForm term = parts[r];
                    for (std::size_t p = 0; p < r; ++p) term = wedge(ctx.omega_form(), term);
                    recon += term;
                    row.primitivity = std::max(
                        row.primitivity, primitivity_residual(ctx, parts[r]) / (1.0 + v.sup_norm()));
                }
                const AlternatingForm diff = wedge(ctx.t_form(), recon - v);
                row.reconstruction =
                    std::max(row.reconstruction, diff.sup_norm() / (1.0 + v.sup_norm()));

                const AlternatingForm ss = lefschetz_star(ctx, lefschetz_star(ctx, v));
                row.star = std::max(row.star, (ss - v).sup_norm() / (1.0 + v.sup_norm()));
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        if (!row.error.empty()) throw std::runtime_error("lefschetz sweep: " + row.error);
        csv.row({std::to_string(i), std::to_string(row.n), std::to_string(row.m),
                 fmt_g(row.roundtrip), fmt_g(row.reconstruction), fmt_g(row.primitivity),
                 fmt_g(row.star)});
        if (row.roundtrip > 1e-9 || row.reconstruction > 1e-10 || row.primitivity > 1e-10 ||
            row.star > 1e-10)
            ++failures;
    }
    res.artifact = csv.str();
    if (failures > 0) {
        json f;
        f["command"] = "lefschetz";
        f["failed_trials"] = failures;
        res.failure_record = f.dump() + "\n";
        res.exit_code = 1;
    }
    return res;
}

ExperimentResult run_hrr_sweep(const ExperimentSpec& spec) {
    ExperimentResult res;
    Csv csv({"trial", "n", "m", "min_t_norm", "shadow_margin", "shadow_consistency"});
    const std::vector<std::pair<int, int>> shapes = {{2, 2}, {3, 2}, {3, 3}, {4, 2}, {4, 3}};
    const Rng base(spec.seed);
    int failures = 0;

    struct Row {
        int n = 0, m = 0;
        double min_norm = 1e300;
        double shadow_margin = 0.0;
        double shadow_consistency = 0.0;
        std::string error;
    };
    std::vector<Row> rows(static_cast<std::size_t>(spec.count));
    parallel_for(rows.size(), [&](std::size_t i) {
        Row& row = rows[i];
        try {
            Rng rng = base.split(i ^ 0x5a5a5a5a);
            const auto [n, m] = shapes[i % shapes.size()];
            row.n = n;
            row.m = m;
            const TContext ctx = random_context(rng, n, m);
            for (int rep = 0; rep < 4; ++rep) {
                const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
                const AlternatingForm u = random_form(rng, n, k);
                const double norm = t_norm_sq(ctx, u);
                double c2 = 0.0;
                for (const auto& v : u.table()) c2 += std::norm(v);
                row.min_norm = std::min(row.min_norm, norm / std::max(c2, 1e-300));
            }

            // Mixed-discriminant shadow: positivity of the primitive part
            // against the two-argument discriminant inequality.
            const Mat h1 = random_spd(rng, n, 0.4, 2.5);
            const Mat h2 = random_spd(rng, n, 0.4, 2.5);
            std::vector<Mat> fixed;
            std::vector<OneOneForm> factors;
            for (int f = 0; f < n - 2; ++f) {
                fixed.push_back(random_spd(rng, n, 0.4, 2.5));
                factors.emplace_back(fixed.back());
            }
            const TContext sctx(n, 2, OneOneForm(h2), factors);
            const auto gres = g_from_theta(sctx, OneOneForm(h1));
            const double tnorm = t_norm_sq(sctx, gres.theta0.to_form());

            std::vector<Mat> args = {h1, h2};
            for (const auto& f : fixed) args.push_back(f);
            const double d12 = mixed_discriminant(std::span<const Mat>(args));
            args[1] = h1;
            const double d11 = mixed_discriminant(std::span<const Mat>(args));
            args[0] = h2;
            args[1] = h2;
            const double d22 = mixed_discriminant(std::span<const Mat>(args));

            const double scale = std::max({d12 * d12, d11 * d22, 1e-300});
            row.shadow_margin = (d12 * d12 - d11 * d22) / scale;
            // t_norm_sq(theta0) = -2 D(theta0, theta0, fixed) / D(h2, h2, fixed)
            const double reference = 2.0 * (d12 * d12 / d22 - d11) / d22;
            row.shadow_consistency =
                std::abs(tnorm - reference) / std::max({std::abs(reference), std::abs(tnorm), 1e-12});
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        if (!row.error.empty()) throw std::runtime_error("hrr sweep: " + row.error);
        csv.row({std::to_string(i), std::to_string(row.n), std::to_string(row.m),
                 fmt_g(row.min_norm), fmt_g(row.shadow_margin), fmt_g(row.shadow_consistency)});
        if (row.min_norm <= 1e-14 || row.shadow_margin < -1e-9 || row.shadow_consistency > 1e-8)
            ++failures;
    }
    res.artifact = csv.str();
    if (failures > 0) {
        json f;
        f["command"] = "hrr-sweep";
        f["failed_trials"] = failures;
        res.failure_record = f.dump() + "\n";
        res.exit_code = 1;
    }
    return res;
}

ExperimentResult run_metric_cert(const ExperimentSpec& spec) {
    ExperimentResult res;
    const MetricReport rep = metric_certification(spec.dim);
    res.artifact = rep.to_json() + "\n";
    if (!rep.pass) {
        json f;
        f["command"] = "metric-cert";
        f["failures"] = json::array();
        for (const auto& c : rep.claims)
            if (c.violations > 0) f["failures"].push_back(c.claim);
        res.failure_record = f.dump() + "\n";
        res.exit_code = 1;
    }
    return res;
}

ExperimentResult run_bl_report(const ExperimentSpec& spec) {
    ExperimentResult res;
    std::vector<ConvexBody> bodies;
    int m = spec.m;
    double epsilon = spec.epsilon;
    std::vector<double> t_grid;
    GridConfig gc = spec.grid;
    bool grid_explicit = spec.grid_set;

    // A single input that parses as a JSON object with a "bodies" key is a
    // family config file: {bodies, m, epsilon, t_grid, quadrature}.
    bool is_config = false;
    if (spec.inputs.size() == 1) {
        std::ifstream in(spec.inputs[0]);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            json j = json::parse(ss.str(), nullptr, false);
            if (j.is_object() && j.contains("bodies")) {
                is_config = true;
                for (const auto& b : j.at("bodies")) bodies.push_back(resolve_body(b.get<std::string>()));
                m = j.value("m", m);
                epsilon = j.value("epsilon", epsilon);
                if (j.contains("t_grid"))
                    for (const auto& t : j["t_grid"]) t_grid.push_back(t.get<double>());
                if (j.contains("quadrature")) {
                    gc = GridConfig::from_json(j["quadrature"].dump());
                    grid_explicit = true;
                }
            }
        }
    }
    if (!is_config) bodies = parse_bodies(spec.inputs);
    if (bodies.empty()) throw std::invalid_argument("bl-report: no bodies given");
    if (t_grid.empty())
        for (int k = 1; k <= 9; ++k) t_grid.push_back(0.1 * k);

    const int n = bodies[0].dim();
    const DeformationFamily fam = theorem72_context(bodies, m, epsilon, 2000, spec.seed);
    const QuadratureGrid grid = QuadratureGrid::from_config(n, grid_explicit ? gc : default_grid(n));
    const ConvexityReport rep = convexity_report(fam, t_grid, grid);

    res.artifact = spec.format == "json" ? rep.summary_json() + "\n" : rep.to_csv();
    if (!rep.pass) {
        json f;
        f["command"] = "bl-report";
        f["summary"] = json::parse(rep.summary_json());
        res.failure_record = f.dump() + "\n";
        res.exit_code = 1;
    }
    return res;
}

}  // namespace

ExperimentResult run(const ExperimentSpec& spec) {
    try {
        if (spec.command == "mixed-volume") return run_mixed_volume(spec);
        if (spec.command == "verify-af") return run_verify_af(spec);
        if (spec.command == "verify-bm") return run_verify_bm(spec);
        if (spec.command == "verify-kt") return run_verify_kt(spec);
        if (spec.command == "lefschetz") return run_lefschetz(spec);
        if (spec.command == "hrr-sweep") return run_hrr_sweep(spec);
        if (spec.command == "metric-cert") return run_metric_cert(spec);
        if (spec.command == "bl-report") return run_bl_report(spec);
        ExperimentResult res;
        res.exit_code = 2;
        json f;
        f["error"] = "unknown command: " + spec.command;
        res.failure_record = f.dump() + "\n";
        return res;
    } catch (const std::invalid_argument& e) {
        ExperimentResult res;
        res.exit_code = 2;
        json f;
        f["error"] = e.what();
        res.failure_record = f.dump() + "\n";
        return res;
    } catch (const nlohmann::json::exception& e) {
        ExperimentResult res;
        res.exit_code = 2;
        json f;
        f["error"] = e.what();
        res.failure_record = f.dump() + "\n";
        return res;
    }
}

}  // namespace mixedvol
