#include "fv/report.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "fv/stable.hpp"

namespace fv {

using nlohmann::ordered_json;

namespace {

struct Anchor {
    const char* id;
    const char* text;
};

constexpr Anchor kAnchors[] = {
    {"decomp-dims", "Hom_kG(k, F_V) = sum of H_i, H_0 = k tau_V(1), H_i = Hom_kH(k, P_i) for i > 0"},
    {"i-squared-zero", "the maximal ideal I of End(k) in the localized category satisfies I^2 = 0"},
    {"ideal-criteria-agree", "I is the kernel of restriction to a flat subalgebra whose variety misses V"},
    {"restriction-kernel", "I is an ideal of codimension one and every element outside I is invertible"},
    {"negative-tate", "restriction of negative Tate cohomology to a proper flat subalgebra is the zero map"},
    {"extension", "phi: k -> F_2 with phi(1) in X^{p-1}F_2 extends to F_1 -> F_2 with image in X^{p-1}F_2"},
    {"zeta-colimit", "Hom in the localization is the degree-zero part of Ext[zeta^-1], a colimit along zeta"},
    {"nonfg-growth", "End of M induced from a subalgebra through V is not finitely generated over End(k)"},
};

ordered_json to_json_vec(const std::vector<Residue>& v) { return ordered_json(v); }

std::size_t binom(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    std::size_t out = 1;
    for (std::size_t i = 1; i <= k; ++i)
        out = out * (n - k + i) / i;
    return out;
}

TruncatedFV build(const ExperimentConfig& c, std::size_t top)
{
    FVOptions opts;
    opts.corrupt_boundary = c.inject_fault == "boundary";
    return build_fv_multi(c.points(), top, opts);
}

ProjPoint require_x(const PointVariety& v)
{
    auto x = choose_x_point(v);
    if (!x)
        throw std::runtime_error("no pi-point X satisfies the hypotheses for V = " + v.to_string());
    return *x;
}

FlatMap flat_from_rows(Residue p, std::size_t r, const std::vector<std::vector<Residue>>& rows)
{
    Matrix m(p, rows.size(), r);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < r; ++j)
            m(i, j) = rows[i][j];
    return FlatMap(p, r, m);
}

// Rank r-1 flat subalgebra containing v: v followed by coordinate vectors.
FlatMap hyperplane_through(const ProjPoint& v)
{
    const Residue p = v.p();
    const std::size_t r = v.dimension();
    std::vector<std::vector<Residue>> rows{v.coords()};
    for (std::size_t i = 0; i < r && rows.size() + 1 < r; ++i) {
        std::vector<Residue> e(r, 0);
        e[i] = 1;
        auto trial = rows;
        trial.push_back(e);
        if (is_flat(flat_from_rows(p, r, trial)))
            rows = trial;
    }
    return flat_from_rows(p, r, rows);
}

CheckResult check_decomp(const ExperimentConfig& c)
{
    CheckResult res;
    const auto v = c.points();
    const int w = static_cast<int>(c.window);
    TruncatedFV f = build(c, c.top);
    ordered_json wit;
    bool ok = true;
    auto fail = [&](const std::string& why) {
        if (ok)
            wit["failure"] = why;
        ok = false;
    };

    auto inv = fv_invariant_violation(f);
    wit["invariants"] = inv.empty() ? "ok" : inv;
    if (!inv.empty())
        fail("structural invariant: " + inv);
    for (const auto& pc : f.pieces) {
        auto chk = check_resolution(pc.resolution);
        if (!chk.ok())
            fail("resolution for " + pc.point.to_string() + ": " + chk.detail);
    }
    // Restriction to a flat subalgebra missing V is k plus free.
    std::mt19937_64 rng(c.seed);
    for (int t = 0; t < 3; ++t) {
        FlatMap sub = random_avoiding_subalgebra(v, rng);
        if (!restrict_fv(f, sub).trivial_plus_free())
            fail("restriction to " + sub.to_string() + " is not k + free");
    }
    // The N-slice of the N+2 truncation must reproduce the N truncation.
    TruncatedFV big = build(c, c.top + 2);
    FDModule slice = big.slice(static_cast<int>(c.top));
    if (!(slice == f.module))
        fail("slice of the N+2 truncation differs from the N truncation");
    if (!ok) {
        // A broken module usually breaks lifting too; report the structural failure.
        res.witness = std::move(wit);
        return res;
    }

    EndRingWindow e(f, c.window, c.seed);
    EndRingWindow e2(big, c.window, c.seed);
    std::vector<std::size_t> dims, expected, oracle;
    const FDModule k = FDModule::trivial(c.p, c.r);
    std::size_t prev = 0;
    for (int d = -1; d <= w; ++d) {
        dims.push_back(e.graded_dim(d));
        expected.push_back(d < 0 ? 1 : v.points.size() * composition_count(static_cast<std::size_t>(d), c.r - 1));
        std::size_t cur = stable_hom(k, f.slice(d)).dim();
        oracle.push_back(cur - prev);
        prev = cur;
    }
    wit["slots"] = ordered_json::array();
    for (int d = -1; d <= w; ++d)
        wit["slots"].push_back(d);
    wit["dims"] = dims;
    wit["expected"] = expected;
    wit["stable_hom_oracle"] = oracle;
    if (dims != expected)
        fail("graded dims differ from the resolution ranks");
    if (dims != oracle)
        fail("graded dims differ from the stable Hom oracle");
    std::string why;
    if (!e.unital(&why) || !e.associative(&why) || !e.lifts_commute(&why) || !e.products_lift_independent(&why) ||
        !e.products_respect_filtration(&why))
        fail(why);
    auto bad = first_window_disagreement(e, e2);
    wit["n_vs_n_plus_2"] = bad ? ordered_json(*bad) : ordered_json("agree");
    if (bad)
        fail("windows at N and N+2 first differ in slot " + std::to_string(*bad));
    res.pass = ok;
    res.witness = std::move(wit);
    return res;
}

CheckResult check_i_squared(const ExperimentConfig& c)
{
    CheckResult res;
    TruncatedFV f = build(c, c.top);
    EndRingWindow e(f, c.window, c.seed);
    ProjPoint x = require_x(c.points());
    IdealWindow ideal = ideal_x_power(e, x);
    IdealReport rep = analyze_ideal(e, ideal, c.seed);
    DeepRadicalReport deep = verify_deep_radical(e, ideal, x);
    ordered_json wit;
    wit["x"] = x.to_string();
    wit["ideal_dim"] = rep.dim;
    wit["products_zero"] = rep.squares_to_zero;
    wit["lifts_in_x_power"] = deep.all_lifts_in_x_power;
    wit["x_power_squared_zero"] = deep.x_power_squared_zero;
    wit["constrained_products_zero"] = deep.constrained_products_zero;
    res.pass = rep.squares_to_zero && deep.all_lifts_in_x_power && deep.x_power_squared_zero &&
               deep.constrained_products_zero;
    if (!res.pass)
        wit["failure"] = !rep.squares_to_zero ? rep.witness : deep.witness;
    res.witness = std::move(wit);
    return res;
}

CheckResult check_criteria(const ExperimentConfig& c)
{
    CheckResult res;
    const auto v = c.points();
    TruncatedFV f = build(c, c.top);
    EndRingWindow e(f, c.window, c.seed);
    ProjPoint x = require_x(v);
    IdealWindow ix = ideal_x_power(e, x);
    std::mt19937_64 rng(c.seed);
    ordered_json wit;
    wit["x"] = x.to_string();
    wit["ideal_dim"] = ix.basis.cols();
    wit["subalgebras"] = ordered_json::array();
    res.pass = true;
    for (int t = 0; t < 5; ++t) {
        FlatMap sub = random_avoiding_subalgebra(v, rng);
        IdealWindow ik = ideal_restriction_kernel(e, sub);
        bool same = same_subspace(ix.basis, ik.basis);
        wit["subalgebras"].push_back({{"subalgebra", sub.to_string()}, {"dim", ik.basis.cols()}, {"agrees", same}});
        if (!same && res.pass) {
            res.pass = false;
            wit["failure"] = "restriction kernel of " + sub.to_string() + " differs from the X-power ideal";
        }
    }
    res.witness = std::move(wit);
    return res;
}

CheckResult check_restriction_kernel(const ExperimentConfig& c)
{
    CheckResult res;
    const auto v = c.points();
    TruncatedFV f = build(c, c.top);
    EndRingWindow e(f, c.window, c.seed);
    std::mt19937_64 rng(c.seed);
    FlatMap sub = random_avoiding_subalgebra(v, rng);
    IdealReport rep = analyze_ideal(e, ideal_restriction_kernel(e, sub), c.seed);
    ordered_json wit;
    wit["subalgebra"] = sub.to_string();
    wit["window_dim"] = e.size();
    wit["ideal_dim"] = rep.dim;
    wit["graded"] = rep.graded;
    wit["excludes_unit"] = rep.excludes_unit;
    wit["codim_one_every_window"] = rep.codim_one_every_window;
    wit["closed_under_products"] = rep.closed_under_products;
    wit["non_ideal_invertible"] = rep.non_ideal_invertible;
    res.pass = rep.graded && rep.excludes_unit && rep.codim_one_every_window && rep.closed_under_products &&
               rep.non_ideal_invertible && rep.dim + 1 == e.size();
    if (!res.pass)
        wit["failure"] = rep.witness.empty() ? "ideal dimension is not window dimension - 1" : rep.witness;
    res.witness = std::move(wit);
    return res;
}

CheckResult check_negative_tate(const ExperimentConfig& c)
{
    CheckResult res;
    ordered_json wit = ordered_json::array();
    res.pass = true;
    std::string first;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << c.r); ++mask) {
        std::vector<std::size_t> coords;
        for (std::size_t i = 0; i < c.r; ++i)
            if (mask >> i & 1)
                coords.push_back(i);
        auto rep = negative_tate_restriction(c.p, c.r, coords, 4);
        std::string sub = FlatMap::coordinate(c.p, c.r, coords).to_string();
        wit.push_back({{"subalgebra", sub},
                       {"degrees", rep.degrees},
                       {"group_dims", rep.group_dims},
                       {"restriction_ranks", rep.restriction_ranks},
                       {"control_nonzero", rep.control_nonzero},
                       {"chain_map_ok", rep.chain_map_ok}});
        bool ok = rep.all_zero() && rep.control_nonzero && rep.chain_map_ok;
        if (!ok && first.empty())
            first = "restriction to " + sub + " is not the zero map (or the control failed)";
        res.pass = res.pass && ok;
    }
    res.witness = {{"subalgebras", wit}};
    if (!res.pass)
        res.witness["failure"] = first;
    return res;
}

CheckResult check_extension(const ExperimentConfig& c)
{
    CheckResult res;
    const auto v = c.points();
    const ProjPoint v1 = v.points[0];
    std::optional<ProjPoint> v2;
    if (v.points.size() > 1)
        v2 = v.points[1];
    else
        for (std::size_t i = 0; i < c.r && !v2; ++i) {
            std::vector<Residue> e(c.r, 0);
            e[i] = 1;
            if (ProjPoint(c.p, e) != v1)
                v2 = ProjPoint(c.p, e);
        }
    std::optional<ProjPoint> x;
    for (const auto& q : ProjPoint::all(c.p, c.r)) {
        if (q == v1 || q == *v2)
            continue;
        if (!lies_in(*v2, flat_from_rows(c.p, c.r, {v1.coords(), q.coords()}))) {
            x = q;
            break;
        }
    }
    if (!x)
        throw std::runtime_error("no X with span(v1, X) missing v2");
    FlatMap beta = flat_from_rows(c.p, c.r, {v1.coords(), x->coords()});
    FVOptions opts;
    opts.corrupt_boundary = c.inject_fault == "boundary";
    TruncatedFV f1 = build_fv_point(v1, c.top, opts);
    TruncatedFV f2 = build_fv_point(*v2, c.top, opts);
    EndRingWindow e2(f2, c.window, c.seed);
    IdealWindow ideal = ideal_x_power(e2, *x);

    ordered_json wit;
    wit["v1"] = v1.to_string();
    wit["v2"] = v2->to_string();
    wit["x"] = x->to_string();
    wit["beta"] = beta.to_string();
    wit["classes"] = ordered_json::array();
    res.pass = true;
    const Matrix cm = e2.class_matrix();
    for (std::size_t j = 0; j < ideal.basis.cols(); ++j) {
        auto coords = ideal.basis.column(j);
        int slot = -1;
        for (std::size_t k = 0; k < coords.size(); ++k)
            if (coords[k])
                slot = std::max(slot, e2.classes()[k].slot);
        auto phi = cm.apply(coords);
        const int source_slot = static_cast<int>(c.top) - slot - 1;
        auto rep = verify_extension(f1, f2, *x, beta, phi, source_slot, true);
        auto loose = verify_extension(f1, f2, *x, beta, phi, source_slot, false);
        bool ok = rep.hypotheses_hold && rep.solvable && rep.commutes && rep.image_in_x_power && loose.solvable;
        wit["classes"].push_back({{"slot", slot}, {"source_slot", source_slot}, {"solvable", rep.solvable},
                                  {"commutes", rep.commutes}, {"image_in_x_power", rep.image_in_x_power},
                                  {"unconstrained_solvable", loose.solvable}});
        if (!ok && res.pass) {
            wit["failure"] = "class " + std::to_string(j) + ": " + rep.witness;
            wit["phi"] = to_json_vec(phi);
        }
        res.pass = res.pass && ok;
    }
    res.witness = std::move(wit);
    return res;
}

CheckResult check_zeta(const ExperimentConfig& c)
{
    CheckResult res;
    const std::size_t d = c.p == 2 ? 1 : 2;
    const std::size_t n_max = 8;
    FDModule k = FDModule::trivial(c.p, c.r);
    ZetaReport rep = zeta_localized_ext(k, k, ext_generator_cocycle(c.p, c.r, d, 0), d, n_max);
    std::vector<std::size_t> expected, corank;
    for (std::size_t n = 0; n <= n_max; ++n)
        expected.push_back(trivial_ext_dim(c.p, c.r, n * d));
    for (std::size_t n = 0; n < n_max; ++n)
        corank.push_back(rep.dims[n + 1] - rep.ranks[n]);
    ordered_json wit;
    wit["zeta_degree"] = d;
    wit["dims"] = rep.dims;
    wit["expected_dims"] = expected;
    wit["transition_ranks"] = rep.ranks;
    wit["transition_coranks"] = corank;
    res.pass = rep.dims == expected && rep.all_injective();
    if (!res.pass)
        wit["failure"] = rep.dims != expected ? "Ext dims differ from the Poincare series" : "a transition is not injective";
    res.witness = std::move(wit);
    return res;
}

CheckResult check_nonfg(const ExperimentConfig& c)
{
    CheckResult res;
    const auto v = c.points();
    if (c.r < 3)
        throw std::runtime_error("nonfg-growth needs rank at least 3");
    std::vector<std::size_t> tops;
    for (std::size_t n : {c.top >= 8 ? c.top - 4 : 0, c.top >= 6 ? c.top - 2 : 0, c.top})
        if (n >= 4 && (tops.empty() || n > tops.back()))
            tops.push_back(n);
    FlatMap sub = hyperplane_through(v.points[0]);
    GrowthReport rep = nonfg_growth(v, sub, tops);
    ordered_json wit;
    wit["subalgebra"] = sub.to_string();
    wit["tops"] = ordered_json::array();
    wit["window_dims"] = ordered_json::array();
    for (const auto& pt : rep.points) {
        wit["tops"].push_back(pt.top);
        wit["window_dims"].push_back(pt.window_dim);
    }
    wit["action_image_dim"] = rep.action_image_dim;
    wit["ideal_acts_as_zero"] = rep.ideal_acts_as_zero;
    res.pass = rep.strictly_increasing() && rep.action_image_dim == 1 && rep.ideal_acts_as_zero;
    if (!res.pass)
        wit["failure"] = !rep.strictly_increasing() ? "window dims do not strictly increase" : "I acts nontrivially";
    res.witness = std::move(wit);
    return res;
}

}  // namespace

std::size_t trivial_ext_dim(Residue p, std::size_t r, std::size_t j)
{
    if (p == 2)
        return binom(j + r - 1, r - 1);
    // Exterior on r degree-1 classes tensor polynomial on r degree-2 classes.
    std::size_t total = 0;
    for (std::size_t a = 0; a <= std::min(r, j); ++a)
        if ((j - a) % 2 == 0)
            total += binom(r, a) * binom((j - a) / 2 + r - 1, r - 1);
    return total;
}

std::string check_anchor(const std::string& id)
{
    for (const auto& a : kAnchors)
        if (id == a.id)
            return a.text;
    throw std::invalid_argument("unknown check id " + id);
}

CheckResult run_check(const ExperimentConfig& config, const std::string& id)
{
    CheckResult res;
    try {
        if (id == "decomp-dims")
            res = check_decomp(config);
        else if (id == "i-squared-zero")
            res = check_i_squared(config);
        else if (id == "ideal-criteria-agree")
            res = check_criteria(config);
        else if (id == "restriction-kernel")
            res = check_restriction_kernel(config);
        else if (id == "negative-tate")
            res = check_negative_tate(config);
        else if (id == "extension")
            res = check_extension(config);
        else if (id == "zeta-colimit")
            res = check_zeta(config);
        else if (id == "nonfg-growth")
            res = check_nonfg(config);
        else
            throw std::invalid_argument("unknown check id " + id);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        res = CheckResult{};
        res.pass = false;
        res.witness = {{"failure", std::string("exception: ") + e.what()}};
    }
    res.check = id;
    res.anchor = check_anchor(id);
    res.config = config.key();
    return res;
}

std::vector<CheckResult> run_plan(const std::vector<ExperimentConfig>& configs, std::size_t jobs)
{
    struct Job {
        std::size_t config;
        std::string check;
    };
    std::vector<Job> plan;
    for (std::size_t i = 0; i < configs.size(); ++i)
        for (const auto& id : known_checks())
            if (std::find(configs[i].checks.begin(), configs[i].checks.end(), id) != configs[i].checks.end())
                plan.push_back({i, id});
    std::vector<CheckResult> out(plan.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < plan.size(); t = next++)
            out[t] = run_check(configs[plan[t].config], plan[t].check);
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(jobs, plan.size()));
    if (n == 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n; ++i)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    return out;
}

std::string report_json(const std::vector<CheckResult>& results)
{
    ordered_json arr = ordered_json::array();
    for (const auto& r : results)
        arr.push_back({{"check", r.check},
                       {"anchor", r.anchor},
                       {"config", r.config},
                       {"pass", r.pass},
                       {"witness", r.witness}});
    return arr.dump(2) + "\n";
}

std::string report_csv(const std::vector<CheckResult>& results)
{
    std::ostringstream out;
    out << "config,slot,dim,expected\n";
    for (const auto& r : results) {
        if (r.check != "decomp-dims" || !r.witness.contains("dims"))
            continue;
        const auto& w = r.witness;
        for (std::size_t i = 0; i < w["dims"].size(); ++i)
            out << r.config << "," << w["slots"][i].get<int>() << "," << w["dims"][i].get<std::size_t>() << ","
                << w["expected"][i].get<std::size_t>() << "\n";
    }
    return out.str();
}

}  // namespace fv
