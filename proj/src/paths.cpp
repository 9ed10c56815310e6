#include "diamondlab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace diamondlab {

namespace {

ColorWord merged_choice(const LabeledPoint& p, const LabeledPoint& q) {
    ColorWord w(p.level(), Color::Green);
    for (int j = 0; j < p.level(); ++j) {
        if (p.word[j] != Color::Wildcard) w[j] = p.word[j];
        else if (j < q.level() && q.word[j] != Color::Wildcard) w[j] = q.word[j];
    }
    return w;
}

// Axis-ordered (x, y, z) staircase between two bases on a common sheet.
void append_axis_path(const DiamondComplex& cx, const Vec3& from, const Vec3& to,
                      const ColorWord& choice, int level, std::vector<HorizontalSegment>& out) {
    Vec3 cur = from;
    for (int axis = 0; axis < 3; ++axis) {
        double delta = to[axis] - cur[axis];
        if (delta == 0) continue;
        Vec3 next = cur;
        next[axis] = to[axis];
        HorizontalSegment seg;
        seg.start = cx.resolve_word(to_rpoint(cur), level, choice);
        seg.end = cx.resolve_word(to_rpoint(next), level, choice);
        seg.axis = axis;
        seg.length = std::abs(delta);
        out.push_back(std::move(seg));
        cur = next;
    }
}

}  // namespace

std::string JumpPath::to_json() const {
    nlohmann::json j;
    j["format"] = "diamondlab-path";
    j["version"] = 1;
    nlohmann::json hops = nlohmann::json::array();
    auto point_json = [](const LabeledPoint& p) {
        std::string w;
        for (Color c : p.word) w += color_char(c);
        Vec3 v = p.pos();
        return nlohmann::json{{"base", {v.x, v.y, v.z}}, {"word", w}};
    };
    for (int i = 0; i < (int)segments.size(); ++i) {
        if (jump && i == jump_after + 1)
            hops.push_back({{"kind", "jump"},
                            {"from", point_json(jump->from)},
                            {"to", point_json(jump->to)},
                            {"cost", jump->cost}});
        hops.push_back({{"kind", "segment"},
                        {"axis", segments[i].axis},
                        {"from", point_json(segments[i].start)},
                        {"to", point_json(segments[i].end)},
                        {"length", segments[i].length}});
    }
    if (jump && jump_after + 1 >= (int)segments.size())
        hops.push_back({{"kind", "jump"},
                        {"from", point_json(jump->from)},
                        {"to", point_json(jump->to)},
                        {"cost", jump->cost}});
    j["hops"] = hops;
    j["length"] = length();
    return j.dump(1);
}

std::vector<LabeledPoint> FundamentalConfiguration::points(const DiamondComplex& cx) const {
    std::vector<LabeledPoint> out;
    std::set<std::pair<std::size_t, std::string>> seen;
    int level = cx.level();
    for (std::size_t gi = 0; gi < grid_.size(); ++gi) {
        RPoint base = to_rpoint(grid_[gi]);
        for (const ColorWord& pat : patterns) {
            LabeledPoint lp = cx.resolve_word(base, level, pat);  // green beyond j0
            std::string w;
            for (Color c : lp.word) w += color_char(c);
            if (seen.emplace(gi, w).second) out.push_back(std::move(lp));
        }
    }
    return out;
}

double FundamentalConfiguration::distance_to(const MetricOracle& m, const LabeledPoint& q) const {
    const DiamondComplex& cx = m.complex();
    Vec3 c = center.pos();
    Vec3 qb = q.pos();
    double best = 1e300;
    // Candidate offsets per axis: the two or three nearest grid offsets.
    double step = eps * eps * r;
    std::vector<double> cand[3];
    for (int d = 0; d < 3; ++d) {
        double delta = qb[d] - c[d];
        double j = std::clamp(std::round(std::abs(delta) / step), 1.0, (double)(offsets.size() / 2));
        for (double jj : {j - 1, j, j + 1}) {
            if (jj < 1 || jj > (double)(offsets.size() / 2)) continue;
            cand[d].push_back(c[d] + (delta < 0 ? -jj : jj) * step);
            cand[d].push_back(c[d] - (delta < 0 ? -jj : jj) * step);
        }
    }
    for (double x : cand[0])
        for (double y : cand[1])
            for (double z : cand[2]) {
                if (x < 0 || x > 1 || y < 0 || y > 1 || z < 0 || z > 1) continue;
                RPoint base = to_rpoint(Vec3{x, y, z});
                for (const ColorWord& pat : patterns) {
                    LabeledPoint lp = cx.resolve_word(base, cx.level(), pat);
                    best = std::min(best, m.dist(project(lp, q.level()), q));
                }
            }
    return best;
}

FundamentalConfiguration build_configuration(const MetricOracle& m, const LabeledPoint& p,
                                             double r, double eps) {
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("build_configuration: eps must be in (0,1)");
    if (!(r > 0 && r < 0.5))
        throw std::invalid_argument("build_configuration: r must be in (0, 1/2)");
    const DiamondComplex& cx = m.complex();
    FundamentalConfiguration conf;
    conf.center = p;
    conf.r = r;
    conf.eps = eps;
    conf.paper_eps_range = eps < 1.0 / 400;

    double step = eps * eps * r;
    if (cx.level() > 0 && step < cx.schedule().side_len(cx.level()).to_double() / 4)
        throw std::invalid_argument("build_configuration: eps^2 r below built resolution");
    int m_count = (int)std::ceil(1.0 / (eps * eps));
    for (int j = 1; j <= m_count; ++j) {
        conf.offsets.push_back(j * step);
        conf.offsets.push_back(-j * step);
    }
    int lg = 0;
    {
        // lg(eps^2 r) capped at the built level.
        const LevelSchedule& s = cx.schedule();
        Rational sr = rational_from_double(step);
        lg = cx.level();
        for (int j = 0; j < cx.level(); ++j)
            if (s.side_len(j + 1) <= sr && sr < s.side_len(j)) { lg = j; break; }
        lg = std::min(lg, cx.level());
    }
    conf.j0 = lg;

    // Sheet patterns: stages where the center sits deep inside a doubled
    // region must keep its color when flipping costs more than the ball
    // allows; the rest stay free. Tested with a 2r threshold so the kept
    // sheets cover every sheet that can meet the ball.
    std::vector<int> stages;
    for (int j = 1; j <= conf.j0; ++j) stages.push_back(j);
    int count = 1 << stages.size();
    LabeledPoint pj0 = project(p, conf.j0);
    for (int mask = 0; mask < count; ++mask) {
        ColorWord pat(conf.j0, Color::Wildcard);
        for (std::size_t b = 0; b < stages.size(); ++b)
            pat[stages[b] - 1] = (mask >> b) & 1 ? Color::Red : Color::Green;
        LabeledPoint lift = cx.resolve_word(p.base, conf.j0, pat);
        if (m.dist(pj0, lift) <= 2 * r) conf.patterns.push_back(pat);
    }

    Vec3 c = p.pos();
    for (double ox : conf.offsets)
        for (double oy : conf.offsets)
            for (double oz : conf.offsets) {
                Vec3 g{c.x + ox, c.y + oy, c.z + oz};
                if (g.x < 0 || g.x > 1 || g.y < 0 || g.y > 1 || g.z < 0 || g.z > 1) continue;
                conf.grid_.push_back(g);
            }
    return conf;
}

JumpPath good_path(const MetricOracle& m, const LabeledPoint& p, const LabeledPoint& q) {
    if (p.level() != q.level())
        throw std::invalid_argument("good_path: endpoints must share a level");
    const DiamondComplex& cx = m.complex();
    int level = p.level();
    JumpPath path;
    auto confl = m.conflicts(p, q);
    Vec3 vp = p.pos(), vq = q.pos();
    if (confl.empty()) {
        append_axis_path(cx, vp, vq, merged_choice(p, q), level, path.segments);
        return path;
    }
    const DoublingRecord& rec = confl.front();
    DistanceResult d = m.distance(p, q);
    Vec3 c = to_vec3(rec.jump_center);
    double jc = rec.jump_cost.to_double();
    double route_jump = euclid(vp, c) + jc + euclid(c, vq);

    // Best boundary crossing, from the distance witness when it used one.
    double route_bdy = 1e300;
    Vec3 w{};
    if (!d.witness.empty() && d.witness.size() == 2) {
        w = d.witness[0].to.pos();
        route_bdy = euclid(vp, w) + euclid(w, vq);
    }

    ColorWord base_choice = merged_choice(p, q);
    if (route_bdy <= 8 * d.upper) {
        // Inv2: route through the free color-switch surface.
        ColorWord to_w = base_choice;
        for (int j = 0; j < level; ++j)
            if (p.word[j] != Color::Wildcard) to_w[j] = p.word[j];
        append_axis_path(cx, vp, w, to_w, level, path.segments);
        ColorWord from_w = base_choice;
        for (int j = 0; j < level; ++j)
            if (q.word[j] != Color::Wildcard) from_w[j] = q.word[j];
        append_axis_path(cx, w, vq, from_w, level, path.segments);
    } else {
        // Inv3: route through the jump pair.
        int stage = rec.stage;
        ColorWord choice_from = base_choice, choice_to = base_choice;
        for (int j = stage; j < level; ++j) {
            if (p.word[j] != Color::Wildcard) choice_from[j] = p.word[j];
            if (q.word[j] != Color::Wildcard) choice_to[j] = q.word[j];
        }
        choice_from[stage - 1] = p.word[stage - 1];
        choice_to[stage - 1] = q.word[stage - 1];
        append_axis_path(cx, vp, c, choice_from, level, path.segments);
        path.jump_after = (int)path.segments.size() - 1;
        JumpHop hop;
        hop.from = cx.resolve_word(rec.jump_center, level, choice_from);
        hop.to = cx.resolve_word(rec.jump_center, level, choice_to);
        hop.record = rec;
        hop.cost = jc;
        path.jump = hop;
        append_axis_path(cx, c, vq, choice_to, level, path.segments);
    }
    return path;
}

GoodPathCheck check_good_path(const MetricOracle& m, const JumpPath& path, const LabeledPoint& p,
                              const LabeledPoint& q, double eps, double r) {
    GoodPathCheck c;
    c.length = path.length();
    c.segment_count = path.segment_count();
    DistanceResult d = m.distance(p, q);
    c.dist_lower = d.lower;
    c.length_over_dist = d.upper > 0 ? c.length / d.upper : 0;
    c.single_jump_ok = true;  // the representation holds at most one jump
    double threshold = eps * eps * eps * r / 400;
    for (const auto& seg : path.segments)
        if (seg.length < threshold) ++c.short_segments;

    Vec3 cur = p.pos();
    bool chained = true;
    for (int i = 0; i < (int)path.segments.size(); ++i) {
        if (path.jump && i == path.jump_after + 1) {
            chained = chained && euclid(cur, path.jump->from.pos()) < 1e-9;
            cur = path.jump->to.pos();
        }
        chained = chained && euclid(cur, path.segments[i].start.pos()) < 1e-9;
        cur = path.segments[i].end.pos();
    }
    if (path.jump && path.jump_after + 1 >= (int)path.segments.size()) {
        chained = chained && euclid(cur, path.jump->from.pos()) < 1e-9;
        cur = path.jump->to.pos();
    }
    c.endpoints_ok = chained && euclid(cur, q.pos()) < 1e-9;
    return c;
}

}  // namespace diamondlab
