#include "diamondlab/complex.hpp"

#include <stdexcept>

#include "json.hpp"

namespace diamondlab {

DiamondComplex::DiamondComplex(LevelSchedule sched, int level, std::size_t max_records)
    : sched_(std::move(sched)), level_(level) {
    if (level_ > sched_.levels)
        throw std::invalid_argument("DiamondComplex: level exceeds schedule depth");
    stage_offsets_.assign(level_ + 2, 0);
    for (int j = 1; j <= level_; ++j) {
        stage_offsets_[j] = records_.size();
        Rational prev = sched_.side_len(j - 1);
        std::int64_t n = Rational::floor_div(Rational(1), prev);  // cells per axis in X_{j-1}
        if (!records_complete_ || (__int128)n * n * n > (__int128)4 * max_records) {
            records_complete_ = false;
            continue;
        }
        for (std::int64_t ix = 0; ix < n; ++ix)
            for (std::int64_t iy = 0; iy < n; ++iy)
                for (std::int64_t iz = 0; iz < n; ++iz) {
                    RCube q{{Rational(ix) * prev, Rational(iy) * prev, Rational(iz) * prev}, prev};
                    if (!cell_doubled(j, q)) continue;
                    records_.push_back(make_record(j, q));
                    if (records_.size() > max_records) {
                        records_complete_ = false;
                        records_.resize(stage_offsets_[j]);
                        break;
                    }
                }
        if (!records_complete_) records_.resize(stage_offsets_[j]);
    }
    stage_offsets_[level_ + 1] = records_.size();
}

DoublingRecord DiamondComplex::make_record(int j, const RCube& q) const {
    DoublingRecord r;
    r.stage = j;
    r.base_cube = q;
    r.k_region = q.middle_third();
    r.gate_cell = q.central(sched_.stage(j).gate_side);
    r.jump_center = q.center();
    r.jump_cost = q.side / Rational(4 * sched_.stage(j).block_param);
    return r;
}

std::vector<const DoublingRecord*> DiamondComplex::records_at_stage(int j) const {
    if (!records_complete_)
        throw std::runtime_error("records_at_stage: registry not materialized at this depth");
    std::vector<const DoublingRecord*> out;
    for (std::size_t i = stage_offsets_.at(j); i < stage_offsets_.at(j + 1); ++i)
        out.push_back(&records_[i]);
    return out;
}

RCube DiamondComplex::cell_of(int j, const RPoint& base) const {
    Rational side = sched_.side_len(j);
    std::int64_t n = Rational::floor_div(Rational(1), side);
    RPoint origin;
    Rational* o[3] = {&origin.x, &origin.y, &origin.z};
    for (int d = 0; d < 3; ++d) {
        std::int64_t i = Rational::floor_div(base[d], side);
        if (i < 0) i = 0;
        if (i >= n) i = n - 1;
        *o[d] = Rational(i) * side;
    }
    return {origin, side};
}

std::vector<char> DiamondComplex::doubled_chain(const RPoint& x, int jmax) const {
    // doubled[j] == whether the X_{j-1} cell containing x is doubled at
    // stage j. Only gates along x's own cell chain can overlap that cell
    // (gates sit strictly inside their base cell, and cells at one
    // resolution have disjoint interiors), so the chain closes over itself.
    std::vector<char> doubled(jmax + 1, 0);
    std::vector<RCube> cells(jmax + 1);
    for (int j = 1; j <= jmax; ++j) {
        cells[j] = cell_of(j - 1, x);
        const StageEntry& e = sched_.stage(j);
        doubled[j] = 1;
        if (e.block_first) continue;
        for (int jp = (int)e.block_start + 1; jp < j; ++jp) {
            if (!doubled[jp]) continue;
            RCube gate = cells[jp].central(sched_.stage(jp).gate_side);
            if (gate.overlaps_open(cells[j])) { doubled[j] = 0; break; }
        }
    }
    return doubled;
}

bool DiamondComplex::cell_doubled(int j, const RCube& q) const {
    return doubled_chain(q.center(), j)[j] != 0;
}

std::optional<DoublingRecord> DiamondComplex::doubled_region_at(int j, const RPoint& base) const {
    RCube q = cell_of(j - 1, base);
    RCube k = q.middle_third();
    if (!k.contains_open(base)) return std::nullopt;
    if (!cell_doubled(j, q)) return std::nullopt;
    return make_record(j, q);
}

bool DiamondComplex::in_gate_region(const RPoint& base, int stage_lo, int stage_hi) const {
    std::vector<char> doubled = doubled_chain(base, stage_hi);
    for (int j = stage_lo; j <= stage_hi; ++j) {
        if (!doubled[j]) continue;
        RCube gate = cell_of(j - 1, base).central(sched_.stage(j).gate_side);
        if (gate.contains_open(base)) return true;
    }
    return false;
}

std::vector<int> DiamondComplex::fiber_stages(const DoublingRecord& rec) const {
    std::vector<int> out;
    RPoint c = rec.base_cube.center();
    for (int jp = 1; jp < rec.stage; ++jp)
        if (doubled_region_at(jp, c)) out.push_back(jp);
    return out;
}

LabeledPoint DiamondComplex::resolve_word(const RPoint& base, int l, Color choice) const {
    ColorWord w(l, choice);
    return resolve_word(base, l, w);
}

LabeledPoint DiamondComplex::resolve_word(const RPoint& base, int l, const ColorWord& choice) const {
    if (l > level_) throw std::invalid_argument("resolve_word: level above built complex");
    LabeledPoint p;
    p.base = base;
    p.word.resize(l);
    for (int j = 1; j <= l; ++j) {
        Color c = (j - 1 < (int)choice.size()) ? choice[j - 1] : Color::Green;
        if (c == Color::Wildcard) c = Color::Green;
        p.word[j - 1] = doubled_region_at(j, base) ? c : Color::Wildcard;
    }
    return p;
}

void DiamondComplex::canonicalize(LabeledPoint& p) const {
    for (int j = 1; j <= p.level(); ++j) {
        bool inside = doubled_region_at(j, p.base).has_value();
        if (!inside)
            p.word[j - 1] = Color::Wildcard;
        else if (p.word[j - 1] == Color::Wildcard)
            p.word[j - 1] = Color::Green;
    }
}

bool DiamondComplex::is_canonical(const LabeledPoint& p) const {
    for (int j = 1; j <= p.level(); ++j) {
        bool inside = doubled_region_at(j, p.base).has_value();
        if (inside != (p.word[j - 1] != Color::Wildcard)) return false;
    }
    return true;
}

namespace {

nlohmann::json rat_json(const Rational& r) { return nlohmann::json::array({r.num, r.den}); }
Rational rat_from(const nlohmann::json& a) { return Rational(a.at(0).get<std::int64_t>(), a.at(1).get<std::int64_t>()); }
nlohmann::json point_json(const RPoint& p) {
    return nlohmann::json::array({rat_json(p.x), rat_json(p.y), rat_json(p.z)});
}
RPoint point_from(const nlohmann::json& a) {
    return {rat_from(a.at(0)), rat_from(a.at(1)), rat_from(a.at(2))};
}

}  // namespace

std::string DiamondComplex::to_json() const {
    nlohmann::json j;
    j["format"] = "diamondlab-complex";
    j["version"] = 1;
    j["schedule"] = {
        {"n0", sched_.n0}, {"levels", sched_.levels}, {"toy_mode", sched_.toy_mode}};
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& e : sched_.stages)
        stages.push_back({{"stage", e.stage},
                          {"block", e.block},
                          {"block_param", e.block_param},
                          {"block_start", e.block_start},
                          {"subdivision", e.subdivision},
                          {"side_len", rat_json(e.side_len)},
                          {"gate_side", rat_json(e.gate_side)},
                          {"block_first", e.block_first}});
    j["schedule"]["stages"] = stages;
    j["level"] = level_;
    j["records_complete"] = records_complete_;
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records_)
        recs.push_back({{"stage", r.stage},
                        {"origin", point_json(r.base_cube.origin)},
                        {"side", rat_json(r.base_cube.side)},
                        {"jump_cost", rat_json(r.jump_cost)}});
    j["records"] = recs;
    return j.dump(1);
}

DiamondComplex DiamondComplex::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format") != "diamondlab-complex" || j.at("version") != 1)
        throw std::runtime_error("DiamondComplex::from_json: unknown format/version");
    LevelSchedule s;
    s.n0 = j["schedule"]["n0"].get<std::int64_t>();
    s.levels = j["schedule"]["levels"].get<int>();
    s.toy_mode = j["schedule"]["toy_mode"].get<bool>();
    for (const auto& je : j["schedule"]["stages"]) {
        StageEntry e;
        e.stage = je["stage"].get<int>();
        e.block = je["block"].get<int>();
        e.block_param = je["block_param"].get<std::int64_t>();
        e.block_start = je["block_start"].get<std::int64_t>();
        e.subdivision = je["subdivision"].get<std::int64_t>();
        e.side_len = rat_from(je["side_len"]);
        e.gate_side = rat_from(je["gate_side"]);
        e.block_first = je["block_first"].get<bool>();
        s.stages.push_back(e);
    }
    DiamondComplex c;
    c.sched_ = s;
    c.level_ = j["level"].get<int>();
    c.records_complete_ = j["records_complete"].get<bool>();
    c.stage_offsets_.assign(c.level_ + 2, 0);
    int cur = 1;
    for (const auto& jr : j["records"]) {
        int stage = jr["stage"].get<int>();
        while (cur <= stage) c.stage_offsets_[cur++] = c.records_.size();
        RCube q{point_from(jr["origin"]), rat_from(jr["side"])};
        c.records_.push_back(c.make_record(stage, q));
    }
    while (cur <= c.level_ + 1) c.stage_offsets_[cur++] = c.records_.size();
    return c;
}

DiamondComplex build_complex(const LevelSchedule& sched, int l, std::size_t max_records) {
    return DiamondComplex(sched, l, max_records);
}

}  // namespace diamondlab
