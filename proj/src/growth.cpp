#include "permlab/growth.hpp"

#include <algorithm>
#include <set>

namespace permlab {

void HeavyFamily::verify(const SymmetricMatrix& m, bool require_complement_disjoint,
                         int ground) const {
    for (const HeavyRecord& rec : records) {
        if (rec.rows.size() != rec.cols.size())
            throw TheoremViolation("HeavyFamily: |A| != |B| in a record");
        Int per = permanent_ryser(m.submatrix(rec.rows, rec.cols));
        if (per != rec.per_value)
            throw TheoremViolation("HeavyFamily: stored permanent does not re-verify");
        if (Rat(int_abs(per)) < lambda)
            throw TheoremViolation("HeavyFamily: record below the heaviness threshold");
    }
    if (require_complement_disjoint) {
        std::vector<IndexSet> sets;
        sets.reserve(records.size() * 2);
        for (const HeavyRecord& rec : records) {
            sets.push_back(rec.rows.ground_size() == ground ? rec.rows : rec.rows.widened(ground));
            sets.push_back(rec.cols.ground_size() == ground ? rec.cols : rec.cols.widened(ground));
        }
        if (!complement_disjoint(sets, ground))
            throw TheoremViolation("HeavyFamily: family is not complement-disjoint");
    }
}

// -------- simple augment / corner step --------

std::vector<std::pair<int, Int>> heavy_augmentations(const SymmetricMatrix& m_ext,
                                                     const IndexSet& A, const IndexSet& B,
                                                     const IndexSet& I, const Heaviness& lambda) {
    int n = m_ext.dim();
    if (A.size() != B.size()) throw ContractViolation("heavy_augmentations: |A| != |B|");
    if ((I.bits() & B.bits()) != 0)
        throw ContractViolation("heavy_augmentations: I must be disjoint from B");
    IndexSet rows = A.widened(n).with(n);
    std::vector<std::pair<int, Int>> out;
    for (int i : I.elements()) {
        if (i >= n) throw ContractViolation("heavy_augmentations: I must avoid the new index");
        Int per = permanent_ryser(m_ext.submatrix(rows, B.widened(n).with(i)));
        if (lambda.test(per)) out.emplace_back(i, per);
    }
    return out;
}

std::optional<int> augment_one_column(const SymmetricMatrix& m_ext, const IndexSet& A,
                                      const IndexSet& B, const IndexSet& I,
                                      const Heaviness& lambda) {
    if (I.empty()) throw ContractViolation("augment_one_column: I must be nonempty");
    int n = m_ext.dim();
    if (!lambda.test(permanent_ryser(m_ext.submatrix(A.widened(n), B.widened(n)))))
        throw ContractViolation("augment_one_column: M[A,B] is not lambda-heavy");
    auto hits = heavy_augmentations(m_ext, A, B, I, lambda);
    if (hits.empty()) return std::nullopt;
    return hits.front().first;
}

std::optional<CornerResult> corner_step(const SymmetricMatrix& m_ext, const IndexSet& A,
                                        const IndexSet& B, int a, int b1, int b2,
                                        const Heaviness& lambda) {
    int n = m_ext.dim();
    if (A.contains(n) || B.contains(n))
        throw ContractViolation("corner_step: A, B must live in the pre-extension indices");
    NoncancellingPair pair = choose_noncancelling_pair(m_ext, A, B, a, b1, b2, lambda);
    CornerResult res;
    res.i = pair.i;
    res.j = pair.j;
    res.rows = pair.a_prime.widened(n).with(n);
    res.cols = pair.b_prime.widened(n).with(n);
    res.per_value = permanent_ryser(m_ext.submatrix(res.rows, res.cols));
    if (!lambda.halved().test(res.per_value)) return std::nullopt;
    return res;
}

// -------- weak growth process --------

GrowthClassification classify_growth_step(const std::vector<IndexSet>& family, int R,
                                          const Rat& K) {
    if (family.empty()) throw ContractViolation("classify_growth_step: empty family");
    int ground = family.front().ground_size();
    int k = family.front().size();
    for (const IndexSet& b : family)
        if (b.ground_size() != ground || b.size() != k)
            throw ContractViolation("classify_growth_step: family sets must share ground and size");
    if (ground - k != R)
        throw ContractViolation("classify_growth_step: ground size must equal k + R");

    std::map<std::uint64_t, long long> parent_counts;
    for (const IndexSet& b : family)
        for (int c : b.complement().elements()) ++parent_counts[b.with(c).bits()];

    GrowthClassification cls;
    cls.sum_small = 0;
    cls.sum_large = 0;
    for (const auto& [bits, q] : parent_counts) {
        ++cls.histogram[q];
        if (Rat(q) < K)
            cls.sum_small += q;
        else
            cls.sum_large += q;
    }
    Int total = cls.sum_small + cls.sum_large;
    if (total != Int(R) * static_cast<long long>(family.size()))
        throw TheoremViolation("classify_growth_step: sum_q q|S_q| != R*N");
    cls.branch_prime = 2 * cls.sum_small >= Int(R) * static_cast<long long>(family.size());
    return cls;
}

std::string growth_case_name(GrowthCase c) {
    switch (c) {
        case GrowthCase::I: return "i";
        case GrowthCase::II: return "ii";
        case GrowthCase::III: return "iii";
        case GrowthCase::Abort: return "iv";
    }
    return "?";
}

namespace {

long long ceil_to_ll(const Rat& x) {
    Int num = numerator(x), den = denominator(x);
    Int q = num / den;
    if (num > q * den) ++q;
    return q.convert_to<long long>();
}

}  // namespace

WeakGrowthResult weak_growth_run(const GrowthParams& params, std::uint64_t root_seed,
                                 std::uint64_t stream_id) {
    int n = params.n, R = params.R;
    if (R < 1 || n < R + 2) throw ContractViolation("weak_growth_run: needs 1 <= R <= n - 2");
    if (!(params.delta > 0 && params.delta < Rat(1, 16)))
        throw ContractViolation("weak_growth_run: needs 0 < delta < 1/16");
    // The asymptotic schedule couples delta*n <= R <= 2*delta*n (and
    // K = n^(1-delta)); at desk scale the parameters are explicit and the
    // process runs for any R >= 1, so that coupling is not enforced here.
    if (params.K <= 1) throw ContractViolation("weak_growth_run: needs K > 1");
    if (params.family_cap < 1) throw ContractViolation("weak_growth_run: family cap must be >= 1");

    WeakGrowthResult res;
    GrowthTrace& trace = res.trace;
    trace.n = n;
    trace.R = R;
    trace.delta = params.delta;
    trace.K = params.K;
    trace.n_tracked.push_back(Rat(1));
    trace.lambda_exponents.push_back(Rat(0));
    trace.w_tracked.push_back(Rat(0));

    res.matrix = SymmetricMatrix::sample(1 + R, EntryDistribution::rademacher(), root_seed,
                                         stream_id);

    // Witnesses for E(1,1,1): the 1x1 blocks of row R+1 with |entry| >= 1.
    std::vector<std::pair<IndexSet, Int>> witnesses;
    for (int i = 1; i <= 1 + R; ++i) {
        Int v = res.matrix.entry(R + 1, i);
        if (int_abs(v) >= 1) witnesses.emplace_back(IndexSet::of({i}, 1 + R), v);
    }

    Rat half_minus_delta = Rat(1, 2) - params.delta;
    bool aborted = witnesses.empty();
    int last_k = 0;
    if (!aborted) {
        for (int k = 1; k <= n - R - 1; ++k) {
            last_k = k;
            Rat n_k = trace.n_tracked.back();
            Rat e_k = trace.lambda_exponents.back();
            Rat w_k = trace.w_tracked.back();
            long long fixed_size = ceil_to_ll(n_k);
            if (static_cast<long long>(witnesses.size()) < fixed_size) {
                // Only reachable through truncation; counts as an abort.
                aborted = true;
                GrowthStep step;
                step.k = k;
                step.case_label = GrowthCase::Abort;
                step.truncated = true;
                trace.steps.push_back(step);
                trace.n_tracked.push_back(n_k);
                trace.lambda_exponents.push_back(e_k);
                trace.w_tracked.push_back(w_k + (1 - params.delta));
                break;
            }

            std::vector<IndexSet> fixed;
            fixed.reserve(static_cast<size_t>(fixed_size));
            for (long long i = 0; i < fixed_size; ++i) fixed.push_back(witnesses[i].first);
            GrowthClassification cls = classify_growth_step(fixed, R, params.K);

            res.matrix = res.matrix.extended();
            int ground_new = k + R + 1;
            IndexSet rows = IndexSet::range(R + 1, ground_new, ground_new);

            std::set<IndexSet> children;
            for (const IndexSet& b : fixed)
                for (int c : b.complement().elements()) children.insert(b.with(c));

            Heaviness lambda_k(Rat(1), params.K, e_k);
            Heaviness lambda_plus = lambda_k.raised(half_minus_delta);
            std::vector<std::pair<IndexSet, Int>> heavy_at_lambda, heavy_at_plus;
            for (const IndexSet& child : children) {
                IndexSet wide = child.widened(ground_new);
                Int per = permanent_ryser(res.matrix.submatrix(rows, wide));
                if (lambda_k.test(per)) heavy_at_lambda.emplace_back(wide, per);
                if (!cls.branch_prime && lambda_plus.test(per))
                    heavy_at_plus.emplace_back(wide, per);
            }

            Rat n_plus = n_k * R / (8 * params.K);
            Rat n_minus = n_k * R / (8 * n);

            GrowthStep step;
            step.k = k;
            step.sum_small = cls.sum_small;
            step.sum_large = cls.sum_large;
            step.fixed_family_size = fixed_size;
            Rat n_next, e_next = e_k, w_next;
            if (cls.branch_prime && Rat(static_cast<long long>(heavy_at_lambda.size())) >= n_plus) {
                step.case_label = GrowthCase::I;
                witnesses = std::move(heavy_at_lambda);
                n_next = n_plus;
                w_next = w_k + (1 - params.delta) - 3;
            } else if (!cls.branch_prime &&
                       Rat(static_cast<long long>(heavy_at_plus.size())) >= n_minus) {
                step.case_label = GrowthCase::II;
                witnesses = std::move(heavy_at_plus);
                n_next = n_minus;
                e_next = e_k + half_minus_delta;
                w_next = w_k + (1 - params.delta) - 1;
            } else if (Rat(static_cast<long long>(heavy_at_lambda.size())) >= n_minus) {
                step.case_label = GrowthCase::III;
                witnesses = std::move(heavy_at_lambda);
                n_next = n_minus;
                w_next = w_k + (1 - params.delta);
            } else {
                step.case_label = GrowthCase::Abort;
                aborted = true;
                n_next = n_k;
                w_next = w_k + (1 - params.delta);
            }
            if (static_cast<long long>(witnesses.size()) > params.family_cap) {
                witnesses.resize(static_cast<size_t>(params.family_cap));
                step.truncated = true;
            }
            step.witness_count = static_cast<long long>(witnesses.size());
            trace.steps.push_back(step);
            trace.n_tracked.push_back(n_next);
            trace.lambda_exponents.push_back(e_next);
            trace.w_tracked.push_back(w_next);

            // The subset count of the current ground set caps N.
            if (n_next > rat_pow(Rat(2), ground_new))
                throw TheoremViolation("weak_growth_run: N exceeds the subset count");
            if (aborted) break;
        }
    } else {
        trace.steps.push_back(GrowthStep{1, GrowthCase::Abort, 0, 0, 0, 0, false});
        trace.n_tracked.push_back(Rat(1));
        trace.lambda_exponents.push_back(Rat(0));
        trace.w_tracked.push_back(Rat(1) - params.delta);
        last_k = 1;
    }

    trace.aborted = aborted;
    if (aborted) {
        trace.abort_k = last_k;
        // Freeze the sequences up to index n - R.
        while (static_cast<int>(trace.w_tracked.size()) < n - R) {
            trace.n_tracked.push_back(trace.n_tracked.back());
            trace.lambda_exponents.push_back(trace.lambda_exponents.back());
            trace.w_tracked.push_back(trace.w_tracked.back());
        }
    }

    res.success = !aborted;
    res.final_lambda = Heaviness(Rat(1), params.K, trace.lambda_exponents.back());
    if (res.success) {
        HeavyFamily family;
        family.lambda = res.final_lambda.rational_lower_bound();
        IndexSet rows = IndexSet::range(R + 1, n, n);
        for (const auto& [cols, per] : witnesses)
            family.records.push_back(HeavyRecord{rows, cols.widened(n), per});
        res.family = std::move(family);
    }
    validate_growth_trace(trace);
    return res;
}

void validate_growth_trace(const GrowthTrace& trace) {
    size_t len = trace.n_tracked.size();
    if (trace.lambda_exponents.size() != len || trace.w_tracked.size() != len)
        throw TheoremViolation("growth trace: sequence lengths differ");
    if (len == 0 || trace.n_tracked[0] != 1 || trace.lambda_exponents[0] != 0 ||
        trace.w_tracked[0] != 0)
        throw TheoremViolation("growth trace: wrong initial values");

    Rat ratio_plus = Rat(trace.R) / (8 * trace.K);
    Rat ratio_minus = Rat(trace.R, 8 * static_cast<long long>(trace.n));
    Rat half_minus_delta = Rat(1, 2) - trace.delta;
    for (size_t s = 0; s < trace.steps.size(); ++s) {
        const GrowthStep& step = trace.steps[s];
        if (step.k != static_cast<int>(s) + 1) throw TheoremViolation("growth trace: step index");
        const Rat& n_k = trace.n_tracked[s];
        const Rat& n_next = trace.n_tracked[s + 1];
        Rat de = trace.lambda_exponents[s + 1] - trace.lambda_exponents[s];
        Rat dw = trace.w_tracked[s + 1] - trace.w_tracked[s];
        Rat one_minus_delta = 1 - trace.delta;
        switch (step.case_label) {
            case GrowthCase::I:
                if (n_next != n_k * ratio_plus || de != 0 || dw != one_minus_delta - 3)
                    throw TheoremViolation("growth trace: case (i) arithmetic");
                break;
            case GrowthCase::II:
                if (n_next != n_k * ratio_minus || de != half_minus_delta ||
                    dw != one_minus_delta - 1)
                    throw TheoremViolation("growth trace: case (ii) arithmetic");
                break;
            case GrowthCase::III:
                if (n_next != n_k * ratio_minus || de != 0 || dw != one_minus_delta)
                    throw TheoremViolation("growth trace: case (iii) arithmetic");
                break;
            case GrowthCase::Abort:
                if (n_next != n_k || de != 0 || dw != one_minus_delta)
                    throw TheoremViolation("growth trace: case (iv) arithmetic");
                break;
        }
        if (step.fixed_family_size > 0) {
            Int lhs = 2 * step.sum_small;
            Int rn = Int(trace.R) * step.fixed_family_size;
            if (step.sum_small + step.sum_large != rn)
                throw TheoremViolation("growth trace: histogram identity");
            if (step.case_label == GrowthCase::I && lhs < rn)
                throw TheoremViolation("growth trace: case (i) without branch E'");
            if (step.case_label == GrowthCase::II && lhs >= rn)
                throw TheoremViolation("growth trace: case (ii) without branch E''");
        }
        if (trace.n_tracked[s + 1] > rat_pow(Rat(2), step.k + 1 + trace.R))
            throw TheoremViolation("growth trace: N exceeds subset count");
    }
    if (trace.aborted) {
        for (size_t s = static_cast<size_t>(trace.abort_k); s + 1 < len; ++s)
            if (trace.w_tracked[s + 1] != trace.w_tracked[s])
                throw TheoremViolation("growth trace: W not frozen after abort");
        if (trace.steps.empty() || trace.steps.back().case_label != GrowthCase::Abort)
            throw TheoremViolation("growth trace: abort flag without abort step");
    }
}

// -------- cover / growth engines --------

namespace {

long long missing_count(const IndexSet& b, int cover_n) {
    std::uint64_t target = IndexSet::full(cover_n).bits();
    return __builtin_popcountll(target & ~b.bits());
}

struct CoverEngine {
    SymmetricMatrix matrix;
    std::vector<std::pair<IndexSet, Int>> family;  // (cols, per); rows are {S+1..dim}
    CoverTrace trace;
    int S = 0;
    int cover_n = 0;  // Q counts columns missing from {1..cover_n}
    Heaviness lambda;
    long long cap = 64;

    std::optional<long long> q_of_family() const {
        std::optional<long long> best;
        for (const auto& [b, per] : family) {
            long long q = missing_count(b, cover_n);
            if (!best || q < *best) best = q;
        }
        return best;
    }

    void sort_and_cap(bool* truncated) {
        std::sort(family.begin(), family.end(), [&](const auto& x, const auto& y) {
            long long qx = missing_count(x.first, cover_n), qy = missing_count(y.first, cover_n);
            if (qx != qy) return qx < qy;
            return x.first < y.first;
        });
        if (static_cast<long long>(family.size()) > cap) {
            family.resize(static_cast<size_t>(cap));
            *truncated = true;
        }
    }

    // One extension step; returns Q after the step.
    std::optional<long long> step(std::optional<long long> q_prev) {
        matrix = matrix.extended();
        int m = matrix.dim();
        IndexSet rows = IndexSet::range(S + 1, m, m);
        std::set<IndexSet> candidates;
        for (const auto& [b, per] : family) {
            IndexSet bw = b.widened(m);
            for (int i : IndexSet::range(1, m - 1, m).minus(bw).elements())
                candidates.insert(bw.with(i));
        }
        std::vector<std::pair<IndexSet, Int>> next;
        for (const IndexSet& cand : candidates) {
            Int per = permanent_ryser(matrix.submatrix(rows, cand));
            if (lambda.test(per)) next.emplace_back(cand, per);
        }
        family = std::move(next);
        CoverStepRecord rec;
        rec.m = m;
        sort_and_cap(&rec.truncated);
        rec.witness_count = static_cast<long long>(family.size());
        rec.q = q_of_family();
        rec.failure = q_increased(q_prev, rec.q);
        rec.progress = q_progress(q_prev, rec.q, 0);
        trace.steps.push_back(rec);
        return rec.q;
    }

    static bool q_increased(const std::optional<long long>& prev,
                            const std::optional<long long>& cur) {
        if (!prev) return false;  // nothing above infinity
        if (!cur) return true;
        return *cur > *prev;
    }
    static bool q_progress(const std::optional<long long>& prev,
                           const std::optional<long long>& cur, long long target) {
        if (!prev) return true;
        if (!cur) return false;
        return *cur < *prev || (*cur == *prev && *cur == target);
    }
};

struct GrowthWitness {
    int q = 0;
    IndexSet cols;
    Int per;
    bool operator<(const GrowthWitness& o) const {
        if (q != o.q) return q < o.q;
        return cols < o.cols;
    }
};

struct GrowthEngine {
    SymmetricMatrix matrix;
    std::vector<GrowthWitness> family;  // rows of a witness are {q+1..dim}
    CoverTrace trace;
    int S = 0, T = 0;
    Heaviness lambda;  // threshold at Q is lambda / 2^(S-Q)
    long long cap = 64;

    Heaviness threshold(int q) const { return lambda.scaled(rat_pow(Rat(1, 2), S - q)); }

    std::optional<long long> q_of_family() const {
        if (family.empty()) return std::nullopt;
        return family.front().q;  // kept sorted by (q, cols)
    }

    std::optional<long long> step(std::optional<long long> q_prev) {
        matrix = matrix.extended();
        int m = matrix.dim();
        std::set<std::pair<int, IndexSet>> seen;
        std::vector<GrowthWitness> next;
        auto push = [&](int q, const IndexSet& cols, const Int& per) {
            if (cols.size() != m - q || !IndexSet::range(1, q, cols.ground_size()).subset_of(cols))
                throw TheoremViolation("growth engine: witness shape invariant broken");
            if (seen.insert({q, cols}).second) next.push_back(GrowthWitness{q, cols, per});
        };
        for (const GrowthWitness& w : family) {
            IndexSet bw = w.cols.widened(m);
            IndexSet rows = IndexSet::range(w.q + 1, m, m);
            // Maintenance: augment by one column, Q unchanged.
            Heaviness th = threshold(w.q);
            for (int i : IndexSet::range(1, m - 1, m).minus(bw).elements()) {
                if (seen.count({w.q, bw.with(i)})) continue;
                Int per = permanent_ryser(matrix.submatrix(rows, bw.with(i)));
                if (th.test(per)) push(w.q, bw.with(i), per);
            }
            // Progress: corner step lowers Q by one. a = Q sits in B' (prefix)
            // and outside the row set; b1, b2 are the two smallest missing
            // row indices (there are exactly Q >= T + 1 >= 2 of them... Q > T).
            if (w.q > T) {
                IndexSet pre_rows = IndexSet::range(w.q + 1, m - 1, m - 1);
                IndexSet missing_rows = pre_rows.minus(w.cols);
                if (missing_rows.size() >= 2) {
                    auto elems = missing_rows.elements();
                    auto corner = corner_step(matrix, pre_rows, w.cols, w.q, elems[0], elems[1], th);
                    if (corner) push(w.q - 1, corner->cols, corner->per_value);
                }
            }
        }
        family = std::move(next);
        std::sort(family.begin(), family.end());
        CoverStepRecord rec;
        rec.m = m;
        if (static_cast<long long>(family.size()) > cap) {
            family.resize(static_cast<size_t>(cap));
            rec.truncated = true;
        }
        rec.witness_count = static_cast<long long>(family.size());
        rec.q = q_of_family();
        rec.failure = CoverEngine::q_increased(q_prev, rec.q);
        rec.progress = CoverEngine::q_progress(q_prev, rec.q, T);
        trace.steps.push_back(rec);
        return rec.q;
    }
};

}  // namespace

void validate_cover_trace(const CoverTrace& trace) {
    long long target = trace.variant == 'g' ? trace.T : 0;
    std::optional<long long> prev = trace.q_start;
    for (const CoverStepRecord& rec : trace.steps) {
        bool inc = CoverEngine::q_increased(prev, rec.q);
        if (rec.failure != inc)
            throw TheoremViolation("cover trace: failure flag inconsistent with Q");
        bool prog = CoverEngine::q_progress(prev, rec.q, target);
        if (rec.progress != prog)
            throw TheoremViolation("cover trace: progress flag inconsistent with Q");
        if (rec.q.has_value() == (rec.witness_count == 0))
            throw TheoremViolation("cover trace: Q = infinity iff no witnesses");
        if (trace.variant == 'g' && rec.q && *rec.q < trace.T)
            throw TheoremViolation("cover trace: growth Q below T");
        prev = rec.q;
    }
}

CoverRunResult iterative_cover_run(const SymmetricMatrix& m_n, const IndexSet& B, int S,
                                   const Heaviness& lambda, long long family_cap) {
    int n = m_n.dim();
    if (!(S >= 1 && S < n)) throw ContractViolation("iterative_cover_run: needs 1 <= S < n");
    if (B.ground_size() != n || B.size() != n - S)
        throw ContractViolation("iterative_cover_run: needs |B| = n - S over {1..n}");
    IndexSet rows = IndexSet::range(S + 1, n, n);
    Int per0 = permanent_ryser(m_n.submatrix(rows, B));
    if (!lambda.test(per0))
        throw ContractViolation("iterative_cover_run: M[{S+1..n}, B] is not lambda-heavy");

    CoverEngine engine;
    engine.matrix = m_n;
    engine.family = {{B, per0}};
    engine.S = S;
    engine.cover_n = n;
    engine.lambda = lambda;
    engine.cap = family_cap;
    engine.trace.variant = 'c';
    engine.trace.S = S;
    std::optional<long long> q = missing_count(B, n);
    engine.trace.q_start = q;
    for (int step = 0; step < 3 * S; ++step) q = engine.step(q);

    CoverRunResult res;
    res.trace = std::move(engine.trace);
    res.matrix = std::move(engine.matrix);
    res.success = q && *q == 0;
    if (res.success) {
        res.b_final = engine.family.front().first;  // sorted: lowest Q first
        res.final_per = engine.family.front().second;
    }
    validate_cover_trace(res.trace);
    return res;
}

CoverRunResult iterative_growth_run(const SymmetricMatrix& m_n, const IndexSet& B, int S, int T,
                                    const Heaviness& lambda, long long family_cap) {
    int n = m_n.dim();
    if (!(2 <= T && T < S && S < n))
        throw ContractViolation("iterative_growth_run: needs 2 <= T < S < n");
    if (B.ground_size() != n || B.size() != n - S ||
        !IndexSet::range(1, S, n).subset_of(B))
        throw ContractViolation("iterative_growth_run: needs {1..S} within B, |B| = n - S");
    IndexSet rows = IndexSet::range(S + 1, n, n);
    Int per0 = permanent_ryser(m_n.submatrix(rows, B));
    if (!lambda.test(per0))
        throw ContractViolation("iterative_growth_run: M[{S+1..n}, B] is not lambda-heavy");

    GrowthEngine engine;
    engine.matrix = m_n;
    engine.family = {GrowthWitness{S, B, per0}};
    engine.S = S;
    engine.T = T;
    engine.lambda = lambda;
    engine.cap = family_cap;
    engine.trace.variant = 'g';
    engine.trace.S = S;
    engine.trace.T = T;
    std::optional<long long> q = S;
    engine.trace.q_start = q;
    for (int step = 0; step < 5 * S; ++step) q = engine.step(q);

    CoverRunResult res;
    res.trace = std::move(engine.trace);
    res.matrix = std::move(engine.matrix);
    res.success = q && *q == T;
    if (res.success) {
        res.b_final = engine.family.front().cols;
        res.final_per = engine.family.front().per;
    }
    validate_cover_trace(res.trace);
    return res;
}

// -------- composed pipeline --------

namespace {

// Lexicographic size-k subsets of {1..ground} via Gosper's hack.
std::vector<IndexSet> subsets_of_size(int ground, int k, long long cap) {
    std::vector<IndexSet> out;
    if (k == 0) {
        out.push_back(IndexSet(ground));
        return out;
    }
    if (k > ground) return out;
    std::uint64_t v = (std::uint64_t{1} << k) - 1;
    std::uint64_t limit = std::uint64_t{1} << ground;
    while (v < limit && static_cast<long long>(out.size()) < cap) {
        out.push_back(IndexSet::from_bits(v, ground));
        std::uint64_t t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctzll(v) + 1));
    }
    return out;
}

}  // namespace

SingleMinorResult grow_single_minor_run(int n, const IndexSet& X, const IndexSet& Y,
                                        const GrowthParams& params, std::uint64_t root_seed,
                                        std::uint64_t stream_id) {
    int L = X.size();
    int R = params.R;
    if (L < 1 || Y.size() != 3 * L)
        throw ContractViolation("grow_single_minor_run: needs |X| = L >= 1 and |Y| = 3L");
    if (!(X == IndexSet::range(1, L, n)) || !(Y == IndexSet::range(n - 3 * L + 1, n, n)))
        throw ContractViolation(
            "grow_single_minor_run: X, Y must be the canonical windows {1..L}, {n-3L+1..n} "
            "(general positions reduce to this by relabeling)");
    if (R < L) throw ContractViolation("grow_single_minor_run: needs R >= L");
    if (params.lambda <= 0) throw ContractViolation("grow_single_minor_run: lambda must be > 0");
    int m3 = n - 3 * L;
    int n0 = params.n0 > 0 ? params.n0 : R + 2;
    if (n0 <= R || n0 > m3)
        throw ContractViolation("grow_single_minor_run: start dimension must satisfy R < n0 <= n-3L");

    SingleMinorResult res;
    res.final_lambda = Heaviness(params.lambda).scaled(rat_pow(Rat(1, 2), R - L));
    long long cap = params.family_cap;

    auto fail = [&](const std::string& stage) {
        res.failed_stage = stage;
        res.success = false;
        return res;
    };

    // init: exhaustive witness search in M_{n0}.
    res.matrix = SymmetricMatrix::sample(n0, EntryDistribution::rademacher(), root_seed, stream_id);
    Heaviness lambda0(params.lambda);
    IndexSet init_rows = IndexSet::range(R + 1, n0, n0);
    std::vector<std::pair<IndexSet, Int>> cover_family;
    for (const IndexSet& b : subsets_of_size(n0, n0 - R, 1 << 20)) {
        Int per = permanent_ryser(res.matrix.submatrix(init_rows, b));
        if (lambda0.test(per)) {
            cover_family.emplace_back(b, per);
            if (static_cast<long long>(cover_family.size()) >= cap) break;
        }
    }
    {
        StageOutcome init;
        init.name = "init";
        init.success = !cover_family.empty();
        init.start_dim = init.end_dim = n0;
        init.rows_lo_in = init.rows_lo_out = R + 1;
        res.stages.push_back(init);
        if (cover_family.empty()) return fail("init");
    }

    // stage 1: cover(S=R), drive the missing columns of {1..n0} to zero.
    std::vector<GrowthWitness> growth_family;
    {
        CoverEngine engine;
        engine.matrix = std::move(res.matrix);
        engine.family = std::move(cover_family);
        engine.S = R;
        engine.cover_n = n0;
        engine.lambda = lambda0;
        engine.cap = cap;
        engine.trace.variant = 'c';
        engine.trace.S = R;
        std::optional<long long> q = engine.q_of_family();
        engine.trace.q_start = q;
        int budget = std::min(3 * R, m3 - engine.matrix.dim());
        for (int step = 0; step < budget && !(q && *q == 0); ++step) q = engine.step(q);
        validate_cover_trace(engine.trace);

        StageOutcome st;
        st.name = "cover-R";
        st.start_dim = n0;
        st.end_dim = engine.matrix.dim();
        st.rows_lo_in = st.rows_lo_out = R + 1;
        st.trace = std::move(engine.trace);
        st.success = q && *q == 0;
        res.matrix = std::move(engine.matrix);
        if (st.success)
            for (const auto& [b, per] : engine.family)
                if (missing_count(b, n0) == 0) growth_family.push_back(GrowthWitness{R, b, per});
        res.stages.push_back(std::move(st));
        if (growth_family.empty()) return fail("cover-R");
    }

    // growth stages: reduce Q from R down to L, halving the threshold per
    // progress step. Entering threshold at Q equals the engine's
    // lambda/2^(S-Q), so each stage's engine base is rescaled accordingly.
    int q_in = R;
    Heaviness lambda_cur = lambda0;  // threshold the current witnesses satisfy
    struct GrowthStageSpec {
        std::string name;
        int S, T;
    };
    std::vector<GrowthStageSpec> specs;
    if (L * L < R) specs.push_back({"growth-R-L2", R, L * L});
    if (L < std::min(L * L, R)) specs.push_back({"growth-L2-L", L * L, L});
    for (const auto& spec : specs) {
        if (q_in <= spec.T) continue;  // nothing left for this stage
        GrowthEngine engine;
        engine.matrix = std::move(res.matrix);
        engine.family = std::move(growth_family);
        engine.S = spec.S;
        engine.T = spec.T;
        engine.lambda = lambda_cur.scaled(rat_pow(Rat(2), spec.S - q_in));
        engine.cap = cap;
        engine.trace.variant = 'g';
        engine.trace.S = spec.S;
        engine.trace.T = spec.T;
        std::optional<long long> q = q_in;
        engine.trace.q_start = q;
        int budget = std::min(5 * spec.S, m3 - engine.matrix.dim());
        for (int step = 0; step < budget && !(q && *q == spec.T); ++step) q = engine.step(q);
        validate_cover_trace(engine.trace);

        StageOutcome st;
        st.name = spec.name;
        st.start_dim = engine.trace.steps.empty() ? engine.matrix.dim() : engine.matrix.dim() - static_cast<int>(engine.trace.steps.size());
        st.end_dim = engine.matrix.dim();
        st.rows_lo_in = q_in + 1;
        st.rows_lo_out = spec.T + 1;
        st.trace = std::move(engine.trace);
        st.success = q && *q == spec.T;
        res.matrix = std::move(engine.matrix);
        growth_family.clear();
        if (st.success)
            for (const GrowthWitness& w : engine.family)
                if (w.q == spec.T) growth_family.push_back(w);
        bool ok = st.success && !growth_family.empty();
        lambda_cur = engine.lambda.scaled(rat_pow(Rat(1, 2), spec.S - spec.T));
        res.stages.push_back(std::move(st));
        if (!ok) return fail(res.stages.back().name);
        q_in = spec.T;
    }
    if (q_in != L) return fail("growth-L2-L");

    // align: pad with maintenance steps until the final cover window starts
    // exactly at n - 3L.
    if (res.matrix.dim() < m3) {
        GrowthEngine engine;
        engine.matrix = std::move(res.matrix);
        engine.family = std::move(growth_family);
        engine.S = L;
        engine.T = L;
        engine.lambda = lambda_cur;
        engine.cap = cap;
        engine.trace.variant = 'g';
        engine.trace.S = L;
        engine.trace.T = L;
        std::optional<long long> q = L;
        engine.trace.q_start = q;
        int pad = m3 - engine.matrix.dim();
        for (int step = 0; step < pad; ++step) q = engine.step(q);
        validate_cover_trace(engine.trace);

        StageOutcome st;
        st.name = "align";
        st.start_dim = m3 - pad;
        st.end_dim = engine.matrix.dim();
        st.rows_lo_in = st.rows_lo_out = L + 1;
        st.trace = std::move(engine.trace);
        st.success = q && *q == L;
        res.matrix = std::move(engine.matrix);
        growth_family = std::move(engine.family);
        res.stages.push_back(std::move(st));
        if (!res.stages.back().success) return fail("align");
    }

    // stage 4: cover(S=L) over {1..m3}, exactly 3L steps, ending at n.
    {
        CoverEngine engine;
        engine.matrix = std::move(res.matrix);
        for (const GrowthWitness& w : growth_family)
            engine.family.emplace_back(w.cols, w.per);
        engine.S = L;
        engine.cover_n = m3;
        engine.lambda = lambda_cur;
        engine.cap = cap;
        engine.trace.variant = 'c';
        engine.trace.S = L;
        std::optional<long long> q = engine.q_of_family();
        engine.trace.q_start = q;
        for (int step = 0; step < 3 * L; ++step) q = engine.step(q);
        validate_cover_trace(engine.trace);

        StageOutcome st;
        st.name = "cover-L";
        st.start_dim = m3;
        st.end_dim = engine.matrix.dim();
        st.rows_lo_in = st.rows_lo_out = L + 1;
        st.trace = std::move(engine.trace);
        st.success = q && *q == 0 && engine.matrix.dim() == n;
        res.matrix = std::move(engine.matrix);
        if (st.success) {
            res.b_final = engine.family.front().first;
            res.final_per = engine.family.front().second;
        }
        res.stages.push_back(std::move(st));
        if (!res.stages.back().success) return fail("cover-L");
    }

    // Exact re-verification of the composed threshold lambda/2^(R-L).
    Int per = permanent_ryser(
        res.matrix.submatrix(IndexSet::range(L + 1, n, n), res.b_final->widened(n)));
    if (per != res.final_per || !res.final_lambda.test(per))
        throw TheoremViolation("grow_single_minor_run: final witness fails re-verification");
    res.success = true;
    return res;
}

}  // namespace permlab
