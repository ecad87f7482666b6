#include "permlab/endgame.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace permlab {

std::string index_label_name(IndexLabel label) {
    switch (label) {
        case IndexLabel::Easy: return "easy";
        case IndexLabel::Short: return "short";
        case IndexLabel::Interesting: return "interesting";
    }
    return "?";
}

std::vector<Quadruple> build_quadruples(const SymmetricMatrix& m, const HeavyFamily& family,
                                        const Rat& lambda, int L) {
    int n = m.dim();
    size_t count = family.records.size();
    if (count == 0) throw ContractViolation("build_quadruples: empty family");
    if (lambda <= 0) throw ContractViolation("build_quadruples: lambda must be > 0");
    std::vector<IndexSet> all_sets;
    for (const HeavyRecord& rec : family.records) {
        if (rec.rows.ground_size() != n || rec.cols.ground_size() != n ||
            rec.rows.size() != n - L || rec.cols.size() != n - L)
            throw ContractViolation("build_quadruples: records must be size n-L over {1..n}");
        all_sets.push_back(rec.rows);
        all_sets.push_back(rec.cols);
    }
    if (!complement_disjoint(all_sets, n))
        throw ContractViolation("build_quadruples: family is not complement-disjoint");

    Heaviness half(lambda / 2);
    std::vector<Quadruple> out;
    for (const HeavyRecord& rec : family.records) {
        const IndexSet& A = rec.rows;
        const IndexSet& B = rec.cols;
        Quadruple quad;
        if (L == 1) {
            if (A == B)
                throw ContractViolation(
                    "build_quadruples: L = 1 needs A != B (i and j must be distinct)");
            quad.a_star = IndexSet::full(n);
            quad.b_star = IndexSet::full(n);
            quad.i = A.complement().smallest();
            quad.j = B.complement().smallest();
            // By symmetry the two minors agree, so the coefficient is
            // 2 per M[A,B]; both sides are computed anyway as a self-check.
            Int per_ab = permanent_ryser(m.submatrix(A, B));
            Int per_ba = permanent_ryser(m.submatrix(B, A));
            if (per_ab != per_ba)
                throw TheoremViolation("build_quadruples: per M[A,B] != per M[B,A] on a symmetric matrix");
            quad.coeff = per_ab + per_ba;
        } else {
            if (B.minus(A).empty() || A.minus(B).size() < 2)
                throw ContractViolation("build_quadruples: needs a in B\\A and two elements of A\\B");
            int a = B.minus(A).smallest();
            auto bs = A.minus(B).elements();
            NoncancellingPair pair = choose_noncancelling_pair(m, A, B, a, bs[0], bs[1], lambda);
            quad.a_star = pair.a_prime;
            quad.b_star = pair.b_prime;
            quad.i = pair.i;
            quad.j = pair.j;
            quad.coeff = pair.minor_sum;
        }
        out.push_back(std::move(quad));
    }

    // Claim conditions, all verified exactly.
    std::set<int> pool;
    std::vector<IndexSet> star_sets;
    for (const Quadruple& q : out) {
        if (q.a_star.size() != n - L + 1 || q.b_star.size() != n - L + 1)
            throw TheoremViolation("build_quadruples: wrong A*/B* size");
        if (q.i == q.j || !q.a_star.contains(q.i) || !q.b_star.contains(q.i) ||
            !q.a_star.contains(q.j) || !q.b_star.contains(q.j))
            throw TheoremViolation("build_quadruples: i, j not distinct members of A* and B*");
        if (!pool.insert(q.i).second || !pool.insert(q.j).second)
            throw TheoremViolation("build_quadruples: indices i_l, j_l collide across the family");
        if (half.compare_abs(int_abs(q.coeff)) < 0)
            throw TheoremViolation("build_quadruples: |coefficient| < lambda/2");
        star_sets.push_back(q.a_star);
        star_sets.push_back(q.b_star);
    }
    if (!complement_disjoint(star_sets, n))
        throw TheoremViolation("build_quadruples: A*/B* family is not complement-disjoint");
    return out;
}

namespace {

// count <=> c * m^(num/den), exactly.
int cmp_power(long long count, long long c, long long m, unsigned num, unsigned den) {
    return compare_count_to_power(Int(count), Int(c), Int(m), num, den);
}

}  // namespace

long long t_ell_statistics(const EndgameState& state, int ell,
                           const std::vector<int>& realized_row) {
    const EndgameIndexInfo& info = state.info[static_cast<size_t>(ell)];
    if (info.label != IndexLabel::Interesting)
        throw ContractViolation("t_ell_statistics: index is not interesting");
    const QuadraticPolynomial& p_good = state.polys_good[static_cast<size_t>(ell)];

    std::vector<Int> removed;
    QuadraticPolynomial p_star = p_good.drop_quadratic_outside(info.cover, &removed);
    Rat removed_total = 0;
    for (const Int& c : removed) {
        if (Rat(int_abs(c)) >= state.tau)
            throw TheoremViolation("t_ell_statistics: dropped coefficient >= tau (cover broken)");
        removed_total += Rat(int_abs(c));
    }
    long long n = state.n;
    if (removed_total > state.tau * Rat(n * (n - 1), 2))
        throw TheoremViolation("t_ell_statistics: |P - P*| bound violated");

    std::map<int, int> cover_values;
    for (int i : info.cover.elements()) cover_values[i] = realized_row[static_cast<size_t>(i - 1)];
    QuadraticPolynomial q_ell = p_star.substitute(cover_values);
    if (!q_ell.is_linear())
        throw TheoremViolation("t_ell_statistics: Q_l is not linear after substitution");

    long long t = 0;
    for (const auto& [i, c] : q_ell.linear())
        if (Rat(int_abs(c)) >= state.sigma) ++t;
    return t;
}

void classify_indices(EndgameState& state, const std::vector<int>& realized_row) {
    int m = state.m;
    state.polys_good.assign(state.polys_on_i.size(), QuadraticPolynomial(state.n));
    state.easy_count = state.short_count = state.interesting_count = 0;
    state.x_stat = state.y_stat = 0;

    // Easy indices and covers.
    std::map<int, long long> cover_membership;
    for (int ell = 0; ell < m; ++ell) {
        EndgameIndexInfo& info = state.info[static_cast<size_t>(ell)];
        CoefficientGraph g = coefficient_graph(state.polys_on_i[static_cast<size_t>(ell)], state.tau);
        info.matching_number = matching_number(g);
        if (cmp_power(info.matching_number, 1, m, 1, 6) >= 0) {
            info.label = IndexLabel::Easy;
            info.cover = IndexSet(state.n);
            ++state.easy_count;
            continue;
        }
        info.cover = greedy_vertex_cover(g).widened(state.n);
        for (auto [u, v] : g.edges)
            if (!info.cover.contains(u) && !info.cover.contains(v))
                throw TheoremViolation("classify_indices: S_l does not cover G_l");
        if (info.cover.size() > 2 * info.matching_number)
            throw TheoremViolation("classify_indices: |S_l| > 2 nu(G_l)");
        if (cmp_power(info.cover.size(), 2, m, 1, 6) > 0)
            throw TheoremViolation("classify_indices: |S_l| > 2 m^(1/6)");
        info.label = IndexLabel::Short;  // provisional; refined below
        for (int i : info.cover.elements()) ++cover_membership[i];
    }

    // Bad variables: in S_l for at least m^(1/3) non-easy l.
    state.bad_vars = IndexSet(state.n);
    for (const auto& [i, cnt] : cover_membership)
        if (cmp_power(cnt, 1, m, 1, 3) >= 0) state.bad_vars.insert(i);
    if (cmp_power(state.bad_vars.size(), 2, m, 5, 6) > 0)
        throw TheoremViolation("classify_indices: more than 2 m^(5/6) bad variables");
    state.good_vars = state.index_pool.minus(state.bad_vars);

    std::map<int, int> bad_values;
    for (int i : state.bad_vars.elements()) bad_values[i] = realized_row[static_cast<size_t>(i - 1)];

    // Short vs interesting, on the bad-substituted polynomials.
    for (int ell = 0; ell < m; ++ell) {
        EndgameIndexInfo& info = state.info[static_cast<size_t>(ell)];
        state.polys_good[static_cast<size_t>(ell)] =
            state.polys_on_i[static_cast<size_t>(ell)].substitute(bad_values);
        if (info.label == IndexLabel::Easy) continue;
        long long sigma_vars = 0;
        for (int v : state.polys_good[static_cast<size_t>(ell)].variables_in_terms_at_least(state.sigma))
            if (state.good_vars.contains(v)) ++sigma_vars;
        if (cmp_power(sigma_vars, 6, m, 1, 6) <= 0) {
            info.label = IndexLabel::Short;
            ++state.short_count;
        } else {
            info.label = IndexLabel::Interesting;
            ++state.interesting_count;
        }
    }

    // T_l statistics for interesting indices.
    for (int ell = 0; ell < m; ++ell) {
        EndgameIndexInfo& info = state.info[static_cast<size_t>(ell)];
        if (info.label != IndexLabel::Interesting) continue;
        info.t_ell = t_ell_statistics(state, ell, realized_row);
        if (cmp_power(info.t_ell, 1, m, 1, 6) >= 0) {
            ++state.x_stat;
            std::vector<Int> removed;
            QuadraticPolynomial p_star =
                state.polys_good[static_cast<size_t>(ell)].drop_quadratic_outside(info.cover);
            if (Rat(int_abs(p_star.evaluate(realized_row))) < state.sigma) ++state.y_stat;
        }
    }
}

EndgameResult endgame_step_run(const SymmetricMatrix& m_n, const HeavyFamily& family,
                               const Rat& lambda) {
    int n = m_n.dim();
    int m = static_cast<int>(family.records.size());
    if (m < 1) throw ContractViolation("endgame_step_run: needs m >= 1");
    int L = n - family.records.front().rows.size();
    if (L < 1 || L >= n) throw ContractViolation("endgame_step_run: needs 1 <= L < n");
    for (const HeavyRecord& rec : family.records)
        if (!is_heavy(rec.per_value, lambda))
            throw ContractViolation("endgame_step_run: a record is not lambda-heavy");

    EndgameResult res;
    res.extended = m_n.extended();
    std::vector<int> row(static_cast<size_t>(n + 1));
    for (int i = 1; i <= n + 1; ++i) {
        std::int64_t v = res.extended.entry(n + 1, i);
        if (i <= n && v != 1 && v != -1)
            throw ContractViolation(
                "endgame_step_run: extension entries must be +-1 (multilinear reduction)");
        row[static_cast<size_t>(i - 1)] = static_cast<int>(v);
    }
    std::int64_t z = res.extended.entry(n + 1, n + 1);

    EndgameState& st = res.state;
    st.n = n;
    st.L = L;
    st.m = m;
    st.lambda = lambda;
    st.sigma = lambda / (4 * Rat(n) * n);
    st.tau = lambda / (4 * Rat(n) * n * n * n);
    st.quadruples = build_quadruples(m_n, family, lambda, L);
    st.index_pool = IndexSet(n);
    for (const Quadruple& q : st.quadruples) {
        st.index_pool.insert(q.i);
        st.index_pool.insert(q.j);
    }
    st.info.assign(static_cast<size_t>(m), EndgameIndexInfo{});

    std::map<int, int> outside_values;
    for (int i : st.index_pool.complement().elements())
        outside_values[i] = row[static_cast<size_t>(i - 1)];

    std::vector<int> realized(row.begin(), row.begin() + n);
    for (int ell = 0; ell < m; ++ell) {
        const Quadruple& q = st.quadruples[static_cast<size_t>(ell)];
        QuadraticPolynomial p = double_expansion(m_n, q.a_star, q.b_star, z);
        // Evaluation identity against the directly computed permanent.
        Int direct = permanent_ryser(res.extended.submatrix(q.a_star.widened(n + 1).with(n + 1),
                                                            q.b_star.widened(n + 1).with(n + 1)));
        Int value = p.evaluate(realized);
        if (value != direct)
            throw TheoremViolation("endgame_step_run: P_l(row) != per of the grown block");
        if (p.coefficient(q.i, q.j) != q.coeff)
            throw TheoremViolation("endgame_step_run: x_i x_j coefficient mismatch");
        EndgameIndexInfo& info = st.info[static_cast<size_t>(ell)];
        info.p_value = value;
        info.qualifying = Rat(int_abs(value)) >= st.tau;
        if (info.qualifying) ++st.qualifying_count;
        st.polys_on_i.push_back(p.substitute(outside_values));
        st.polys.push_back(std::move(p));
    }

    classify_indices(st, realized);

    long long needed = (m + 35) / 36;  // ceil(m/36)
    if (st.qualifying_count >= needed) {
        HeavyFamily next;
        next.lambda = st.tau;
        for (int ell = 0; ell < m && static_cast<long long>(next.records.size()) < needed; ++ell) {
            if (!st.info[static_cast<size_t>(ell)].qualifying) continue;
            const Quadruple& q = st.quadruples[static_cast<size_t>(ell)];
            next.records.push_back(HeavyRecord{q.a_star.widened(n + 1).with(n + 1),
                                               q.b_star.widened(n + 1).with(n + 1),
                                               st.info[static_cast<size_t>(ell)].p_value});
        }
        next.verify(res.extended, /*require_complement_disjoint=*/true, n + 1);
        res.survivors = std::move(next);
        res.success = true;
    }
    return res;
}

}  // namespace permlab
