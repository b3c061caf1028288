//! Small finite groups by full Cayley table; solvability and composition
//! series with prime cyclic quotients.
//!
//! Composition series are built by refining the derived series: between two
//! consecutive derived subgroups the quotient is abelian, so every
//! intermediate subgroup is normal in the upper one and prime steps can be
//! inserted greedily. All choices take the smallest element index, which
//! makes series (and everything downstream that consumes the coset
//! generators) reproducible.

use std::collections::BTreeSet;

use crate::{Error, Result};

/// Cap on group order for composition series; fixtures stay at 24 or below.
pub const MAX_SERIES_ORDER: usize = 64;

/// Finite group as a Cayley table over element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteGroup {
    /// Validates the table: Latin square, exhaustive associativity,
    /// two-sided identity and inverses.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty group table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidInput("group table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidInput(format!("table index {v} out of range")));
                }
            }
        }
        // Latin square
        for i in 0..n {
            let row: BTreeSet<usize> = table[i].iter().copied().collect();
            let col: BTreeSet<usize> = (0..n).map(|j| table[j][i]).collect();
            if row.len() != n || col.len() != n {
                return Err(Error::ValidationFailed(format!(
                    "group table is not a Latin square at index {i}"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
            .ok_or_else(|| Error::ValidationFailed("group table has no identity".into()))?;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(Error::ValidationFailed(format!(
                            "group table not associative at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            if !(0..n).any(|j| table[i][j] == identity) {
                return Err(Error::ValidationFailed(format!("element {i} has no inverse")));
            }
        }
        Ok(FiniteGroup {
            labels,
            table,
            identity,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.identity)
            .expect("validated group has inverses")
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut acc = a;
        let mut k = 1u64;
        while acc != self.identity {
            acc = self.mul(acc, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (i..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Closure of a seed set under multiplication (finite, so under inverses too).
    pub fn subgroup_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = seed.clone();
        out.insert(self.identity);
        let mut frontier: Vec<usize> = out.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for y in out.clone() {
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if out.insert(z) {
                        frontier.push(z);
                    }
                }
            }
        }
        out
    }

    /// Derived subgroup [H,H] of a subgroup given as an element set.
    pub fn derived_subgroup(&self, h: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut comms = BTreeSet::new();
        for &a in h {
            for &b in h {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                comms.insert(c);
            }
        }
        self.subgroup_closure(&comms)
    }

    /// Derived series G ⊵ G' ⊵ G'' ⊵ … until it stabilizes.
    pub fn derived_series(&self) -> Vec<BTreeSet<usize>> {
        let mut series = vec![(0..self.order()).collect::<BTreeSet<usize>>()];
        loop {
            let next = self.derived_subgroup(series.last().unwrap());
            if &next == series.last().unwrap() {
                return series;
            }
            series.push(next);
        }
    }

    /// True iff the derived series reaches {1}.
    pub fn is_solvable(&self) -> bool {
        let series = self.derived_series();
        series.last().unwrap().len() == 1
    }

    pub fn is_normal_in(&self, sub: &BTreeSet<usize>, ambient: &BTreeSet<usize>) -> bool {
        ambient.iter().all(|&g| {
            sub.iter()
                .all(|&h| sub.contains(&self.mul(self.mul(g, h), self.inv(g))))
        })
    }

    /// Composition series {1} = G_0 ≤ … ≤ G_k = G with prime cyclic
    /// quotients, deterministic via smallest-index choices.
    pub fn composition_series(&self) -> Result<SolvableSeries> {
        if self.order() > MAX_SERIES_ORDER {
            return Err(Error::InvalidInput(format!(
                "group order {} exceeds series cap {MAX_SERIES_ORDER}",
                self.order()
            )));
        }
        let derived = self.derived_series();
        if derived.last().unwrap().len() != 1 {
            return Err(Error::InvalidInput(format!(
                "group is not solvable: derived series stabilizes at order {}",
                derived.last().unwrap().len()
            )));
        }
        let mut subgroups: Vec<BTreeSet<usize>> = vec![derived.last().unwrap().clone()];
        let mut primes: Vec<u64> = Vec::new();
        // refine each derived segment bottom-up; quotients there are abelian
        for win in derived.windows(2).rev() {
            let (upper, lower) = (&win[0], &win[1]);
            let mut current = lower.clone();
            debug_assert_eq!(&current, subgroups.last().unwrap());
            while &current != upper {
                let x = *upper
                    .iter()
                    .find(|i| !current.contains(i))
                    .expect("current is a proper subset of upper");
                // order of the coset xK in upper/current
                let mut m = 1u64;
                let mut acc = x;
                while !current.contains(&acc) {
                    acc = self.mul(acc, x);
                    m += 1;
                }
                let q = smallest_prime_factor(m);
                let g = self.pow(x, m / q);
                let mut next = current.clone();
                let mut coset_rep = g;
                for _ in 1..q {
                    next.extend(current.iter().map(|&h| self.mul(h, coset_rep)));
                    coset_rep = self.mul(coset_rep, g);
                }
                if next.len() != current.len() * q as usize {
                    return Err(Error::Internal(format!(
                        "composition refinement produced size {} instead of {}",
                        next.len(),
                        current.len() * q as usize
                    )));
                }
                subgroups.push(next.clone());
                primes.push(q);
                current = next;
            }
        }
        // σ_{j+1}: smallest-index element of G_{j+1} \ G_j (any choice
        // generates the prime quotient)
        let generators = subgroups
            .windows(2)
            .map(|w| {
                *w[1]
                    .iter()
                    .find(|i| !w[0].contains(i))
                    .expect("proper inclusion")
            })
            .collect();
        let series = SolvableSeries {
            subgroups,
            primes,
            generators,
        };
        series.validate(self)?;
        Ok(series)
    }
}

fn smallest_prime_factor(m: u64) -> u64 {
    debug_assert!(m > 1);
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return d;
        }
        d += 1;
    }
    m
}

/// Chain {1} = G_0 ≤ G_1 ≤ … ≤ G_k = G with prime quotient orders q_j and
/// coset generators σ_{j+1} ∈ G_{j+1} \ G_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvableSeries {
    pub subgroups: Vec<BTreeSet<usize>>,
    pub primes: Vec<u64>,
    pub generators: Vec<usize>,
}

impl SolvableSeries {
    /// Build from subgroup element sets alone; primes and smallest-index
    /// generators are derived, then everything is validated.
    pub fn from_subgroups(group: &FiniteGroup, subgroups: Vec<BTreeSet<usize>>) -> Result<SolvableSeries> {
        if subgroups.len() < 2 {
            return Err(Error::InvalidInput("series needs at least {1} and G".into()));
        }
        let mut primes = Vec::new();
        let mut generators = Vec::new();
        for w in subgroups.windows(2) {
            if w[0].len() == 0 || w[1].len() % w[0].len() != 0 {
                return Err(Error::InvalidInput("series indices do not divide".into()));
            }
            primes.push((w[1].len() / w[0].len()) as u64);
            generators.push(
                *w[1]
                    .iter()
                    .find(|i| !w[0].contains(i))
                    .ok_or_else(|| Error::InvalidInput("series step does not grow".into()))?,
            );
        }
        let series = SolvableSeries {
            subgroups,
            primes,
            generators,
        };
        series.validate(group)?;
        Ok(series)
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// All invariants: G_0 = {1}, G_k = G, subgroup steps normal with prime
    /// index, generators generate the quotients.
    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let k = self.primes.len();
        if self.subgroups.len() != k + 1 || self.generators.len() != k {
            return Err(Error::InvalidInput("series component lengths disagree".into()));
        }
        if self.subgroups[0] != BTreeSet::from([group.identity()]) {
            return Err(Error::ValidationFailed("series does not start at {1}".into()));
        }
        if self.subgroups[k].len() != group.order() {
            return Err(Error::ValidationFailed("series does not end at G".into()));
        }
        for (j, w) in self.subgroups.windows(2).enumerate() {
            let (lo, hi) = (&w[0], &w[1]);
            if !lo.is_subset(hi) {
                return Err(Error::ValidationFailed(format!("G_{j} not contained in G_{}", j + 1)));
            }
            for &s in hi {
                // subgroup check of hi while we're here
                for &t in hi {
                    if !hi.contains(&group.mul(s, t)) {
                        return Err(Error::ValidationFailed(format!(
                            "level {} set is not closed under multiplication",
                            j + 1
                        )));
                    }
                }
            }
            if !group.is_normal_in(lo, hi) {
                return Err(Error::ValidationFailed(format!("G_{j} not normal in G_{}", j + 1)));
            }
            let q = self.primes[j];
            if smallest_prime_factor(q.max(2)) != q || hi.len() != lo.len() * q as usize {
                return Err(Error::ValidationFailed(format!(
                    "index of G_{j} in G_{} is not the prime q_{j} = {q}",
                    j + 1
                )));
            }
            let g = self.generators[j];
            if !hi.contains(&g) || lo.contains(&g) {
                return Err(Error::ValidationFailed(format!(
                    "generator σ_{} not in G_{} \\ G_{j}",
                    j + 1,
                    j + 1
                )));
            }
            // ⟨G_j, σ⟩ = G_{j+1}: since [G_{j+1}:G_j] is prime it is enough
            // that σ ∉ G_j, but verify the coset decomposition anyway
            let mut union = lo.clone();
            let mut rep = g;
            for _ in 1..q {
                union.extend(lo.iter().map(|&h| group.mul(h, rep)));
                rep = group.mul(rep, g);
            }
            if &union != hi {
                return Err(Error::ValidationFailed(format!(
                    "σ_{} does not generate G_{}/G_{j}",
                    j + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// Exponent tuple (λ_0,…,λ_{i−1}) with x = σ_1^{λ_0}·…·σ_i^{λ_{i−1}},
    /// 0 ≤ λ_j < q_j, found by exhaustive enumeration of the exponent box.
    /// Requires an abelian group and x ∈ G_i.
    pub fn abelian_exponent_vector(
        &self,
        group: &FiniteGroup,
        level: usize,
        x: usize,
    ) -> Result<Vec<u64>> {
        if !group.is_abelian() {
            return Err(Error::InvalidInput(
                "exponent vectors require an abelian group".into(),
            ));
        }
        if level > self.len() {
            return Err(Error::InvalidInput(format!("level {level} out of range")));
        }
        if !self.subgroups[level].contains(&x) {
            return Err(Error::InvalidInput(format!(
                "element {x} is outside G_{level}"
            )));
        }
        let qs = &self.primes[..level];
        let mut exps = vec![0u64; level];
        loop {
            let mut prod = group.identity();
            for (j, &e) in exps.iter().enumerate() {
                prod = group.mul(prod, group.pow(self.generators[j], e));
            }
            if prod == x {
                return Ok(exps);
            }
            // odometer over the exponent box
            let mut j = 0;
            loop {
                if j == level {
                    return Err(Error::Internal(format!(
                        "element {x} not reached by exponent box (non-bijective series?)"
                    )));
                }
                exps[j] += 1;
                if exps[j] < qs[j] {
                    break;
                }
                exps[j] = 0;
                j += 1;
            }
        }
    }
}

/// Cyclic group Z_n with labels e, g, g^2, ….
pub fn cyclic_group(n: usize) -> FiniteGroup {
    let labels = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        })
        .collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::new(labels, table).expect("cyclic table is a group")
}

/// Klein four-group e, a, b, ab.
pub fn klein_four_group() -> FiniteGroup {
    let labels = ["e", "a", "b", "ab"].map(String::from).to_vec();
    let table = vec![
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ];
    FiniteGroup::new(labels, table).expect("klein table is a group")
}

fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

fn perm_sign(p: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn group_from_permutations(name: &str, perms: Vec<Vec<usize>>) -> FiniteGroup {
    let index: std::collections::HashMap<Vec<usize>, usize> = perms
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> {
        // apply q first, then p
        q.iter().map(|&i| p[i]).collect()
    };
    let table = perms
        .iter()
        .map(|p| perms.iter().map(|q| index[&compose(p, q)]).collect())
        .collect();
    let labels = perms
        .iter()
        .map(|p| {
            format!(
                "{name}[{}]",
                p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
            )
        })
        .collect();
    FiniteGroup::new(labels, table).expect("permutation composition is a group")
}

/// Symmetric group S_n on one-line permutations in lexicographic order.
pub fn symmetric_group(n: usize) -> FiniteGroup {
    group_from_permutations("s", permutations_lex(n))
}

/// Alternating group A_n (even permutations, lexicographic order).
pub fn alternating_group(n: usize) -> FiniteGroup {
    let perms = permutations_lex(n)
        .into_iter()
        .filter(|p| perm_sign(p) == 1)
        .collect();
    group_from_permutations("a", perms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_latin_table() {
        let err = FiniteGroup::new(
            vec!["e".into(), "x".into()],
            vec![vec![0, 0], vec![1, 1]],
        );
        assert!(matches!(err, Err(Error::ValidationFailed(_))));
    }

    #[test]
    fn cyclic_and_klein_are_solvable() {
        assert!(cyclic_group(4).is_solvable());
        assert!(klein_four_group().is_solvable());
        assert!(symmetric_group(4).is_solvable());
    }

    #[test]
    fn a5_is_not_solvable() {
        let a5 = alternating_group(5);
        assert_eq!(a5.order(), 60);
        assert!(!a5.is_solvable());
        assert!(a5.composition_series().is_err());
    }

    #[test]
    fn z4_series() {
        let g = cyclic_group(4);
        let s = g.composition_series().unwrap();
        assert_eq!(s.primes, vec![2, 2]);
        assert_eq!(s.subgroups[1], BTreeSet::from([0, 2])); // ⟨g²⟩
        assert_eq!(s.generators, vec![2, 1]); // σ_1 = g², σ_2 = g
    }

    #[test]
    fn klein_series() {
        let g = klein_four_group();
        let s = g.composition_series().unwrap();
        assert_eq!(s.primes, vec![2, 2]);
        assert_eq!(s.generators, vec![1, 2]); // a then b
    }

    #[test]
    fn s4_series_matches_known_tower() {
        let g = symmetric_group(4);
        let s = g.composition_series().unwrap();
        // {id} < ⟨(12)(34)⟩ < V_4 < A_4 < S_4 with quotient orders (2,2,3,2)
        assert_eq!(s.primes, vec![2, 2, 3, 2]);
        assert_eq!(
            s.subgroups.iter().map(BTreeSet::len).collect::<Vec<_>>(),
            vec![1, 2, 4, 12, 24]
        );
        // first step is generated by the lexicographically least double
        // transposition, i.e. one-line [1,0,3,2] = (12)(34)
        let idx = s.generators[0];
        assert_eq!(g.label(idx), "s[1032]");
        // product of quotient orders is the group order
        assert_eq!(s.primes.iter().product::<u64>(), 24);
    }

    #[test]
    fn series_normality_holds_by_enumeration() {
        for g in [cyclic_group(8), symmetric_group(4), klein_four_group()] {
            let s = g.composition_series().unwrap();
            for w in s.subgroups.windows(2) {
                assert!(g.is_normal_in(&w[0], &w[1]));
            }
            assert_eq!(
                s.primes.iter().product::<u64>(),
                g.order() as u64,
                "∏ q_j = |G|"
            );
        }
    }

    #[test]
    fn exponent_vector_examples() {
        let g = cyclic_group(4);
        let s = g.composition_series().unwrap();
        // identity → all-zero tuple
        assert_eq!(s.abelian_exponent_vector(&g, 2, 0).unwrap(), vec![0, 0]);
        // x = g² at level 1 → (1)
        assert_eq!(s.abelian_exponent_vector(&g, 1, 2).unwrap(), vec![1]);
        // klein: σ_2² = id → μ = 0
        let k = klein_four_group();
        let ks = k.composition_series().unwrap();
        let sigma2_sq = k.mul(ks.generators[1], ks.generators[1]);
        assert_eq!(ks.abelian_exponent_vector(&k, 1, sigma2_sq).unwrap(), vec![0]);
        // x outside G_i errors
        assert!(s.abelian_exponent_vector(&g, 1, 1).is_err());
    }

    #[test]
    fn exponent_vector_is_a_bijection_at_fixture_scale() {
        for g in [cyclic_group(8), cyclic_group(12), klein_four_group()] {
            if !g.is_abelian() {
                continue;
            }
            let s = g.composition_series().unwrap();
            let k = s.len();
            let mut seen = BTreeSet::new();
            for x in 0..g.order() {
                let v = s.abelian_exponent_vector(&g, k, x).unwrap();
                assert!(seen.insert(v));
            }
            assert_eq!(seen.len(), g.order());
        }
    }

    #[test]
    fn non_solvable_rejected_with_order_message() {
        let a5 = alternating_group(5);
        match a5.composition_series() {
            Err(Error::InvalidInput(msg)) => assert!(msg.contains("not solvable")),
            other => panic!("expected not-solvable error, got {other:?}"),
        }
    }
}
