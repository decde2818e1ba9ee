//! Dense linear algebra over F2 for codes of length <= 128.
//!
//! Codewords are `u128` bit masks (bit i = coordinate i). Generator
//! matrices are kept in reduced row echelon form, so structural equality
//! of `BinaryCode` values is equality of row spaces.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dimension cap for full 2^k codeword enumeration.
pub const WD_BUDGET_DEFAULT: u32 = 28;

/// Work cap for orbit-stratified enumeration (outer reps x inner words).
const ORBIT_WORK_LIMIT: u128 = 1 << 38;

#[derive(Debug, Error)]
pub enum Gf2Error {
    #[error("dimension {k} exceeds enumeration budget {budget}")]
    BudgetExceeded { k: usize, budget: u32 },
    #[error("length {n} exceeds the 128-bit word limit")]
    LengthLimit { n: usize },
    #[error("permutation length {perm} does not match code length {code}")]
    PermLengthMismatch { perm: usize, code: usize },
    #[error("code is not invariant under the permutation")]
    NotInvariant,
    #[error("permutation order {order} is even; orbit enumeration needs odd order")]
    EvenOrder { order: usize },
    #[error("orbit enumeration does not support this module structure")]
    UnsupportedOrbitStructure,
    #[error("zero-dimensional code has no nonzero codeword")]
    EmptyCode,
}

/// Reduce rows in place to RREF. Returns the rank; zero rows are removed.
pub fn rref(rows: &mut Vec<u128>, n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u128 << col;
        let Some(pos) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pos);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && *row & bit != 0 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rank
}

/// Basis of { m in F2^k : sum_i m_i rows[i] = 0 }.
pub fn kernel_basis(rows: &[u128], n: usize) -> Vec<u64> {
    let k = rows.len();
    assert!(k <= 64);
    // Augment each row with its message tag and eliminate on the row part.
    let mut aug: Vec<(u128, u64)> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| (r, 1u64 << i))
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u128 << col;
        let Some(pos) = (rank..k).find(|&i| aug[i].0 & bit != 0) else {
            continue;
        };
        aug.swap(rank, pos);
        let (pr, pt) = aug[rank];
        for (i, a) in aug.iter_mut().enumerate() {
            if i != rank && a.0 & bit != 0 {
                a.0 ^= pr;
                a.1 ^= pt;
            }
        }
        rank += 1;
    }
    aug[rank..].iter().map(|&(_, t)| t).collect()
}

/// A binary linear code with its generator matrix stored in RREF.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryCode {
    n: usize,
    rows: Vec<u128>,
}

impl std::fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[{}, {}] code", self.n, self.rows.len())?;
        for r in &self.rows {
            for i in 0..self.n {
                write!(f, "{}", (r >> i) & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl BinaryCode {
    /// Canonicalizes on construction: dependent and duplicate rows collapse.
    pub fn new(n: usize, mut rows: Vec<u128>) -> Result<Self, Gf2Error> {
        if n > 128 {
            return Err(Gf2Error::LengthLimit { n });
        }
        let mask = if n == 128 { !0 } else { (1u128 << n) - 1 };
        debug_assert!(rows.iter().all(|r| r & !mask == 0), "stray bits past n");
        for r in rows.iter_mut() {
            *r &= mask;
        }
        rref(&mut rows, n);
        Ok(BinaryCode { n, rows })
    }

    pub fn zero(n: usize) -> Self {
        BinaryCode { n, rows: vec![] }
    }

    /// Rows given as strings of '0'/'1', leftmost char = coordinate 0.
    pub fn from_strings(rows: &[&str]) -> Self {
        let n = rows[0].len();
        let words = rows
            .iter()
            .map(|s| {
                assert_eq!(s.len(), n);
                s.bytes()
                    .enumerate()
                    .fold(0u128, |w, (i, b)| w | (((b - b'0') as u128) << i))
            })
            .collect();
        BinaryCode::new(n, words).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn contains(&self, word: u128) -> bool {
        let mut w = word;
        for &row in &self.rows {
            let pivot = row & row.wrapping_neg(); // lowest set bit
            if w & pivot != 0 {
                w ^= row;
            }
        }
        w == 0
    }

    pub fn is_subcode_of(&self, other: &BinaryCode) -> bool {
        self.n == other.n && self.rows.iter().all(|&r| other.contains(r))
    }

    /// Dual code from the RREF: one generator per free column.
    pub fn dual(&self) -> BinaryCode {
        let pivots: Vec<usize> = self
            .rows
            .iter()
            .map(|r| r.trailing_zeros() as usize)
            .collect();
        let mut is_pivot = [false; 128];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::with_capacity(self.n - self.k());
        for f in 0..self.n {
            if is_pivot[f] {
                continue;
            }
            let mut w = 1u128 << f;
            for (i, &row) in self.rows.iter().enumerate() {
                if row & (1u128 << f) != 0 {
                    w |= 1u128 << pivots[i];
                }
            }
            out.push(w);
        }
        BinaryCode::new(self.n, out).unwrap()
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &a)| {
            self.rows[i..]
                .iter()
                .all(|&b| (a & b).count_ones() % 2 == 0)
        })
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n && self.is_self_orthogonal()
    }

    /// All weights divisible by 4. Given even pairwise intersections,
    /// checking the generators suffices.
    pub fn is_doubly_even(&self) -> bool {
        self.is_self_orthogonal() && self.rows.iter().all(|r| r.count_ones() % 4 == 0)
    }

    pub fn permuted(&self, perm: &Perm) -> BinaryCode {
        assert_eq!(perm.n(), self.n);
        BinaryCode::new(self.n, self.rows.iter().map(|&r| perm.apply_word(r)).collect()).unwrap()
    }

    /// Visits every codeword once (Gray order), including zero.
    pub fn for_each_word(&self, mut f: impl FnMut(u128)) {
        assert!(self.k() < 64);
        let mut state = 0u128;
        f(state);
        for i in 1u64..(1u64 << self.k()) {
            state ^= self.rows[i.trailing_zeros() as usize];
            f(state);
        }
    }

    pub fn weight_distribution(&self) -> Result<WeightDistribution, Gf2Error> {
        self.weight_distribution_with_budget(WD_BUDGET_DEFAULT)
    }

    pub fn weight_distribution_with_budget(
        &self,
        budget: u32,
    ) -> Result<WeightDistribution, Gf2Error> {
        if self.k() as u32 > budget {
            return Err(Gf2Error::BudgetExceeded { k: self.k(), budget });
        }
        let mut counts = vec![0u64; self.n + 1];
        self.for_each_word(|w| counts[w.count_ones() as usize] += 1);
        Ok(WeightDistribution { counts })
    }

    /// Exact minimum weight with a witness word. Full enumeration for
    /// small dimensions, information-set bounding beyond that.
    pub fn min_weight_exact(&self) -> Result<MinWeightCert, Gf2Error> {
        if self.k() == 0 {
            return Err(Gf2Error::EmptyCode);
        }
        if self.k() <= 26 {
            let mut best = (u32::MAX, 0u128);
            self.for_each_word(|w| {
                let wt = w.count_ones();
                if wt != 0 && wt < best.0 {
                    best = (wt, w);
                }
            });
            return Ok(MinWeightCert {
                weight: best.0 as usize,
                witness: best.1,
                enumerated_up_to: self.k(),
            });
        }
        Ok(self.min_weight_zimmermann())
    }

    fn min_weight_zimmermann(&self) -> MinWeightCert {
        let k = self.k();
        // Disjoint (partial) information sets: re-reduce the generator,
        // restricting pivots to columns unused by earlier sets.
        let mut used = 0u128;
        let mut sets: Vec<(Vec<u128>, usize)> = Vec::new();
        loop {
            let mut m = self.rows.clone();
            let mut rank = 0;
            for col in 0..self.n {
                let bit = 1u128 << col;
                if used & bit != 0 {
                    continue;
                }
                let Some(pos) = (rank..k).find(|&i| m[i] & bit != 0) else {
                    continue;
                };
                m.swap(rank, pos);
                let pivot = m[rank];
                for (i, row) in m.iter_mut().enumerate() {
                    if i != rank && *row & bit != 0 {
                        *row ^= pivot;
                    }
                }
                used |= bit;
                rank += 1;
                if rank == k {
                    break;
                }
            }
            if rank == 0 {
                break;
            }
            sets.push((m, rank));
        }

        let mut best = (u32::MAX, 0u128);
        let mut w = 0usize;
        loop {
            w += 1;
            for (rows, _) in &sets {
                combos_xor(rows, w, &mut |word| {
                    let wt = word.count_ones();
                    if wt < best.0 {
                        best = (wt, word);
                    }
                });
            }
            // A word not yet seen has > w nonzero message coordinates in
            // every full set, and > w - deficit in rank-deficient ones.
            let bound: usize = sets
                .iter()
                .map(|&(_, rank)| (w + 1).saturating_sub(k - rank))
                .sum();
            if bound as u32 >= best.0 || w == k {
                return MinWeightCert {
                    weight: best.0 as usize,
                    witness: best.1,
                    enumerated_up_to: w,
                };
            }
        }
    }
}

/// Enumerate XORs of exactly `w` of the rows.
fn combos_xor(rows: &[u128], w: usize, f: &mut impl FnMut(u128)) {
    fn rec(rows: &[u128], start: usize, left: usize, acc: u128, f: &mut impl FnMut(u128)) {
        if left == 0 {
            f(acc);
            return;
        }
        for i in start..=rows.len() - left {
            rec(rows, i + 1, left - 1, acc ^ rows[i], f);
        }
    }
    if w <= rows.len() {
        rec(rows, 0, w, 0, f);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinWeightCert {
    pub weight: usize,
    pub witness: u128,
    /// Message-weight level at which the search closed.
    pub enumerated_up_to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessWord {
    pub word: u128,
    pub weight: usize,
    pub iteration: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowWeightOutcome {
    Found(WitnessWord),
    /// Exhausting the budget is a result, not an error: it feeds the
    /// "no witness found" branch of the caller's case analysis.
    NotFound { iterations: u64 },
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Randomized information-set search for a codeword of weight <= `target`.
///
/// Each iteration draws its RNG from (seed, iteration index), so results
/// are reproducible and independent of any surrounding parallelism.
pub fn low_weight_search(
    code: &BinaryCode,
    target: usize,
    max_iterations: u64,
    seed: u64,
) -> LowWeightOutcome {
    let k = code.k();
    if k == 0 {
        return LowWeightOutcome::NotFound { iterations: 0 };
    }
    let mut cols: Vec<usize> = (0..code.n()).collect();
    for it in 0..max_iterations {
        let mut m = code.rows().to_vec();
        if it > 0 {
            // Iteration 0 keeps the natural column order: the RREF rows
            // themselves often expose low weights.
            let mut rng =
                ChaCha8Rng::seed_from_u64(splitmix64(seed ^ it.wrapping_mul(0xA24BAED4963EE407)));
            cols.shuffle(&mut rng);
            let mut rank = 0;
            for &col in &cols {
                let bit = 1u128 << col;
                let Some(pos) = (rank..k).find(|&i| m[i] & bit != 0) else {
                    continue;
                };
                m.swap(rank, pos);
                let pivot = m[rank];
                for (i, row) in m.iter_mut().enumerate() {
                    if i != rank && *row & bit != 0 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
                if rank == k {
                    break;
                }
            }
        }
        for i in 0..k {
            let wt = m[i].count_ones() as usize;
            if wt <= target {
                return LowWeightOutcome::Found(WitnessWord { word: m[i], weight: wt, iteration: it });
            }
            for j in i + 1..k {
                let w = m[i] ^ m[j];
                let wt = w.count_ones() as usize;
                if wt <= target {
                    return LowWeightOutcome::Found(WitnessWord { word: w, weight: wt, iteration: it });
                }
            }
        }
    }
    LowWeightOutcome::NotFound { iterations: max_iterations }
}

/// Random self-dual code of even length n, grown one word at a time:
/// each step adjoins a random even-weight word of the current dual.
pub fn random_self_dual(n: usize, seed: u64) -> BinaryCode {
    assert!(n % 2 == 0 && n >= 2 && n <= 128);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut code = BinaryCode::zero(n);
    while code.k() < n / 2 {
        let dual = code.dual();
        loop {
            let pick: u128 = rng.gen();
            let mut w = 0u128;
            for (i, &row) in dual.rows().iter().enumerate() {
                if pick >> i & 1 == 1 {
                    w ^= row;
                }
            }
            if w != 0 && w.count_ones() % 2 == 0 && !code.contains(w) {
                let mut rows = code.rows().to_vec();
                rows.push(w);
                code = BinaryCode::new(n, rows).unwrap();
                break;
            }
        }
    }
    debug_assert!(code.is_self_dual());
    code
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightDistribution { counts }
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| self.counts[w] != 0)
    }

    pub fn nonzero(&self) -> Vec<(usize, u64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(w, &c)| (w, c))
            .collect()
    }
}

/// Permutation of {0, .., n-1}; `map[i]` is the image of i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { map: (0..n).collect() }
    }

    pub fn from_map(map: Vec<usize>) -> Self {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            assert!(i < map.len() && !seen[i], "not a permutation");
            seen[i] = true;
        }
        Perm { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply_word(&self, word: u128) -> u128 {
        let mut out = 0u128;
        let mut w = word;
        while w != 0 {
            let i = w.trailing_zeros() as usize;
            out |= 1u128 << self.map[i];
            w &= w - 1;
        }
        out
    }

    /// Composition: first `self`, then `next`.
    pub fn then(&self, next: &Perm) -> Perm {
        assert_eq!(self.n(), next.n());
        Perm { map: self.map.iter().map(|&i| next.map[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.n()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j] = i;
        }
        Perm { map }
    }

    pub fn pow(&self, e: usize) -> Perm {
        let mut out = Perm::identity(self.n());
        for _ in 0..e {
            out = out.then(self);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut cur = self.clone();
        let id = Perm::identity(self.n());
        let mut ord = 1;
        while cur != id {
            cur = cur.then(self);
            ord += 1;
        }
        ord
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut i = self.map[start];
            while i != start {
                seen[i] = true;
                cyc.push(i);
                i = self.map[i];
            }
            out.push(cyc);
        }
        out
    }
}

/// Subcode fixed pointwise by `perm`.
pub fn fixed_subcode(code: &BinaryCode, perm: &Perm) -> BinaryCode {
    let diff: Vec<u128> = code
        .rows()
        .iter()
        .map(|&r| perm.apply_word(r) ^ r)
        .collect();
    let rows = kernel_basis(&diff, code.n())
        .into_iter()
        .map(|m| {
            let mut w = 0u128;
            let mut mm = m;
            while mm != 0 {
                w ^= code.rows()[mm.trailing_zeros() as usize];
                mm &= mm - 1;
            }
            w
        })
        .collect();
    BinaryCode::new(code.n(), rows).unwrap()
}

/// Weight distribution of a `sigma`-invariant code, computed by counting
/// each sigma-orbit of codewords once and multiplying by the orbit size.
///
/// Words are stratified by exact orbit size (a divisor of the order of
/// sigma). Small strata are fixed subcodes of powers of sigma and are
/// enumerated directly; the full-orbit stratum is enumerated one orbit
/// representative at a time, which is what makes dimensions beyond the
/// plain enumeration budget reachable.
pub fn sigma_orbit_weight_distribution(
    code: &BinaryCode,
    sigma: &Perm,
) -> Result<WeightDistribution, Gf2Error> {
    if sigma.n() != code.n() {
        return Err(Gf2Error::PermLengthMismatch { perm: sigma.n(), code: code.n() });
    }
    if &code.permuted(sigma) != code {
        return Err(Gf2Error::NotInvariant);
    }
    let r = sigma.order();
    if r == 1 {
        return code.weight_distribution();
    }
    if r % 2 == 0 {
        return Err(Gf2Error::EvenOrder { order: r });
    }

    let n = code.n();
    let k = code.k();

    // sigma acts on the code as multiplication by x in F2[x]/(x^r - 1);
    // split the code over the ring's field components. Any word with a
    // nonzero projection onto a component where x has full order r lies
    // in an orbit of size exactly r, so those orbits are counted once
    // via a canonical shift; everything else lives in the span of the
    // low-order components, which is small enough to enumerate directly.
    let Ok(factors) = crate::ringalg::factor_cyclic(r) else {
        return Err(Gf2Error::UnsupportedOrbitStructure);
    };
    let sig_pows: Vec<Perm> = {
        let mut v = Vec::with_capacity(r);
        let mut cur = Perm::identity(n);
        for _ in 0..r {
            v.push(cur.clone());
            cur = cur.then(sigma);
        }
        v
    };
    let project = |idem: &crate::ringalg::RingPoly, w: u128| -> u128 {
        let mut out = 0u128;
        for i in 0..r {
            if idem.coeff(i) {
                out ^= sig_pows[i].apply_word(w);
            }
        }
        out
    };

    let mut vmax_rows: Vec<u128> = Vec::new();
    let mut rest_rows: Vec<u128> = Vec::new();
    let mut dim_sum = 0usize;
    for comp in &factors.components {
        let mut rows: Vec<u128> =
            code.rows().iter().map(|&w| project(&comp.idempotent, w)).collect();
        let dim = rref(&mut rows, n);
        dim_sum += dim;
        if comp.x_order == r {
            vmax_rows.extend_from_slice(&rows);
        } else {
            rest_rows.extend_from_slice(&rows);
        }
    }
    assert_eq!(dim_sum, k, "component dimensions must sum to dim C");

    let dv = vmax_rows.len();
    let dr = rest_rows.len();
    if dr as u32 > WD_BUDGET_DEFAULT || dv >= 40 {
        return Err(Gf2Error::BudgetExceeded { k, budget: WD_BUDGET_DEFAULT });
    }
    let work = (1u128 << dv) / r as u128 * (1u128 << dr) + (1u128 << dv) * r as u128;
    if work > ORBIT_WORK_LIMIT {
        return Err(Gf2Error::BudgetExceeded { k, budget: WD_BUDGET_DEFAULT });
    }

    // Images of the leading-part basis under every power of sigma: the
    // outer Gray walk keeps all r shifts of the current word in step.
    let shift_img: Vec<Vec<u128>> = vmax_rows
        .iter()
        .map(|&row| sig_pows.iter().map(|p| p.apply_word(row)).collect())
        .collect();

    let mut counts_free = vec![0u64; n + 1];
    let inner = |rep: u128, acc: &mut Vec<u64>| {
        // Rest-part words all complete the same orbit representative.
        let mut state = rep;
        acc[state.count_ones() as usize] += 1;
        for i in 1u64..(1u64 << dr) {
            state ^= rest_rows[i.trailing_zeros() as usize];
            acc[state.count_ones() as usize] += 1;
        }
    };
    if dv > 0 {
        let mut shifted = vec![0u128; r];
        for i in 1u64..(1u64 << dv) {
            let j = i.trailing_zeros() as usize;
            for (s, img) in shifted.iter_mut().zip(&shift_img[j]) {
                *s ^= img;
            }
            // Orbit representative = lexicographically least shift.
            let w0 = shifted[0];
            if shifted[1..].iter().all(|&s| w0 < s) {
                inner(w0, &mut counts_free);
            }
        }
    }

    // Words supported on low-order components only, enumerated one by one.
    let mut counts_rest = vec![0u64; n + 1];
    let mut state = 0u128;
    counts_rest[0] = 1;
    for i in 1u64..(1u64 << dr) {
        state ^= rest_rows[i.trailing_zeros() as usize];
        counts_rest[state.count_ones() as usize] += 1;
    }

    let mut counts = vec![0u64; n + 1];
    for (w, c) in counts.iter_mut().enumerate() {
        let total = counts_free[w] as u128 * r as u128 + counts_rest[w] as u128;
        *c = u64::try_from(total).expect("count fits u64");
    }
    let wd = WeightDistribution { counts };
    assert_eq!(wd.total() as u128, 1u128 << k, "orbit strata must cover the code");
    Ok(wd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> BinaryCode {
        BinaryCode::from_strings(&[
            "10000111", "01001011", "00101101", "00011110",
        ])
    }

    #[test]
    fn rref_collapses_dependent_rows() {
        let c = BinaryCode::new(2, vec![0b11, 0b11]).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(c.rows(), &[0b11]);
    }

    #[test]
    fn construction_is_canonical() {
        let a = BinaryCode::new(4, vec![0b0011, 0b0110]).unwrap();
        let b = BinaryCode::new(4, vec![0b0101, 0b0110]).unwrap();
        assert_eq!(a, b); // same row space
    }

    #[test]
    fn dual_of_e8_is_itself() {
        let c = e8();
        assert!(c.is_self_dual());
        assert!(c.is_doubly_even());
        assert_eq!(c.dual(), c);
    }

    #[test]
    fn dual_dimensions_and_orthogonality() {
        let c = BinaryCode::from_strings(&["101010", "011001"]);
        let d = c.dual();
        assert_eq!(d.k(), 4);
        for &a in c.rows() {
            for &b in d.rows() {
                assert_eq!((a & b).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn hamming_74_weight_distribution() {
        let c = BinaryCode::from_strings(&["1000110", "0100101", "0010011", "0001111"]);
        let wd = c.weight_distribution().unwrap();
        assert_eq!(wd.counts(), &[1, 0, 0, 7, 7, 0, 0, 1]);
    }

    #[test]
    fn e8_weight_distribution() {
        let wd = e8().weight_distribution().unwrap();
        assert_eq!(wd.counts(), &[1, 0, 0, 0, 14, 0, 0, 0, 1]);
        assert_eq!(wd.min_nonzero_weight(), Some(4));
    }

    #[test]
    fn weight_distribution_budget_guard() {
        let rows: Vec<u128> = (0..30).map(|i| 1u128 << i).collect();
        let c = BinaryCode::new(40, rows).unwrap();
        assert!(matches!(
            c.weight_distribution(),
            Err(Gf2Error::BudgetExceeded { k: 30, budget: 28 })
        ));
    }

    #[test]
    fn min_weight_small_path() {
        let cert = e8().min_weight_exact().unwrap();
        assert_eq!(cert.weight, 4);
        assert_eq!(cert.witness.count_ones(), 4);
        assert!(e8().contains(cert.witness));
    }

    #[test]
    fn zimmermann_matches_enumeration() {
        // Big enough to be meaningful, small enough to cross-check.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows: Vec<u128> = (0..14)
                .map(|_| {
                    use rand::Rng;
                    rng.gen::<u32>() as u128 & ((1 << 30) - 1)
                })
                .collect();
            let c = BinaryCode::new(30, rows).unwrap();
            if c.k() == 0 {
                continue;
            }
            let via_enum = c.min_weight_exact().unwrap().weight;
            let via_bz = c.min_weight_zimmermann();
            assert_eq!(via_bz.weight, via_enum);
            assert!(c.contains(via_bz.witness));
            assert_eq!(via_bz.witness.count_ones() as usize, via_bz.weight);
        }
    }

    #[test]
    fn low_weight_search_finds_and_reproduces() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<u128> = (0..16)
            .map(|_| {
                use rand::Rng;
                ((rng.gen::<u64>() as u128) << 0) & ((1 << 40) - 1)
            })
            .collect();
        let c = BinaryCode::new(40, rows).unwrap();
        let d = c.min_weight_exact().unwrap().weight;
        let a = low_weight_search(&c, d, 500, 42);
        let b = low_weight_search(&c, d, 500, 42);
        assert_eq!(a, b);
        match a {
            LowWeightOutcome::Found(w) => {
                assert!(w.weight <= d);
                assert!(c.contains(w.word));
                assert_eq!(w.word.count_ones() as usize, w.weight);
            }
            LowWeightOutcome::NotFound { .. } => panic!("weight {d} word must be findable"),
        }
    }

    #[test]
    fn low_weight_search_not_found_is_a_value() {
        // Repetition code: the only nonzero word has weight 20.
        let c = BinaryCode::new(20, vec![(1 << 20) - 1]).unwrap();
        assert_eq!(
            low_weight_search(&c, 10, 25, 3),
            LowWeightOutcome::NotFound { iterations: 25 }
        );
    }

    #[test]
    fn perm_basics() {
        let p = Perm::from_map(vec![1, 2, 0, 3]);
        assert_eq!(p.order(), 3);
        assert_eq!(p.apply_word(0b0001), 0b0010);
        assert_eq!(p.then(&p.inverse()), Perm::identity(4));
        assert_eq!(p.cycles().len(), 2);
    }

    fn cyclic_code_15() -> (BinaryCode, Perm) {
        // Shift-closed span of one vector: sigma-invariant by construction.
        let gen = 0b000000010010101u128;
        let sigma = Perm::from_map((0..15).map(|i| (i + 1) % 15).collect());
        let mut rows = vec![];
        let mut w = gen;
        for _ in 0..15 {
            rows.push(w);
            w = sigma.apply_word(w);
        }
        (BinaryCode::new(15, rows).unwrap(), sigma)
    }

    #[test]
    fn orbit_wd_matches_plain_wd_on_cyclic_code() {
        let (c, sigma) = cyclic_code_15();
        let plain = c.weight_distribution().unwrap();
        let orbit = sigma_orbit_weight_distribution(&c, &sigma).unwrap();
        assert_eq!(plain, orbit);
    }

    #[test]
    fn orbit_wd_identity_perm_degenerates_to_plain() {
        let c = e8();
        let wd = sigma_orbit_weight_distribution(&c, &Perm::identity(8)).unwrap();
        assert_eq!(wd, c.weight_distribution().unwrap());
    }

    #[test]
    fn orbit_wd_rejects_non_invariant_code() {
        let c = BinaryCode::from_strings(&["110000000000000"]);
        let sigma = Perm::from_map((0..15).map(|i| (i + 1) % 15).collect());
        assert!(matches!(
            sigma_orbit_weight_distribution(&c, &sigma),
            Err(Gf2Error::NotInvariant)
        ));
    }

    #[test]
    fn fixed_subcode_of_cyclic_code() {
        let (c, sigma) = cyclic_code_15();
        let f = fixed_subcode(&c, &sigma);
        // Fixed words of a length-15 cycle are 0 and possibly all-ones.
        for &row in f.rows() {
            assert_eq!(sigma.apply_word(row), row);
        }
        assert!(f.k() <= 1);
    }

    #[test]
    fn kernel_basis_spans_relations() {
        let rows = vec![0b011u128, 0b110, 0b101];
        let ker = kernel_basis(&rows, 3);
        assert_eq!(ker.len(), 1);
        let m = ker[0];
        let mut acc = 0u128;
        for i in 0..3 {
            if m >> i & 1 == 1 {
                acc ^= rows[i];
            }
        }
        assert_eq!(acc, 0);
    }
}
