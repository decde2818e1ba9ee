//! Exact Krawtchouk and MacWilliams machinery, and the partitioned weight
//! enumerator argument that rules out the order-three automorphism with a
//! 28 + 12 coordinate split.
//!
//! Everything here is integer or rational arithmetic; there is no floating
//! point. The final verdict rests on the sign of an exactly computed value,
//! so any rounding would be fatal to the argument.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::gf2core::WeightDistribution;

/// Reduced fraction with positive denominator, both guaranteed by the
/// underlying library type.
pub type ExactRational = BigRational;

#[derive(Debug, Error)]
pub enum MacwmsError {
    #[error("transform count at weight {s} is not a nonnegative integer")]
    NonIntegerResult { s: usize },
    #[error("system does not determine the target: {0}")]
    SingularSystem(String),
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    // Pascal row; n stays small enough (<= 40ish) that i64 never overflows.
    let mut row = vec![1i64];
    for _ in 0..n {
        let mut next = vec![1i64];
        for w in row.windows(2) {
            next.push(w[0].checked_add(w[1]).expect("binomial overflow"));
        }
        next.push(1);
        row = next;
    }
    row[k]
}

/// K_s(i; n) = sum_j (-1)^j C(i,j) C(n-i, s-j).
pub fn krawtchouk(s: usize, i: usize, n: usize) -> i64 {
    assert!(s <= n && i <= n, "indices out of range");
    let mut acc = 0i64;
    for j in 0..=s.min(i) {
        let term = binomial(i, j)
            .checked_mul(binomial(n - i, s - j))
            .expect("krawtchouk overflow");
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// B_s = 2^{-k} sum_i K_s(i;n) A_i, the distribution of the dual of any
/// [n, k] code with distribution A. Fails if some B_s is negative or
/// fractional, which means A was not the distribution of an [n, k] code.
pub fn macwilliams_transform(
    a: &WeightDistribution,
    k: usize,
) -> Result<WeightDistribution, MacwmsError> {
    let n = a.n();
    assert!(k <= n, "dimension exceeds length");
    let mut counts = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut acc: i128 = 0;
        for i in 0..=n {
            acc += krawtchouk(s, i, n) as i128 * a.count(i) as i128;
        }
        let denom = 1i128 << k;
        if acc < 0 || acc % denom != 0 {
            return Err(MacwmsError::NonIntegerResult { s });
        }
        counts.push((acc / denom) as u64);
    }
    Ok(WeightDistribution::from_counts(counts))
}

/// Value of the form c + l*lambda + m*mu.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub constant: ExactRational,
    pub lambda: ExactRational,
    pub mu: ExactRational,
}

impl Affine {
    pub fn new(c: i64, l: i64, m: i64) -> Self {
        Affine {
            constant: rat(c),
            lambda: rat(l),
            mu: rat(m),
        }
    }

    pub fn zero() -> Self {
        Affine::new(0, 0, 0)
    }

    pub fn add(&self, other: &Affine) -> Affine {
        Affine {
            constant: &self.constant + &other.constant,
            lambda: &self.lambda + &other.lambda,
            mu: &self.mu + &other.mu,
        }
    }

    pub fn sub(&self, other: &Affine) -> Affine {
        Affine {
            constant: &self.constant - &other.constant,
            lambda: &self.lambda - &other.lambda,
            mu: &self.mu - &other.mu,
        }
    }

    pub fn scale(&self, f: &ExactRational) -> Affine {
        Affine {
            constant: &self.constant * f,
            lambda: &self.lambda * f,
            mu: &self.mu * f,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.lambda.is_zero() && self.mu.is_zero()
    }
}

fn rat(v: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Weight distribution of the doubly-even [28, 8] code cut out by the
/// zero-fixed-point rows of the projected [40, 20, 8] code, as a function
/// of the two free parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct WaFamily {
    /// alpha[i] is the number of weight-i words; zero outside
    /// {0, 8, 12, 16, 20, 24}.
    pub alpha: Vec<Affine>,
    /// Number of weight-3 words in the dual [28, 20] code.
    pub nu: Affine,
}

/// Solves the first three MacWilliams conditions (dual counts B_0 = 1,
/// B_1 = B_2 = 0 from dual distance >= 3) for the three middle weight
/// counts, leaving A_8 = lambda and A_24 = mu free.
///
/// The admissible weights are forced by the partitioned restrictions at
/// j = 0: doubly-even, i + 0 in {0} or [8, 32], 3i in [20, 76], so
/// i in {0, 8, 12, 16, 20, 24}.
pub fn wa_family() -> WaFamily {
    let n = 28;
    let known: [(usize, Affine); 3] = [
        (0, Affine::new(1, 0, 0)),
        (8, Affine::new(0, 1, 0)),
        (24, Affine::new(0, 0, 1)),
    ];
    let unknown = [12usize, 16, 20];

    // Row s: sum_i K_s(i;28) alpha_i = 256 * [s == 0].
    let mut mat: Vec<Vec<ExactRational>> = Vec::new();
    let mut rhs: Vec<Affine> = Vec::new();
    for s in 0..3 {
        mat.push(unknown.iter().map(|&i| rat(krawtchouk(s, i, n))).collect());
        let mut r = Affine::new(if s == 0 { 256 } else { 0 }, 0, 0);
        for (i, coef) in &known {
            r = r.sub(&coef.scale(&rat(krawtchouk(s, *i, n))));
        }
        rhs.push(r);
    }

    // 3x3 Gaussian elimination with affine right-hand sides.
    for col in 0..3 {
        let piv = (col..3)
            .find(|&r| !mat[r][col].is_zero())
            .expect("Krawtchouk minor is nonsingular");
        mat.swap(col, piv);
        rhs.swap(col, piv);
        let inv = mat[col][col].recip();
        for v in mat[col].iter_mut() {
            *v = &*v * &inv;
        }
        rhs[col] = rhs[col].scale(&inv);
        for r in 0..3 {
            if r != col && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in 0..3 {
                    mat[r][c] = &mat[r][c] - &(&f * &mat[col][c]);
                }
                rhs[r] = rhs[r].sub(&rhs[col].scale(&f));
            }
        }
    }

    let mut alpha = vec![Affine::zero(); n + 1];
    for (i, coef) in known {
        alpha[i] = coef;
    }
    for (pos, &i) in unknown.iter().enumerate() {
        alpha[i] = rhs[pos].clone();
    }

    // nu = B_3 = 2^{-8} sum_i K_3(i;28) alpha_i.
    let mut nu = Affine::zero();
    for (i, a) in alpha.iter().enumerate() {
        nu = nu.add(&a.scale(&rat(krawtchouk(3, i, n))));
    }
    nu = nu.scale(&(rat(1) / rat(256)));

    WaFamily { alpha, nu }
}

/// Admissibility mask and symmetry orbits for the partitioned counts
/// A_{i,j} of the projected code, i weight on the 28 cycle coordinates,
/// j weight on the 12 fixed coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionedEnumerator {
    cells: Vec<(usize, usize)>,
    reps: Vec<(usize, usize)>,
}

pub const PART_I: usize = 28;
pub const PART_J: usize = 12;

impl PartitionedEnumerator {
    pub fn new() -> Self {
        let mut cells = Vec::new();
        for i in 0..=PART_I {
            for j in 0..=PART_J {
                if Self::cell_admissible(i, j) {
                    cells.push((i, j));
                }
            }
        }
        let mut reps = Vec::new();
        for &(i, j) in &cells {
            if (i, j) <= Self::mirror(i, j) {
                reps.push((i, j));
            }
        }
        PartitionedEnumerator { cells, reps }
    }

    fn cell_admissible(i: usize, j: usize) -> bool {
        let s1 = i + j;
        let s3 = 3 * i + j;
        if s3 % 4 != 0 {
            return false;
        }
        if (0 < s1 && s1 < 8) || (32 < s1 && s1 < 40) {
            return false;
        }
        if (0 < s3 && s3 < 20) || (76 < s3 && s3 < 96) {
            return false;
        }
        true
    }

    pub fn mirror(i: usize, j: usize) -> (usize, usize) {
        (PART_I - i, PART_J - j)
    }

    pub fn admissible(&self, i: usize, j: usize) -> bool {
        Self::cell_admissible(i, j)
    }

    /// All cells not forced to zero by the congruence and window rules.
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// One cell per orbit of the central symmetry.
    pub fn reps(&self) -> &[(usize, usize)] {
        &self.reps
    }

    pub fn rep_of(&self, i: usize, j: usize) -> (usize, usize) {
        (i, j).min(Self::mirror(i, j))
    }
}

impl Default for PartitionedEnumerator {
    fn default() -> Self {
        Self::new()
    }
}

/// Linear system over the rationals; unknowns are named for the audit
/// trail.
pub struct LinearSystem {
    pub names: Vec<String>,
    pub rows: Vec<Vec<ExactRational>>,
    pub rhs: Vec<ExactRational>,
}

/// Row-reduced description of the solution set: each pivot unknown is an
/// affine function of the free unknowns.
pub struct ParametricSolution {
    pub rank: usize,
    pub free: Vec<usize>,
    /// expr[u] for pivot unknowns: (constant, coefficients on free ones).
    pub expr: Vec<Option<(ExactRational, Vec<(usize, ExactRational)>)>>,
}

impl LinearSystem {
    pub fn solve(&self) -> Result<ParametricSolution, MacwmsError> {
        let ncols = self.names.len();
        let mut aug: Vec<Vec<ExactRational>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                assert_eq!(row.len(), ncols);
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();

        let mut pivot_col_of_row = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pr) = (rank..aug.len()).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(rank, pr);
            let inv = aug[rank][col].recip();
            for v in aug[rank].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..aug.len() {
                if r != rank && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in col..=ncols {
                        aug[r][c] = &aug[r][c] - &(&f * &aug[rank][c]);
                    }
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
        }
        for row in aug.iter().skip(rank) {
            if !row[ncols].is_zero() {
                return Err(MacwmsError::SingularSystem(
                    "inconsistent: 0 = nonzero after elimination".into(),
                ));
            }
        }

        let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
        let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut expr = vec![None; ncols];
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            let constant = aug[row][ncols].clone();
            let deps: Vec<(usize, ExactRational)> = free
                .iter()
                .filter(|&&f| !aug[row][f].is_zero())
                .map(|&f| (f, -aug[row][f].clone()))
                .collect();
            expr[col] = Some((constant, deps));
        }
        Ok(ParametricSolution { rank, free, expr })
    }
}

impl ParametricSolution {
    /// The unknown's value if the system pins it down regardless of the
    /// free unknowns.
    pub fn forced(&self, u: usize) -> Option<ExactRational> {
        match &self.expr[u] {
            Some((c, deps)) if deps.is_empty() => Some(c.clone()),
            _ => None,
        }
    }

    /// Value of unknown u at a full assignment of the free unknowns.
    pub fn eval(&self, u: usize, free_vals: &BTreeMap<usize, ExactRational>) -> ExactRational {
        match &self.expr[u] {
            Some((c, deps)) => {
                let mut v = c.clone();
                for (f, coef) in deps {
                    v += coef * &free_vals[f];
                }
                v
            }
            None => free_vals[&u].clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PropositionVerdict {
    /// Some forced count is negative, so no code realizes the system.
    Infeasible,
    /// The linear conditions alone did not produce a contradiction.
    Undetermined,
}

/// Outcome of the partitioned solve, with enough detail to audit it.
#[derive(Debug, Serialize)]
pub struct SolveSummary {
    pub verdict: PropositionVerdict,
    /// Forced value of A_8 as a reduced fraction string.
    pub lambda: String,
    pub rank: usize,
    pub n_unknowns: usize,
    pub n_equations: usize,
    /// Every unknown the system forces to a negative value; each entry
    /// alone contradicts nonnegativity of the counts.
    pub negative_forced: Vec<(String, String)>,
    pub unknowns: Vec<String>,
    /// Sparse rows: (name, coefficient) pairs and the right-hand side.
    pub equations: Vec<(Vec<(String, String)>, String)>,
}

fn pow2(e: usize) -> ExactRational {
    BigRational::from_integer(BigInt::one() << e)
}

/// Builds the full linear system for the partitioned counts: both
/// Krawtchouk identity families for s = 0..=28, plus the ties pinning the
/// j = 0 row to the two-parameter distribution from [`wa_family`].
///
/// `both_families` exists so tests can confirm the second family is what
/// pins the parameter down.
pub fn partitioned_system(both_families: bool) -> LinearSystem {
    let pe = PartitionedEnumerator::new();
    let wa = wa_family();
    let nr = pe.reps().len();
    let idx_of: BTreeMap<(usize, usize), usize> = pe
        .reps()
        .iter()
        .enumerate()
        .map(|(k, &c)| (c, k))
        .collect();
    let li = nr;
    let mi = nr + 1;

    let mut names: Vec<String> = pe
        .reps()
        .iter()
        .map(|&(i, j)| format!("A[{i},{j}]"))
        .collect();
    names.push("lambda".into());
    names.push("mu".into());

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let cell_idx = |i: usize, j: usize| -> Option<usize> {
        pe.admissible(i, j).then(|| idx_of[&pe.rep_of(i, j)])
    };

    // 2^20 A_{s,0} = sum_ij K_s(i;28) A_{i,j}
    for s in 0..=PART_I {
        let mut row = vec![ExactRational::zero(); nr + 2];
        for &(i, j) in pe.cells() {
            row[idx_of[&pe.rep_of(i, j)]] += rat(krawtchouk(s, i, PART_I));
        }
        if let Some(u) = cell_idx(s, 0) {
            row[u] -= pow2(20);
        }
        rows.push(row);
        rhs.push(ExactRational::zero());
    }
    // 2^19 (12 A_{s,0} - A_{s,1}) = sum_ij j K_s(i;28) A_{i,j}
    if both_families {
        for s in 0..=PART_I {
            let mut row = vec![ExactRational::zero(); nr + 2];
            for &(i, j) in pe.cells() {
                row[idx_of[&pe.rep_of(i, j)]] += rat((j as i64) * krawtchouk(s, i, PART_I));
            }
            if let Some(u) = cell_idx(s, 0) {
                row[u] -= rat(12) * pow2(19);
            }
            if let Some(u) = cell_idx(s, 1) {
                row[u] += pow2(19);
            }
            rows.push(row);
            rhs.push(ExactRational::zero());
        }
    }
    // A_{i,0} = alpha_i for the admissible j = 0 cells.
    for i in (0..=PART_I).step_by(4) {
        let Some(u) = cell_idx(i, 0) else { continue };
        let a = &wa.alpha[i];
        let mut row = vec![ExactRational::zero(); nr + 2];
        row[u] = ExactRational::one();
        row[li] = -a.lambda.clone();
        row[mi] = -a.mu.clone();
        rows.push(row);
        rhs.push(a.constant.clone());
    }

    LinearSystem { names, rows, rhs }
}

/// Runs the partitioned-count argument: assemble the system, eliminate
/// exactly, and read off the forced value of A_8. A forced negative count
/// refutes existence of the projected code, hence of the automorphism
/// type it came from.
pub fn partitioned_solve() -> Result<SolveSummary, MacwmsError> {
    let sys = partitioned_system(true);
    let sol = sys.solve()?;
    let li = sys.names.iter().position(|n| n == "lambda").unwrap();
    let lambda = sol.forced(li).ok_or_else(|| {
        MacwmsError::SingularSystem("lambda is not determined by the system".into())
    })?;

    let mut negative_forced = Vec::new();
    for u in 0..sys.names.len() {
        if let Some(v) = sol.forced(u) {
            if v.is_negative() {
                negative_forced.push((sys.names[u].clone(), v.to_string()));
            }
        }
    }
    let verdict = if negative_forced.is_empty() {
        PropositionVerdict::Undetermined
    } else {
        PropositionVerdict::Infeasible
    };

    let equations = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| {
            let lhs: Vec<(String, String)> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(u, c)| (sys.names[u].clone(), c.to_string()))
                .collect();
            (lhs, b.to_string())
        })
        .collect();

    Ok(SolveSummary {
        verdict,
        lambda: lambda.to_string(),
        rank: sol.rank,
        n_unknowns: sys.names.len(),
        n_equations: sys.rows.len(),
        negative_forced,
        unknowns: sys.names,
        equations,
    })
}
