//! Linear codes over the field components of R = F2[x]/(x^15 - 1), with
//! the duality, equivalence and binary-image machinery the search needs.
//!
//! Entries are stored as field element indices (0 = zero, i = g^(i-1)),
//! so row reduction and inner products run on small lookup tables.

pub mod cases;
pub mod inventory;
pub mod sdenum;

use crate::gf2core::BinaryCode;
use crate::ringalg::ComponentField;
use serde::Serialize;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompError {
    #[error("row length {got} does not match code length {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("operation needs a self-reciprocal component (conjugation must stay inside)")]
    NeedsSelfReciprocal,
    #[error("validation failed: {0}")]
    ValidationFailure(String),
}

/// Inner product used when dualizing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ip {
    Euclidean,
    Hermitian,
}

/// A length-`n` linear code over one field component, generator in RREF.
#[derive(Clone)]
pub struct ComponentCode {
    field: Arc<ComponentField>,
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl PartialEq for ComponentCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.rows == other.rows
            && self.field.component.coset == other.field.component.coset
    }
}
impl Eq for ComponentCode {}

impl std::fmt::Debug for ComponentCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[{}, {}] over component {:?}", self.n, self.k(), self.field.component.coset)?;
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|&a| match self.field.dlog(a) {
                    None => "0".into(),
                    Some(0) => "e".into(),
                    Some(d) => format!("g{d}"),
                })
                .collect();
            writeln!(f, "  ({})", cells.join(" "))?;
        }
        Ok(())
    }
}

/// In-place row reduction over the component field. Returns the rank.
pub fn field_rref(field: &ComponentField, rows: &mut Vec<Vec<u8>>) -> usize {
    let n = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..n {
        let Some(pos) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pos);
        let inv = field.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let c = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = field.add(*x, field.mul(c, p));
                }
            }
        }
        rank += 1;
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    rank
}

impl ComponentCode {
    pub fn new(field: Arc<ComponentField>, n: usize, mut rows: Vec<Vec<u8>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), n, "row length mismatch");
        }
        field_rref(&field, &mut rows);
        ComponentCode { field, n, rows }
    }

    pub fn zero(field: Arc<ComponentField>, n: usize) -> Self {
        ComponentCode { field, n, rows: vec![] }
    }

    pub fn field(&self) -> &Arc<ComponentField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Visits all q^k codewords (index vectors), including zero.
    pub fn for_each_word(&self, mut f: impl FnMut(&[u8])) {
        let k = self.k();
        let q = self.field.q();
        let mut msg = vec![0usize; k];
        let mut word = vec![0u8; self.n];
        loop {
            f(&word);
            // Odometer over messages; rebuild the word on each step.
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                msg[i] += 1;
                if msg[i] < q {
                    break;
                }
                msg[i] = 0;
                i += 1;
            }
            for (j, w) in word.iter_mut().enumerate() {
                let mut acc = 0u8;
                for (i, &m) in msg.iter().enumerate() {
                    acc = self.field.add(acc, self.field.mul(m as u8, self.rows[i][j]));
                }
                *w = acc;
            }
        }
    }

    /// Hamming weight enumerator over the component alphabet.
    pub fn weight_enumerator(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n + 1];
        self.for_each_word(|w| {
            counts[w.iter().filter(|&&x| x != 0).count()] += 1;
        });
        counts
    }

    pub fn min_weight(&self) -> usize {
        let we = self.weight_enumerator();
        (1..=self.n).find(|&w| we[w] != 0).unwrap_or(self.n + 1)
    }

    pub fn is_mds(&self) -> bool {
        self.k() > 0 && self.min_weight() == self.n - self.k() + 1
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        let mut w = word.to_vec();
        for row in &self.rows {
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            if w[pivot] != 0 {
                let c = w[pivot]; // pivot entries are 1 after RREF
                for (x, &p) in w.iter_mut().zip(row) {
                    *x = self.field.add(*x, self.field.mul(c, p));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn euclidean_ip(&self, u: &[u8], v: &[u8]) -> u8 {
        u.iter()
            .zip(v)
            .fold(0u8, |acc, (&a, &b)| self.field.add(acc, self.field.mul(a, b)))
    }

    pub fn hermitian_ip(&self, u: &[u8], v: &[u8]) -> u8 {
        u.iter().zip(v).fold(0u8, |acc, (&a, &b)| {
            self.field.add(acc, self.field.mul(a, self.field.conj(b)))
        })
    }

    /// Dual code under the chosen inner product, from the RREF shape.
    pub fn dual(&self, ip: Ip) -> ComponentCode {
        let pivots: Vec<usize> = self
            .rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect();
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::with_capacity(self.n - self.k());
        for f in 0..self.n {
            if is_pivot[f] {
                continue;
            }
            let mut w = vec![0u8; self.n];
            w[f] = 1;
            for (i, row) in self.rows.iter().enumerate() {
                // <row_i, w> = w[p_i] + G[i][f] (Euclidean), conj for Hermitian.
                w[pivots[i]] = match ip {
                    Ip::Euclidean => row[f],
                    Ip::Hermitian => self.field.conj(row[f]),
                };
            }
            out.push(w);
        }
        let d = ComponentCode::new(self.field.clone(), self.n, out);
        debug_assert!(d.rows.iter().all(|w| {
            self.rows.iter().all(|r| match ip {
                Ip::Euclidean => self.euclidean_ip(r, w) == 0,
                Ip::Hermitian => self.hermitian_ip(r, w) == 0,
            })
        }));
        d
    }

    pub fn is_hermitian_self_orthogonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, a)| {
            self.rows[i..].iter().all(|b| self.hermitian_ip(a, b) == 0)
        })
    }

    pub fn is_hermitian_self_dual(&self) -> bool {
        2 * self.k() == self.n && self.is_hermitian_self_orthogonal()
    }

    /// Entrywise conjugation, landing in `target` (= the paired component
    /// for h/h*, or the same field for self-reciprocal ones).
    pub fn conj_map(&self, target: Arc<ComponentField>) -> ComponentCode {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&a| self.field.conj_into(&target, a)).collect())
            .collect();
        ComponentCode::new(target, self.n, rows)
    }

    /// Multiplies column `c` by x^j (the scalings binary block shifts induce).
    pub fn shifted_cols(&self, shifts: &[usize]) -> ComponentCode {
        assert_eq!(shifts.len(), self.n);
        let x = self.field.x_index();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(shifts)
                    .map(|(&a, &j)| self.field.mul(a, self.field.pow(x, j)))
                    .collect()
            })
            .collect();
        ComponentCode::new(self.field.clone(), self.n, rows)
    }

    pub fn permuted_cols(&self, tau: &[usize]) -> ComponentCode {
        assert_eq!(tau.len(), self.n);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = vec![0u8; self.n];
                for (j, &a) in r.iter().enumerate() {
                    out[tau[j]] = a;
                }
                out
            })
            .collect();
        ComponentCode::new(self.field.clone(), self.n, rows)
    }

    /// Applies the field automorphism a -> a^t entrywise (the action the
    /// binary decimation x -> x^t induces on a component).
    pub fn frobenius(&self, t: usize) -> ComponentCode {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&a| self.field.pow(a, t)).collect())
            .collect();
        ComponentCode::new(self.field.clone(), self.n, rows)
    }

    /// Binary preimage under phi: each component coordinate occupies one
    /// 15-bit block; each field generator contributes `degree` rows.
    pub fn binary_image(&self) -> BinaryCode {
        let r = self.field.r;
        let deg = self.field.degree();
        let x = self.field.x_index();
        let mut rows = Vec::with_capacity(self.k() * deg);
        for row in &self.rows {
            let mut cur: Vec<u8> = row.clone();
            for _ in 0..deg {
                let mut word = 0u128;
                for (c, &a) in cur.iter().enumerate() {
                    word |= (self.field.element(a).mask() as u128) << (r * c);
                }
                rows.push(word);
                for a in cur.iter_mut() {
                    *a = self.field.mul(*a, x);
                }
            }
        }
        BinaryCode::new(r * self.n, rows).unwrap()
    }
}

/// Invariant fingerprint for component-code classes: the full weight
/// distribution of the binary image of M' + M'' together with the
/// component weight enumerator. Cheap, but not always separating; exact
/// class identity comes from `canonical_key`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EquivClassKey {
    pub image_wd: Vec<u64>,
    pub component_we: Vec<u64>,
}

/// Canonical byte string under column permutations, column scalings by
/// arbitrary nonzero field elements, and the listed field automorphisms
/// (exponents, e.g. [1,2,4,8] for F16).
///
/// Column scalings by all of F* are the right group for codes over the
/// h-component: x acts there with full order 15, so every scaling is
/// realized by a binary in-block shift.
pub fn canonical_key(code: &ComponentCode, frob_exps: &[usize]) -> Vec<u8> {
    static PERMS6: OnceLock<Vec<Vec<usize>>> = OnceLock::new();
    let n = code.n();
    let perms_local;
    let perms: &[Vec<usize>] = if n == 6 {
        PERMS6.get_or_init(|| all_perms(6))
    } else {
        perms_local = all_perms(n);
        &perms_local
    };
    let mut best: Option<Vec<u8>> = None;
    for &t in frob_exps {
        let ft = code.frobenius(t);
        for tau in perms {
            let cand = ft.permuted_cols(tau);
            let enc = torus_normalized_encoding(&cand);
            if best.as_ref().map_or(true, |b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    best.expect("nonempty group")
}

/// Scaling-invariant encoding of an RREF matrix: pick column potentials
/// along a spanning forest of the (pivot column, free column) incidence
/// graph so tree entries become 1, then read off the residual dlogs.
fn torus_normalized_encoding(code: &ComponentCode) -> Vec<u8> {
    let field = code.field();
    let qm1 = (field.q() - 1) as i64;
    let n = code.n();
    let rows = code.rows();
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).unwrap())
        .collect();
    // Potentials on columns; entry (i, f) transforms by s[f] - s[pivot_i].
    let mut pot: Vec<Option<i64>> = vec![None; n];
    let mut stack: Vec<usize> = Vec::new();
    for start in 0..n {
        if pot[start].is_some() {
            continue;
        }
        pot[start] = Some(0);
        stack.push(start);
        while let Some(col) = stack.pop() {
            let s_col = pot[col].unwrap();
            for (i, row) in rows.iter().enumerate() {
                if row[col] == 0 {
                    continue;
                }
                let p = pivots[i];
                // Column `col` and pivot column `p` are joined by entry d.
                let d = field.dlog(row[col]).unwrap() as i64;
                if pot[p].is_none() {
                    // want d + s_col - s_p = 0
                    pot[p] = Some((d + s_col).rem_euclid(qm1));
                    stack.push(p);
                }
                // Also walk from the pivot column to sibling free columns.
                if col == p {
                    continue;
                }
            }
            // From a pivot column, reach the free columns of its row.
            for (i, row) in rows.iter().enumerate() {
                if pivots[i] != col {
                    continue;
                }
                for (f, &a) in row.iter().enumerate() {
                    if a != 0 && pot[f].is_none() {
                        let d = field.dlog(a).unwrap() as i64;
                        pot[f] = Some((s_col - d).rem_euclid(qm1));
                        stack.push(f);
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(rows.len() * n);
    for (i, row) in rows.iter().enumerate() {
        let sp = pot[pivots[i]].unwrap();
        for (f, &a) in row.iter().enumerate() {
            match field.dlog(a) {
                None => out.push(0xFF),
                Some(d) => {
                    let norm = (d as i64 + pot[f].unwrap() - sp).rem_euclid(qm1);
                    out.push(norm as u8);
                }
            }
        }
    }
    // Shorter matrices sort first; prepend dims so keys are unambiguous.
    let mut key = vec![rows.len() as u8, n as u8];
    key.extend(out);
    key
}

/// Basis of { y : rows y^T = 0 } over the component field.
pub fn field_kernel(field: &ComponentField, rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    field_rref(field, &mut m);
    let pivots: Vec<usize> = m
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).unwrap())
        .collect();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in 0..n {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![0u8; n];
        v[f] = 1;
        for (i, row) in m.iter().enumerate() {
            v[pivots[i]] = row[f];
        }
        out.push(v);
    }
    out
}

/// Equivalence test by direct search: for each permutation and field
/// automorphism, the matching column scalings form the kernel of a linear
/// system, so existence reduces to finding an everywhere-nonzero kernel
/// vector. Independent of `canonical_key` (no normal form involved), and
/// used to cross-check it.
pub fn are_equivalent(a: &ComponentCode, b: &ComponentCode, frob_exps: &[usize]) -> bool {
    if a.n() != b.n()
        || a.k() != b.k()
        || a.field().component.coset != b.field().component.coset
    {
        return false;
    }
    let field = a.field();
    let n = a.n();
    let bdual = b.dual(Ip::Euclidean);
    let perms = all_perms(n);
    for &t in frob_exps {
        let ft = a.frobenius(t);
        for tau in &perms {
            let m = ft.permuted_cols(tau);
            let mut sys: Vec<Vec<u8>> = Vec::with_capacity(bdual.k() * m.k());
            for w in bdual.rows() {
                for r in m.rows() {
                    sys.push((0..n).map(|j| field.mul(w[j], r[j])).collect());
                }
            }
            let ker = field_kernel(field, &sys);
            assert!(
                field.q().pow(ker.len() as u32) <= 1 << 20,
                "scaling kernel too large to enumerate"
            );
            if has_all_nonzero_vector(field, &ker) {
                return true;
            }
        }
    }
    false
}

fn has_all_nonzero_vector(field: &ComponentField, basis: &[Vec<u8>]) -> bool {
    if basis.is_empty() {
        return false;
    }
    let n = basis[0].len();
    let (q, k) = (field.q(), basis.len());
    let mut coeffs = vec![0usize; k];
    loop {
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        let all_nonzero = (0..n).all(|j| {
            let mut acc = 0u8;
            for (i, &c) in coeffs.iter().enumerate() {
                acc = field.add(acc, field.mul(c as u8, basis[i][j]));
            }
            acc != 0
        });
        if all_nonzero {
            return true;
        }
    }
}

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(&mut cur, n, &mut out);
    out.sort();
    out
}

fn heap_permute(arr: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(arr.clone());
        return;
    }
    for i in 0..k {
        heap_permute(arr, k - 1, out);
        if k % 2 == 0 {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::inventory::Inventory;
    use super::*;

    #[test]
    fn rref_and_duality_over_h() {
        let inv = Inventory::get();
        let h = inv.h_field.clone();
        // A [6,2] code over H with simple structure.
        let rows = vec![vec![1, 0, 1, 1, 1, 1], vec![0, 1, 1, 2, 3, 4]];
        let c = ComponentCode::new(h.clone(), 6, rows);
        assert_eq!(c.k(), 2);
        let d = c.dual(Ip::Euclidean);
        assert_eq!(d.k(), 4);
        for r in c.rows() {
            for w in d.rows() {
                assert_eq!(c.euclidean_ip(r, w), 0);
            }
        }
        // Double dual returns the code.
        assert_eq!(d.dual(Ip::Euclidean), c);
    }

    #[test]
    fn mds_detection() {
        let inv = Inventory::get();
        let c = inv.case1_reps[0].clone();
        assert_eq!(c.min_weight(), 5);
        assert!(c.is_mds());
        let d = c.dual(Ip::Euclidean);
        assert_eq!(d.min_weight(), 3);
        assert!(d.is_mds()); // dual of MDS is MDS
    }

    #[test]
    fn canonical_key_invariant_under_group_moves() {
        let inv = Inventory::get();
        let c = inv.case1_reps[1].clone();
        let key = canonical_key(&c, &[1, 2, 4, 8]);
        let moved = c
            .permuted_cols(&[3, 0, 5, 2, 4, 1])
            .shifted_cols(&[0, 7, 3, 0, 11, 2])
            .frobenius(4);
        assert_eq!(canonical_key(&moved, &[1, 2, 4, 8]), key);
    }

    #[test]
    fn canonical_key_separates_inequivalent_codes() {
        let inv = Inventory::get();
        let keys: Vec<_> = inv
            .case1_reps
            .iter()
            .map(|c| canonical_key(c, &[1, 2, 4, 8]))
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(keys[i], keys[j], "reps {i} and {j} must differ");
            }
        }
    }

    #[test]
    fn direct_equivalence_agrees_with_keys() {
        let inv = Inventory::get();
        let frobs = [1, 2, 4, 8];
        // A moved copy is found equivalent.
        let c = inv.case1_reps[2].clone();
        let moved = c
            .permuted_cols(&[5, 3, 1, 0, 2, 4])
            .shifted_cols(&[2, 0, 9, 4, 4, 1])
            .frobenius(2);
        assert!(are_equivalent(&c, &moved, &frobs));
        // Distinct classes are rejected.
        assert!(!are_equivalent(
            &inv.case1_reps[0],
            &inv.case1_reps[3],
            &frobs
        ));
    }

    #[test]
    fn binary_image_dimensions_and_weights() {
        let inv = Inventory::get();
        let c = inv.case1_reps[0].clone();
        let img = c.binary_image();
        assert_eq!(img.n(), 90);
        assert_eq!(img.k(), 8); // 2 field rows x degree 4
        // Weight of a single-generator image word: 8 per nonzero coord.
        let one_row = ComponentCode::new(inv.h_field.clone(), 6, vec![vec![1, 0, 0, 0, 0, 0]]);
        let wd = one_row.binary_image().weight_distribution().unwrap();
        assert_eq!(wd.count(8), 15); // all nonzero H elements weigh 8
        assert_eq!(wd.count(0), 1);
    }
}
