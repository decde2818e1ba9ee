//! Exhaustive subspace inventories over the component fields.
//!
//! The glue stages need every Hermitian self-dual [6,3] subspace over G2 and
//! G1 and every self-orthogonal [6,2] subspace over G1, not merely class
//! representatives: gluing two equivalent component codes onto a fixed
//! partner can yield inequivalent binary codes. Codes come out in reduced
//! row echelon form, so each subspace appears exactly once, in a fixed
//! deterministic order.

use std::collections::HashMap;
use std::sync::Arc;

use super::{field_kernel, ComponentCode};
use crate::ringalg::ComponentField;

pub const FROBENIUS_F4: [usize; 2] = [1, 2];

/// All Hermitian self-orthogonal [n, k] codes over `field` (exact dimension
/// k, one RREF generator matrix per subspace).
///
/// Backtracks over pivot sets. Orthogonality to the rows already placed is
/// linear in the conjugated free entries of the next row, so candidates are
/// drawn from a kernel span and only the quadratic self-norm condition is
/// tested per candidate. That keeps the [6,3] case over GF(16) at a few
/// hundred thousand norm checks instead of 16^9 raw matrices.
pub fn hermitian_so_codes(
    field: &Arc<ComponentField>,
    n: usize,
    k: usize,
) -> Vec<ComponentCode> {
    assert!(k <= n, "dimension exceeds length");
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(field, n, k, 0, &mut pivots, &mut out);
    out
}

/// All Hermitian self-dual [n, n/2] codes, checked against the classical
/// count of maximal isotropic subspaces of a nondegenerate Hermitian form.
pub fn hermitian_sd_codes(field: &Arc<ComponentField>, n: usize) -> Vec<ComponentCode> {
    assert_eq!(n % 2, 0, "self-dual codes need even length");
    let m = n / 2;
    // Self-orthogonal at dimension n/2 is self-dual.
    let out = hermitian_so_codes(field, n, m);
    let q0 = match field.q() {
        4 => 2u64,
        16 => 4u64,
        q => panic!("no conjugation of order 2 over a field of size {q}"),
    };
    let expected: u64 = (1..=m as u32).map(|i| q0.pow(2 * i - 1) + 1).product();
    assert_eq!(
        out.len() as u64,
        expected,
        "self-dual enumeration disagrees with the mass formula"
    );
    out
}

fn choose_pivots(
    field: &Arc<ComponentField>,
    n: usize,
    k: usize,
    from: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<ComponentCode>,
) {
    if pivots.len() == k {
        let mut is_pivot = vec![false; n];
        for &p in pivots.iter() {
            is_pivot[p] = true;
        }
        extend_rows(field, n, pivots, &is_pivot, &mut Vec::new(), out);
        return;
    }
    // Leave room for the remaining pivots.
    for p in from..=n - (k - pivots.len()) {
        pivots.push(p);
        choose_pivots(field, n, k, p + 1, pivots, out);
        pivots.pop();
    }
}

fn extend_rows(
    field: &Arc<ComponentField>,
    n: usize,
    pivots: &[usize],
    is_pivot: &[bool],
    rows: &mut Vec<Vec<u8>>,
    out: &mut Vec<ComponentCode>,
) {
    let i = rows.len();
    if i == pivots.len() {
        let code = ComponentCode::new(field.clone(), n, rows.clone());
        debug_assert_eq!(code.rows(), &rows[..], "constructed rows were not RREF");
        out.push(code);
        return;
    }
    let free: Vec<usize> = (pivots[i] + 1..n).filter(|&c| !is_pivot[c]).collect();
    // <r_e, new> = sum_{c free} r_e[c] * conj(new[c]): earlier rows vanish on
    // pivot columns, so the system below is homogeneous in y = conj(new|free).
    let sys: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| free.iter().map(|&c| r[c]).collect())
        .collect();
    let ker = if sys.is_empty() {
        // No earlier rows: the whole free space, as the identity basis.
        (0..free.len())
            .map(|t| {
                let mut v = vec![0u8; free.len()];
                v[t] = 1;
                v
            })
            .collect()
    } else {
        field_kernel(field, &sys)
    };
    for_each_in_span(field, &ker, free.len(), &mut |y: &[u8]| {
        let mut row = vec![0u8; n];
        row[pivots[i]] = 1;
        for (t, &c) in free.iter().enumerate() {
            row[c] = field.conj(y[t]);
        }
        if hermitian_norm(field, &row) != 0 {
            return;
        }
        rows.push(row);
        extend_rows(field, n, pivots, is_pivot, rows, out);
        rows.pop();
    });
}

fn hermitian_norm(field: &ComponentField, v: &[u8]) -> u8 {
    v.iter()
        .fold(0u8, |acc, &a| field.add(acc, field.mul(a, field.conj(a))))
}

/// Visits every vector in the span of `basis` (vectors of length `len`),
/// the zero vector included.
fn for_each_in_span(
    field: &ComponentField,
    basis: &[Vec<u8>],
    len: usize,
    f: &mut impl FnMut(&[u8]),
) {
    let mut v = vec![0u8; len];
    if basis.is_empty() {
        f(&v);
        return;
    }
    let (q, k) = (field.q(), basis.len());
    let mut coeffs = vec![0usize; k];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            coeffs[i] += 1;
            if coeffs[i] < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        for (j, slot) in v.iter_mut().enumerate() {
            let mut acc = 0u8;
            for (i, &c) in coeffs.iter().enumerate() {
                acc = field.add(acc, field.mul(c as u8, basis[i][j]));
            }
            *slot = acc;
        }
    }
}

/// True iff the code has no codeword of weight 1 or 2, decided by rank: a
/// word supported inside a column pair exists exactly when the generator
/// rows restricted to the remaining columns drop rank.
pub fn min_distance_at_least_3(code: &ComponentCode) -> bool {
    let n = code.n();
    let k = code.k();
    for i in 0..n {
        for j in i + 1..n {
            let mut sub: Vec<Vec<u8>> = code
                .rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i && c != j)
                        .map(|(_, &a)| a)
                        .collect()
                })
                .collect();
            if super::field_rref(code.field(), &mut sub) < k {
                return false;
            }
        }
    }
    true
}

/// Partition of `universe` into reachability classes under the moves a
/// binary block structure can realize: multiplying one coordinate by x,
/// permuting coordinates, and the decimation substitutions a -> a^t.
///
/// Over G1 the x-multiplications reach every nonzero scalar; over G2 they
/// reach only the cubes, which is exactly why this partition is finer than
/// the one `canonical_key` induces there. The universe must be closed under
/// the moves (self-orthogonality and weights are preserved, so the
/// inventories produced in this module are).
///
/// Returns one class index per universe entry, numbered in first-discovery
/// order, plus the class count. Deterministic for a fixed universe order.
pub fn x_monomial_classes(
    universe: &[ComponentCode],
    frob_exps: &[usize],
) -> (Vec<usize>, usize) {
    let index: HashMap<Vec<u8>, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, c)| (flatten(c), i))
        .collect();
    assert_eq!(index.len(), universe.len(), "universe has duplicate entries");
    let mut class = vec![usize::MAX; universe.len()];
    let mut n_classes = 0;
    for start in 0..universe.len() {
        if class[start] != usize::MAX {
            continue;
        }
        let id = n_classes;
        n_classes += 1;
        class[start] = id;
        let mut queue = vec![start];
        while let Some(at) = queue.pop() {
            for next in neighbor_moves(&universe[at], frob_exps) {
                let &ni = index
                    .get(&flatten(&next))
                    .expect("universe not closed under the moves");
                if class[ni] == usize::MAX {
                    class[ni] = id;
                    queue.push(ni);
                }
            }
        }
    }
    (class, n_classes)
}

fn neighbor_moves(code: &ComponentCode, frob_exps: &[usize]) -> Vec<ComponentCode> {
    let n = code.n();
    let mut out = Vec::with_capacity(2 * n + frob_exps.len());
    for j in 0..n {
        let mut shifts = vec![0usize; n];
        shifts[j] = 1;
        out.push(code.shifted_cols(&shifts));
    }
    for j in 0..n.saturating_sub(1) {
        let mut tau: Vec<usize> = (0..n).collect();
        tau.swap(j, j + 1);
        out.push(code.permuted_cols(&tau));
    }
    for &t in frob_exps {
        if t != 1 {
            out.push(code.frobenius(t));
        }
    }
    out
}

fn flatten(code: &ComponentCode) -> Vec<u8> {
    let mut key = vec![code.k() as u8];
    for r in code.rows() {
        key.extend_from_slice(r);
    }
    key
}
