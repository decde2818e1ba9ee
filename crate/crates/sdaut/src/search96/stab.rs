//! Stabilizers of glue components inside the block-monomial normalizer.
//!
//! The survivor-deduplication passes need, for a fixed dual pair
//! (M', M''), every normalizer element that maps the pair to itself. With
//! the block permutation and the decimation fixed, the remaining freedom
//! is a diagonal of per-block shifts, and those can be solved for exactly:
//! a diagonal scaling preserves supports, so each basis row of the
//! permuted-and-decimated code must scale onto a codeword of M' with the
//! same support, which either forces the shift on every coordinate of
//! that support or rules the branch out. Since x generates the full
//! multiplicative group of the order-15 component fields, every solvable
//! diagonal is realizable by shifts.

use std::collections::{BTreeSet, HashMap};

use crate::compcodes::cases::partner;
use crate::compcodes::inventory::Inventory;
use crate::compcodes::{all_perms, ComponentCode};

use super::action::{entry_maps, is_reversal, GroupElement, DECIMATIONS};

/// All normalizer elements fixing the dual pair presented by `mprime`
/// (as a pair: reversal decimations that swap the two members onto each
/// other count). The result always contains the 15 global shifts, is
/// closed under composition, and stabilizes the binary image of the pair.
pub fn pair_stabilizer(inv: &Inventory, mprime: &ComponentCode) -> Vec<GroupElement> {
    let k = mprime.k();
    assert!(k > 0);
    for j in 0..mprime.n() {
        assert!(
            mprime.rows().iter().any(|r| r[j] != 0),
            "glue component with a vanishing block has no full support to match"
        );
    }

    // Nonzero codewords of M' grouped by support; diagonal scalings
    // preserve supports, so these are the only possible row images.
    let mut by_support: HashMap<u8, Vec<Vec<u8>>> = HashMap::new();
    mprime.for_each_word(|w| {
        let mask = support_mask(w);
        if mask != 0 {
            by_support.entry(mask).or_default().push(w.to_vec());
        }
    });

    let tabs = entry_maps();
    let mpp = partner(inv, mprime);
    let mut out = Vec::new();

    for tau in all_perms(6) {
        for &t in &DECIMATIONS {
            let source = if is_reversal(t) { &mpp } else { mprime };
            // Basis of the permuted, decimated row space; not reduced,
            // which is fine because the solver only matches supports.
            let b_rows: Vec<Vec<u8>> = source
                .rows()
                .iter()
                .map(|row| {
                    let mut out_row = vec![0u8; 6];
                    for (j, &a) in row.iter().enumerate() {
                        out_row[tau[j]] = tabs.map(source.field(), t, a);
                    }
                    out_row
                })
                .collect();

            let mut solutions = BTreeSet::new();
            solve_diagonal(&b_rows, &by_support, 0, &mut [None; 6], &mut solutions);

            for s in solutions {
                let mut tau_arr = [0usize; 6];
                tau_arr.copy_from_slice(&tau);
                let nu = GroupElement { tau: tau_arr, shifts: s, frob: t };
                assert_eq!(&nu.act_pair(inv, mprime), mprime);
                out.push(nu);
            }
        }
    }
    out
}

/// Elements of a pair stabilizer that also fix an order-5 component.
pub fn joint_stabilizer(stab: &[GroupElement], m2: &ComponentCode) -> Vec<GroupElement> {
    stab.iter().filter(|nu| &nu.act_component(m2) == m2).copied().collect()
}

fn support_mask(w: &[u8]) -> u8 {
    w.iter().enumerate().fold(0u8, |m, (j, &a)| if a != 0 { m | 1 << j } else { m })
}

/// Depth-first match of basis rows onto equal-support codewords. Entries
/// are 0 for zero and d + 1 for the d-th power of the field generator,
/// and x has discrete log 1 in the order-15 components, so the shift on
/// column j is forced to dlog(w_j) - dlog(b_j) mod 15.
fn solve_diagonal(
    b_rows: &[Vec<u8>],
    by_support: &HashMap<u8, Vec<Vec<u8>>>,
    i: usize,
    assigned: &mut [Option<usize>; 6],
    solutions: &mut BTreeSet<[usize; 6]>,
) {
    if i == b_rows.len() {
        let mut s = [0usize; 6];
        for j in 0..6 {
            s[j] = assigned[j].expect("full-support component assigns every column");
        }
        solutions.insert(s);
        return;
    }
    let row = &b_rows[i];
    let mask = support_mask(row);
    let Some(cands) = by_support.get(&mask) else { return };
    'cand: for w in cands {
        let mut extend: Vec<(usize, usize)> = Vec::new();
        for j in 0..6 {
            if row[j] == 0 {
                continue;
            }
            let need = (15 + w[j] as usize - row[j] as usize) % 15;
            match assigned[j] {
                Some(have) if have != need => continue 'cand,
                Some(_) => {}
                None => extend.push((j, need)),
            }
        }
        for &(j, v) in &extend {
            assigned[j] = Some(v);
        }
        solve_diagonal(b_rows, by_support, i + 1, assigned, solutions);
        for &(j, _) in &extend {
            assigned[j] = None;
        }
    }
}
