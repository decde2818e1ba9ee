//! Classification of the M' component (the code over H, with partner
//! M'' over H* forced by binary self-duality) into equivalence classes,
//! with the weight data of the [90,24] binary preimage of M' + M''.
//!
//! Writing M' in reduced form splits the search into three shapes:
//!
//! * case 1: dim M' = 2. Then M'' is [6,4,>=3], which meets the Singleton
//!   bound, so both codes are MDS and M' is [6,2,5]. Normal form
//!   (e 0 e e e e / 0 e e x^a x^b x^c) with a, b, c distinct and nonzero:
//!   columns of a [6,2,5] code are pairwise non-proportional, so two can
//!   be scaled to unit vectors, one to (e,e), and a row scaling pins the
//!   first remaining entry.
//! * case 2: dim M' = 3, M' MDS [6,3,4]. Normal form (I | A) with A the
//!   all-ones-bordered matrix (e e e / e x^a1 x^a2 / e x^a3 x^a4); MDS
//!   forces every 2x2 minor containing the border to be nonzero, hence
//!   a_i != 0.
//! * case 3: dim M' = 3, d(M') = 3, d(dual) >= 3. A weight-3 word can be
//!   scaled and positioned as row (e 0 0 0 e e); the dual-distance bound
//!   rules a zero out of column 4, and the residual diagonal freedom on
//!   rows 2, 3 makes that column (0 e e). The four remaining entries
//!   range over {0} union {x^b e}.
//!
//! Equivalence = column permutations, scalings by powers of x (all of F*
//! on these components), and the decimation-induced field automorphisms.
//! On top of that sits an optional pairing step: conjugation reverses
//! coordinates inside each 15-bit block, so the configuration built from
//! dual(M') generates a reversal-permuted copy of the same [90,24] binary
//! code. The MDS table keeps per-code classes (22, matching the arc
//! classification, with one dual-related pair of identical weight data);
//! the d = 3 table counts the unordered pair {M', M''} (18 classes).

use super::inventory::Inventory;
use super::{canonical_key, ComponentCode, Ip};
use crate::gf2core::BinaryCode;
use serde::Serialize;
use std::collections::BTreeMap;

pub const FROBENIUS_F16: [usize; 4] = [1, 2, 4, 8];

/// Sentinel in case-3 labels for a zero entry (sorts after all exponents).
pub const ZERO_ENTRY: u8 = 15;

#[derive(Clone, Serialize)]
pub struct MPrimeClass {
    pub case: u8,
    /// Lexicographically least defining tuple over the case grid.
    pub label: Vec<u8>,
    /// Number of grid tuples falling into this class.
    pub members: usize,
    #[serde(skip)]
    pub rep: ComponentCode,
    #[serde(skip)]
    pub key: Vec<u8>,
    /// Weight distribution of the [90,24] image of M' + M''.
    pub image_wd: Vec<u64>,
    pub image_min_weight: usize,
}

pub fn build_case1(inv: &Inventory, t: &[u8]) -> ComponentCode {
    let (a, b, c) = (t[0], t[1], t[2]);
    ComponentCode::new(
        inv.h_field.clone(),
        6,
        vec![
            vec![1, 0, 1, 1, 1, 1],
            vec![0, 1, 1, a + 1, b + 1, c + 1],
        ],
    )
}

pub fn build_case2(inv: &Inventory, t: &[u8]) -> ComponentCode {
    ComponentCode::new(
        inv.h_field.clone(),
        6,
        vec![
            vec![1, 0, 0, 1, 1, 1],
            vec![0, 1, 0, 1, t[0] + 1, t[1] + 1],
            vec![0, 0, 1, 1, t[2] + 1, t[3] + 1],
        ],
    )
}

pub fn build_case3(inv: &Inventory, t: &[u8]) -> ComponentCode {
    let beta = |b: u8| if b == ZERO_ENTRY { 0 } else { b + 1 };
    ComponentCode::new(
        inv.h_field.clone(),
        6,
        vec![
            vec![1, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 1, beta(t[0]), beta(t[1])],
            vec![0, 0, 1, 1, beta(t[2]), beta(t[3])],
        ],
    )
}

/// M'' is pinned by M': conjugating a word over H* turns binary block
/// orthogonality into the Euclidean product over H, so M'' is exactly the
/// conjugate of the Euclidean dual.
pub fn partner(inv: &Inventory, mprime: &ComponentCode) -> ComponentCode {
    mprime.dual(Ip::Euclidean).conj_map(inv.hs_field.clone())
}

/// Class key of the unordered pair {M', M''}: least canonical key of the
/// code and its Euclidean dual.
pub fn pair_key(m: &ComponentCode) -> Vec<u8> {
    let a = canonical_key(m, &FROBENIUS_F16);
    let b = canonical_key(&m.dual(Ip::Euclidean), &FROBENIUS_F16);
    a.min(b)
}

/// Binary preimage of M' + M'', a self-orthogonal [90, 24] code.
pub fn pair_image(inv: &Inventory, mprime: &ComponentCode) -> BinaryCode {
    let mut rows: Vec<u128> = mprime.binary_image().rows().to_vec();
    rows.extend_from_slice(partner(inv, mprime).binary_image().rows());
    let img = BinaryCode::new(90, rows).unwrap();
    debug_assert_eq!(img.k(), 24);
    debug_assert!(img.is_self_orthogonal());
    img
}

fn case_grid(case: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    match case {
        1 => {
            for a in 1..=14u8 {
                for b in (1..=14u8).filter(|&b| b != a) {
                    for c in (1..=14u8).filter(|&c| c != a && c != b) {
                        out.push(vec![a, b, c]);
                    }
                }
            }
        }
        2 => {
            for a1 in 1..=14u8 {
                for a2 in 1..=14u8 {
                    for a3 in 1..=14u8 {
                        for a4 in 1..=14u8 {
                            out.push(vec![a1, a2, a3, a4]);
                        }
                    }
                }
            }
        }
        3 => {
            let vals: Vec<u8> = (0..=14u8).chain([ZERO_ENTRY]).collect();
            for &b1 in &vals {
                for &b2 in &vals {
                    for &b3 in &vals {
                        for &b4 in &vals {
                            out.push(vec![b1, b2, b3, b4]);
                        }
                    }
                }
            }
        }
        _ => panic!("case must be 1, 2 or 3"),
    }
    out
}

fn admits(case: u8, m: &ComponentCode) -> bool {
    match case {
        1 => {
            debug_assert_eq!(m.min_weight(), 5);
            true
        }
        2 => m.min_weight() == 4,
        3 => m.min_weight() == 3 && m.dual(Ip::Euclidean).min_weight() >= 3,
        _ => unreachable!(),
    }
}

/// Enumerates the case grid, groups by canonical key, and returns the
/// classes sorted by label. Image weight data is computed per class.
pub fn enumerate_case(case: u8) -> Vec<MPrimeClass> {
    let inv = Inventory::get();
    let build: fn(&Inventory, &[u8]) -> ComponentCode = match case {
        1 => build_case1,
        2 => build_case2,
        3 => build_case3,
        _ => panic!("case must be 1, 2 or 3"),
    };
    let mut groups: BTreeMap<Vec<u8>, (Vec<u8>, usize)> = BTreeMap::new();
    for t in case_grid(case) {
        let m = build(inv, &t);
        if !admits(case, &m) {
            continue;
        }
        let key = canonical_key(&m, &FROBENIUS_F16);
        groups
            .entry(key)
            .and_modify(|(label, members)| {
                if t < *label {
                    *label = t.clone();
                }
                *members += 1;
            })
            .or_insert((t, 1));
    }
    let mut classes: Vec<MPrimeClass> = groups
        .into_iter()
        .map(|(key, (label, members))| {
            let rep = build(inv, &label);
            let image_wd = pair_image(inv, &rep)
                .weight_distribution()
                .unwrap()
                .counts()
                .to_vec();
            let image_min_weight = (1..image_wd.len())
                .find(|&w| image_wd[w] != 0)
                .unwrap();
            MPrimeClass {
                case,
                label,
                members,
                rep,
                key,
                image_wd,
                image_min_weight,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.label.cmp(&b.label));
    classes
}

/// Collapses classes whose pair keys coincide (a class and its dual give
/// the same binary code up to permutation). Keeps the lex-least label.
pub fn merge_dual_pairs(classes: Vec<MPrimeClass>) -> Vec<MPrimeClass> {
    let mut groups: BTreeMap<Vec<u8>, MPrimeClass> = BTreeMap::new();
    for mut c in classes {
        let key = pair_key(&c.rep);
        match groups.entry(key.clone()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                c.key = key;
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let kept = e.get_mut();
                assert_eq!(
                    kept.image_wd, c.image_wd,
                    "dual-paired classes must share image data"
                );
                kept.members += c.members;
                if c.label < kept.label {
                    kept.label = c.label;
                    kept.rep = c.rep;
                }
            }
        }
    }
    let mut out: Vec<MPrimeClass> = groups.into_values().collect();
    out.sort_by(|a, b| a.label.cmp(&b.label));
    out
}

/// Table row: defining tuple plus image counts at weights 16..=36 (step 4).
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TableRow {
    pub label: Vec<u8>,
    pub counts: [u64; 6],
}

pub fn row_counts(wd: &[u64]) -> [u64; 6] {
    [wd[16], wd[20], wd[24], wd[28], wd[32], wd[36]]
}

/// All classes with dim M' = 3, M' MDS.
pub fn table_mds() -> Vec<MPrimeClass> {
    enumerate_case(2)
}

/// Pair classes with dim M' = 3, d(M') = 3, image weight >= 20.
pub fn table_non_mds_survivors() -> Vec<MPrimeClass> {
    merge_dual_pairs(enumerate_case(3))
        .into_iter()
        .filter(|c| c.image_min_weight >= 20)
        .collect()
}

/// One representative per unordered pair {M', M''} whose [90,24] image
/// has weight at least 20: the component material every length-96 code
/// with an order-15 automorphism must contain.
pub fn a_family() -> Vec<MPrimeClass> {
    let mut out = merge_dual_pairs(enumerate_case(1));
    out.extend(
        merge_dual_pairs(enumerate_case(2))
            .into_iter()
            .filter(|c| c.image_min_weight >= 20),
    );
    out.extend(table_non_mds_survivors());
    out
}

/// Pinned image counts (A16..A36) for every class with dim M' = 3 and M'
/// MDS, keyed by a defining tuple of the class.
pub const MDS_CLASS_DATA: [([u8; 4], [u64; 6]); 22] = [
    ([1, 2, 2, 1], [270, 0, 5400, 15840, 195345, 941400]),
    ([1, 2, 2, 4], [60, 120, 2730, 18480, 189885, 950280]),
    ([1, 2, 2, 5], [15, 30, 2070, 17535, 187815, 963480]),
    ([1, 2, 2, 6], [45, 180, 1935, 17505, 183015, 975420]),
    ([1, 2, 2, 8], [45, 0, 2580, 15660, 188715, 965040]),
    ([1, 2, 2, 9], [15, 30, 2130, 17355, 187575, 965160]),
    ([1, 2, 3, 1], [30, 120, 2430, 19650, 192105, 937200]),
    ([1, 2, 3, 6], [0, 0, 2325, 16320, 192585, 953040]),
    ([1, 2, 3, 7], [0, 60, 1875, 17955, 189465, 956220]),
    ([1, 2, 3, 8], [0, 0, 2145, 17340, 190185, 956400]),
    ([1, 2, 3, 12], [0, 60, 1965, 18060, 187545, 960120]),
    ([1, 2, 4, 6], [0, 60, 2040, 17910, 187485, 959400]),
    ([1, 2, 5, 7], [0, 90, 1830, 18390, 186405, 963900]),
    ([1, 2, 6, 1], [60, 0, 3090, 17400, 194205, 941400]),
    ([1, 2, 9, 1], [30, 120, 2910, 17250, 196425, 933840]),
    ([1, 2, 12, 1], [90, 360, 3240, 23940, 192825, 909720]),
    ([1, 3, 2, 6], [0, 0, 2325, 16320, 192585, 953040]),
    ([1, 3, 3, 2], [0, 180, 1665, 18720, 185625, 960840]),
    ([1, 3, 7, 2], [0, 0, 2295, 16830, 191745, 950040]),
    ([1, 3, 7, 10], [0, 180, 1755, 18450, 185265, 963360]),
    ([1, 3, 11, 8], [0, 0, 2730, 14100, 197925, 944760]),
    ([5, 10, 10, 5], [450, 0, 14580, 16200, 329625, 507960]),
];

/// Pinned image counts for the non-MDS classes whose image clears 20.
pub const NON_MDS_SURVIVOR_DATA: [([u8; 4], [u64; 6]); 18] = [
    ([0, 0, 0, 7], [0, 0, 2250, 17640, 187605, 960120]),
    ([0, 0, 2, 3], [0, 0, 2070, 18060, 187125, 963960]),
    ([0, 0, 2, 6], [0, 0, 1950, 18420, 187605, 960600]),
    ([0, 2, 2, 9], [0, 0, 2175, 17670, 188625, 957480]),
    ([0, 2, 3, 4], [0, 0, 2070, 17730, 189285, 958080]),
    ([0, 2, 3, 7], [0, 0, 2025, 17865, 189465, 956820]),
    ([0, 2, 3, 11], [0, 0, 2070, 18030, 187485, 962280]),
    ([0, 2, 3, 12], [0, 0, 2010, 18210, 187725, 960600]),
    ([0, 2, 4, 7], [0, 0, 2190, 16890, 191925, 953040]),
    ([0, 2, 4, 13], [0, 0, 2100, 17640, 189165, 958920]),
    ([0, 0, 0, 2], [0, 90, 1755, 18900, 184545, 968940]),
    ([0, 0, 2, 5], [0, 30, 1905, 18630, 186585, 961260]),
    ([0, 0, 2, 9], [0, 30, 2025, 18270, 186105, 964620]),
    ([0, 0, 3, 5], [0, 30, 1935, 18540, 186465, 962100]),
    ([0, 2, 2, 3], [0, 60, 2055, 18030, 186225, 963600]),
    ([0, 2, 2, 5], [0, 60, 1935, 18015, 188265, 958860]),
    ([0, 2, 2, 8], [0, 180, 1800, 18630, 184365, 962760]),
    ([0, 2, 4, 0], [0, 90, 1830, 18630, 185445, 964860]),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case1_classes_match_inventory() {
        let inv = Inventory::get();
        let classes = enumerate_case(1);
        assert_eq!(classes.len(), 4);
        assert_eq!(classes.iter().map(|c| c.members).sum::<usize>(), 2184);
        let mut keys: Vec<_> = classes.iter().map(|c| c.key.clone()).collect();
        let mut inv_keys: Vec<_> = inv
            .case1_reps
            .iter()
            .map(|c| canonical_key(c, &FROBENIUS_F16))
            .collect();
        keys.sort();
        inv_keys.sort();
        assert_eq!(keys, inv_keys);
        for c in &classes {
            assert_eq!(c.image_min_weight, 24, "label {:?}", c.label);
        }
    }

    #[test]
    fn mds_classes_match_pinned_data() {
        let inv = Inventory::get();
        let classes = enumerate_case(2);
        assert_eq!(classes.len(), 22);
        let mut hit = vec![false; classes.len()];
        for (label, counts) in MDS_CLASS_DATA {
            let key = canonical_key(&build_case2(inv, &label), &FROBENIUS_F16);
            let i = classes
                .iter()
                .position(|c| c.key == key)
                .unwrap_or_else(|| panic!("tuple {label:?} hit no class"));
            assert!(!hit[i], "tuple {label:?} duplicates a class");
            hit[i] = true;
            assert_eq!(row_counts(&classes[i].image_wd), counts, "tuple {label:?}");
        }
        assert!(hit.iter().all(|&h| h));
        let survivors = classes.iter().filter(|c| c.image_min_weight >= 20);
        assert_eq!(survivors.count(), 11);
        // Exactly one dual-related pair hides among the 22: its two codes
        // carry identical image data and collapse under pairing.
        let merged = merge_dual_pairs(classes);
        assert_eq!(merged.len(), 21);
        let a = build_case2(inv, &[1, 2, 3, 6]);
        let b = build_case2(inv, &[1, 3, 2, 6]);
        assert_ne!(
            canonical_key(&a, &FROBENIUS_F16),
            canonical_key(&b, &FROBENIUS_F16)
        );
        assert_eq!(pair_key(&a), pair_key(&b));
        assert!(!super::super::are_equivalent(&a, &b, &FROBENIUS_F16));
        assert!(super::super::are_equivalent(
            &a.dual(Ip::Euclidean),
            &b,
            &FROBENIUS_F16
        ));
    }

    #[test]
    fn non_mds_survivors_match_pinned_data() {
        let inv = Inventory::get();
        let survivors = table_non_mds_survivors();
        assert_eq!(survivors.len(), 18);
        let mut hit = vec![false; survivors.len()];
        for (label, counts) in NON_MDS_SURVIVOR_DATA {
            let key = pair_key(&build_case3(inv, &label));
            let i = survivors
                .iter()
                .position(|c| c.key == key)
                .unwrap_or_else(|| panic!("tuple {label:?} hit no class"));
            assert!(!hit[i], "tuple {label:?} duplicates a class");
            hit[i] = true;
            assert_eq!(row_counts(&survivors[i].image_wd), counts, "tuple {label:?}");
        }
        assert!(hit.iter().all(|&h| h));
        assert_eq!(
            survivors.iter().filter(|c| c.image_min_weight == 24).count(),
            10
        );
        assert_eq!(
            survivors.iter().filter(|c| c.image_min_weight == 20).count(),
            8
        );
    }
}
